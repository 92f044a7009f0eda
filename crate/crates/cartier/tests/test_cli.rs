use std::path::{Path, PathBuf};
use std::process::Command;

use cartier::cliharness::{cache_key, Cache, ENGINE_VERSION};
use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cartierlab"))
}

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf8"))
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, text) = run(&all);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("bad json ({e}): {text}")))
}

fn scene(rel: &str) -> String {
    here(rel).display().to_string()
}

fn cache_files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for sub in std::fs::read_dir(dir).unwrap() {
        let sub = sub.unwrap().path();
        if sub.is_dir() {
            for f in std::fs::read_dir(&sub).unwrap() {
                out.push(f.unwrap().path());
            }
        }
    }
    out.sort();
    out
}

#[test]
fn line_to_point_check_exits_four() {
    let (code, text) = run(&["check", "--scene", &scene("corpus/negative.json"), "--expect-negative"]);
    assert_eq!(code, 4, "{text}");
    assert!(text.contains("EXPECTED-NEGATIVE"));
}

#[test]
fn expected_negative_that_does_not_occur_is_a_property_failure() {
    let (code, _) = run(&["check", "--scene", &scene("corpus/square-root.json"), "--expect-negative"]);
    assert_eq!(code, 5);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["tau", "--scene", &scene("corpus/intro.json")]).0, 0);
    assert_eq!(run(&["tau", "--scene", &scene("tests/fixtures/invalid.json")]).0, 3);
    assert_eq!(run(&["tau", "--scene", &scene("tests/fixtures/wrong-expectation.json")]).0, 5);
    assert_eq!(run(&["jumps", "--scene", &scene("tests/fixtures/cap.json"), "--e-max", "1"]).0, 2);
    assert_eq!(run(&["tau", "--scene", &scene("tests/fixtures/empty.json")]).0, 0);
    assert_eq!(run(&["tau"]).0, 3);
}

#[test]
fn invalid_structure_names_the_pair() {
    let (code, v) = run_json(&["tau", "--scene", &scene("tests/fixtures/invalid.json")]);
    assert_eq!(code, 3);
    let msg = v["error"]["message"].as_str().unwrap();
    assert!(msg.contains("pair (Q, x)"), "{msg}");
}

#[test]
fn parse_errors_carry_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ \"ring\": { \"p\": 2,\n  \"vars\": [\"x\"] }, \"tasks\": [ { \"op\": \"bogus\" } ] }").unwrap();
    let (code, v) = run_json(&["tau", "--scene", path.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(v["error"]["message"].as_str().unwrap().contains("broken.json:2:"));
}

#[test]
fn subcommand_selects_tasks() {
    let (_, v) = run_json(&["ass", "--scene", &scene("corpus/intro.json")]);
    let tasks = v["tasks"].as_array().unwrap();
    assert_eq!(tasks.len(), 1);
    assert_eq!(tasks[0]["result"]["cartier"], json!(["(0)", "(y)"]));
}

#[test]
fn denominator_caps_flag_overrides_the_scene() {
    let (code, v) = run_json(&["jumps", "--scene", &scene("corpus/jumps-y.json"), "--denom-caps", "2,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["tasks"][0]["result"]["caps"], json!([2, 1]));
    assert_eq!(v["tasks"][0]["result"]["values"], json!(["1", "2", "3"]));
}

#[test]
fn corpus_is_green_and_deterministic() {
    let (code, first) = run(&["corpus", "--json", "--seed", "7"]);
    assert_eq!(code, 0, "{first}");
    let (_, second) = run(&["corpus", "--json", "--seed", "7"]);
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["summary"]["errors"], 0);
    assert_eq!(v["summary"]["expected_negative"], 1);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let intro = scene("corpus/intro.json");
    let (_, cold) = run_json(&["tau", "--scene", &intro, "--cache-dir", d]);
    assert_eq!(cold["cache"]["hits"], 0);
    let (_, warm) = run_json(&["tau", "--scene", &intro, "--cache-dir", d]);
    assert_eq!(warm["cache"]["hits"], 3);
    assert_eq!(warm["cache"]["misses"], 0);
    let strip = |v: &Value| v["tasks"].as_array().unwrap().iter().map(|t| t["result"].clone()).collect::<Vec<_>>();
    assert_eq!(strip(&cold), strip(&warm));

    let (_, verified) = run_json(&["tau", "--scene", &intro, "--cache-dir", d, "--verify-cache"]);
    assert_eq!(strip(&verified), strip(&cold));
    assert!(verified["warnings"].as_array().is_none_or(|w| w.is_empty()));
}

#[test]
fn jump_grid_values_are_reused() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let s = scene("corpus/jumps-y.json");
    let (_, cold) = run_json(&["jumps", "--scene", &s, "--cache-dir", d]);
    assert_eq!(cold["tasks"][0]["grid_cache_hits"], 0);
    let (_, warm) = run_json(&["jumps", "--scene", &s, "--cache-dir", d]);
    assert!(warm["tasks"][0]["grid_cache_hits"].as_u64().unwrap() > 0);
    assert_eq!(cold["tasks"][0]["result"]["values"], warm["tasks"][0]["result"]["values"]);
}

#[test]
fn corrupted_entries_are_recomputed_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let s = scene("corpus/line-x.json");
    let (_, cold) = run_json(&["tau", "--scene", &s, "--cache-dir", d]);
    for f in cache_files(dir.path()) {
        std::fs::write(&f, "{ truncated").unwrap();
    }
    let (code, again) = run_json(&["tau", "--scene", &s, "--cache-dir", d]);
    assert_eq!(code, 0);
    assert_eq!(again["cache"]["corrupted"], 1);
    assert!(again["warnings"][0].as_str().unwrap().contains("corrupted"));
    assert_eq!(again["tasks"][0]["result"], cold["tasks"][0]["result"]);
    let (_, healed) = run_json(&["tau", "--scene", &s, "--cache-dir", d]);
    assert_eq!(healed["cache"]["hits"], 1);
}

#[test]
fn entries_from_another_engine_are_stale() {
    let dir = tempfile::tempdir().unwrap();
    let parts = json!({ "op": "tau", "n": 1 });
    let mut old = Cache::with_engine(dir.path(), "cartier-0.0.0/cache-0").unwrap();
    let key = old.key(&parts);
    old.store(&key, &json!("old value")).unwrap();

    let path = cache_files(dir.path()).pop().unwrap();
    let mut entry: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let mut current = Cache::open(dir.path()).unwrap();
    let new_key = current.key(&parts);
    assert_ne!(new_key, key);
    assert_eq!(new_key, cache_key(ENGINE_VERSION, &parts));

    entry["key"] = json!(new_key);
    let target = dir.path().join(&new_key[..2]).join(format!("{new_key}.json"));
    std::fs::create_dir_all(target.parent().unwrap()).unwrap();
    std::fs::write(&target, entry.to_string()).unwrap();

    let v = current.get_or_compute(&parts, false, || Ok(json!("fresh"))).unwrap();
    assert_eq!(v, json!("fresh"));
    assert_eq!(current.stats.stale, 1);
    let again = current.get_or_compute(&parts, false, || panic!("should hit")).unwrap();
    assert_eq!(again, json!("fresh"));
}
