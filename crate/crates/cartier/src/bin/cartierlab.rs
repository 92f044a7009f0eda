use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use cartier::cliharness::{read_scene, render_text, run_corpus, run_scene, Cache, Flags, LoadedScene, Op, SceneReport};
use cartier::error::CartierError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Tau,
    Tauprime,
    Jumps,
    Gr,
    Stabilize,
    Nilpotent,
    Ass,
    Pullback,
    Pushforward,
    Check,
    Corpus,
}

impl Command {
    fn op(self) -> Option<Op> {
        Some(match self {
            Command::Tau => Op::Tau,
            Command::Tauprime => Op::Tauprime,
            Command::Jumps => Op::Jumps,
            Command::Gr => Op::Gr,
            Command::Stabilize => Op::Stabilize,
            Command::Nilpotent => Op::Nilpotent,
            Command::Ass => Op::Ass,
            Command::Pullback => Op::Pullback,
            Command::Pushforward => Op::Pushforward,
            Command::Check => Op::Check,
            Command::Corpus => return None,
        })
    }
}

/// Cartier modules, test modules and F-jumping numbers over polynomial rings in characteristic p.
#[derive(Debug, Parser)]
#[command(name = "cartierlab", version)]
struct Cli {
    /// Which tasks of the scene to run; `corpus` runs the bundled examples.
    command: Command,
    /// Scene file (JSON). Required for every command except `corpus`.
    #[arg(long)]
    scene: Option<PathBuf>,
    /// Largest Frobenius exponent any computation may use.
    #[arg(long)]
    e_max: Option<u32>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory of the content-addressed result cache.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Jump grid denominator caps A,B (grid k / (p^A (p^B - 1))).
    #[arg(long, value_parser = parse_caps)]
    denom_caps: Option<(u32, u32)>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Assert that `check` tasks end in an expected negative (exit 4 when they do).
    #[arg(long)]
    expect_negative: bool,
    /// Recompute a sample of cache hits and compare them with the stored values.
    #[arg(long)]
    verify_cache: bool,
}

fn parse_caps(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected A,B, got '{s}'"))?;
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("'{t}': {e}"));
    Ok((num(a)?, num(b)?))
}

fn emit<T: serde::Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
    } else {
        print!("{}", text());
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let flags = Flags {
        e_max: cli.e_max,
        seed: cli.seed,
        cache_dir: cli.cache_dir.clone(),
        denom_caps: cli.denom_caps,
        expect_negative: cli.expect_negative,
        verify_cache: cli.verify_cache,
    };
    let command = format!("{:?}", cli.command).to_lowercase();

    let mut cache = match &cli.cache_dir {
        Some(dir) => match Cache::open(dir) {
            Ok(c) => Some(c),
            Err(e) => {
                let report = SceneReport::failed_to_load("-", &command, &e);
                emit(cli.json, &report, || render_text(&report));
                return ExitCode::from(report.exit_code(false) as u8);
            }
        },
        None => None,
    };

    if cli.command == Command::Corpus && cli.scene.is_none() {
        let report = run_corpus(&flags, cache.as_mut());
        emit(cli.json, &report, || {
            let mut out: String = report.scenes.iter().map(render_text).collect();
            let s = &report.summary;
            out.push_str(&format!(
                "corpus: {} scenes, {} tasks, {} ok, {} expected-negative, {} failed, {} errors\n",
                s.scenes, s.tasks, s.ok, s.expected_negative, s.failed, s.errors
            ));
            out
        });
        return ExitCode::from(report.exit_code() as u8);
    }

    let report = match &cli.scene {
        None => SceneReport::failed_to_load("-", &command, &CartierError::InvalidArgument("--scene FILE is required".into())),
        Some(path) => {
            let name = path.display().to_string();
            match read_scene(path).and_then(|s| LoadedScene::load(s, cli.e_max)) {
                Ok(scene) => run_scene(&scene, cli.command.op(), &command, &flags, cache.as_mut()),
                Err(e) => SceneReport::failed_to_load(&name, &command, &e),
            }
        }
    };
    emit(cli.json, &report, || render_text(&report));
    let code = report.exit_code(cli.command == Command::Corpus);
    ExitCode::from(code as u8)
}
