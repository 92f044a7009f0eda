use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cartiercore::CartierModule;
use crate::error::{CartierError, Result};
use crate::filtration::{gr, grid, inequality_checks, jumping_numbers, SpectrumPolicy, TauOracle};
use crate::fpmod::{parse_vector, Submodule};
use crate::fppoly::{parse_poly, Ring};
use crate::functorops::{
    coherent_model, commutation_suite, contraction_failures, gauge_growth, growth_family_member, growth_identity,
    push_to_point, pushforward_finite, pushforward_sub, pushforward_suite, shriek_affine_line, shriek_finite, shriek_localize, FiniteExtension,
    RingMap, Verdict,
};
use crate::rational::{fmt_rat, parse_rat, Rat};
use crate::testmod::{TauOptions, TauResult};

use super::cache::{Cache, CacheMemo, CacheStats};
use super::scene::{parse_ideal, CheckKind, LoadedScene, Op, Task};

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub e_max: Option<u32>,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub denom_caps: Option<(u32, u32)>,
    pub expect_negative: bool,
    /// Recompute a fixed sample of cache hits and compare.
    pub verify_cache: bool,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_NEGATIVE: i32 = 4;
pub const EXIT_PROPERTY: i32 = 5;

pub fn exit_code_for(e: &CartierError) -> i32 {
    match e {
        CartierError::ResourceCap(_) | CartierError::NoStabilization(_) | CartierError::SearchExhausted(_) => EXIT_CAP,
        CartierError::InvariantViolation(_) => EXIT_PROPERTY,
        CartierError::Io(_) => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Failed,
    ExpectedNegative,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub field: String,
    pub expected: Value,
    pub got: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorRecord {
    pub exit_code: i32,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub index: usize,
    pub op: Op,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_cache_hits: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SceneReport {
    pub scene: String,
    pub command: String,
    pub tasks: Vec<TaskReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache: Option<CacheStats>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SceneReport {
    pub fn failed_to_load(name: &str, command: &str, e: &CartierError) -> SceneReport {
        SceneReport {
            scene: name.into(),
            command: command.into(),
            tasks: Vec::new(),
            error: Some(ErrorRecord { exit_code: exit_code_for(e), message: e.to_string() }),
            cache: None,
            warnings: Vec::new(),
        }
    }

    /// Errors first, then property failures, then matched expected negatives.
    pub fn exit_code(&self, negatives_pass: bool) -> i32 {
        if let Some(e) = &self.error {
            return e.exit_code;
        }
        if let Some(e) = self.tasks.iter().find_map(|t| t.error.as_ref()) {
            return e.exit_code;
        }
        if self.tasks.iter().any(|t| t.status == Status::Failed) {
            return EXIT_PROPERTY;
        }
        if !negatives_pass && self.tasks.iter().any(|t| t.status == Status::ExpectedNegative) {
            return EXIT_NEGATIVE;
        }
        EXIT_OK
    }
}

fn sub_json(n: &Submodule) -> Result<Value> {
    Ok(json!(n.to_record()?.generators))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn rat_field(task: &Task, field: Option<&String>, name: &str) -> Result<Rat> {
    let s = field.ok_or_else(|| CartierError::InvalidArgument(format!("{:?} needs '{name}'", task.op)))?;
    parse_rat(s)
}

struct Ctx<'a> {
    scene: &'a LoadedScene,
    flags: &'a Flags,
}

impl Ctx<'_> {
    fn opts(&self, task: &Task) -> Result<TauOptions> {
        let mut opts = TauOptions { seed: self.flags.seed, ..TauOptions::default() };
        if let Some(e0) = task.e0 {
            opts.e0 = e0;
        }
        if let Some(c) = &task.candidates {
            opts.candidates = c.iter().map(|g| parse_ideal(&self.scene.ring, g)).collect::<Result<_>>()?;
        }
        Ok(opts)
    }

    fn e_max(&self) -> u32 {
        self.flags.e_max.unwrap_or(self.scene.ring.caps.max_e)
    }

    fn caps(&self, task: &Task) -> (u32, u32) {
        self.flags.denom_caps.or(task.caps).unwrap_or((1, 1))
    }

    /// The task's module, twisted by ideal^t when both are given.
    fn module(&self, task: &Task) -> Result<CartierModule> {
        let cm = self.scene.pair(task)?;
        match (&task.ideal, &task.t) {
            (Some(i), Some(t)) if !matches!(task.op, Op::Jumps | Op::Gr | Op::Check) => {
                let alg = cm.algebra().twisted(&parse_ideal(cm.ring(), i)?, parse_rat(t)?)?;
                cm.with_algebra(&alg)
            }
            _ => Ok(cm),
        }
    }

    fn start(&self, cm: &CartierModule, task: &Task) -> Result<Submodule> {
        match &task.sub {
            None => Ok(cm.whole()),
            Some(cols) => {
                let gens = cols.iter().map(|c| parse_vector(cm.ring(), c, cm.rank())).collect::<Result<Vec<_>>>()?;
                Ok(Submodule::new(cm.module(), gens))
            }
        }
    }

    fn oracle(&self, task: &Task) -> Result<TauOracle> {
        let cm = self.scene.pair(task)?;
        let ideal = parse_ideal(cm.ring(), task.ideal.as_deref().unwrap_or(&[]))?;
        let o = TauOracle::new(&cm, &ideal, self.opts(task)?, self.e_max())?;
        Ok(if task.legacy { o.legacy() } else { o })
    }
}

fn tau_json(r: &TauResult) -> Result<Value> {
    Ok(json!({
        "tau": sub_json(&r.submodule)?,
        "whole": r.submodule.is_whole()?,
        "zero": r.submodule.is_zero(),
        "test_elements": to_value(&r.test_element_records()),
        "exact": r.exact,
        "e0": r.e0,
        "nil_iso_checks": r.nil_iso_checks,
    }))
}

fn primes_json(v: &[crate::idealkit::PrimeIdeal]) -> Value {
    json!(v.iter().map(|p| p.ideal.to_string()).collect::<Vec<_>>())
}

fn module_json(cm: &CartierModule) -> Result<Value> {
    Ok(json!({
        "vars": cm.ring().vars,
        "module": to_value(&cm.module().to_record()),
        "algebra": to_value(&cm.algebra().to_record()?),
    }))
}

fn base_ring_for(cm: &CartierModule, adjoin: &str) -> Result<crate::fppoly::RingRef> {
    let ring = cm.ring();
    if ring.vars.last().map(|v| v.as_str()) != Some(adjoin) {
        return Err(CartierError::InvalidArgument(format!("pushforward along a finite map needs '{adjoin}' as the last variable")));
    }
    let vars = ring.vars[..ring.n() - 1].to_vec();
    Ring::with_order(ring.p, vars, ring.order.clone(), ring.caps.clone())
}

/// Computes one task; the second component is the number of grid values read from the cache.
fn compute(ctx: &Ctx, task: &Task, cache: Option<&mut Cache>) -> Result<(Value, Option<usize>, bool)> {
    let mut negative = false;
    let value = match task.op {
        Op::Tau => tau_json(&ctx.module(task)?.tau(&ctx.opts(task)?)?)?,
        Op::Tauprime => tau_json(&ctx.module(task)?.tau_prime(&ctx.opts(task)?)?)?,
        Op::Jumps => {
            let oracle = ctx.oracle(task)?;
            let top = parse_rat(task.top.as_deref().unwrap_or("1"))?;
            let policy = match task.policy.as_deref() {
                None | Some("lower-bound") => SpectrumPolicy::LowerBound,
                Some("strict") => SpectrumPolicy::Strict,
                Some(other) => return Err(CartierError::InvalidArgument(format!("unknown policy '{other}'"))),
            };
            let caps = ctx.caps(task);
            let (spec, hits) = match cache {
                Some(c) => {
                    let fragment = json!({
                        "ring": ctx.scene.scene.ring,
                        "module": ctx.scene.scene.modules.get(task.module.as_deref().unwrap_or_default()),
                        "algebra": ctx.scene.scene.algebras.get(task.algebra.as_deref().unwrap_or_default()),
                        "ideal": task.ideal,
                        "legacy": task.legacy,
                        "e_max": ctx.e_max(),
                        "seed": ctx.flags.seed,
                    });
                    let mut memo = CacheMemo { cache: c, fragment, errors: Vec::new() };
                    let spec = jumping_numbers(&oracle, &top, caps, policy, Some(&mut memo))?;
                    if let Some(e) = memo.errors.first() {
                        return Err(CartierError::Io(e.clone()));
                    }
                    let hits = spec.memo_hits;
                    (spec, Some(hits))
                }
                None => (jumping_numbers(&oracle, &top, caps, policy, None)?, None),
            };
            let values: Vec<String> = spec.jump_values().iter().map(fmt_rat).collect();
            let v = json!({
                "values": values,
                "jumps": to_value(&spec.records()?),
                "kind": to_value(&spec.kind),
                "denominator": spec.denominator,
                "caps": [caps.0, caps.1],
                "top": fmt_rat(&spec.top),
                "evaluations": spec.evaluations,
            });
            return Ok((v, hits, false));
        }
        Op::Gr => {
            let oracle = ctx.oracle(task)?;
            let t = rat_field(task, task.t.as_ref(), "t")?;
            let before = rat_field(task, task.t_before.as_ref(), "t_before")?;
            let g = gr(&oracle, &t, &before)?;
            let mut v = module_json(&g)?;
            v["zero"] = json!(g.module().is_zero_module()?);
            v["nilpotent"] = json!(g.is_nilpotent(&g.whole(), None)?);
            v
        }
        Op::Stabilize => {
            let cm = ctx.module(task)?;
            let (s, steps) = cm.stable_member(&ctx.start(&cm, task)?)?;
            json!({ "stable": sub_json(&s)?, "steps": steps })
        }
        Op::Nilpotent => {
            let cm = ctx.module(task)?;
            let at = match &task.at {
                Some(g) => Some(parse_ideal(cm.ring(), g)?),
                None => None,
            };
            json!({ "nilpotent": cm.is_nilpotent(&ctx.start(&cm, task)?, at.as_ref())? })
        }
        Op::Ass => {
            let cm = ctx.module(task)?;
            let opts = ctx.opts(task)?;
            json!({
                "cartier": primes_json(&cm.ass_cartier(&opts.candidates)?),
                "module": primes_json(&cm.ass_module(&opts.candidates)?),
            })
        }
        Op::Pullback => pullback(ctx, task)?,
        Op::Pushforward => pushforward(ctx, task)?,
        Op::Check => {
            let (v, neg) = check(ctx, task)?;
            negative = neg;
            v
        }
    };
    Ok((value, None, negative))
}

fn pullback(ctx: &Ctx, task: &Task) -> Result<Value> {
    let mut cm = ctx.module(task)?;
    let opts = ctx.opts(task)?;
    let steps = ctx.scene.map(task)?;
    for (i, step) in steps.iter().enumerate() {
        match step {
            RingMap::AffineLine { var } => cm = shriek_affine_line(&cm, var)?.0,
            RingMap::Finite { adjoin, relation } => {
                let ext = FiniteExtension::new(cm.ring(), adjoin, relation)?;
                cm = shriek_finite(&cm, &ext)?;
            }
            RingMap::Localize { at } if i + 1 == steps.len() => {
                let loc = shriek_localize(&cm, &parse_poly(cm.ring(), at)?)?;
                return Ok(json!({
                    "c": at,
                    "whole": sub_json(&loc.whole()?)?,
                    "underline": sub_json(&loc.underline()?)?,
                    "f_pure": loc.is_f_pure()?,
                    "nilpotent": loc.is_nilpotent()?,
                    "tau": sub_json(&loc.tau(&opts)?)?,
                }));
            }
            RingMap::Localize { .. } => {
                return Err(CartierError::Unsupported("a localization must be the last step of a pullback".into()))
            }
            RingMap::ToPoint => return Err(CartierError::Unsupported("pullback from a point is not a module construction here".into())),
        }
    }
    let mut v = module_json(&cm)?;
    v["rank"] = json!(cm.rank());
    v["tau"] = sub_json(&cm.tau(&opts)?.submodule)?;
    Ok(v)
}

fn pushforward(ctx: &Ctx, task: &Task) -> Result<Value> {
    let cm = ctx.module(task)?;
    let opts = ctx.opts(task)?;
    let steps = ctx.scene.map(task)?;
    let [step] = steps.as_slice() else {
        return Err(CartierError::Unsupported("pushforward takes a single map".into()));
    };
    match step {
        RingMap::Finite { adjoin, relation } => {
            let base = base_ring_for(&cm, adjoin)?;
            let ext = FiniteExtension::new(&base, adjoin, relation)?;
            let pushed = pushforward_finite(&cm, &ext)?;
            let mut v = module_json(&pushed)?;
            v["rank"] = json!(pushed.rank());
            v["tau"] = sub_json(&pushed.tau(&opts)?.submodule)?;
            v["pushforward_of_tau"] = sub_json(&pushforward_sub(&pushed, &cm.tau(&opts)?.submodule, &ext)?)?;
            v["f_pure"] = json!(pushed.is_f_pure()?);
            Ok(v)
        }
        RingMap::Localize { at } => {
            let model = coherent_model(&cm, &parse_poly(cm.ring(), at)?)?;
            Ok(to_value(&model.report(&opts)?))
        }
        RingMap::ToPoint => {
            let tau = cm.tau(&opts)?.submodule;
            let of_tau = push_to_point(&cm, &tau, None)?;
            let whole = push_to_point(&cm, &cm.whole(), None)?;
            Ok(json!({
                "gauge_cutoff": whole.gauge_cutoff,
                "dimension": whole.dimension,
                "tau_of_pushforward_dim": whole.underline_dimension,
                "pushforward_of_tau_dim": of_tau.underline_dimension,
                "tau_of_pushforward": whole.underline_basis,
            }))
        }
        RingMap::AffineLine { .. } => Err(CartierError::Unsupported("pushforward along an affine line is not coherent".into())),
    }
}

/// The boolean is true when a documented negative case was reproduced.
fn check(ctx: &Ctx, task: &Task) -> Result<(Value, bool)> {
    let kind = task.check.unwrap_or(CheckKind::Suite);
    match kind {
        CheckKind::Suite => {
            let cm = ctx.module(task)?;
            let steps = ctx.scene.map(task)?;
            let [step] = steps.as_slice() else {
                return Err(CartierError::Unsupported("the commutation suite takes a single map".into()));
            };
            let opts = ctx.opts(task)?;
            let lines = match step {
                RingMap::Finite { adjoin, relation } if cm.ring().vars.last() == Some(adjoin) => {
                    let ext = FiniteExtension::new(&base_ring_for(&cm, adjoin)?, adjoin, relation)?;
                    pushforward_suite(&cm, &ext, &opts)?
                }
                _ => commutation_suite(&cm, step, &opts)?,
            };
            let holds = lines.iter().filter(|l| l.verdict == Verdict::Holds).count();
            let fails = lines.iter().filter(|l| l.verdict == Verdict::Fails).count();
            let negative = lines.iter().any(|l| l.verdict == Verdict::ExpectedNegative);
            Ok((json!({ "lines": to_value(&lines), "holds": holds, "fails": fails, "passed": fails == 0 }), negative))
        }
        CheckKind::Gauge => {
            let ring = &ctx.scene.ring;
            let es = task.e_values.clone().unwrap_or_else(|| vec![1, 2]);
            let mut contraction = Vec::new();
            let mut identity = Vec::new();
            let mut family = Vec::new();
            let mut ok = true;
            for &e in &es {
                let bad = contraction_failures(ring, e, 200, ctx.flags.seed ^ e as u64)?;
                ok &= bad == 0;
                contraction.push(json!({ "e": e, "samples": 200, "failures": bad }));
                let (lhs, rhs) = growth_identity(ring, e)?;
                ok &= lhs == rhs;
                identity.push(json!({ "e": e, "lhs": lhs.to_string(), "rhs": rhs.to_string(), "holds": lhs == rhs }));
                family.push((e, growth_family_member(ring, e)?));
            }
            let growth = gauge_growth(&family)?;
            ok &= growth.flagged;
            Ok((json!({ "contraction": contraction, "identity": identity, "growth": to_value(&growth), "passed": ok }), false))
        }
        CheckKind::Filtration => {
            let oracle = ctx.oracle(task)?;
            let t = rat_field(task, task.t.as_ref(), "t")?;
            let (den, _) = grid(ctx.scene.ring.p, ctx.caps(task), &Rat::from_integer(0))?;
            let step = Rat::new(1, den);
            let next = ((t / step).floor() + Rat::from_integer(1)) * step;
            let eps = (next - t) / Rat::from_integer(ctx.scene.ring.p as i64);
            let lines = inequality_checks(&oracle, &t, &eps)?;
            let ok = lines.iter().all(|l| l.passed);
            Ok((json!({ "lines": to_value(&lines), "passed": ok }), false))
        }
        CheckKind::Regularity => {
            let cm = ctx.module(task)?;
            let pure = cm.is_f_pure()?;
            let regular = cm.is_f_regular(&ctx.opts(task)?)?;
            Ok((json!({ "f_pure": pure, "f_regular": regular, "passed": true }), false))
        }
    }
}

fn cache_parts(ctx: &Ctx, task: &Task) -> Value {
    let mut t = task.clone();
    t.expect = None;
    t.expect_negative = false;
    let s = &ctx.scene.scene;
    json!({
        "ring": s.ring,
        "module": task.module.as_ref().and_then(|m| s.modules.get(m)),
        "algebra": task.algebra.as_ref().and_then(|a| s.algebras.get(a)),
        "map": task.map.as_ref().and_then(|m| s.maps.get(m)),
        "task": t,
        "e_max": ctx.e_max(),
        "seed": ctx.flags.seed,
        "caps": ctx.caps(task),
    })
}

fn run_task(ctx: &Ctx, index: usize, task: &Task, cache: Option<&mut Cache>) -> TaskReport {
    let mut report = TaskReport {
        index,
        op: task.op,
        module: task.module.clone(),
        algebra: task.algebra.clone(),
        status: Status::Ok,
        result: None,
        mismatches: Vec::new(),
        error: None,
        grid_cache_hits: None,
    };
    let outcome = match cache {
        Some(c) if task.op == Op::Jumps => compute(ctx, task, Some(c)),
        Some(c) => {
            let parts = cache_parts(ctx, task);
            let verify = ctx.flags.verify_cache;
            c.get_or_compute(&parts, verify, || {
                let (v, _, neg) = compute(ctx, task, None)?;
                Ok(json!({ "value": v, "negative": neg }))
            })
            .map(|w| (w["value"].clone(), None, w["negative"].as_bool().unwrap_or(false)))
        }
        None => compute(ctx, task, None),
    };
    match outcome {
        Err(e) => {
            report.status = Status::Error;
            report.error = Some(ErrorRecord { exit_code: exit_code_for(&e), message: format!("task {index} ({:?}): {e}", task.op) });
        }
        Ok((value, hits, negative)) => {
            report.grid_cache_hits = hits;
            if let Some(expect) = &task.expect {
                for (field, want) in expect {
                    let got = value.get(field).cloned().unwrap_or(Value::Null);
                    if &got != want {
                        report.mismatches.push(Mismatch { field: field.clone(), expected: want.clone(), got });
                    }
                }
            }
            let passed = value.get("passed").and_then(|v| v.as_bool()).unwrap_or(true);
            let asserted = task.expect_negative || (ctx.flags.expect_negative && task.op == Op::Check);
            report.status = if !report.mismatches.is_empty() || !passed || (asserted && !negative) {
                Status::Failed
            } else if negative && asserted {
                Status::ExpectedNegative
            } else {
                Status::Ok
            };
            report.result = Some(value);
        }
    }
    report
}

/// Runs the tasks of a loaded scene, restricted to `only` when given.
pub fn run_scene(scene: &LoadedScene, only: Option<Op>, command: &str, flags: &Flags, mut cache: Option<&mut Cache>) -> SceneReport {
    let ctx = Ctx { scene, flags };
    let mut tasks = Vec::new();
    for (i, task) in scene.scene.tasks.iter().enumerate() {
        if only.is_some_and(|op| op != task.op) {
            continue;
        }
        tasks.push(run_task(&ctx, i, task, cache.as_deref_mut()));
    }
    let (stats, warnings) = match cache {
        Some(c) => (Some(c.stats.clone()), std::mem::take(&mut c.warnings)),
        None => (None, Vec::new()),
    };
    SceneReport { scene: scene.scene.name.clone(), command: command.into(), tasks, error: None, cache: stats, warnings }
}

/// One line per task for terminal output.
pub fn render_text(report: &SceneReport) -> String {
    let mut out = format!("scene {} ({})\n", if report.scene.is_empty() { "-" } else { &report.scene }, report.command);
    if let Some(e) = &report.error {
        out.push_str(&format!("  error [exit {}]: {}\n", e.exit_code, e.message));
    }
    for t in &report.tasks {
        let target = match (&t.module, &t.algebra) {
            (Some(m), Some(a)) => format!("{m}/{a}"),
            _ => "-".into(),
        };
        let status = match t.status {
            Status::Ok => "ok",
            Status::Failed => "FAILED",
            Status::ExpectedNegative => "EXPECTED-NEGATIVE",
            Status::Error => "ERROR",
        };
        let summary = match (&t.error, &t.result) {
            (Some(e), _) => e.message.clone(),
            (None, Some(v)) => summarize(t.op, v),
            _ => String::new(),
        };
        out.push_str(&format!("  {:>3} {:<11} {:<14} {:<17} {}\n", t.index, format!("{:?}", t.op).to_lowercase(), target, status, summary));
        for m in &t.mismatches {
            out.push_str(&format!("        {}: expected {} got {}\n", m.field, m.expected, m.got));
        }
    }
    if let Some(c) = &report.cache {
        out.push_str(&format!("  cache: {} hits, {} misses, {} stale, {} corrupted\n", c.hits, c.misses, c.stale, c.corrupted));
    }
    for w in &report.warnings {
        out.push_str(&format!("  warning: {w}\n"));
    }
    out
}

fn summarize(op: Op, v: &Value) -> String {
    let s = match op {
        Op::Tau | Op::Tauprime => v["tau"].to_string(),
        Op::Jumps => format!("{} {}", v["kind"], v["values"]),
        Op::Stabilize => v["stable"].to_string(),
        Op::Nilpotent => v["nilpotent"].to_string(),
        Op::Ass => format!("cartier {} module {}", v["cartier"], v["module"]),
        Op::Check => match v.get("lines").and_then(|l| l.as_array()) {
            Some(lines) => lines
                .iter()
                .map(|l| format!("{} [{}]", l["statement"].as_str().or(l["name"].as_str()).unwrap_or(""), l["verdict"].as_str().unwrap_or(l["passed"].to_string().as_str())))
                .collect::<Vec<_>>()
                .join("; "),
            None => v.to_string(),
        },
        _ => v.to_string(),
    };
    if s.chars().count() > 160 {
        let cut: String = s.chars().take(157).collect();
        format!("{cut}...")
    } else {
        s
    }
}
