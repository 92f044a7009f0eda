mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use cartier::cartiercore::{CartierAlgebraSpec, CartierModule, CartierOp};
use cartier::cliharness::{parse_scene, run_corpus, Flags, LoadedScene, CORPUS};
use cartier::filtration::{grid, inequality_checks, jumping_numbers, SpectrumPolicy, TauOracle};
use cartier::fpmod::{torsion_of, PresentedModule, Submodule};
use cartier::fppoly::{Caps, MonomialOrder, Poly, Ring, RingRef};
use cartier::functorops::{
    coherent_model, commutation_suite, contraction_failures, gauge_growth, growth_family_member, growth_identity, RingMap, Verdict,
};
use cartier::idealkit::{Ideal, Vector};
use cartier::rational::{fmt_rat, Rat};
use cartier::testmod::{tau_bms, TauOptions};
use common::{p, Issue, PROPERTIES};

type Check = Result<String, String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn ok_or<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn sub(m: &CartierModule, cols: &[&[&str]]) -> Submodule {
    let r = m.ring();
    Submodule::new(m.module(), cols.iter().map(|c| Vector::from_polys(r, &c.iter().map(|s| p(r, s)).collect::<Vec<_>>())).collect())
}

fn ideal(r: &RingRef, gens: &[&str]) -> Ideal {
    Ideal::parse(r, gens).unwrap()
}

fn cyclic_sum(r: &RingRef, ideals: &[&[&str]], matrix: &[&[&str]]) -> Result<CartierModule, String> {
    let ids: Vec<Ideal> = ideals.iter().map(|g| if g.is_empty() { Ideal::zero(r) } else { ideal(r, g) }).collect();
    let m = ok_or(PresentedModule::direct_sum_of_cyclics(r, &ids), "module")?;
    let rows = matrix.iter().map(|row| row.iter().map(|s| p(r, s)).collect()).collect();
    let op = ok_or(CartierOp::new(1, rows), "operator")?;
    ok_or(CartierModule::validate(&m, &CartierAlgebraSpec::single(op)), "structure")
}

fn tau(m: &CartierModule) -> Result<Submodule, String> {
    ok_or(m.tau(&TauOptions::default()).map(|t| t.submodule), "tau")
}

fn same(a: &Submodule, b: &Submodule) -> bool {
    a.equals(b).unwrap_or(false)
}

fn floor_formula() -> Check {
    let ts = [(1i64, 2i64), (1, 1), (3, 2), (2, 1), (5, 2)];
    let mut count = 0;
    for pr in [2u32, 3, 5] {
        let line = Ring::new(pr, &["y"]).unwrap();
        let plain = CartierAlgebraSpec::single(CartierOp::scalar(1, &Poly::one(&line), 1).unwrap());
        let plane = Ring::new(pr, &["x", "y"]).unwrap();
        let slice = cyclic_sum(&plane, &[&["x"]], &[&[&format!("x^{}", pr - 1)]])?;
        for (n, d) in ts {
            let t = Rat::new(n, d);
            let k = (n / d) as u64;
            let twisted = ok_or(plain.twisted(&ideal(&line, &["y"]), t), "twist")?;
            let m = CartierModule::free(&twisted);
            let want = Submodule::new(m.module(), vec![Vector::from_poly_at(&p(&line, "y").pow(k).unwrap(), 0)]);
            if !same(&tau(&m)?, &want) {
                return fail(format!("p={pr} t={n}/{d}: F_p[y] gives {}", tau(&m)?.format()));
            }
            let alg = ok_or(slice.algebra().twisted(&ideal(&plane, &["y"]), t), "twist")?;
            let s = ok_or(slice.with_algebra(&alg), "twisted slice")?;
            let want = Submodule::new(s.module(), vec![Vector::from_poly_at(&p(&plane, "y").pow(k).unwrap(), 0)]);
            if !same(&tau(&s)?, &want) {
                return fail(format!("p={pr} t={n}/{d}: F_p[x,y]/(x) gives {}", tau(&s)?.format()));
            }
            count += 2;
        }
    }
    Ok(format!("{count} evaluations equal (y^floor(t))"))
}

fn intro_example() -> Check {
    let r = Ring::new(2, &["x", "y"]).unwrap();
    let m = cyclic_sum(&r, &[&["y"], &[]], &[&["y", "0"], &["0", "x"]])?;
    let t = tau(&m)?;
    let tp = ok_or(m.tau_prime(&TauOptions::default()), "tau'")?.submodule;
    if !same(&tp, &sub(&m, &[&["0", "x"]])) {
        return fail(format!("tau' = {}", tp.format()));
    }
    if !same(&t, &sub(&m, &[&["1", "0"], &["0", "x"]])) {
        return fail(format!("tau = {}", t.format()));
    }
    let a = cyclic_sum(&r, &[&["y"]], &[&["y"]])?;
    let b = cyclic_sum(&r, &[&[]], &[&["x"]])?;
    let (ta, tb) = (tau(&a)?, tau(&b)?);
    let split = common::inclusion(&a, &m, 0).image_of(&ta).sum(&common::inclusion(&b, &m, 1).image_of(&tb)).unwrap();
    if !same(&t, &split) {
        return fail("tau is not the sum of the summand test modules");
    }
    Ok("tau' = 0+(x), tau = R/(y)+(x) = tau(R/(y)) + tau(R)".into())
}

fn cartier_ass_pathology() -> Check {
    let r = Ring::new(3, &["x"]).unwrap();
    let m = cyclic_sum(&r, &[&[], &["x"]], &[&["x", "0"], &["x^2", "0"]])?;
    let names = |v: Vec<cartier::idealkit::PrimeIdeal>| v.iter().map(|q| q.ideal.to_string()).collect::<Vec<_>>();
    let ac = names(ok_or(m.ass_cartier(&[]), "ass")?);
    let am = names(ok_or(m.ass_module(&[]), "ass")?);
    if ac != ["(0)"] || am != ["(0)", "(x)"] {
        return fail(format!("Ass_C = {ac:?}, Ass = {am:?}"));
    }
    let r2 = Ring::new(3, &["x", "y"]).unwrap();
    let e = cyclic_sum(&r2, &[&[], &["x"]], &[&["x", "0"], &["x^2", "x^2*y^3"]])?;
    if !ok_or(e.is_f_pure(), "F-purity")? {
        return fail("the x,y example is not F-pure");
    }
    let torsion = ok_or(torsion_of(&e.whole(), &ideal(&r2, &["x"])), "torsion")?;
    let (piece, _) = ok_or(e.restrict(&torsion), "restriction")?;
    if ok_or(piece.is_f_pure(), "F-purity")? {
        return fail("the torsion at (x) is F-pure");
    }
    Ok("Ass_C = {(0)}, Ass = {(0),(x)}; M F-pure, torsion at (x) not F-pure".into())
}

fn section_example() -> Check {
    let r = Ring::new(3, &["x", "y"]).unwrap();
    let m = cyclic_sum(&r, &[&[], &["x"]], &[&["x", "0"], &["x^2", "(x*y)^2"]])?;
    let opts = TauOptions::default();
    let seq = ok_or(m.find_test_elements(&opts), "test elements")?;
    let got: Vec<(String, String)> = seq.iter().map(|t| (t.eta.ideal.to_string(), t.c.to_string())).collect();
    let want = vec![("(0)".to_string(), "x".to_string()), ("(x)".to_string(), "y".to_string())];
    if got != want {
        return fail(format!("test elements {got:?}"));
    }
    if !ok_or(m.is_f_regular(&opts), "regularity")? {
        return fail("M is not F-regular");
    }
    let (under, _) = ok_or(m.underline(), "underline")?;
    let piece = ok_or(m.torsion_part(&under, &ideal(&r, &["x"])), "torsion")?;
    let (pm, _) = ok_or(m.restrict(&piece), "restriction")?;
    if ok_or(pm.is_f_regular(&opts), "regularity")? {
        return fail("the torsion piece is F-regular");
    }
    Ok("((0),x), ((x),y); M F-regular, torsion piece not".into())
}

fn property_suite() -> Check {
    let mut summary = Vec::new();
    for (name, prop) in PROPERTIES {
        let (mut evaluated, mut skipped, mut seed) = (0, 0, 0u64);
        while evaluated < 20 {
            match prop(seed) {
                Ok(()) => evaluated += 1,
                Err(Issue::Skip(_)) => skipped += 1,
                Err(Issue::Fail(why)) => return fail(format!("{name}: {why}")),
            }
            seed += 1;
            if skipped > 20 {
                return fail(format!("{name}: more than 20 draws without a certified test element"));
            }
        }
        summary.push(if skipped == 0 { format!("{name} 20/20") } else { format!("{name} 20/20 ({skipped} uncertifiable draws)") });
    }
    Ok(summary.join(", "))
}

fn corpus_pairs() -> Result<Vec<(String, CartierModule)>, String> {
    let mut out = Vec::new();
    for (file, text) in CORPUS {
        let scene = ok_or(parse_scene(text, file).and_then(|s| LoadedScene::load(s, None)), file)?;
        let mut seen = BTreeSet::new();
        for task in &scene.scene.tasks {
            if let (Some(m), Some(a)) = (&task.module, &task.algebra) {
                if seen.insert((m.clone(), a.clone())) {
                    out.push((format!("{file}:{m}/{a}"), ok_or(scene.pair(task), file)?));
                }
            }
        }
    }
    Ok(out)
}

fn affine_line() -> Check {
    let pairs = corpus_pairs()?;
    for (name, cm) in &pairs {
        let var = if cm.ring().vars.iter().any(|v| v == "u") { "w" } else { "u" };
        let lines = ok_or(commutation_suite(cm, &RingMap::AffineLine { var: var.into() }, &TauOptions::default()), name)?;
        for l in &lines {
            if l.verdict != Verdict::Holds {
                return fail(format!("{name}: {} ({} vs {})", l.statement, l.lhs, l.rhs));
            }
        }
    }
    Ok(format!("tau and Ass statements hold on {} corpus pairs", pairs.len()))
}

fn finite_map() -> Check {
    let r = Ring::new(3, &["x"]).unwrap();
    let modules = [
        ("R, trace", cyclic_sum(&r, &[&[]], &[&["1"]])?),
        ("R, x^2", cyclic_sum(&r, &[&[]], &[&["x^2"]])?),
        ("R+R/(x)", cyclic_sum(&r, &[&[], &["x"]], &[&["1", "0"], &["0", "x^2"]])?),
    ];
    let map = RingMap::Finite { adjoin: "z".into(), relation: "z^2-x".into() };
    let mut statements = BTreeSet::new();
    for (name, cm) in &modules {
        let lines = ok_or(commutation_suite(cm, &map, &TauOptions::default()), name)?;
        for l in &lines {
            if l.verdict != Verdict::Holds {
                return fail(format!("{name}: {} ({} vs {})", l.statement, l.lhs, l.rhs));
            }
            statements.insert(l.statement.clone());
        }
    }
    for needed in ["tau(f^! M) in f^! tau(M)", "f_* tau(N) = tau(f_* N)", "Ass f^! M = f^-1 Ass M", "Ass f_* N = f(Ass N)"] {
        if !statements.contains(needed) {
            return fail(format!("statement '{needed}' was not checked"));
        }
    }
    Ok(format!("{} statements hold on 3 modules", statements.len()))
}

fn open_immersion() -> Check {
    let mut out = Vec::new();
    for pr in [2u32, 3] {
        let r = Ring::new(pr, &["x"]).unwrap();
        let m = cyclic_sum(&r, &[&[]], &[&["1"]])?;
        let model = ok_or(coherent_model(&m, &p(&r, "x")), "coherent model")?;
        let rep = ok_or(model.report(&TauOptions::default()), "report")?;
        if rep.tau_model != vec![vec!["1".to_string()]] || !rep.inside_pushforward_of_tau || rep.strict_witness.is_none() || !rep.independent {
            return fail(format!("p={pr}: {rep:?}"));
        }
        out.push(format!("p={pr}: depth {}, tau = F_p[x], witness {:?}", rep.depth, rep.strict_witness.unwrap()));
    }
    Ok(out.join("; "))
}

fn next_grid_eps(pr: u32, caps: (u32, u32), t: &Rat) -> Rat {
    let (den, _) = grid(pr, caps, &Rat::from_integer(0)).unwrap();
    let step = Rat::new(1, den);
    let next = ((t / step).floor() + Rat::from_integer(1)) * step;
    (next - t) / Rat::from_integer(pr as i64)
}

fn jumping_spectra() -> Check {
    let r = Ring::new(2, &["y"]).unwrap();
    let plain = |r: &RingRef| CartierModule::free(&CartierAlgebraSpec::single(CartierOp::scalar(1, &Poly::one(r), 1).unwrap()));
    let oracle = ok_or(TauOracle::new(&plain(&r), &ideal(&r, &["y"]), TauOptions::default(), 16), "oracle")?;
    let spec = ok_or(jumping_numbers(&oracle, &Rat::from_integer(3), (1, 2), SpectrumPolicy::Strict, None), "jumps")?;
    if spec.jump_values() != vec![Rat::from_integer(1), Rat::from_integer(2), Rat::from_integer(3)] {
        return fail(format!("jumps {:?}", spec.jump_values()));
    }

    let mut checked = 0;
    let samples: &[(u32, &[&str], &[&str])] = &[
        (2, &["x", "y"], &["x", "y"]),
        (3, &["x", "y"], &["x^2", "y"]),
        (2, &["x", "y"], &["x*y"]),
        (3, &["x"], &["x^2"]),
        (5, &["x", "y"], &["x^2+y^3"]),
    ];
    for (pr, vars, gens) in samples {
        let r = Ring::new(*pr, vars).unwrap();
        let oracle = ok_or(TauOracle::new(&plain(&r), &ideal(&r, gens), TauOptions::default(), 16), "oracle")?;
        for (n, d) in [(1i64, 2i64), (1, 1), (3, 2), (2, 1), (5, 2), (3, 1)] {
            let t = Rat::new(n, d);
            let lines = ok_or(inequality_checks(&oracle, &t, &next_grid_eps(*pr, (1, 1), &t)), "inequalities")?;
            for l in lines.iter().filter(|l| !l.name.starts_with("tau(t) = tau(t+")) {
                if !l.passed {
                    return fail(format!("{gens:?} over F_{pr}: {}", l.name));
                }
                checked += 1;
            }
        }
    }

    let r7 = Ring::new(7, &["x", "y"]).unwrap();
    let f = p(&r7, "x^2+y^3");
    let den = 49 * 48;
    let mut first = None;
    for k in 1..=den {
        let t = Rat::new(k, den);
        let res = ok_or(tau_bms(&f, &t, 16), "tau_bms")?;
        if !ok_or(res.ideal.is_unit(), "unit test")? {
            first = Some(t);
            break;
        }
    }
    if first != Some(Rat::new(5, 6)) {
        return fail(format!("first jump of the cusp is {:?}", first.map(|t| fmt_rat(&t))));
    }
    Ok(format!("{{1,2,3}}; {checked} Briancon-Skoda/Skoda lines; cusp first jump 5/6 after scanning the 2352-grid"))
}

fn oracle_equivalence() -> Check {
    let cases: &[(u32, &str)] = &[
        (2, "x^2+y^3"),
        (2, "x*y"),
        (2, "x^3+y^3"),
        (2, "x^2*y+y^4"),
        (3, "x^2+y^3"),
        (3, "x*y*(x+y)"),
        (3, "x^2-y^2"),
        (3, "x^4+y^3"),
        (5, "x^2+y^3"),
        (5, "x*y"),
    ];
    let mut total = 0;
    for (pr, fs) in cases {
        let caps = Caps { max_e: 16, ..Caps::default() };
        let r = Ring::with_order(*pr, vec!["x".into(), "y".into()], MonomialOrder::Grevlex, caps).unwrap();
        let f = p(&r, fs);
        let plain = CartierAlgebraSpec::single(CartierOp::scalar(1, &Poly::one(&r), 1).unwrap());
        let q = (*pr as i64).pow(2);
        let den = q * (q - 1);
        for k in 1..=den {
            let t = Rat::new(k, den);
            let bms = ok_or(tau_bms(&f, &t, 16), "tau_bms")?.ideal;
            let twisted = ok_or(plain.twisted(&Ideal::principal(&f), t), "twist")?;
            let m = CartierModule::free(&twisted);
            let module_tau = tau(&m)?;
            let as_sub = Submodule::new(m.module(), bms.gens().iter().map(|g| Vector::from_poly_at(g, 0)).collect());
            if !same(&module_tau, &as_sub) {
                return fail(format!("f={fs} p={pr} t={}: bms {} vs module {}", fmt_rat(&t), bms, module_tau.format()));
            }
            total += 1;
        }
    }
    Ok(format!("{total} grid points in (0,1], zero mismatches"))
}

fn gauge() -> Check {
    let mut samples = 0;
    for pr in [2u32, 3] {
        let r = Ring::new(pr, &["x", "y"]).unwrap();
        for e in [1u32, 2] {
            let bad = ok_or(contraction_failures(&r, e, 200, 11 * pr as u64 + e as u64), "contraction")?;
            if bad != 0 {
                return fail(format!("{bad} contraction failures at p={pr} e={e}"));
            }
            samples += 200;
            let (lhs, rhs) = ok_or(growth_identity(&r, e), "identity")?;
            if lhs != rhs {
                return fail(format!("identity at p={pr} e={e}: {lhs} vs {rhs}"));
            }
        }
        let family = [1u32, 2].iter().map(|&e| Ok((e, growth_family_member(&r, e)?))).collect::<cartier::error::Result<Vec<_>>>();
        let report = ok_or(gauge_growth(&ok_or(family, "family")?), "growth")?;
        if !report.flagged {
            return fail(format!("detector did not flag the family at p={pr}"));
        }
    }
    Ok(format!("{samples} contraction samples, identity = y^e, family flagged"))
}

fn expected_negative() -> Check {
    for pr in [2u32, 3] {
        let r = Ring::new(pr, &["x"]).unwrap();
        let m = cyclic_sum(&r, &[&[]], &[&[&format!("x^{}", pr - 1)]])?;
        let lines = ok_or(commutation_suite(&m, &RingMap::ToPoint, &TauOptions::default()), "suite")?;
        let line = lines.first().ok_or("empty suite")?;
        if line.verdict != Verdict::ExpectedNegative || line.lhs != "dim 0" || line.rhs != "dim 1" {
            return fail(format!("p={pr}: {} {} {} [{:?}]", line.lhs, line.relation, line.rhs, line.verdict));
        }
    }
    let scene = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/negative.json");
    let status = ok_or(Command::new(env!("CARGO_BIN_EXE_cartierlab")).args(["check", "--scene", scene, "--expect-negative"]).output(), "cli")?;
    match status.status.code() {
        Some(4) => Ok("f_* tau = 0 (dim 0) vs tau(f_*) (dim 1); cartierlab exits 4".into()),
        other => fail(format!("cartierlab exited with {other:?}")),
    }
}

fn determinism() -> Check {
    let flags = Flags::default();
    let a = serde_json::to_string(&run_corpus(&flags, None)).unwrap();
    let b = serde_json::to_string(&run_corpus(&flags, None)).unwrap();
    if a != b {
        return fail("in-process corpus reports differ");
    }
    let run = || Command::new(env!("CARGO_BIN_EXE_cartierlab")).args(["corpus", "--json"]).output().map(|o| o.stdout);
    let (x, y) = (ok_or(run(), "cli")?, ok_or(run(), "cli")?);
    if x != y {
        return fail("cartierlab corpus --json differs between runs");
    }
    Ok(format!("{} bytes, identical twice in process and twice through the binary", x.len()))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Check); 13] = [
        (1, "floor formula for (y)^t", 2, floor_formula),
        (2, "intro example tau, tau' and additivity", 2, intro_example),
        (3, "Cartier Ass pathology and torsion purity", 2, cartier_ass_pathology),
        (4, "test elements of the two-summand example", 5, section_example),
        (5, "seeded property suite", 60, property_suite),
        (6, "affine-line pullback on the corpus", 10, affine_line),
        (7, "finite map z^2 = x", 10, finite_map),
        (8, "open immersion coherent model", 2, open_immersion),
        (9, "jumping spectra and Briancon-Skoda", 120, jumping_spectra),
        (10, "tau_bms versus module tau", 300, oracle_equivalence),
        (11, "gauge machinery", 10, gauge),
        (12, "expected negative for A^1 -> point", 2, expected_negative),
        (13, "deterministic corpus reports", 60, determinism),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failures = 0;
    for (id, name, budget, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(budget);
        let (tag, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over the {budget}s budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!("{tag} criterion {id:>2} {name} [{:.2}s / {budget}s]: {detail}", took.as_secs_f64());
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
