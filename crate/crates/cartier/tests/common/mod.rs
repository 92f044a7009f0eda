#![allow(dead_code)]

use cartier::cartiercore::{CartierAlgebraSpec, CartierModule, CartierOp};
use cartier::error::CartierError;
use cartier::fpmod::{ModuleMap, PresentedModule, Submodule};
use cartier::fppoly::{parse_poly, Poly, Ring, RingRef, ZERO_EXP};
use cartier::idealkit::{Ideal, Vector};
use cartier::testmod::TauOptions;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn p(r: &RingRef, s: &str) -> Poly {
    parse_poly(r, s).unwrap()
}

pub fn ring(pr: u32, n: usize) -> RingRef {
    Ring::new(pr, &["x", "y"][..n]).unwrap()
}

/// Sparse polynomial of total degree at most `deg` with up to three terms.
pub fn small_poly(r: &RingRef, rng: &mut ChaCha8Rng, deg: u32) -> Poly {
    let terms = rng.gen_range(1..=3);
    let mut out = Vec::new();
    for _ in 0..terms {
        let mut e = ZERO_EXP;
        let mut left = rng.gen_range(0..=deg);
        for slot in e.iter_mut().take(r.n()) {
            let k = rng.gen_range(0..=left);
            *slot = k;
            left -= k;
        }
        out.push((e, rng.gen_range(1..r.p)));
    }
    Poly::from_terms(r, out)
}

fn torsion_generator(r: &RingRef, rng: &mut ChaCha8Rng) -> Option<Poly> {
    let choices: &[&str] = if r.n() == 1 { &["x", "x+1", "x^2"] } else { &["x", "y", "x+y", "x*y", "x+1"] };
    if rng.gen_bool(0.6) {
        None
    } else {
        Some(p(r, choices[rng.gen_range(0..choices.len())]))
    }
}

/// Random valid structure on a sum of cyclic modules R/(g_i) with g_i zero or a small polynomial.
/// Entries in a torsion row are multiples of g_i^(p-1) on the diagonal and of g_i^p elsewhere.
pub struct Instance {
    pub ring: RingRef,
    pub relations: Vec<Option<Poly>>,
}

impl Instance {
    pub fn draw(rng: &mut ChaCha8Rng, rank: usize) -> Instance {
        let pr = if rng.gen_bool(0.5) { 2 } else { 3 };
        let n = rng.gen_range(1..=2);
        let r = ring(pr, n);
        let relations = (0..rank).map(|_| torsion_generator(&r, rng)).collect();
        Instance { ring: r, relations }
    }

    pub fn module(&self) -> cartier::fpmod::ModRef {
        let ideals: Vec<Ideal> =
            self.relations.iter().map(|g| g.as_ref().map_or_else(|| Ideal::zero(&self.ring), Ideal::principal)).collect();
        PresentedModule::direct_sum_of_cyclics(&self.ring, &ideals).unwrap()
    }

    pub fn random_op(&self, rng: &mut ChaCha8Rng) -> CartierOp {
        let r = &self.ring;
        let k = self.relations.len();
        let mut m = vec![vec![Poly::zero(r); k]; k];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let into_free = self.relations[i].is_none() && self.relations[j].is_some();
                if into_free || (i != j && rng.gen_bool(0.5)) {
                    continue;
                }
                let h = small_poly(r, rng, 3);
                *entry = match &self.relations[i] {
                    None => h,
                    Some(g) => g.pow(if i == j { (r.p - 1) as u64 } else { r.p as u64 }).unwrap().mul(&h),
                };
            }
        }
        CartierOp::new(1, m).unwrap()
    }

    pub fn cartier_module(&self, rng: &mut ChaCha8Rng, generators: usize) -> CartierModule {
        let ops = (0..generators).map(|_| self.random_op(rng)).collect();
        CartierModule::validate(&self.module(), &CartierAlgebraSpec::new(ops).unwrap()).expect("construction is always valid")
    }
}

/// Two random rank-one modules over one ring, each with a single degree-one generator.
pub fn random_pair(seed: u64) -> (CartierModule, CartierModule) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Instance::draw(&mut rng, 1);
    let b = Instance { ring: a.ring.clone(), relations: vec![torsion_generator(&a.ring, &mut rng)] };
    (a.cartier_module(&mut rng, 1), b.cartier_module(&mut rng, 1))
}

pub fn random_module(seed: u64, generators: usize) -> CartierModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = rng.gen_range(1..=2);
    Instance::draw(&mut rng, rank).cartier_module(&mut rng, generators)
}

pub fn tau(m: &CartierModule) -> Submodule {
    m.tau(&TauOptions::default()).unwrap().submodule
}

/// A property either holds, fails, or cannot be evaluated because no test element could be certified.
#[derive(Debug)]
pub enum Issue {
    Skip(String),
    Fail(String),
}

pub type Outcome = std::result::Result<(), Issue>;

fn issue(seed: u64, e: CartierError) -> Issue {
    match e {
        CartierError::SearchExhausted(m) => Issue::Skip(format!("seed {seed}: {m}")),
        other => Issue::Fail(format!("seed {seed}: {other}")),
    }
}

fn tau_of(m: &CartierModule, seed: u64, opts: &TauOptions) -> std::result::Result<Submodule, Issue> {
    m.tau(opts).map(|t| t.submodule).map_err(|e| issue(seed, e))
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Issue::Fail(what()))
    }
}

/// Inclusion of `source` as the summand of `target` starting at `offset`.
pub fn inclusion(source: &CartierModule, target: &CartierModule, offset: usize) -> ModuleMap {
    let r = source.ring();
    let images = (0..source.rank()).map(|i| Vector::unit(r, offset + i)).collect();
    ModuleMap::new(source.module(), target.module(), images).unwrap()
}

pub fn projection(source: &CartierModule, target: &CartierModule, offset: usize) -> ModuleMap {
    let r = source.ring();
    let images = (0..source.rank())
        .map(|i| if i >= offset && i < offset + target.rank() { Vector::unit(r, i - offset) } else { Vector::zero(r) })
        .collect();
    ModuleMap::new(source.module(), target.module(), images).unwrap()
}

pub fn ass_strings(m: &CartierModule) -> Vec<String> {
    let mut v: Vec<String> = m.ass_cartier(&[]).unwrap().iter().map(|q| q.ideal.to_string()).collect();
    v.sort();
    v.dedup();
    v
}


/// phi(tau M) in tau N for inclusions, projections and the inclusion of the underline.
pub fn prop_functoriality(seed: u64) -> Outcome {
    let d = TauOptions::default();
    let (a, b) = random_pair(seed);
    let sum = a.direct_sum(&b).unwrap();
    let (ta, tb, ts) = (tau_of(&a, seed, &d)?, tau_of(&b, seed, &d)?, tau_of(&sum, seed, &d)?);
    let maps = [
        ("inclusion of the first summand", inclusion(&a, &sum, 0), &ta, &ts),
        ("inclusion of the second summand", inclusion(&b, &sum, a.rank()), &tb, &ts),
        ("projection to the first summand", projection(&sum, &a, 0), &ts, &ta),
        ("projection to the second summand", projection(&sum, &b, a.rank()), &ts, &tb),
    ];
    for (name, phi, src, dst) in maps {
        ensure(dst.contains_sub(&phi.image_of(src)).unwrap(), || format!("seed {seed}: {name} does not respect tau"))?;
    }
    let (under, _) = sum.underline().unwrap();
    if !under.is_zero() {
        let (n, incl) = sum.restrict(&under).unwrap();
        CartierModule::check_equivariant(&incl, &n, &sum).map_err(|e| issue(seed, e))?;
        let tn = tau_of(&n, seed, &d)?;
        ensure(ts.contains_sub(&incl.image_of(&tn)).unwrap(), || format!("seed {seed}: underline inclusion does not respect tau"))?;
    }
    Ok(())
}

pub fn prop_additivity(seed: u64) -> Outcome {
    let d = TauOptions::default();
    let (a, b) = random_pair(seed);
    let sum = a.direct_sum(&b).unwrap();
    let ts = tau_of(&sum, seed, &d)?;
    let expected =
        inclusion(&a, &sum, 0).image_of(&tau_of(&a, seed, &d)?).sum(&inclusion(&b, &sum, a.rank()).image_of(&tau_of(&b, seed, &d)?)).unwrap();
    ensure(ts.equals(&expected).unwrap(), || format!("seed {seed}: tau(A+B) = {} but tau(A)+tau(B) = {}", ts.format(), expected.format()))
}

pub fn prop_localization(seed: u64) -> Outcome {
    use cartier::functorops::{commutation_suite, RingMap, Verdict};
    let m = random_module(seed, 1);
    let at = if m.ring().n() == 2 && seed % 2 == 1 { "y" } else { "x" };
    let lines = commutation_suite(&m, &RingMap::Localize { at: at.into() }, &TauOptions::default()).map_err(|e| issue(seed, e))?;
    let line = lines.iter().find(|l| l.statement.starts_with("tau(M_c)")).expect("the suite has a tau line");
    ensure(line.verdict == Verdict::Holds, || format!("seed {seed}: {} vs {}", line.lhs, line.rhs))
}

pub fn prop_subalgebra(seed: u64) -> Outcome {
    let d = TauOptions::default();
    let m = random_module(seed, 2);
    let sub = m.with_algebra(&m.algebra().subalgebra(&[0]).unwrap()).unwrap();
    let (big, small) = (tau_of(&m, seed, &d)?, tau_of(&sub, seed, &d)?);
    ensure(big.contains_sub(&small).unwrap(), || format!("seed {seed}: tau of the subalgebra is not contained in tau"))
}

pub fn prop_e0_independence(seed: u64) -> Outcome {
    let m = random_module(seed, 1);
    let base = tau_of(&m, seed, &TauOptions::default())?;
    for e0 in 1..=2 {
        let other = tau_of(&m, seed, &TauOptions { e0, ..Default::default() })?;
        ensure(other.equals(&base).unwrap(), || format!("seed {seed}: e0={e0} changes tau"))?;
    }
    Ok(())
}

pub fn prop_ass_split(seed: u64) -> Outcome {
    let (a, b) = random_pair(seed);
    let sum = a.direct_sum(&b).unwrap();
    let mut union = ass_strings(&a);
    union.extend(ass_strings(&b));
    union.sort();
    union.dedup();
    let got = ass_strings(&sum);
    ensure(got == union, || format!("seed {seed}: Ass(A+B) = {got:?} but Ass A u Ass B = {union:?}"))
}

pub const PROPERTIES: &[(&str, fn(u64) -> Outcome)] = &[
    ("functoriality", prop_functoriality),
    ("additivity", prop_additivity),
    ("localization", prop_localization),
    ("subalgebra monotonicity", prop_subalgebra),
    ("e0 independence", prop_e0_independence),
    ("Ass of a direct sum", prop_ass_split),
];
