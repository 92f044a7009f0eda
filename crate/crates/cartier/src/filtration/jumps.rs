use std::collections::BTreeMap;

use log::debug;
use serde::Serialize;

use crate::cartiercore::{CartierAlgebraSpec, CartierModule, CartierOp};
use crate::error::{CartierError, Result};
use crate::fpmod::{Submodule, SubmoduleRecord};
use crate::fppoly::Poly;
use crate::idealkit::{Ideal, Vector};
use crate::rational::{ceil_mul, fmt_rat, Rat};
use crate::testmod::{tau_bms, tau_bms_left, TauOptions};

/// How a spectrum may be labelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumPolicy {
    /// Fail unless the spectrum can be certified complete.
    Strict,
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spectrum {
    Exact,
    LowerBound,
}

#[derive(Clone, Debug)]
pub struct Jump {
    pub t: Rat,
    /// One grid step; t - delta is the previous grid point.
    pub delta: Rat,
    pub tau_before: Submodule,
    pub tau_at: Submodule,
    /// tau(t) = tau(t + delta/p); the probe stays on a grid with the same period.
    pub right_continuous: bool,
    /// The drop happens exactly at t and not strictly inside (t - delta, t).
    pub located: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct JumpSpectrum {
    pub top: Rat,
    pub caps: (u32, u32),
    pub denominator: i64,
    pub jumps: Vec<Jump>,
    pub kind: Spectrum,
    pub evaluations: usize,
    pub memo_hits: usize,
}

#[derive(Serialize)]
pub struct JumpRecord {
    pub t: String,
    pub tau_before: Vec<Vec<String>>,
    pub tau_at: Vec<Vec<String>>,
    pub delta: String,
    pub right_continuous: bool,
}

impl JumpSpectrum {
    pub fn jump_values(&self) -> Vec<Rat> {
        self.jumps.iter().map(|j| j.t).collect()
    }

    pub fn records(&self) -> Result<Vec<JumpRecord>> {
        self.jumps
            .iter()
            .map(|j| {
                Ok(JumpRecord {
                    t: fmt_rat(&j.t),
                    tau_before: j.tau_before.to_record()?.generators,
                    tau_at: j.tau_at.to_record()?.generators,
                    delta: fmt_rat(&j.delta),
                    right_continuous: j.right_continuous,
                })
            })
            .collect()
    }
}

/// Stores computed grid values between runs.
pub trait GridMemo {
    fn lookup(&mut self, t: &Rat) -> Option<SubmoduleRecord>;
    fn store(&mut self, t: &Rat, value: &SubmoduleRecord);
}

/// Evaluates tau(M, a^t); uses the Frobenius-root formula when M is the free rank-one module with
/// the plain trace and a is principal.
pub struct TauOracle {
    module: CartierModule,
    ideal: Ideal,
    opts: TauOptions,
    e_max: u32,
    principal: Option<Poly>,
    legacy: bool,
}

fn plain_trace(cm: &CartierModule) -> bool {
    let alg = cm.algebra();
    cm.rank() == 1
        && cm.module().relations().is_empty()
        && !alg.is_twisted()
        && alg.generators().len() == 1
        && alg.generators()[0].e() == 1
        && {
            let u = alg.generators()[0].entry(0, 0);
            !u.is_zero() && u.is_constant()
        }
}

impl TauOracle {
    pub fn new(cm: &CartierModule, ideal: &Ideal, opts: TauOptions, e_max: u32) -> Result<TauOracle> {
        if cm.algebra().is_twisted() {
            return Err(CartierError::InvalidArgument("the base algebra must be untwisted".into()));
        }
        let gens = ideal.gb()?;
        let principal = if plain_trace(cm) && gens.len() == 1 && !gens[0].is_zero() { Some(gens[0].clone()) } else { None };
        Ok(TauOracle { module: cm.clone(), ideal: ideal.clone(), opts, e_max, principal, legacy: false })
    }

    /// Uses tau' (minimal primes only) instead of tau.
    pub fn legacy(mut self) -> TauOracle {
        self.legacy = true;
        self.principal = None;
        self
    }

    pub fn module(&self) -> &CartierModule {
        &self.module
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn is_fast_path(&self) -> bool {
        self.principal.is_some()
    }

    fn from_ideal(&self, i: &Ideal) -> Result<Submodule> {
        let gens = i.gb()?.iter().map(|g| Vector::from_poly_at(g, 0)).collect();
        Submodule::new(self.module.module(), gens).canonical()
    }

    /// tau at t together with an exactness flag for the underlying infinite sum.
    pub fn tau_at(&self, t: &Rat) -> Result<(Submodule, bool)> {
        if let Some(f) = &self.principal {
            return Ok((self.from_ideal(&tau_bms(f, t, self.e_max)?.ideal)?, true));
        }
        let alg = if *t.numer() == 0 { self.module.algebra().clone() } else { self.module.algebra().twisted(&self.ideal, *t)? };
        let twisted = self.module.with_algebra(&alg)?;
        let res = if self.legacy { twisted.tau_prime(&self.opts)? } else { twisted.tau(&self.opts)? };
        Ok((res.submodule, res.exact))
    }

    /// tau at t - epsilon for all small epsilon, available on the fast path only.
    pub fn tau_left(&self, t: &Rat) -> Result<Option<Submodule>> {
        match &self.principal {
            Some(f) => Ok(Some(self.from_ideal(&tau_bms_left(f, t, self.e_max)?.ideal)?)),
            None => Ok(None),
        }
    }
}

/// Grid points k / (p^A (p^B - 1)) in (0, top].
pub fn grid(p: u32, caps: (u32, u32), top: &Rat) -> Result<(i64, Vec<Rat>)> {
    let den = grid_denominator(p, caps)?;
    let n = (top * Rat::from_integer(den)).floor().to_integer();
    if n > 2_000_000 {
        return Err(CartierError::ResourceCap(format!("grid with {n} points")));
    }
    Ok((den, (1..=n).map(|k| Rat::new(k, den)).collect()))
}

fn grid_denominator(p: u32, (a, b): (u32, u32)) -> Result<i64> {
    if b == 0 {
        return Err(CartierError::InvalidArgument("the period cap B must be positive".into()));
    }
    let p = p as i64;
    p.checked_pow(a)
        .and_then(|x| p.checked_pow(b).map(|y| (x, y - 1)))
        .and_then(|(x, y)| x.checked_mul(y))
        .ok_or_else(|| CartierError::ResourceCap("grid denominator overflows".into()))
}

struct Sweep<'a> {
    oracle: &'a TauOracle,
    den: i64,
    values: BTreeMap<i64, Submodule>,
    exact: bool,
    evaluations: usize,
    hits: usize,
    memo: Option<&'a mut dyn GridMemo>,
}

impl Sweep<'_> {
    fn at(&mut self, k: i64) -> Result<Submodule> {
        if let Some(v) = self.values.get(&k) {
            return Ok(v.clone());
        }
        let t = Rat::new(k, self.den);
        let cached = self.memo.as_mut().and_then(|m| m.lookup(&t));
        let v = match cached {
            Some(rec) => {
                self.hits += 1;
                Submodule::from_record(self.oracle.module.module(), &rec)?
            }
            None => {
                self.evaluations += 1;
                let (v, exact) = self.oracle.tau_at(&t)?;
                self.exact &= exact;
                if let Some(m) = self.memo.as_mut() {
                    m.store(&t, &v.to_record()?);
                }
                v
            }
        };
        self.values.insert(k, v.clone());
        Ok(v)
    }

    /// Grid indices in (lo, hi] where tau drops, using that tau is monotone.
    fn scan(&mut self, lo: i64, hi: i64, out: &mut Vec<i64>) -> Result<()> {
        let a = self.at(lo)?;
        let b = self.at(hi)?;
        if !a.contains_sub(&b)? {
            return Err(CartierError::InvariantViolation(format!(
                "test modules are not decreasing between {} and {}",
                fmt_rat(&Rat::new(lo, self.den)),
                fmt_rat(&Rat::new(hi, self.den))
            )));
        }
        if b.contains_sub(&a)? {
            return Ok(());
        }
        if hi == lo + 1 {
            out.push(hi);
            return Ok(());
        }
        let mid = lo + (hi - lo) / 2;
        self.scan(lo, mid, out)?;
        self.scan(mid, hi, out)
    }
}

/// Jumps of t -> tau(M, a^t) on (0, top], detected on the grid with denominator p^A (p^B - 1).
pub fn jumping_numbers<'a>(
    oracle: &'a TauOracle,
    top: &Rat,
    caps: (u32, u32),
    policy: SpectrumPolicy,
    memo: Option<&'a mut dyn GridMemo>,
) -> Result<JumpSpectrum> {
    let p = oracle.module.ring().p;
    let den = grid_denominator(p, caps)?;
    let (_, points) = grid(p, caps, top)?;
    let n = points.len() as i64;
    let mut sweep = Sweep { oracle, den, values: BTreeMap::new(), exact: true, evaluations: 0, hits: 0, memo };
    let mut idx = Vec::new();
    if n > 0 {
        sweep.scan(0, n, &mut idx)?;
    }
    let delta = Rat::new(1, den);
    let mut jumps = Vec::new();
    let mut all_located = oracle.is_fast_path();
    for k in idx {
        let t = Rat::new(k, den);
        let before = sweep.at(k - 1)?;
        let at = sweep.at(k)?;
        let (right, _) = oracle.tau_at(&(t + delta / Rat::from_integer(p as i64)))?;
        let located = match oracle.tau_left(&t)? {
            Some(left) => Some(left.equals(&before)? && !left.equals(&at)?),
            None => None,
        };
        all_located &= located == Some(true);
        debug!("jump at {} (located: {:?})", fmt_rat(&t), located);
        jumps.push(Jump { t, delta, right_continuous: right.equals(&at)?, tau_before: before, tau_at: at, located });
    }
    let kind = if all_located && sweep.exact { Spectrum::Exact } else { Spectrum::LowerBound };
    if policy == SpectrumPolicy::Strict && kind != Spectrum::Exact {
        return Err(CartierError::Unsupported(
            "the spectrum cannot be certified complete; rerun with the lower-bound policy".into(),
        ));
    }
    Ok(JumpSpectrum {
        top: *top,
        caps,
        denominator: den,
        jumps,
        kind,
        evaluations: sweep.evaluations,
        memo_hits: sweep.hits,
    })
}

/// tau(f^{t_before}) / tau(f^t) with the structure kappa f^{ceil(t (p - 1))}.
pub fn gr(oracle: &TauOracle, t: &Rat, t_before: &Rat) -> Result<CartierModule> {
    let cm = oracle.module();
    let gens = oracle.ideal().gb()?;
    if gens.len() != 1 {
        return Err(CartierError::Unsupported("graded pieces need a principal ideal".into()));
    }
    let alg = cm.algebra();
    if alg.generators().len() != 1 || alg.generators()[0].e() != 1 {
        return Err(CartierError::Unsupported("graded pieces need one generator of degree one".into()));
    }
    if t_before >= t {
        return Err(CartierError::InvalidArgument("the lower parameter must be smaller".into()));
    }
    let ring = cm.ring();
    let k = ceil_mul(t, ring.p as i64 - 1).max(0) as u64;
    let f = gens[0].pow(k)?;
    let op = &alg.generators()[0];
    let mat: Vec<Vec<Poly>> = op.matrix().iter().map(|row| row.iter().map(|u| u.mul(&f)).collect()).collect();
    let structured = cm.with_algebra(&CartierAlgebraSpec::single(CartierOp::new(1, mat)?))?;
    let (num, _) = oracle.tau_at(t_before)?;
    let (den, _) = oracle.tau_at(t)?;
    if !num.contains_sub(&den)? {
        return Err(CartierError::InvariantViolation("test modules are not decreasing".into()));
    }
    let (sub, incl) = structured.restrict(&num)?;
    let kernel = incl.preimage(&den)?;
    Ok(sub.quotient(&kernel)?.0)
}
