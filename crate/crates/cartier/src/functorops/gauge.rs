use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CartierError, Result};
use crate::fppoly::{cartier_trace, gauge_of, Poly, RingRef, ZERO_EXP};
use crate::rational::{fmt_rat, Rat};

/// delta(Lambda_e f) <= floor(delta(f) / p^e).
pub fn contraction_holds(f: &Poly, e: u32) -> Result<bool> {
    let q = f.ring().q(e)?;
    let image = cartier_trace(f, e, &Poly::one(f.ring()))?;
    Ok(match (gauge_of(&image).0, gauge_of(f).0) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a <= b / q,
    })
}

/// Random polynomial with `terms` monomials of exponents below `bound`.
pub fn random_poly(ring: &RingRef, rng: &mut ChaCha8Rng, terms: usize, bound: u32) -> Poly {
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut e = ZERO_EXP;
        for slot in e.iter_mut().take(ring.n()) {
            *slot = rng.gen_range(0..bound);
        }
        out.push((e, rng.gen_range(1..ring.p)));
    }
    Poly::from_terms(ring, out)
}

/// Number of samples violating the contraction inequality.
pub fn contraction_failures(ring: &RingRef, e: u32, samples: usize, seed: u64) -> Result<usize> {
    let q = ring.q(e)? as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..samples {
        let terms = rng.gen_range(1..6);
        let f = random_poly(ring, &mut rng, terms, 4 * q);
        if !contraction_holds(&f, e)? {
            bad += 1;
        }
    }
    Ok(bad)
}

/// Premultiplier x y^{e p^e} of the degree-e member of the growth family on a ring with x, y.
pub fn growth_family_member(ring: &RingRef, e: u32) -> Result<Poly> {
    if ring.n() < 2 {
        return Err(CartierError::InvalidArgument("the growth family needs two variables".into()));
    }
    let q = ring.q(e)?;
    Ok(Poly::var(ring, 0).mul(&Poly::var(ring, 1).pow(e as u64 * q)?))
}

/// (kappa^e x y^{e p^e})(x^{p^e - 2} y^{p^e - 1}) and the expected value y^e.
pub fn growth_identity(ring: &RingRef, e: u32) -> Result<(Poly, Poly)> {
    let q = ring.q(e)?;
    let u = growth_family_member(ring, e)?;
    let m = Poly::var(ring, 0).pow(q - 2)?.mul(&Poly::var(ring, 1).pow(q - 1)?);
    let lhs = cartier_trace(&m, e, &u)?;
    Ok((lhs, Poly::var(ring, 1).pow(e as u64)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct GaugeBound {
    pub e: u32,
    /// Smallest K with delta(kappa m) <= delta(m)/p^e + K/(p^e - 1) on the sampled seeds.
    pub k: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaugeGrowthReport {
    pub bounds: Vec<GaugeBound>,
    pub flagged: bool,
}

fn required_k(u: &Poly, e: u32) -> Result<Rat> {
    let ring = u.ring();
    let q = ring.q(e)? as i64;
    let mut best: Option<Rat> = None;
    let n = ring.n();
    let side = 2 * q as u32;
    let total = (side as usize).pow(n as u32);
    for idx in 0..total {
        let mut exp = ZERO_EXP;
        let mut rest = idx;
        for slot in exp.iter_mut().take(n) {
            *slot = (rest % side as usize) as u32;
            rest /= side as usize;
        }
        let m = Poly::monomial(ring, exp, 1);
        let image = cartier_trace(&m, e, u)?;
        let Some(dk) = gauge_of(&image).0 else { continue };
        let dm = gauge_of(&m).0.unwrap_or(0);
        let need = Rat::from_integer(q - 1) * (Rat::from_integer(dk as i64) - Rat::new(dm as i64, q));
        best = Some(best.map_or(need, |b: Rat| b.max(need)));
    }
    Ok(best.unwrap_or_else(|| Rat::from_integer(0)))
}

/// Flags a family kappa_e = Lambda_e(u_e -) whose gauge constants grow without bound.
pub fn gauge_growth(family: &[(u32, Poly)]) -> Result<GaugeGrowthReport> {
    let mut bounds = Vec::new();
    let mut values = Vec::new();
    for (e, u) in family {
        let k = required_k(u, *e)?;
        bounds.push(GaugeBound { e: *e, k: fmt_rat(&k) });
        values.push(k);
    }
    let increasing = values.windows(2).all(|w| w[0] < w[1]);
    let flagged = values.len() >= 2 && increasing && values.last().is_some_and(|k| *k > Rat::from_integer(0));
    Ok(GaugeGrowthReport { bounds, flagged })
}
