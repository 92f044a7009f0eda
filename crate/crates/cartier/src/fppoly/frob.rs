use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::poly::{check_ring, Poly};
use super::ring::{exp_add, Exp, ZERO_EXP};

/// Splits f = sum_a g_a^(p^e) x^a with every a in [0, p^e - 1]^n.
pub fn pe_decompose(f: &Poly, e: u32) -> Result<BTreeMap<Exp, Poly>> {
    let ring = f.ring();
    let q = ring.q(e)? as u32;
    let n = ring.n();
    let mut buckets: BTreeMap<Exp, Vec<(Exp, u32)>> = BTreeMap::new();
    for (beta, c) in f.terms() {
        let mut a = ZERO_EXP;
        let mut g = ZERO_EXP;
        for i in 0..n {
            a[i] = beta[i] % q;
            g[i] = beta[i] / q;
        }
        buckets.entry(a).or_default().push((g, *c));
    }
    // Terms of f sharing a residue stay in descending order after division by q.
    Ok(buckets.into_iter().map(|(a, ts)| (a, Poly::from_sorted(ring, ts))).collect())
}

/// Re-expands a decomposition; inverse of [`pe_decompose`].
pub fn pe_recompose(parts: &BTreeMap<Exp, Poly>, e: u32, ring: &super::RingRef) -> Result<Poly> {
    let mut acc = Poly::zero(ring);
    for (a, g) in parts {
        acc = acc.add(&g.frobenius(e)?.mul_term(a, 1));
    }
    Ok(acc)
}

/// Lambda_e(premul * f): the coefficient of x^(q-1,...,q-1) in the decomposition.
pub fn cartier_trace(f: &Poly, e: u32, premul: &Poly) -> Result<Poly> {
    check_ring(f.ring(), premul.ring())?;
    let ring = f.ring();
    let q = ring.q(e)? as u32;
    let n = ring.n();
    let mut out: Vec<(Exp, u32)> = Vec::new();
    for (b1, c1) in premul.terms() {
        for (b2, c2) in f.terms() {
            let s = exp_add(b1, b2);
            if s[..n].iter().all(|&v| v % q == q - 1) {
                let mut g = ZERO_EXP;
                for i in 0..n {
                    g[i] = s[i] / q;
                }
                out.push((g, ring.mul(*c1, *c2)));
            }
        }
    }
    Ok(Poly::from_terms(ring, out))
}

/// Lambda_e(x^a * f) for a monomial shift.
pub fn trace_shifted(f: &Poly, e: u32, shift: &Exp) -> Result<Poly> {
    let ring = f.ring();
    cartier_trace(f, e, &Poly::monomial(ring, *shift, 1))
}

/// Maximum-norm gauge; `None` is the bottom element assigned to 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Gauge(pub Option<u64>);

impl Gauge {
    pub const BOTTOM: Gauge = Gauge(None);

    pub fn is_bottom(&self) -> bool {
        self.0.is_none()
    }
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => write!(f, "-inf"),
            Some(v) => write!(f, "{v}"),
        }
    }
}

pub fn gauge_of(f: &Poly) -> Gauge {
    let n = f.ring().n();
    Gauge(f.terms().iter().map(|(e, _)| e[..n].iter().copied().max().unwrap_or(0) as u64).max())
}
