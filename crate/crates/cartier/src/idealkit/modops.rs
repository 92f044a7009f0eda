//! Elimination-based submodule operations in free modules R^r.

use crate::error::Result;
use crate::fppoly::{Poly, RingRef};

use super::groebner::{full_reduce, groebner};
use super::vector::Vector;

/// Gröbner basis of the graph {(g_i, e_i)} in R^(r+k); supports lifting and syzygies.
pub struct LiftData {
    ring: RingRef,
    rank: usize,
    k: usize,
    gb: Vec<Vector>,
}

impl LiftData {
    pub fn new(ring: &RingRef, gens: &[Vector], rank: usize) -> Result<LiftData> {
        let graph: Vec<Vector> = gens.iter().enumerate().map(|(i, g)| g.concat(&Vector::unit(ring, i), rank)).collect();
        let gb = groebner(ring, &graph)?;
        Ok(LiftData { ring: ring.clone(), rank, k: gens.len(), gb })
    }

    /// Coefficients a with v = sum a_i g_i, or None when v is not in the span.
    pub fn lift(&self, v: &Vector) -> Option<Vec<Poly>> {
        let red = full_reduce(v, &self.gb);
        if red.terms().iter().any(|t| (t.0 as usize) < self.rank) {
            return None;
        }
        let w = red.slice(self.rank, self.rank + self.k).neg();
        Some(w.to_polys(self.k))
    }

    /// Generators of the syzygy module of the g_i, as vectors in R^k.
    pub fn syzygies(&self) -> Vec<Vector> {
        self.gb
            .iter()
            .filter(|g| g.lead().is_some_and(|t| t.0 as usize >= self.rank))
            .map(|g| g.slice(self.rank, self.rank + self.k))
            .collect()
    }

    /// Gröbner basis of the span itself (first block of the graph basis).
    pub fn span_basis(&self) -> Vec<Vector> {
        self.gb
            .iter()
            .filter(|g| g.lead().is_some_and(|t| (t.0 as usize) < self.rank))
            .map(|g| g.slice(0, self.rank))
            .collect()
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }
}

pub fn syzygies(ring: &RingRef, gens: &[Vector], rank: usize) -> Result<Vec<Vector>> {
    Ok(LiftData::new(ring, gens, rank)?.syzygies())
}

/// A ∩ B inside R^r.
pub fn intersect(ring: &RingRef, a: &[Vector], b: &[Vector], rank: usize) -> Result<Vec<Vector>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut gens: Vec<Vector> = a.iter().map(|v| v.concat(v, rank)).collect();
    gens.extend(b.iter().cloned());
    let gb = groebner(ring, &gens)?;
    Ok(gb
        .iter()
        .filter(|g| g.lead().is_some_and(|t| t.0 as usize >= rank))
        .map(|g| g.slice(rank, 2 * rank))
        .collect())
}

/// (K : c) = { f in R : f c in K } for a submodule K of R^r and c in R^r.
pub fn colon_elem(ring: &RingRef, k: &[Vector], c: &Vector, rank: usize) -> Result<Vec<Poly>> {
    let mut gens = vec![c.concat(&Vector::unit(ring, 0), rank)];
    gens.extend(k.iter().cloned());
    let gb = groebner(ring, &gens)?;
    Ok(gb
        .iter()
        .filter(|g| g.lead().is_some_and(|t| t.0 as usize >= rank))
        .map(|g| g.component(rank))
        .collect())
}

/// (K : M) = ann((M + K)/K) as an ideal, for submodules K, M of R^r.
pub fn colon_module(ring: &RingRef, k: &[Vector], m: &[Vector], rank: usize) -> Result<Vec<Poly>> {
    let mut acc: Option<Vec<Poly>> = None;
    let kgb = groebner(ring, k)?;
    for g in m {
        if full_reduce(g, &kgb).is_zero() {
            continue;
        }
        let q = colon_elem(ring, &kgb, g, rank)?;
        acc = Some(match acc {
            None => q,
            Some(prev) => {
                let a: Vec<Vector> = prev.iter().map(|f| Vector::from_poly_at(f, 0)).collect();
                let b: Vec<Vector> = q.iter().map(|f| Vector::from_poly_at(f, 0)).collect();
                intersect(ring, &a, &b, 1)?.iter().map(|v| v.component(0)).collect()
            }
        });
    }
    Ok(acc.unwrap_or_else(|| vec![Poly::one(ring)]))
}

/// (K :_{R^r} f) = { v in R^r : f v in K }.
pub fn colon_by_poly(ring: &RingRef, k: &[Vector], f: &Poly, rank: usize) -> Result<Vec<Vector>> {
    let mut gens: Vec<Vector> = (0..rank).map(|i| Vector::from_poly_at(f, i).concat(&Vector::unit(ring, i), rank)).collect();
    gens.extend(k.iter().cloned());
    let gb = groebner(ring, &gens)?;
    Ok(gb
        .iter()
        .filter(|g| g.lead().is_some_and(|t| t.0 as usize >= rank))
        .map(|g| g.slice(rank, 2 * rank))
        .collect())
}
