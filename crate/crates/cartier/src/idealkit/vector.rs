use std::cmp::Ordering;
use std::fmt;

use crate::error::{CartierError, Result};
use crate::fppoly::{check_ring, exp_add, Exp, Poly, RingRef, ZERO_EXP};

/// Element of a free module R^r, terms in descending position-over-term order
/// (position 0 is the largest).
#[derive(Clone)]
pub struct Vector {
    ring: RingRef,
    terms: Vec<(u32, Exp, u32)>,
}

impl PartialEq for Vector {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Vector {}

impl std::hash::Hash for Vector {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

#[inline]
pub fn cmp_pot(ring: &RingRef, a: (u32, &Exp), b: (u32, &Exp)) -> Ordering {
    if a.0 != b.0 {
        b.0.cmp(&a.0)
    } else {
        ring.cmp_exp(a.1, b.1)
    }
}

impl Vector {
    pub fn zero(ring: &RingRef) -> Vector {
        Vector { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn unit(ring: &RingRef, i: usize) -> Vector {
        Vector { ring: ring.clone(), terms: vec![(i as u32, ZERO_EXP, 1)] }
    }

    pub fn from_poly_at(f: &Poly, pos: usize) -> Vector {
        Vector { ring: f.ring().clone(), terms: f.terms().iter().map(|(e, c)| (pos as u32, *e, *c)).collect() }
    }

    pub fn from_polys(ring: &RingRef, comps: &[Poly]) -> Vector {
        let mut terms = Vec::new();
        for (i, f) in comps.iter().enumerate() {
            terms.extend(f.terms().iter().map(|(e, c)| (i as u32, *e, *c)));
        }
        Vector { ring: ring.clone(), terms }
    }

    pub fn try_from_polys(ring: &RingRef, comps: &[Poly]) -> Result<Vector> {
        for f in comps {
            check_ring(f.ring(), ring)?;
        }
        Ok(Vector::from_polys(ring, comps))
    }

    /// Trusted constructor: terms already in descending order with nonzero coefficients.
    pub(crate) fn from_raw(ring: &RingRef, terms: Vec<(u32, Exp, u32)>) -> Vector {
        Vector { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(u32, Exp, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn lead(&self) -> Option<&(u32, Exp, u32)> {
        self.terms.first()
    }

    /// One past the largest position with a nonzero entry.
    pub fn span(&self) -> usize {
        self.terms.iter().map(|t| t.0 as usize + 1).max().unwrap_or(0)
    }

    pub fn component(&self, i: usize) -> Poly {
        let ts: Vec<(Exp, u32)> = self.terms.iter().filter(|t| t.0 as usize == i).map(|t| (t.1, t.2)).collect();
        Poly::from_terms(&self.ring, ts)
    }

    pub fn to_polys(&self, rank: usize) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Exp, u32)>> = vec![Vec::new(); rank.max(self.span())];
        for (pos, e, c) in &self.terms {
            buckets[*pos as usize].push((*e, *c));
        }
        buckets.truncate(rank.max(self.span()));
        buckets.into_iter().map(|ts| Poly::from_terms(&self.ring, ts)).collect()
    }

    pub fn sugar_degree(&self) -> u64 {
        self.terms.iter().map(|t| self.ring.deg(&t.1)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: u32) -> Vector {
        let r = &self.ring;
        let c = c % r.p;
        if c == 0 {
            return Vector::zero(r);
        }
        Vector { ring: r.clone(), terms: self.terms.iter().map(|&(p, e, d)| (p, e, r.mul(c, d))).collect() }
    }

    pub fn neg(&self) -> Vector {
        self.scale(self.ring.p - 1)
    }

    pub fn monic(&self) -> Vector {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, _, c)) => self.scale(self.ring.inv(c)),
        }
    }

    pub fn mul_term(&self, exp: &Exp, c: u32) -> Vector {
        let r = &self.ring;
        let c = c % r.p;
        if c == 0 {
            return Vector::zero(r);
        }
        Vector { ring: r.clone(), terms: self.terms.iter().map(|(p, e, d)| (*p, exp_add(e, exp), r.mul(c, *d))).collect() }
    }

    /// self + c * x^exp * other.
    pub fn add_scaled(&self, other: &Vector, exp: &Exp, c: u32) -> Vector {
        let r = &self.ring;
        let c = c % r.p;
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() {
                out.extend_from_slice(&a[i..]);
                break;
            }
            let be = exp_add(&b[j].1, exp);
            if i == a.len() {
                out.push((b[j].0, be, r.mul(c, b[j].2)));
                j += 1;
                continue;
            }
            match cmp_pot(r, (a[i].0, &a[i].1), (b[j].0, &be)) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, be, r.mul(c, b[j].2)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = r.add(a[i].2, r.mul(c, b[j].2));
                    if s != 0 {
                        out.push((a[i].0, be, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Vector { ring: r.clone(), terms: out }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        self.add_scaled(other, &ZERO_EXP, 1)
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add_scaled(other, &ZERO_EXP, self.ring.p - 1)
    }

    pub fn mul_poly(&self, f: &Poly) -> Vector {
        let mut acc = Vector::zero(&self.ring);
        for (e, c) in f.terms() {
            acc = acc.add_scaled(self, e, *c);
        }
        acc
    }

    /// Moves every position by `by` (used for block embeddings).
    pub fn shift(&self, by: usize) -> Vector {
        Vector { ring: self.ring.clone(), terms: self.terms.iter().map(|&(p, e, c)| (p + by as u32, e, c)).collect() }
    }

    /// Keeps positions in [lo, hi), renumbered from 0.
    pub fn slice(&self, lo: usize, hi: usize) -> Vector {
        Vector {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| (t.0 as usize) >= lo && (t.0 as usize) < hi)
                .map(|&(p, e, c)| (p - lo as u32, e, c))
                .collect(),
        }
    }

    /// Concatenation: positions of `other` are shifted by `offset`.
    pub fn concat(&self, other: &Vector, offset: usize) -> Vector {
        if self.span() > offset {
            panic!("concat offset smaller than left span");
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|&(p, e, c)| (p + offset as u32, e, c)));
        Vector { ring: self.ring.clone(), terms }
    }

    /// Re-sort under another ring with the same variables.
    pub fn reorder(&self, target: &RingRef) -> Vector {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| cmp_pot(target, (b.0, &b.1), (a.0, &a.1)));
        Vector { ring: target.clone(), terms }
    }

    /// Apply a polynomial map to each component (must preserve the zero polynomial).
    pub fn map_components(&self, rank: usize, f: impl Fn(&Poly) -> Result<Poly>) -> Result<Vector> {
        let comps = self.to_polys(rank);
        let mut out = Vec::with_capacity(comps.len());
        for c in &comps {
            out.push(f(c)?);
        }
        let ring = out.first().map(|p| p.ring().clone()).unwrap_or_else(|| self.ring.clone());
        Ok(Vector::from_polys(&ring, &out))
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        if self.span() > rank {
            Err(CartierError::InvalidArgument(format!("vector has entries past rank {rank}")))
        } else {
            Ok(())
        }
    }

    pub fn format(&self, rank: usize) -> String {
        let comps: Vec<String> = self.to_polys(rank).iter().map(|p| p.to_string()).collect();
        format!("[{}]", comps.join(", "))
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format(self.span()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fppoly::{parse_poly, Ring};

    #[test]
    fn round_trip_components() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let comps = vec![parse_poly(&r, "x+y").unwrap(), Poly::zero(&r), parse_poly(&r, "y^2").unwrap()];
        let v = Vector::from_polys(&r, &comps);
        assert_eq!(v.to_polys(3), comps);
        assert_eq!(v.span(), 3);
        assert_eq!(v.lead().unwrap().0, 0);
        let w = v.sub(&v);
        assert!(w.is_zero());
    }
}
