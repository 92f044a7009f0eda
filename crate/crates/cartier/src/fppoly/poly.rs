use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{CartierError, Result};

use super::ring::{exp_add, exp_divides, exp_scale, exp_sub, Exp, RingRef, MAX_VARS, ZERO_EXP};

/// Polynomial over F_p with terms kept in descending monomial order.
#[derive(Clone)]
pub struct Poly {
    ring: RingRef,
    terms: Vec<(Exp, u32)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}
impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn check_ring(a: &RingRef, b: &RingRef) -> Result<()> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(CartierError::RingMismatch(format!("F_{}{:?} vs F_{}{:?}", a.p, a.vars, b.p, b.vars)))
    }
}

impl Poly {
    pub fn zero(ring: &RingRef) -> Poly {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &RingRef) -> Poly {
        Poly::constant(ring, 1)
    }

    pub fn constant(ring: &RingRef, c: i64) -> Poly {
        Poly::monomial(ring, ZERO_EXP, ring.reduce_int(c))
    }

    pub fn monomial(ring: &RingRef, exp: Exp, c: u32) -> Poly {
        let c = c % ring.p;
        if c == 0 {
            Poly::zero(ring)
        } else {
            Poly { ring: ring.clone(), terms: vec![(exp, c)] }
        }
    }

    pub fn var(ring: &RingRef, i: usize) -> Poly {
        let mut e = ZERO_EXP;
        e[i] = 1;
        Poly::monomial(ring, e, 1)
    }

    /// Build from arbitrary (possibly repeated, unreduced) terms.
    pub fn from_terms(ring: &RingRef, terms: impl IntoIterator<Item = (Exp, u32)>) -> Poly {
        let mut v: Vec<(Exp, u32)> = terms.into_iter().map(|(e, c)| (e, c % ring.p)).filter(|t| t.1 != 0).collect();
        v.sort_by(|a, b| ring.cmp_exp(&b.0, &a.0));
        let mut out: Vec<(Exp, u32)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            if let Some(last) = out.last_mut() {
                if last.0 == e {
                    last.1 = ring.add(last.1, c);
                    continue;
                }
            }
            out.push((e, c));
        }
        out.retain(|t| t.1 != 0);
        Poly { ring: ring.clone(), terms: out }
    }

    /// Trusted constructor: terms already sorted descending, distinct, nonzero.
    pub(crate) fn from_sorted(ring: &RingRef, terms: Vec<(Exp, u32)>) -> Poly {
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Exp, u32)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Exp, u32)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1 == 1 && self.is_constant()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn lead(&self) -> Option<&(Exp, u32)> {
        self.terms.first()
    }

    pub fn lead_exp(&self) -> Option<Exp> {
        self.terms.first().map(|t| t.0)
    }

    pub fn lead_coeff(&self) -> u32 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(e, _)| self.ring.deg(e)).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e[i]).max()
    }

    pub fn coeff_of(&self, exp: &Exp) -> u32 {
        self.terms.iter().find(|(e, _)| e == exp).map(|t| t.1).unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        let r = &self.ring;
        Poly { ring: r.clone(), terms: self.terms.iter().map(|&(e, c)| (e, r.neg(c))).collect() }
    }

    pub fn scale(&self, c: u32) -> Poly {
        let c = c % self.ring.p;
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        let r = &self.ring;
        Poly { ring: r.clone(), terms: self.terms.iter().map(|&(e, d)| (e, r.mul(c, d))).collect() }
    }

    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, c)) => self.scale(self.ring.inv(c)),
        }
    }

    /// self * c * x^exp; preserves term order.
    pub fn mul_term(&self, exp: &Exp, c: u32) -> Poly {
        let r = &self.ring;
        let c = c % r.p;
        if c == 0 {
            return Poly::zero(r);
        }
        Poly { ring: r.clone(), terms: self.terms.iter().map(|(e, d)| (exp_add(e, exp), r.mul(c, *d))).collect() }
    }

    /// self + c * x^exp * other, merged in order.
    pub fn add_scaled(&self, other: &Poly, exp: &Exp, c: u32) -> Poly {
        let r = &self.ring;
        let c = c % r.p;
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() {
                out.extend_from_slice(&a[i..]);
                break;
            }
            let be = exp_add(&b[j].0, exp);
            if i == a.len() {
                out.push((be, r.mul(c, b[j].1)));
                j += 1;
                continue;
            }
            match r.cmp_exp(&a[i].0, &be) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((be, r.mul(c, b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = r.add(a[i].1, r.mul(c, b[j].1));
                    if s != 0 {
                        out.push((be, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { ring: r.clone(), terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.add_scaled(other, &ZERO_EXP, 1)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add_scaled(other, &ZERO_EXP, self.ring.p - 1)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (e, c) = small.terms[0];
            return big.mul_term(&e, c);
        }
        let r = &self.ring;
        let mut all = Vec::with_capacity(small.len() * big.len());
        for (e1, c1) in &small.terms {
            for (e2, c2) in &big.terms {
                all.push((exp_add(e1, e2), r.mul(*c1, *c2)));
            }
        }
        Poly::from_terms(r, all)
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.add(other))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.sub(other))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.mul(other))
    }

    /// f^(p^e): coefficients are fixed by Frobenius on F_p, exponents scale.
    pub fn frobenius(&self, e: u32) -> Result<Poly> {
        let q = self.ring.q(e)? as u32;
        if let Some(d) = self.total_degree() {
            self.ring.check_degree(d * q as u64)?;
        }
        Ok(Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(x, c)| (exp_scale(x, q), *c)).collect() })
    }

    /// f^k using the base-p expansion of k and Frobenius for each digit.
    pub fn pow(&self, k: u64) -> Result<Poly> {
        if k == 0 {
            return Ok(Poly::one(&self.ring));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        if let Some(d) = self.total_degree() {
            self.ring.check_degree(d.saturating_mul(k))?;
        }
        if self.is_monomial() {
            let (e, c) = self.terms[0];
            let exp = exp_scale(&e, k as u32);
            let k_red = (k % (self.ring.p as u64 - 1)) as u32;
            return Ok(Poly::monomial(&self.ring, exp, self.ring.pow_coeff(c, k_red)));
        }
        let p = self.ring.p as u64;
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        loop {
            let digit = k % p;
            if digit > 0 {
                let mut pw = Poly::one(&self.ring);
                for _ in 0..digit {
                    pw = pw.mul(&base);
                }
                acc = acc.mul(&pw);
            }
            k /= p;
            if k == 0 {
                break;
            }
            base = Poly { ring: base.ring.clone(), terms: base.terms.iter().map(|(x, c)| (exp_scale(x, p as u32), *c)).collect() };
        }
        Ok(acc)
    }

    /// Multivariate division by a single polynomial; Some(q) iff self = q * d.
    pub fn divide_exact(&self, d: &Poly) -> Result<Option<Poly>> {
        check_ring(&self.ring, &d.ring)?;
        if d.is_zero() {
            return Err(CartierError::InvalidArgument("division by zero".into()));
        }
        let r = &self.ring;
        let (le, lc) = d.terms[0];
        let inv = r.inv(lc);
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(&(e, c)) = rem.terms.first() {
            if !exp_divides(&le, &e) {
                return Ok(None);
            }
            let m = exp_sub(&e, &le);
            let qc = r.mul(c, inv);
            quot.push((m, qc));
            rem = rem.add_scaled(d, &m, r.neg(qc));
        }
        Ok(Some(Poly::from_terms(r, quot)))
    }

    /// Substitute x_i -> images[i] (all in `target`).
    pub fn substitute(&self, images: &[Poly], target: &RingRef) -> Result<Poly> {
        if images.len() != self.ring.n() {
            return Err(CartierError::InvalidArgument("substitution needs one image per variable".into()));
        }
        for im in images {
            check_ring(im.ring(), target)?;
        }
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|im| vec![Poly::one(target), im.clone()]).collect();
        let mut acc = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target, *c as i64);
            for i in 0..self.ring.n() {
                let k = e[i] as usize;
                while cache[i].len() <= k {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][k]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Move into `target` with variable i sent to variable var_map[i].
    pub fn embed(&self, target: &RingRef, var_map: &[usize]) -> Result<Poly> {
        if target.p != self.ring.p || var_map.len() != self.ring.n() {
            return Err(CartierError::RingMismatch("incompatible embedding".into()));
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut t = ZERO_EXP;
            for (i, &j) in var_map.iter().enumerate() {
                t[j] += e[i];
            }
            (t, *c)
        });
        Ok(Poly::from_terms(target, terms))
    }

    /// Re-sort into another ring with the same variables (e.g. a different order).
    pub fn reorder(&self, target: &RingRef) -> Poly {
        Poly::from_terms(target, self.terms.iter().cloned())
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Exp {
        let mut g = [u32::MAX; MAX_VARS];
        if self.is_zero() {
            return ZERO_EXP;
        }
        for (e, _) in &self.terms {
            for i in 0..MAX_VARS {
                g[i] = g[i].min(e[i]);
            }
        }
        g
    }

    pub fn variables_used(&self) -> Vec<usize> {
        (0..self.ring.n()).filter(|&i| self.terms.iter().any(|(e, _)| e[i] > 0)).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_poly(self))
    }
}
