use std::fmt;
use std::sync::OnceLock;

use crate::error::{CartierError, Result};
use crate::fppoly::{check_ring, exp_divides, parse_poly, pe_decompose, MonomialOrder, Poly, RingRef};

use super::groebner::{full_reduce, groebner};
use super::modops::{colon_elem, intersect};
use super::vector::Vector;

/// Ideal of R with a lazily computed reduced Gröbner basis.
pub struct Ideal {
    ring: RingRef,
    gens: Vec<Poly>,
    gb: OnceLock<Result<Vec<Poly>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(v) = self.gb.get() {
            let _ = gb.set(v.clone());
        }
        Ideal { ring: self.ring.clone(), gens: self.gens.clone(), gb }
    }
}

fn as_vectors(ps: &[Poly]) -> Vec<Vector> {
    ps.iter().map(|f| Vector::from_poly_at(f, 0)).collect()
}

fn as_polys(vs: &[Vector]) -> Vec<Poly> {
    vs.iter().map(|v| v.component(0)).collect()
}

impl Ideal {
    pub fn new(ring: &RingRef, gens: Vec<Poly>) -> Ideal {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring: ring.clone(), gens, gb: OnceLock::new() }
    }

    pub fn try_new(ring: &RingRef, gens: Vec<Poly>) -> Result<Ideal> {
        for g in &gens {
            check_ring(g.ring(), ring)?;
        }
        Ok(Ideal::new(ring, gens))
    }

    pub fn parse(ring: &RingRef, gens: &[&str]) -> Result<Ideal> {
        let ps = gens.iter().map(|s| parse_poly(ring, s)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ring, ps))
    }

    pub fn zero(ring: &RingRef) -> Ideal {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: &RingRef) -> Ideal {
        Ideal::new(ring, vec![Poly::one(ring)])
    }

    pub fn principal(f: &Poly) -> Ideal {
        Ideal::new(f.ring(), vec![f.clone()])
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn gb(&self) -> Result<&[Poly]> {
        let r = self.gb.get_or_init(|| groebner(&self.ring, &as_vectors(&self.gens)).map(|v| as_polys(&v)));
        match r {
            Ok(v) => Ok(v.as_slice()),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn reduce(&self, f: &Poly) -> Result<Poly> {
        check_ring(f.ring(), &self.ring)?;
        let gb = as_vectors(self.gb()?);
        Ok(full_reduce(&Vector::from_poly_at(f, 0), &gb).component(0))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        check_ring(&self.ring, &other.ring)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.gb()? == other.gb()?)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.gb()?.iter().any(|g| g.is_constant()))
    }

    pub fn is_monomial(&self) -> Result<bool> {
        Ok(self.gb()?.iter().all(|g| g.is_monomial()))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        check_ring(&self.ring, &other.ring)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ok(Ideal::new(&self.ring, g))
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        check_ring(&self.ring, &other.ring)?;
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a.mul(b));
            }
        }
        Ok(Ideal::new(&self.ring, g))
    }

    pub fn mul_poly(&self, f: &Poly) -> Ideal {
        Ideal::new(&self.ring, self.gens.iter().map(|g| g.mul(f)).collect())
    }

    pub fn power(&self, k: u32) -> Result<Ideal> {
        let mut acc = Ideal::unit(&self.ring);
        for _ in 0..k {
            acc = acc.product(self)?;
            acc = Ideal::new(&self.ring, acc.gb()?.to_vec());
        }
        Ok(acc)
    }

    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        check_ring(&self.ring, &other.ring)?;
        let v = intersect(&self.ring, &as_vectors(self.gb()?), &as_vectors(other.gb()?), 1)?;
        Ok(Ideal::new(&self.ring, as_polys(&v)))
    }

    /// I : (f)
    pub fn quotient_elem(&self, f: &Poly) -> Result<Ideal> {
        check_ring(&self.ring, f.ring())?;
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let q = colon_elem(&self.ring, &as_vectors(self.gb()?), &Vector::from_poly_at(f, 0), 1)?;
        Ok(Ideal::new(&self.ring, q))
    }

    /// I : J
    pub fn quotient(&self, other: &Ideal) -> Result<Ideal> {
        check_ring(&self.ring, &other.ring)?;
        let mut acc = Ideal::unit(&self.ring);
        for g in other.gb()? {
            acc = acc.intersect(&self.quotient_elem(g)?)?;
        }
        Ok(acc)
    }

    /// I : f^infinity, by iterating the quotient chain until it is constant.
    pub fn saturate_elem(&self, f: &Poly) -> Result<Ideal> {
        let mut cur = self.clone();
        for _ in 0..self.ring.caps.max_chain * 4 {
            let next = cur.quotient_elem(f)?;
            if next.equals(&cur)? {
                return Ok(cur);
            }
            cur = next;
        }
        Err(CartierError::NoStabilization(self.ring.caps.max_chain * 4))
    }

    /// I : J^infinity
    pub fn saturate(&self, other: &Ideal) -> Result<Ideal> {
        let mut cur = self.clone();
        for _ in 0..self.ring.caps.max_chain * 4 {
            let next = cur.quotient(other)?;
            if next.equals(&cur)? {
                return Ok(cur);
            }
            cur = next;
        }
        Err(CartierError::NoStabilization(self.ring.caps.max_chain * 4))
    }

    /// I^[p^e]
    pub fn bracket_power(&self, e: u32) -> Result<Ideal> {
        let g = self.gens.iter().map(|f| f.frobenius(e)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(&self.ring, g))
    }

    /// Smallest J with I contained in J^[p^e].
    pub fn frobenius_root(&self, e: u32) -> Result<Ideal> {
        let mut out = Vec::new();
        for g in &self.gens {
            out.extend(pe_decompose(g, e)?.into_values());
        }
        Ok(Ideal::new(&self.ring, out))
    }

    /// Intersection with F_p[remaining variables]; `elim` lists the variables to remove.
    pub fn eliminate(&self, elim: &[usize]) -> Result<Ideal> {
        let n = self.ring.n();
        let keep: Vec<usize> = (0..n).filter(|i| !elim.contains(i)).collect();
        let mut order_vars: Vec<usize> = elim.to_vec();
        order_vars.extend(keep.iter().copied());
        let names: Vec<&str> = order_vars.iter().map(|&i| self.ring.vars[i].as_str()).collect();
        let er = crate::fppoly::Ring::with_order(self.ring.p, names.iter().map(|s| s.to_string()).collect(), MonomialOrder::Elim(elim.len()), self.ring.caps.clone())?;
        let mut to_er = vec![0usize; n];
        for (newpos, &old) in order_vars.iter().enumerate() {
            to_er[old] = newpos;
        }
        let moved = self.gens.iter().map(|g| g.embed(&er, &to_er)).collect::<Result<Vec<_>>>()?;
        let gb = groebner(&er, &as_vectors(&moved))?;
        let back: Vec<usize> = order_vars.clone();
        let mut out = Vec::new();
        for g in as_polys(&gb) {
            if g.terms().iter().all(|(e, _)| e[..elim.len()].iter().all(|&x| x == 0)) {
                out.push(g.embed(&self.ring, &back)?);
            }
        }
        Ok(Ideal::new(&self.ring, out))
    }

    /// Krull dimension of R/I via maximal independent sets of the leading ideal.
    pub fn dimension(&self) -> Result<Option<usize>> {
        if self.is_unit()? {
            return Ok(None);
        }
        let n = self.ring.n();
        let leads: Vec<_> = self.gb()?.iter().map(|g| g.lead_exp().unwrap()).collect();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let independent = leads.iter().all(|m| (0..n).any(|i| m[i] > 0 && mask & (1 << i) == 0));
            if independent {
                best = size;
            }
        }
        Ok(Some(best))
    }

    pub fn codim(&self) -> Result<Option<usize>> {
        Ok(self.dimension()?.map(|d| self.ring.n() - d))
    }

    /// Canonical form: reduced Gröbner basis as text.
    pub fn canonical_strings(&self) -> Result<Vec<String>> {
        Ok(self.gb()?.iter().map(|g| g.to_string()).collect())
    }

    pub fn leading_monomial_ideal(&self) -> Result<Ideal> {
        let g = self.gb()?.iter().map(|f| Poly::monomial(&self.ring, f.lead_exp().unwrap(), 1)).collect();
        Ok(Ideal::new(&self.ring, g))
    }

    pub fn monomial_contains(&self, e: &crate::fppoly::Exp) -> Result<bool> {
        Ok(self.gb()?.iter().any(|g| g.is_monomial() && exp_divides(&g.lead_exp().unwrap(), e)))
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = match self.gb() {
            Ok(g) => g.iter().map(|p| p.to_string()).collect(),
            Err(_) => self.gens.iter().map(|p| p.to_string()).collect(),
        };
        if gens.is_empty() {
            write!(f, "(0)")
        } else {
            write!(f, "({})", gens.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fppoly::Ring;

    #[test]
    fn normal_forms() {
        let r = Ring::new(2, &["x", "y"]).unwrap();
        let i = Ideal::parse(&r, &["x^2", "x*y"]).unwrap();
        assert!(i.contains(&parse_poly(&r, "x^3").unwrap()).unwrap());
        assert!(!i.contains(&parse_poly(&r, "x").unwrap()).unwrap());
        let u = Ideal::unit(&r);
        assert!(u.contains(&parse_poly(&r, "x*y+1").unwrap()).unwrap());
    }

    #[test]
    fn quotient_and_saturation() {
        let r = Ring::new(2, &["x", "y"]).unwrap();
        let i = Ideal::parse(&r, &["x"]).unwrap();
        let j = Ideal::parse(&r, &["x^2"]).unwrap();
        assert!(i.quotient(&j).unwrap().is_unit().unwrap());
        let k = Ideal::parse(&r, &["x^2*y"]).unwrap();
        let s = k.saturate(&Ideal::parse(&r, &["y"]).unwrap()).unwrap();
        assert!(s.equals(&Ideal::parse(&r, &["x^2"]).unwrap()).unwrap());
    }

    #[test]
    fn bracket_power_and_root() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let m = Ideal::parse(&r, &["x", "y"]).unwrap();
        assert!(m.bracket_power(1).unwrap().equals(&Ideal::parse(&r, &["x^3", "y^3"]).unwrap()).unwrap());
        let r2 = Ring::new(2, &["x"]).unwrap();
        let x = Ideal::parse(&r2, &["x"]).unwrap();
        assert!(Ideal::parse(&r2, &["x^3"]).unwrap().frobenius_root(1).unwrap().equals(&x).unwrap());
        assert!(Ideal::parse(&r2, &["x^2"]).unwrap().frobenius_root(1).unwrap().equals(&x).unwrap());
    }

    #[test]
    fn intersection_and_elimination() {
        let r = Ring::new(5, &["x", "y", "z"]).unwrap();
        let a = Ideal::parse(&r, &["x"]).unwrap();
        let b = Ideal::parse(&r, &["y"]).unwrap();
        assert!(a.intersect(&b).unwrap().equals(&Ideal::parse(&r, &["x*y"]).unwrap()).unwrap());
        let i = Ideal::parse(&r, &["x - y^2", "z - x"]).unwrap();
        let e = i.eliminate(&[0]).unwrap();
        assert!(e.equals(&Ideal::parse(&r, &["z - y^2"]).unwrap()).unwrap());
        assert_eq!(Ideal::parse(&r, &["x", "y*z"]).unwrap().codim().unwrap(), Some(2));
    }
}
