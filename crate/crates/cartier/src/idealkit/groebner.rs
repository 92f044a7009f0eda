use std::cmp::Ordering;

use crate::error::{CartierError, Result};
use crate::fppoly::{exp_divides, exp_lcm, exp_sub, Exp, RingRef};

use super::vector::{cmp_pot, Vector};

struct Elem {
    v: Vector,
    pos: u32,
    lt: Exp,
    sugar: u64,
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    pos: u32,
    lcm: Exp,
    sugar: u64,
}

fn coprime(a: &Exp, b: &Exp) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| *x == 0 || *y == 0)
}

/// Reduced Gröbner basis of the submodule generated by `gens` in position-over-term order.
/// Output is monic and sorted descending by leading term.
pub fn groebner(ring: &RingRef, gens: &[Vector]) -> Result<Vec<Vector>> {
    let max_pairs = ring.caps.max_pairs;
    let rank1 = gens.iter().all(|g| g.terms().iter().all(|t| t.0 == 0));
    let mut all: Vec<Elem> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut input: Vec<Vector> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    input.sort_by(|a, b| {
        let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
        cmp_pot(ring, (la.0, &la.1), (lb.0, &lb.1))
    });
    input.dedup();
    for g in input {
        let sugar = g.sugar_degree();
        let h = reduce_by(&g, &all, &active);
        if !h.is_zero() {
            insert(ring, &mut all, &mut active, &mut pairs, h.monic(), sugar, rank1);
        }
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        processed += 1;
        if processed > max_pairs {
            return Err(CartierError::ResourceCap(format!("Gröbner pair queue exceeded {max_pairs} pairs")));
        }
        let k = select_pair(ring, &pairs);
        let pr = pairs.swap_remove(k);
        let (gi, gj) = (&all[pr.i], &all[pr.j]);
        let mi = exp_sub(&pr.lcm, &gi.lt);
        let mj = exp_sub(&pr.lcm, &gj.lt);
        let s = gi.v.mul_term(&mi, 1).add_scaled(&gj.v, &mj, ring.p - 1);
        let h = reduce_by(&s, &all, &active);
        if !h.is_zero() {
            insert(ring, &mut all, &mut active, &mut pairs, h.monic(), pr.sugar, rank1);
        }
    }

    // interreduce the minimal basis
    let basis: Vec<Vector> = active.iter().map(|&i| all[i].v.clone()).collect();
    let mut out = Vec::with_capacity(basis.len());
    for (k, g) in basis.iter().enumerate() {
        let others: Vec<&Vector> = basis.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, v)| v).collect();
        let (lead, tail) = split_lead(g);
        let red = full_reduce_refs(&tail, &others);
        out.push(lead.add(&red).monic());
    }
    out.sort_by(|a, b| {
        let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
        cmp_pot(ring, (lb.0, &lb.1), (la.0, &la.1))
    });
    Ok(out)
}

fn split_lead(g: &Vector) -> (Vector, Vector) {
    let ring = g.ring();
    let (p, e, c) = g.terms()[0];
    let lead = Vector::unit(ring, p as usize).mul_term(&e, c);
    let tail = g.sub(&lead);
    (lead, tail)
}

fn select_pair(ring: &RingRef, pairs: &[Pair]) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let (a, b) = (&pairs[k], &pairs[best]);
        let ord = a
            .sugar
            .cmp(&b.sugar)
            .then_with(|| cmp_pot(ring, (a.pos, &a.lcm), (b.pos, &b.lcm)))
            .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)));
        if ord == Ordering::Less {
            best = k;
        }
    }
    best
}

fn insert(ring: &RingRef, all: &mut Vec<Elem>, active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: Vector, sugar: u64, rank1: bool) {
    let &(pos, lt, _) = h.lead().unwrap();
    let sugar = sugar.max(h.sugar_degree());
    let hi = all.len();
    all.push(Elem { v: h, pos, lt, sugar });

    // Gebauer-Möller update
    let mut c: Vec<Pair> = active
        .iter()
        .filter(|&&g| all[g].pos == pos)
        .map(|&g| {
            let lcm = exp_lcm(&all[g].lt, &lt);
            let s1 = all[g].sugar + ring.deg(&lcm) - ring.deg(&all[g].lt);
            let s2 = sugar + ring.deg(&lcm) - ring.deg(&lt);
            Pair { i: g, j: hi, pos, lcm, sugar: s1.max(s2) }
        })
        .collect();
    let mut d: Vec<Pair> = Vec::new();
    while let Some(p1) = c.pop() {
        let cop = rank1 && coprime(&all[p1.i].lt, &lt);
        let dominated = c.iter().chain(d.iter()).any(|p2| exp_divides(&p2.lcm, &p1.lcm));
        if cop || !dominated {
            d.push(p1);
        }
    }
    let e: Vec<Pair> = d.into_iter().filter(|p| !(rank1 && coprime(&all[p.i].lt, &lt))).collect();
    pairs.retain(|p| {
        if p.pos != pos || !exp_divides(&lt, &p.lcm) {
            return true;
        }
        let l1 = exp_lcm(&all[p.i].lt, &lt);
        let l2 = exp_lcm(&all[p.j].lt, &lt);
        l1 == p.lcm || l2 == p.lcm
    });
    pairs.extend(e);
    active.retain(|&g| !(all[g].pos == pos && exp_divides(&lt, &all[g].lt)));
    active.push(hi);
}

fn find_divisor<'a>(pos: u32, e: &Exp, basis: impl Iterator<Item = &'a Vector>) -> Option<&'a Vector> {
    let mut best: Option<&Vector> = None;
    for g in basis {
        let &(gp, ge, _) = g.lead().unwrap();
        if gp == pos && exp_divides(&ge, e) && best.is_none_or(|b| g.len() < b.len()) {
            best = Some(g);
        }
    }
    best
}

fn reduce_by(v: &Vector, all: &[Elem], active: &[usize]) -> Vector {
    let refs: Vec<&Vector> = active.iter().map(|&i| &all[i].v).collect();
    full_reduce_refs(v, &refs)
}

/// Full reduction of `v` by monic vectors (every term is reduced, not just the lead).
pub fn full_reduce_refs(v: &Vector, basis: &[&Vector]) -> Vector {
    let ring = v.ring().clone();
    let mut rem: Vec<(u32, Exp, u32)> = Vec::new();
    let mut cur = v.clone();
    while let Some(&(pos, e, c)) = cur.lead() {
        match find_divisor(pos, &e, basis.iter().copied()) {
            Some(g) => {
                let ge = g.lead().unwrap().1;
                let m = exp_sub(&e, &ge);
                let gl = g.lead().unwrap().2;
                let f = ring.mul(c, ring.inv(gl));
                cur = cur.add_scaled(g, &m, ring.neg(f));
            }
            None => {
                rem.push((pos, e, c));
                cur = cur.slice_from(1);
            }
        }
    }
    Vector::from_raw(&ring, rem)
}

pub fn full_reduce(v: &Vector, basis: &[Vector]) -> Vector {
    let refs: Vec<&Vector> = basis.iter().collect();
    full_reduce_refs(v, &refs)
}

impl Vector {
    fn slice_from(&self, k: usize) -> Vector {
        Vector::from_raw(self.ring(), self.terms()[k..].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fppoly::{parse_poly, Poly, Ring};

    fn polys(r: &RingRef, ss: &[&str]) -> Vec<Vector> {
        ss.iter().map(|s| Vector::from_poly_at(&parse_poly(r, s).unwrap(), 0)).collect()
    }

    #[test]
    fn already_reduced_basis() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let gb = groebner(&r, &polys(&r, &["x^2+y", "y^2"])).unwrap();
        let got: Vec<String> = gb.iter().map(|v| v.component(0).to_string()).collect();
        assert_eq!(got, vec!["x^2 + y", "y^2"]);
    }

    #[test]
    fn unit_ideal() {
        let r = Ring::new(5, &["x", "y"]).unwrap();
        let gb = groebner(&r, &polys(&r, &["x*y - 1", "x"])).unwrap();
        assert_eq!(gb.len(), 1);
        assert!(gb[0].component(0).is_one());
    }

    #[test]
    fn module_membership() {
        let r = Ring::new(2, &["x", "y"]).unwrap();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let g1 = Vector::from_polys(&r, &[x.clone(), y.clone()]);
        let g2 = Vector::from_polys(&r, &[y.clone(), Poly::zero(&r)]);
        let gb = groebner(&r, &[g1.clone(), g2.clone()]).unwrap();
        let target = g1.mul_poly(&y).add(&g2.mul_poly(&x));
        assert!(full_reduce(&target, &gb).is_zero());
        let not_in = Vector::from_polys(&r, &[Poly::zero(&r), y.clone()]);
        assert!(!full_reduce(&not_in, &gb).is_zero());
    }
}
