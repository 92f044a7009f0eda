//! Minimal primes for the shapes we can certify.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CartierError, Result};
use crate::fppoly::{exp_divides, Exp, Poly, ZERO_EXP};

use super::factor::{factor_poly, factor_univariate, upoly_eval};
use super::ideal::Ideal;
use super::linalg::Echelon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Proved,
    AssertedByUser,
}

#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub ideal: Ideal,
    pub provenance: Provenance,
}

const MAX_DEPTH: usize = 24;
const MAX_ZERO_DIM: usize = 256;

/// Minimal primes of I for: monomial, principal, triangular-linear and zero-dimensional shapes,
/// and anything reducible to them by splitting along factors.
pub fn minimal_primes(i: &Ideal) -> Result<Vec<PrimeIdeal>> {
    let all = primes_rec(i, 0)?;
    let min = minimalize(all)?;
    Ok(min.into_iter().map(|ideal| PrimeIdeal { ideal, provenance: Provenance::Proved }).collect())
}

/// As [`minimal_primes`], falling back to the minimal members of `candidates` that contain I.
pub fn minimal_primes_with_candidates(i: &Ideal, candidates: &[Ideal]) -> Result<Vec<PrimeIdeal>> {
    match minimal_primes(i) {
        Ok(v) => Ok(v),
        Err(CartierError::Unsupported(msg)) => {
            if candidates.is_empty() {
                return Err(CartierError::Unsupported(msg));
            }
            let mut keep = Vec::new();
            for c in candidates {
                if c.contains_ideal(i)? {
                    keep.push(c.clone());
                }
            }
            Ok(minimalize(keep)?.into_iter().map(|ideal| PrimeIdeal { ideal, provenance: Provenance::AssertedByUser }).collect())
        }
        Err(e) => Err(e),
    }
}

/// True when the prime machinery certifies P as prime.
pub fn is_prime(p: &Ideal) -> Result<bool> {
    if p.is_unit()? {
        return Ok(false);
    }
    let mp = minimal_primes(p)?;
    Ok(mp.len() == 1 && mp[0].ideal.equals(p)?)
}

pub fn minimalize(mut v: Vec<Ideal>) -> Result<Vec<Ideal>> {
    let mut out: Vec<Ideal> = Vec::new();
    v.sort_by_key(|i| i.gb().map(|g| g.len()).unwrap_or(0));
    'next: for cand in v {
        for kept in &out {
            if cand.contains_ideal(kept)? {
                continue 'next;
            }
        }
        let mut rest = Vec::new();
        for kept in out {
            if !kept.contains_ideal(&cand)? {
                rest.push(kept);
            }
        }
        rest.push(cand);
        out = rest;
    }
    let mut keyed: Vec<(Vec<String>, Ideal)> = out.into_iter().map(|i| (i.canonical_strings().unwrap_or_default(), i)).collect();
    keyed.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    Ok(keyed.into_iter().map(|(_, i)| i).collect())
}

fn primes_rec(i: &Ideal, depth: usize) -> Result<Vec<Ideal>> {
    if depth > MAX_DEPTH {
        return Err(CartierError::ResourceCap("prime splitting depth exceeded".into()));
    }
    let ring = i.ring().clone();
    if i.is_unit()? {
        return Ok(Vec::new());
    }
    let gb = i.gb()?.to_vec();
    if gb.is_empty() {
        return Ok(vec![Ideal::zero(&ring)]);
    }
    if gb.iter().all(|g| g.is_monomial()) {
        return Ok(monomial_primes(i, &gb));
    }
    if let Some((k, j)) = linear_variable(&gb) {
        let g = &gb[k];
        let c = g.coeff_of(&unit_exp(j));
        let h = g.sub(&Poly::var(&ring, j).scale(c));
        let image = h.scale(ring.neg(ring.inv(c)));
        let images: Vec<Poly> = (0..ring.n()).map(|v| if v == j { image.clone() } else { Poly::var(&ring, v) }).collect();
        let mut rest = Vec::new();
        for (m, f) in gb.iter().enumerate() {
            if m != k {
                rest.push(f.substitute(&images, &ring)?);
            }
        }
        let sub = Ideal::new(&ring, rest);
        let mut out = Vec::new();
        for q in primes_rec(&sub, depth + 1)? {
            let mut gens = q.gb()?.to_vec();
            gens.push(g.clone());
            out.push(Ideal::new(&ring, gens));
        }
        return Ok(out);
    }
    if gb.len() == 1 {
        let mut out = Vec::new();
        for (f, _) in factor_poly(&gb[0], 0)? {
            out.push(Ideal::principal(&f));
        }
        return Ok(out);
    }
    for f in &gb {
        let fs = factor_poly(f, 0)?;
        if fs.len() == 1 && fs[0].1 == 1 {
            continue;
        }
        let mut informative = true;
        for (g, _) in &fs {
            if i.contains(g)? {
                informative = false;
                break;
            }
        }
        if !informative {
            continue;
        }
        let mut out = Vec::new();
        for (g, _) in fs {
            let mut gens = gb.clone();
            gens.push(g);
            out.extend(primes_rec(&Ideal::new(&ring, gens), depth + 1)?);
        }
        return Ok(out);
    }
    if let Some(std) = standard_monomials(i, &gb)? {
        return zero_dim_primes(i, &std, depth);
    }
    Err(CartierError::Unsupported(format!(
        "cannot certify minimal primes of {i}; supply candidate primes to verify"
    )))
}

fn unit_exp(j: usize) -> Exp {
    let mut e = ZERO_EXP;
    e[j] = 1;
    e
}

/// A generator c*x_j + h with c constant and h free of x_j.
fn linear_variable(gb: &[Poly]) -> Option<(usize, usize)> {
    let n = gb.first()?.ring().n();
    for (k, g) in gb.iter().enumerate() {
        for j in 0..n {
            if g.degree_in(j) != Some(1) {
                continue;
            }
            let ok = g.terms().iter().all(|(e, _)| e[j] == 0 || *e == unit_exp(j));
            if ok {
                return Some((k, j));
            }
        }
    }
    None
}

fn monomial_primes(i: &Ideal, gb: &[Poly]) -> Vec<Ideal> {
    let ring = i.ring();
    let n = ring.n();
    let supports: Vec<u32> = gb
        .iter()
        .map(|g| {
            let e = g.lead_exp().unwrap();
            (0..n).filter(|&v| e[v] > 0).fold(0u32, |m, v| m | (1 << v))
        })
        .collect();
    let covers: Vec<u32> = (0u32..(1 << n)).filter(|&m| supports.iter().all(|s| s & m != 0)).collect();
    let minimal: Vec<u32> = covers.iter().copied().filter(|&m| !covers.iter().any(|&o| o != m && o & m == o)).collect();
    minimal
        .into_iter()
        .map(|m| Ideal::new(ring, (0..n).filter(|&v| m & (1 << v) != 0).map(|v| Poly::var(ring, v)).collect()))
        .collect()
}

/// Standard monomials when I is zero-dimensional in the variables it involves.
fn standard_monomials(i: &Ideal, gb: &[Poly]) -> Result<Option<Vec<Exp>>> {
    let ring = i.ring();
    let n = ring.n();
    let active: Vec<usize> = (0..n).filter(|&v| gb.iter().any(|g| g.degree_in(v).unwrap_or(0) > 0)).collect();
    let leads: Vec<Exp> = gb.iter().map(|g| g.lead_exp().unwrap()).collect();
    for &v in &active {
        let pure = leads.iter().any(|e| e[v] > 0 && (0..n).all(|w| w == v || e[w] == 0));
        if !pure {
            return Ok(None);
        }
    }
    let mut out: Vec<Exp> = Vec::new();
    let mut frontier = vec![ZERO_EXP];
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(ZERO_EXP);
    while let Some(e) = frontier.pop() {
        if leads.iter().any(|l| exp_divides(l, &e)) {
            continue;
        }
        out.push(e);
        if out.len() > MAX_ZERO_DIM {
            return Err(CartierError::ResourceCap(format!("quotient dimension exceeds {MAX_ZERO_DIM}")));
        }
        for &v in &active {
            let mut f = e;
            f[v] += 1;
            if seen.insert(f) {
                frontier.push(f);
            }
        }
    }
    out.sort();
    Ok(Some(out))
}

fn coords(f: &Poly, std: &[Exp]) -> Vec<u32> {
    std.iter().map(|e| f.coeff_of(e)).collect()
}

/// Minimal polynomial of `ell` in R/I (I zero-dimensional in its active variables).
fn min_poly(i: &Ideal, ell: &Poly, std: &[Exp]) -> Result<Vec<u32>> {
    let p = i.ring().p;
    let mut ech = Echelon::new(p, std.len());
    let mut pw = i.reduce(&Poly::one(i.ring()))?;
    loop {
        if let Some(dep) = ech.insert(&coords(&pw, std)) {
            // ell^k = sum dep_j ell^j  ->  t^k - sum dep_j t^j
            let mut mp: Vec<u32> = dep.iter().map(|&c| (p - c) % p).collect();
            mp.push(1);
            return Ok(mp);
        }
        pw = i.reduce(&pw.mul(ell))?;
    }
}

fn zero_dim_primes(i: &Ideal, std: &[Exp], depth: usize) -> Result<Vec<Ideal>> {
    let ring = i.ring().clone();
    let n = ring.n();
    let d = std.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ d as u64);
    let active: Vec<usize> = (0..n).filter(|&v| std.iter().any(|e| e[v] > 0) || i.gb().map(|g| g.iter().any(|f| f.degree_in(v).unwrap_or(0) > 0)).unwrap_or(false)).collect();
    for attempt in 0..64 {
        let ell = if attempt < active.len() {
            Poly::var(&ring, active[attempt])
        } else {
            let mut acc = Poly::zero(&ring);
            for &v in &active {
                acc = acc.add(&Poly::var(&ring, v).scale(rng.gen_range(0..ring.p)));
            }
            if attempt >= active.len() + 32 {
                for &v in &active {
                    acc = acc.add(&Poly::var(&ring, v).pow(2)?.scale(rng.gen_range(0..ring.p)));
                }
            }
            acc
        };
        let mp = min_poly(i, &ell, std)?;
        let fs = factor_univariate(ring.p, &mp, attempt as u64);
        if fs.len() == 1 && fs[0].1 == 1 {
            if mp.len() - 1 == d {
                return Ok(vec![i.clone()]);
            }
            continue;
        }
        let mut out = Vec::new();
        for (q, _) in fs {
            let mut gens = i.gb()?.to_vec();
            gens.push(upoly_eval(&q, &ell));
            out.extend(primes_rec(&Ideal::new(&ring, gens), depth + 1)?);
        }
        return Ok(out);
    }
    Err(CartierError::Unsupported(format!("no primitive element found for {i}; supply candidate primes")))
}
