//! Certified F-regularity of a torsion piece after inverting one element.
//!
//! Let P be an F-pure stable submodule killed by a coordinate prime eta = (x_i : i in S),
//! so P is a module over A = F_p[x_j : j not in S]. After inverting c, Gaussian elimination on
//! the relations of P over A_c either exhibits P_c as free with an explicit basis or fails.
//! On a free module every p^{-e}-linear operator is Lambda_e(U' .) for a unique matrix U' over
//! A_c, recovered from its values on x^b times the basis. If det U' is a unit of A_c the action
//! is, up to a change of basis, the standard trace on a regular ring, which is F-regular.

use serde::Serialize;

use crate::cartiercore::{CartierModule, CartierOp};
use crate::error::Result;
use crate::fpmod::{PresentedModule, Submodule};
use crate::fppoly::{Poly, RingRef};
use crate::idealkit::{Ideal, LiftData, Vector};

#[derive(Clone, Debug, Serialize)]
pub struct RegularityCertificate {
    /// Inverted element.
    pub c: String,
    /// Rank of P_c over (R/eta)_c.
    pub rank: usize,
    /// Index of the generator whose induced matrix has unit determinant.
    pub generator: usize,
    pub determinant: String,
}

/// Indices of variables generating eta, when eta is generated by variables.
pub fn coordinate_prime(eta: &Ideal) -> Result<Option<Vec<usize>>> {
    let mut vars = Vec::new();
    for g in eta.gb()? {
        if g.len() != 1 {
            return Ok(None);
        }
        let (e, _) = g.terms()[0];
        let used = g.variables_used();
        if used.len() != 1 || e[used[0]] != 1 {
            return Ok(None);
        }
        vars.push(used[0]);
    }
    Ok(Some(vars))
}

pub(crate) fn unit_after_inverting(f: &Poly, c: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Ok(false);
    }
    if f.is_constant() {
        return Ok(true);
    }
    Ideal::principal(f).saturate_elem(c)?.is_unit()
}

const MAX_DENOMINATOR: usize = 16;

fn kill_vars(f: &Poly, s: &[usize], ring: &RingRef) -> Result<Poly> {
    if s.is_empty() || f.is_zero() {
        return Ok(f.clone());
    }
    let images: Vec<Poly> = (0..ring.n()).map(|i| if s.contains(&i) { Poly::zero(ring) } else { Poly::var(ring, i) }).collect();
    f.substitute(&images, ring)
}

struct Elimination {
    steps: Vec<(usize, Poly, Vec<Poly>)>,
    basis: Vec<usize>,
}

fn eliminate(rels: Vec<Vec<Poly>>, k: usize, c: &Poly) -> Result<Option<Elimination>> {
    let mut rels: Vec<Vec<Poly>> = rels.into_iter().filter(|r| r.iter().any(|f| !f.is_zero())).collect();
    let mut alive = vec![true; k];
    let mut steps = Vec::new();
    while !rels.is_empty() {
        let mut pick: Option<(usize, usize)> = None;
        'search: for pass in 0..2 {
            for (ri, rel) in rels.iter().enumerate() {
                for i in 0..k {
                    let f = &rel[i];
                    if !alive[i] || f.is_zero() {
                        continue;
                    }
                    let ok = if pass == 0 { f.is_constant() } else { unit_after_inverting(f, c)? };
                    if ok {
                        pick = Some((ri, i));
                        break 'search;
                    }
                }
            }
        }
        let Some((ri, i)) = pick else { return Ok(None) };
        let piv = rels.swap_remove(ri);
        let u = piv[i].clone();
        for rel in rels.iter_mut() {
            let coef = rel[i].clone();
            if coef.is_zero() {
                continue;
            }
            for j in 0..k {
                rel[j] = rel[j].mul(&u).sub(&coef.mul(&piv[j]));
            }
        }
        rels.retain(|r| r.iter().any(|f| !f.is_zero()));
        alive[i] = false;
        steps.push((i, u, piv));
    }
    Ok(Some(Elimination { steps, basis: (0..k).filter(|&i| alive[i]).collect() }))
}

fn determinant(m: &[Vec<Poly>], ring: &RingRef) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(ring);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero(ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, f)| f.clone()).collect()).collect();
        let term = m[0][j].mul(&determinant(&minor, ring));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// A substitution x_j -> x_j - h_j moving eta onto a coordinate prime, when every generator of eta
/// has the shape a x_j + h_j with a constant and h_j free of all the chosen variables.
pub fn straighten(eta: &Ideal) -> Result<Option<(Vec<usize>, Vec<Poly>)>> {
    let ring = eta.ring().clone();
    let gens = eta.gb()?.to_vec();
    let mut chosen: Vec<(usize, Poly)> = Vec::new();
    for g in &gens {
        let mut pick = None;
        for j in g.variables_used() {
            if chosen.iter().any(|(k, _)| *k == j) || g.degree_in(j) != Some(1) {
                continue;
            }
            let lin: Vec<_> = g.terms().iter().filter(|(e, _)| e[j] > 0).collect();
            if lin.len() != 1 || lin[0].0.iter().enumerate().any(|(i, &d)| i != j && d > 0) {
                continue;
            }
            let a = lin[0].1;
            let h = g.sub(&Poly::var(&ring, j).scale(a)).scale(ring.inv(a));
            pick = Some((j, h));
            break;
        }
        let Some(pair) = pick else { return Ok(None) };
        chosen.push(pair);
    }
    let vars: Vec<usize> = chosen.iter().map(|(j, _)| *j).collect();
    if chosen.iter().any(|(_, h)| h.variables_used().iter().any(|v| vars.contains(v))) {
        return Ok(None);
    }
    let mut images: Vec<Poly> = (0..ring.n()).map(|i| Poly::var(&ring, i)).collect();
    for (j, h) in &chosen {
        images[*j] = Poly::var(&ring, *j).sub(h);
    }
    Ok(Some((vars, images)))
}

fn move_vector(v: &Vector, rank: usize, images: &[Poly], ring: &RingRef) -> Result<Vector> {
    v.map_components(rank, |f| f.substitute(images, ring))
}

/// Tries to certify that P_c is F-regular; `None` means this c does not work.
///
/// Primes that become coordinate primes after a triangular change of variables are handled by
/// transporting all data along that substitution, which has Jacobian one and therefore commutes
/// with the trace.
pub fn certify_regular(cm: &CartierModule, p: &Submodule, eta: &Ideal, c: &Poly) -> Result<Option<RegularityCertificate>> {
    Ok(attempt_regular(cm, p, eta, c)?.0)
}

/// Like [`certify_regular`], and on failure also the smallest determinant seen among the
/// generators that is nonzero modulo eta; inverting it as well may succeed.
pub fn attempt_regular(cm: &CartierModule, p: &Submodule, eta: &Ideal, c: &Poly) -> Result<(Option<RegularityCertificate>, Option<Poly>)> {
    if let Some(s) = coordinate_prime(eta)? {
        return certify_coordinate(cm, p, eta, &s, c);
    }
    let Some((s, images)) = straighten(eta)? else { return Ok((None, None)) };
    let ring = cm.ring().clone();
    let r = cm.rank();
    let rels = cm.module().relations().iter().map(|v| move_vector(v, r, &images, &ring)).collect::<Result<Vec<_>>>()?;
    let module = PresentedModule::new(&ring, r, rels)?;
    let mut ops = Vec::new();
    for op in cm.algebra().generators() {
        let m = op.matrix().iter().map(|row| row.iter().map(|f| f.substitute(&images, &ring)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        ops.push(CartierOp::new(op.e(), m)?);
    }
    let moved = CartierModule::validate(&module, &cm.algebra().with_generators(ops)?)?;
    let gens = p.gens().iter().map(|v| move_vector(v, r, &images, &ring)).collect::<Result<Vec<_>>>()?;
    let piece = Submodule::new(moved.module(), gens);
    let flat = Ideal::new(&ring, s.iter().map(|&i| Poly::var(&ring, i)).collect());
    let (cert, hint) = certify_coordinate(&moved, &piece, &flat, &s, &c.substitute(&images, &ring)?)?;
    let back: Vec<Poly> = images.iter().enumerate().map(|(i, f)| Poly::var(&ring, i).add(&Poly::var(&ring, i).sub(f))).collect();
    let hint = hint.map(|h| h.substitute(&back, &ring)).transpose()?;
    Ok((
        cert.map(|mut cert| {
            cert.c = c.to_string();
            cert
        }),
        hint,
    ))
}

type Attempt = (Option<RegularityCertificate>, Option<Poly>);

fn certify_coordinate(cm: &CartierModule, p: &Submodule, eta: &Ideal, s: &[usize], c: &Poly) -> Result<Attempt> {
    let ring = cm.ring().clone();
    if eta.contains(c)? || p.is_zero() || !p.mul_ideal(eta).canonical()?.is_zero() {
        return Ok((None, None));
    }
    let k = p.gens().len();
    let mut all = p.gens().to_vec();
    all.extend(cm.module().relations().iter().cloned());
    let ld = LiftData::new(&ring, &all, cm.rank())?;
    let rels: Vec<Vec<Poly>> = ld
        .syzygies()
        .iter()
        .map(|v| v.slice(0, k).to_polys(k).iter().map(|f| kill_vars(f, s, &ring)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let Some(elim) = eliminate(rels, k, c)? else { return Ok((None, None)) };
    let rank = elim.basis.len();
    if rank == 0 {
        return Ok((None, None));
    }
    let mut hint: Option<Poly> = None;
    let coords = |v: &Vector| -> Result<Option<Vec<Poly>>> {
        let Some(beta) = ld.lift(v) else { return Ok(None) };
        let mut b: Vec<Poly> = beta[..k].iter().map(|f| kill_vars(f, s, &ring)).collect::<Result<_>>()?;
        for (i, u, piv) in &elim.steps {
            let bi = b[*i].clone();
            for j in 0..k {
                b[j] = b[j].mul(u).sub(&bi.mul(&piv[j]));
            }
            b[*i] = Poly::zero(&ring);
        }
        Ok(Some(elim.basis.iter().map(|&j| b[j].clone()).collect()))
    };
    let n = ring.n();
    let one = Poly::one(&ring);
    for (gi, op) in cm.algebra().generators().iter().enumerate() {
        let q = ring.q(op.e())? as u32;
        let mut entries: Vec<(usize, crate::fppoly::Exp, Vector)> = Vec::new();
        for (col, &j) in elim.basis.iter().enumerate() {
            for (a, piece) in op.pieces(&p.gens()[j], &one)? {
                if s.iter().all(|&i| a[i] == q - 1) {
                    entries.push((col, a, piece));
                }
            }
        }
        // P_c need not contain the values before clearing powers of c
        let mut lifted = None;
        let mut scale = Poly::one(&ring);
        for _ in 0..=MAX_DENOMINATOR {
            let mut all = Vec::with_capacity(entries.len());
            for (_, _, v) in &entries {
                match coords(&v.mul_poly(&scale))? {
                    Some(w) => all.push(w),
                    None => break,
                }
            }
            if all.len() == entries.len() {
                lifted = Some(all);
                break;
            }
            scale = scale.mul(c);
        }
        let Some(lifted) = lifted else { continue };
        let mut mat = vec![vec![Poly::zero(&ring); rank]; rank];
        for ((col, a, _), w) in entries.iter().zip(lifted) {
            let mut shift = *a;
            for i in 0..n {
                if s.contains(&i) {
                    shift[i] = 0;
                }
            }
            for (row, wi) in w.iter().enumerate() {
                if !wi.is_zero() {
                    mat[row][*col] = mat[row][*col].add(&wi.frobenius(op.e())?.mul_term(&shift, 1));
                }
            }
        }
        let det = determinant(&mat, &ring);
        if unit_after_inverting(&det, c)? {
            return Ok((Some(RegularityCertificate { c: c.to_string(), rank, generator: gi, determinant: det.to_string() }), None));
        }
        if !det.is_zero() && !eta.contains(&det)? && hint.as_ref().is_none_or(|h| det.total_degree() < h.total_degree()) {
            hint = Some(det);
        }
    }
    Ok((None, hint))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartiercore::CartierAlgebraSpec;
    use crate::fppoly::{cartier_trace, parse_poly, Ring};

    #[test]
    fn triangular_substitution_commutes_with_trace() {
        let r = Ring::new(3, &["x", "z"]).unwrap();
        let eta = Ideal::parse(&r, &["z^2 - x"]).unwrap();
        let (vars, images) = straighten(&eta).unwrap().unwrap();
        assert_eq!(vars, vec![0]);
        let moved = parse_poly(&r, "z^2 - x").unwrap().substitute(&images, &r).unwrap();
        assert!(Ideal::principal(&moved).equals(&Ideal::parse(&r, &["x"]).unwrap()).unwrap());
        for f in ["x^5*z^7 + x^2*z + 2", "x^8*z^8 + z^3", "(x + z)^11"] {
            let f = parse_poly(&r, f).unwrap();
            let one = Poly::one(&r);
            let lhs = cartier_trace(&f.substitute(&images, &r).unwrap(), 1, &one).unwrap();
            let rhs = cartier_trace(&f, 1, &one).unwrap().substitute(&images, &r).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn hypersurface_quotient_certified() {
        let r = Ring::new(3, &["x", "z"]).unwrap();
        let g = parse_poly(&r, "z^2 - x").unwrap();
        let eta = Ideal::principal(&g);
        let m = PresentedModule::direct_sum_of_cyclics(&r, std::slice::from_ref(&eta)).unwrap();
        let op = CartierOp::scalar(1, &g.pow(2).unwrap(), 1).unwrap();
        let cm = CartierModule::validate(&m, &CartierAlgebraSpec::single(op)).unwrap();
        let cert = certify_regular(&cm, &cm.whole(), &eta, &Poly::one(&r)).unwrap();
        assert!(cert.is_some());
    }

    #[test]
    fn determinant_hint_completes_a_certificate() {
        let r = Ring::new(2, &["x", "y"]).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let op = CartierOp::new(1, vec![vec![p("1"), p("x")], vec![p("y^2"), p("x*y + x")]]).unwrap();
        let cm = CartierModule::free(&CartierAlgebraSpec::single(op));
        let eta = Ideal::zero(&r);
        let (under, _) = cm.underline().unwrap();
        let (cert, hint) = attempt_regular(&cm, &under, &eta, &Poly::one(&r)).unwrap();
        assert!(cert.is_none());
        let h = hint.expect("a nonzero determinant");
        assert!(certify_regular(&cm, &under, &eta, &h).unwrap().is_some());
    }
}
