use std::collections::BTreeMap;

use crate::cartiercore::{CartierAlgebraSpec, CartierModule, CartierOp};
use crate::error::{CartierError, Result};
use crate::fpmod::{PresentedModule, Submodule};
use crate::fppoly::{Exp, MonomialOrder, Poly, RingRef, ZERO_EXP};
use crate::idealkit::Vector;

use super::maps::FiniteExtension;

fn untwisted_ops(cm: &CartierModule) -> Result<&[CartierOp]> {
    if cm.algebra().is_twisted() {
        return Err(CartierError::Unsupported("pullbacks are built for untwisted algebras".into()));
    }
    Ok(cm.algebra().generators())
}

/// Exponent vectors with entries in [0, q - 1] over the first `n` variables.
pub(crate) fn box_exponents(n: usize, q: u32) -> Vec<Exp> {
    let mut out = vec![ZERO_EXP];
    for i in 0..n {
        let mut next = Vec::with_capacity(out.len() * q as usize);
        for e in &out {
            for a in 0..q {
                let mut f = *e;
                f[i] = a;
                next.push(f);
            }
        }
        out = next;
    }
    out
}

/// Hom_R(S, M) for S = R[z]/(g), presented over R[z] on the dual-basis blocks phi(z^i).
///
/// Generator i r + j is the homomorphism sending z^i to m_j and the other basis powers to zero;
/// the relations are those of M in every block together with the z-action on blocks.
pub fn shriek_finite(cm: &CartierModule, ext: &FiniteExtension) -> Result<CartierModule> {
    let ops = untwisted_ops(cm)?;
    let (d, r) = (ext.degree(), cm.rank());
    let s_ring = ext.ring().clone();
    let base = cm.ring().clone();
    let mut rels = Vec::new();
    for rel in cm.module().relations() {
        let lifted = ext.lift_vector(rel, r)?;
        for i in 0..d {
            rels.push(lifted.shift(i * r));
        }
    }
    // column l of the z-action: z e_{i,j} = sum_l [z^{l+1}]_i e_{l,j}
    let shifts: Vec<Vec<Poly>> = (0..d).map(|l| ext.coords(&ext.z_power(l as u64 + 1)?)).collect::<Result<_>>()?;
    let z = Poly::var(&s_ring, base.n());
    for i in 0..d {
        for j in 0..r {
            let mut v = Vector::unit(&s_ring, i * r + j).mul_poly(&z);
            for l in 0..d {
                let c = &shifts[l][i];
                if !c.is_zero() {
                    v = v.sub(&Vector::unit(&s_ring, l * r + j).mul_poly(&ext.lift(c)?));
                }
            }
            rels.push(v);
        }
    }
    let module = PresentedModule::new(&s_ring, d * r, rels)?;
    let mut new_ops = Vec::new();
    for op in ops {
        new_ops.push(pulled_operator(op, ext, r)?);
    }
    CartierModule::validate(&module, &CartierAlgebraSpec::new(new_ops)?)
}

/// Block coordinates (over R) of an element of Hom_R(S, M) given by its free-cover vector.
fn blocks(ext: &FiniteExtension, v: &Vector, r: usize) -> Result<Vec<Vec<Poly>>> {
    let d = ext.degree();
    let base = ext.base();
    let mut out = vec![vec![Poly::zero(base); r]; d];
    let comps = v.to_polys(d * r);
    let zmat: Vec<Vec<Poly>> = (0..d).map(|l| ext.coords(&ext.z_power(l as u64 + 1)?)).collect::<Result<_>>()?;
    for (idx, f) in comps.iter().enumerate() {
        let (i, j) = (idx / r, idx % r);
        for (ze, c) in split_z(ext, f)? {
            // z^ze e_{i,j}, then multiply by c
            let mut col = vec![Poly::zero(base); d];
            col[i] = Poly::one(base);
            for _ in 0..ze {
                let mut next = vec![Poly::zero(base); d];
                for (k, ck) in col.iter().enumerate() {
                    if ck.is_zero() {
                        continue;
                    }
                    for l in 0..d {
                        next[l] = next[l].add(&ck.mul(&zmat[l][k]));
                    }
                }
                col = next;
            }
            for l in 0..d {
                out[l][j] = out[l][j].add(&col[l].mul(&c));
            }
        }
    }
    Ok(out)
}

/// f = sum_k z^k c_k with c_k over R.
fn split_z(ext: &FiniteExtension, f: &Poly) -> Result<Vec<(u32, Poly)>> {
    let z = ext.base().n();
    let mut by: BTreeMap<u32, Vec<(Exp, u32)>> = BTreeMap::new();
    for (e, c) in f.terms() {
        let mut b = *e;
        b[z] = 0;
        by.entry(e[z]).or_default().push((b, *c));
    }
    Ok(by.into_iter().map(|(k, t)| (k, Poly::from_terms(ext.base(), t))).collect())
}

fn from_blocks(ext: &FiniteExtension, b: &[Vec<Poly>], r: usize) -> Result<Vector> {
    let mut comps = Vec::with_capacity(b.len() * r);
    for block in b {
        for f in block {
            comps.push(ext.lift(f)?);
        }
    }
    Ok(Vector::from_polys(ext.ring(), &comps))
}

/// (kappa (x) 1)(phi)(z^l) = kappa(phi(z^{l q})), written as Lambda_e(V .) over R[z].
fn pulled_operator(op: &CartierOp, ext: &FiniteExtension, r: usize) -> Result<CartierOp> {
    let s_ring = ext.ring();
    let base = ext.base();
    let d = ext.degree();
    let q = s_ring.q(op.e())? as u32;
    let frob: Vec<Vec<Poly>> = (0..d).map(|l| ext.coords(&ext.z_power(l as u64 * q as u64)?)).collect::<Result<_>>()?;
    let one = Poly::one(base);
    let mut values = Vec::with_capacity(d * r);
    for idx in 0..d * r {
        let mut vals = BTreeMap::new();
        for a in box_exponents(s_ring.n(), q) {
            let v = Vector::unit(s_ring, idx).mul_term(&a, 1);
            let phi = blocks(ext, &v, r)?;
            let mut out = vec![vec![Poly::zero(base); r]; d];
            for l in 0..d {
                let mut arg = Vector::zero(base);
                for k in 0..d {
                    if !frob[l][k].is_zero() {
                        arg = arg.add(&Vector::from_polys(base, &phi[k]).mul_poly(&frob[l][k]));
                    }
                }
                out[l] = op.apply(&arg, &one)?.to_polys(r);
            }
            vals.insert(a, from_blocks(ext, &out, r)?);
        }
        values.push(vals);
    }
    CartierOp::from_basis_values(s_ring, op.e(), d * r, &values)
}

/// Hom_R(S, N) inside Hom_R(S, M): N in every block.
pub fn shriek_finite_sub(target: &CartierModule, n: &Submodule, ext: &FiniteExtension) -> Result<Submodule> {
    let r = n.rank();
    let mut gens = Vec::new();
    for g in n.gens() {
        let lifted = ext.lift_vector(g, r)?;
        for i in 0..ext.degree() {
            gens.push(lifted.shift(i * r));
        }
    }
    Ok(Submodule::new(target.module(), gens))
}

/// Pullback along R -> R[u]: same relations and operator matrices over the larger ring.
pub fn shriek_affine_line(cm: &CartierModule, var: &str) -> Result<(CartierModule, RingRef)> {
    let ops = untwisted_ops(cm)?;
    let ring = cm.ring().extended(&[var], MonomialOrder::Grevlex)?;
    let map: Vec<usize> = (0..cm.ring().n()).collect();
    let r = cm.rank();
    let rels = cm
        .module()
        .relations()
        .iter()
        .map(|v| v.map_components(r, |f| f.embed(&ring, &map)).map(|w| w.reorder(&ring)))
        .collect::<Result<Vec<_>>>()?;
    let module = PresentedModule::new(&ring, r, rels)?;
    let mut new_ops = Vec::new();
    for op in ops {
        let m = op.matrix().iter().map(|row| row.iter().map(|f| f.embed(&ring, &map)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        new_ops.push(CartierOp::new(op.e(), m)?);
    }
    Ok((CartierModule::validate(&module, &CartierAlgebraSpec::new(new_ops)?)?, ring))
}

/// N (x) R[u] inside the pulled back module.
pub fn affine_line_sub(target: &CartierModule, n: &Submodule) -> Result<Submodule> {
    let ring = target.ring().clone();
    let map: Vec<usize> = (0..n.ring().n()).collect();
    let gens = n
        .gens()
        .iter()
        .map(|v| v.map_components(n.rank(), |f| f.embed(&ring, &map)).map(|w| w.reorder(&ring)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Submodule::new(target.module(), gens))
}
