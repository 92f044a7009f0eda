use std::collections::BTreeMap;

use serde::Serialize;

use crate::cartiercore::{CartierAlgebraSpec, CartierModule, CartierOp};
use crate::error::{CartierError, Result};
use crate::fpmod::{ModuleMap, PresentedModule, Submodule};
use crate::fppoly::{gauge_of, Exp, Poly};
use crate::idealkit::linalg::Echelon;
use crate::idealkit::Vector;

use super::maps::FiniteExtension;
use super::shriek::box_exponents;

fn s_coords(ext: &FiniteExtension, v: &Vector, r: usize) -> Result<Vec<Poly>> {
    let d = ext.degree();
    let mut out = vec![Poly::zero(ext.base()); d * r];
    for (j, f) in v.to_polys(r).iter().enumerate() {
        for (i, c) in ext.coords(f)?.into_iter().enumerate() {
            out[i * r + j] = c;
        }
    }
    Ok(out)
}

/// z^i v as coordinates on the R-basis z^i e_j (index i r + j).
fn r_vector(ext: &FiniteExtension, v: &Vector, r: usize) -> Result<Vector> {
    Ok(Vector::from_polys(ext.base(), &s_coords(ext, v, r)?))
}

/// Restriction of scalars along R -> S = R[z]/(g) for a module over R[z] killed by g.
pub fn pushforward_finite(cm: &CartierModule, ext: &FiniteExtension) -> Result<CartierModule> {
    if cm.algebra().is_twisted() {
        return Err(CartierError::Unsupported("pushforward is built for untwisted algebras".into()));
    }
    let s_ring = ext.ring();
    crate::fppoly::check_ring(cm.ring(), s_ring)?;
    let (d, r) = (ext.degree(), cm.rank());
    let g = ext.relation();
    for j in 0..r {
        if !cm.module().is_zero_element(&Vector::unit(s_ring, j).mul_poly(g)) {
            return Err(CartierError::InvalidArgument("the module is not killed by the defining relation".into()));
        }
    }
    let base = ext.base();
    let mut rels = Vec::new();
    for rel in cm.module().relations() {
        for i in 0..d {
            let w = r_vector(ext, &rel.mul_poly(&ext.z_power(i as u64)?), r)?;
            if !w.is_zero() {
                rels.push(w);
            }
        }
    }
    let module = PresentedModule::new(base, d * r, rels)?;
    let one = Poly::one(s_ring);
    let mut ops = Vec::new();
    for op in cm.algebra().generators() {
        let q = base.q(op.e())? as u32;
        let mut values = Vec::with_capacity(d * r);
        for idx in 0..d * r {
            let (i, j) = (idx / r, idx % r);
            let start = Vector::unit(s_ring, j).mul_poly(&ext.z_power(i as u64)?);
            let mut vals: BTreeMap<Exp, Vector> = BTreeMap::new();
            for a in box_exponents(base.n(), q) {
                let image = op.apply(&start.mul_term(&a, 1), &one)?;
                vals.insert(a, r_vector(ext, &image, r)?);
            }
            values.push(vals);
        }
        ops.push(CartierOp::from_basis_values(base, op.e(), d * r, &values)?);
    }
    CartierModule::validate(&module, &CartierAlgebraSpec::new(ops)?)
}

/// An S-submodule viewed over R inside the pushforward.
pub fn pushforward_sub(target: &CartierModule, n: &Submodule, ext: &FiniteExtension) -> Result<Submodule> {
    let r = n.rank();
    let mut gens = Vec::new();
    for v in n.gens() {
        for i in 0..ext.degree() {
            gens.push(r_vector(ext, &v.mul_poly(&ext.z_power(i as u64)?), r)?);
        }
    }
    Ok(Submodule::new(target.module(), gens))
}

/// Counit f_* f^! M -> M, phi -> phi(1), for a module M over R.
///
/// The R-generator z^i e_{k,j} of f_* f^! M is the homomorphism phi with phi(z^l) = z-action
/// applied to the block-k generator, so phi(1) is read off block 0 of z^i e_{k,j}.
pub fn counit(pushed: &CartierModule, original: &CartierModule, ext: &FiniteExtension) -> Result<ModuleMap> {
    let (d, r) = (ext.degree(), original.rank());
    let base = ext.base();
    let s_ring = ext.ring();
    let mut images = Vec::with_capacity(d * d * r);
    let zmat: Vec<Vec<Poly>> = (0..d).map(|l| ext.coords(&ext.z_power(l as u64 + 1)?)).collect::<Result<_>>()?;
    for idx in 0..d * d * r {
        let (i, rest) = (idx / (d * r), idx % (d * r));
        let (k, j) = (rest / r, rest % r);
        let _ = s_ring;
        // block coordinates of z^i e_{k,j}
        let mut col = vec![Poly::zero(base); d];
        col[k] = Poly::one(base);
        for _ in 0..i {
            let mut next = vec![Poly::zero(base); d];
            for (a, ca) in col.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for l in 0..d {
                    next[l] = next[l].add(&ca.mul(&zmat[l][a]));
                }
            }
            col = next;
        }
        images.push(Vector::unit(base, j).mul_poly(&col[0]));
    }
    ModuleMap::new(pushed.module(), original.module(), images)
}

/// Finite-dimensional model of the pushforward to a point: the F_p-span of all elements of gauge
/// at most K, with its stable part under the algebra.
#[derive(Clone, Debug, Serialize)]
pub struct PointModel {
    pub gauge_cutoff: u64,
    pub dimension: usize,
    pub underline_dimension: usize,
    pub steps: usize,
    pub underline_basis: Vec<Vec<String>>,
}

struct Coords {
    keys: BTreeMap<(u32, Exp), usize>,
}

impl Coords {
    fn of(&self, v: &Vector, p: u32) -> Result<Vec<u32>> {
        let mut out = vec![0u32; self.keys.len()];
        for (pos, e, c) in v.terms() {
            let idx = self
                .keys
                .get(&(*pos, *e))
                .ok_or_else(|| CartierError::Unsupported("normal form leaves the gauge box".into()))?;
            out[*idx] = *c % p;
        }
        Ok(out)
    }
}

/// Smallest cut-off K with kappa(gauge <= K) inside gauge <= K for every generator.
pub fn gauge_cutoff(cm: &CartierModule) -> Result<u64> {
    let mut k = 0u64;
    for op in cm.algebra().generators() {
        let q = cm.ring().q(op.e())?;
        let du = op.matrix().iter().flatten().filter_map(|f| gauge_of(f).0).max().unwrap_or(0);
        k = k.max(du.div_ceil(q - 1));
    }
    Ok(k)
}

/// Model of the F_p-space f_* N for f: Spec R -> point, where N is a stable submodule of M.
pub fn push_to_point(cm: &CartierModule, n: &Submodule, cutoff: Option<u64>) -> Result<PointModel> {
    let ring = cm.ring().clone();
    let p = ring.p;
    let k = cutoff.unwrap_or(0).max(gauge_cutoff(cm)?);
    if k > 64 {
        return Err(CartierError::ResourceCap(format!("gauge cut-off {k}")));
    }
    let r = cm.rank();
    let boxed = box_exponents(ring.n(), k as u32 + 1);
    let mut keys = BTreeMap::new();
    for j in 0..r {
        for e in &boxed {
            let next = keys.len();
            keys.insert((j as u32, *e), next);
        }
    }
    let coords = Coords { keys };
    let dim = coords.keys.len();
    let in_box = |v: &Vector| v.terms().iter().all(|(_, e, _)| e[..ring.n()].iter().all(|&a| a as u64 <= k));
    let span = |vs: Vec<Vector>| -> Result<Vec<Vector>> {
        let mut ech = Echelon::new(p, dim);
        let mut basis = Vec::new();
        for v in vs {
            let v = cm.module().normal_form(&v);
            if v.is_zero() {
                continue;
            }
            if ech.insert(&coords.of(&v, p)?).is_none() {
                basis.push(v);
            }
        }
        Ok(basis)
    };
    let mut seeds = Vec::new();
    for g in n.gens() {
        for e in &boxed {
            let v = g.mul_term(e, 1);
            if in_box(&v) {
                seeds.push(v);
            }
        }
    }
    let mut cur = span(seeds)?;
    let dimension = cur.len();
    let one = Poly::one(&ring);
    let mut steps = 0;
    loop {
        let mut images = Vec::new();
        for v in &cur {
            for op in cm.algebra().generators() {
                images.push(op.apply(v, &one)?);
            }
        }
        let next = span(images)?;
        if next.len() == cur.len() {
            break;
        }
        if next.len() > cur.len() {
            return Err(CartierError::InvariantViolation("the gauge box is not stable".into()));
        }
        cur = next;
        steps += 1;
        if steps > 4 * dim + 4 {
            return Err(CartierError::NoStabilization(steps));
        }
    }
    Ok(PointModel {
        gauge_cutoff: k,
        dimension,
        underline_dimension: cur.len(),
        steps,
        underline_basis: cur.iter().map(|v| crate::fpmod::vector_strings(v, r)).collect(),
    })
}
