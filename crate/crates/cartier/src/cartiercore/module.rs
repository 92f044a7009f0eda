use std::collections::BTreeMap;

use crate::error::{CartierError, Result};
use crate::fppoly::{check_ring, Exp, Poly, RingRef};
use crate::fpmod::{ModRef, ModuleMap, PresentedModule, Submodule};
use crate::idealkit::{LiftData, Vector};

use super::algebra::CartierAlgebraSpec;
use super::op::CartierOp;

/// A presented module together with a validated action of a Cartier algebra.
#[derive(Clone, Debug)]
pub struct CartierModule {
    module: ModRef,
    algebra: CartierAlgebraSpec,
}

/// Where a structural generator fails to preserve the relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureWitness {
    pub generator: usize,
    pub relation: usize,
    pub monomial: Vec<u32>,
}

fn complement(ring: &RingRef, e: u32, a: &Exp) -> Result<Vec<u32>> {
    let q = ring.q(e)? as u32;
    Ok((0..ring.n()).map(|i| q - 1 - a[i]).collect())
}

impl CartierModule {
    /// Checks that every generator maps every relation into the relations.
    pub fn validate(module: &ModRef, algebra: &CartierAlgebraSpec) -> Result<CartierModule> {
        check_ring(module.ring(), algebra.ring())?;
        if module.rank() != algebra.rank() {
            return Err(CartierError::InvalidStructure(format!(
                "operators act on rank {} but the module has rank {}",
                algebra.rank(),
                module.rank()
            )));
        }
        if let Some(w) = Self::find_violation(module, algebra)? {
            let rel = module.relations()[w.relation].format(module.rank());
            return Err(CartierError::InvalidStructure(format!(
                "generator {} sends x^{:?} * {} outside the relations",
                w.generator, w.monomial, rel
            )));
        }
        Ok(CartierModule { module: module.clone(), algebra: algebra.clone() })
    }

    pub fn find_violation(module: &ModRef, algebra: &CartierAlgebraSpec) -> Result<Option<StructureWitness>> {
        let one = Poly::one(module.ring());
        for (gi, op) in algebra.generators().iter().enumerate() {
            for (ri, rel) in module.relations().iter().enumerate() {
                for (a, piece) in op.pieces(rel, &one)? {
                    if !module.is_zero_element(&piece) {
                        return Ok(Some(StructureWitness { generator: gi, relation: ri, monomial: complement(module.ring(), op.e(), &a)? }));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn free(algebra: &CartierAlgebraSpec) -> CartierModule {
        CartierModule { module: PresentedModule::free(algebra.ring(), algebra.rank()), algebra: algebra.clone() }
    }

    pub fn module(&self) -> &ModRef {
        &self.module
    }

    pub fn algebra(&self) -> &CartierAlgebraSpec {
        &self.algebra
    }

    pub fn ring(&self) -> &RingRef {
        self.module.ring()
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn whole(&self) -> Submodule {
        Submodule::whole(&self.module)
    }

    pub fn zero(&self) -> Submodule {
        Submodule::zero(&self.module)
    }

    /// Same module, different algebra (validated).
    pub fn with_algebra(&self, algebra: &CartierAlgebraSpec) -> Result<CartierModule> {
        CartierModule::validate(&self.module, algebra)
    }

    /// M/N with the induced action; N must be stable.
    pub fn quotient(&self, n: &Submodule) -> Result<(CartierModule, ModuleMap)> {
        if !n.contains_sub(&self.apply_step(n, &Poly::one(self.ring()))?)? {
            return Err(CartierError::InvalidArgument("quotient by a submodule that is not stable".into()));
        }
        let q = n.quotient_module()?;
        let proj = ModuleMap::new(&self.module, &q, (0..self.rank()).map(|i| Vector::unit(self.ring(), i)).collect())?;
        Ok((CartierModule::validate(&q, &self.algebra)?, proj))
    }

    /// A stable submodule N as a Cartier module in its own right, with the inclusion map.
    pub fn restrict(&self, n: &Submodule) -> Result<(CartierModule, ModuleMap)> {
        let ring = self.ring().clone();
        let (pres, incl) = n.present()?;
        let k = pres.rank();
        if k == 0 {
            let zero_alg = self.algebra.with_generators(
                self.algebra.generators().iter().map(|g| CartierOp::scalar(g.e(), &Poly::zero(&ring), 1)).collect::<Result<Vec<_>>>()?,
            );
            let zero_mod = PresentedModule::new(&ring, 1, vec![Vector::unit(&ring, 0)])?;
            let cm = CartierModule { module: zero_mod.clone(), algebra: zero_alg? };
            let map = ModuleMap::new(&zero_mod, &self.module, vec![Vector::zero(&ring)])?;
            return Ok((cm, map));
        }
        let mut all = n.gens().to_vec();
        all.extend(self.module.relations().iter().cloned());
        let ld = LiftData::new(&ring, &all, self.rank())?;
        let one = Poly::one(&ring);
        let mut ops = Vec::new();
        for op in self.algebra.generators() {
            let mut values: Vec<BTreeMap<Exp, Vector>> = Vec::with_capacity(k);
            for g in n.gens() {
                let mut vals = BTreeMap::new();
                for (a, piece) in op.pieces(g, &one)? {
                    let coords = ld.lift(&piece).ok_or_else(|| {
                        CartierError::InvalidArgument("submodule is not stable under the algebra".into())
                    })?;
                    let b = complement(&ring, op.e(), &a)?;
                    vals.insert(crate::fppoly::exp_from(&b), Vector::from_polys(&ring, &coords[..k]));
                }
                values.push(vals);
            }
            ops.push(CartierOp::from_basis_values(&ring, op.e(), k, &values)?);
        }
        let alg = self.algebra.with_generators(ops)?;
        Ok((CartierModule::validate(&pres, &alg)?, incl))
    }

    /// Block-diagonal direct sum; both algebras must have matching generator degrees.
    pub fn direct_sum(&self, other: &CartierModule) -> Result<CartierModule> {
        let ring = self.ring().clone();
        check_ring(&ring, other.ring())?;
        let (ga, gb) = (self.algebra.generators(), other.algebra.generators());
        if ga.len() != gb.len() || ga.iter().zip(gb).any(|(a, b)| a.e() != b.e()) {
            return Err(CartierError::InvalidArgument("direct sum needs generators of matching degrees".into()));
        }
        let (r1, r2) = (self.rank(), other.rank());
        let mut ops = Vec::new();
        for (a, b) in ga.iter().zip(gb) {
            let mut m = vec![vec![Poly::zero(&ring); r1 + r2]; r1 + r2];
            for i in 0..r1 {
                for j in 0..r1 {
                    m[i][j] = a.entry(i, j).clone();
                }
            }
            for i in 0..r2 {
                for j in 0..r2 {
                    m[r1 + i][r1 + j] = b.entry(i, j).clone();
                }
            }
            ops.push(CartierOp::new(a.e(), m)?);
        }
        let mut rels: Vec<Vector> = self.module.relations().to_vec();
        rels.extend(other.module.relations().iter().map(|v| v.shift(r1)));
        let module = PresentedModule::new(&ring, r1 + r2, rels)?;
        let alg = self.algebra.with_generators(ops)?;
        CartierModule::validate(&module, &alg)
    }

    /// Checks phi(kappa(x^b v)) = kappa(x^b phi(v)) for every generator, free basis vector and basis monomial.
    pub fn check_equivariant(phi: &ModuleMap, source: &CartierModule, target: &CartierModule) -> Result<()> {
        let (gs, gt) = (source.algebra.generators(), target.algebra.generators());
        if gs.len() != gt.len() || gs.iter().zip(gt).any(|(a, b)| a.e() != b.e()) {
            return Err(CartierError::NotEquivariant("algebras have different generator lists".into()));
        }
        let one = Poly::one(source.ring());
        for (gi, (os, ot)) in gs.iter().zip(gt).enumerate() {
            for j in 0..source.rank() {
                let ps = os.pieces(&Vector::unit(source.ring(), j), &one)?;
                let pt = ot.pieces(&phi.images()[j], &one)?;
                let keys: std::collections::BTreeSet<&Exp> = ps.keys().chain(pt.keys()).collect();
                for a in keys {
                    let lhs = ps.get(a).map(|v| phi.apply_free(v)).unwrap_or_else(|| Vector::zero(source.ring()));
                    let rhs = pt.get(a).cloned().unwrap_or_else(|| Vector::zero(source.ring()));
                    if !target.module.is_zero_element(&lhs.sub(&rhs)) {
                        return Err(CartierError::NotEquivariant(format!(
                            "generator {gi} on basis vector {j} at monomial x^{:?}",
                            complement(source.ring(), os.e(), a)?
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fppoly::{parse_poly, Ring};
    use crate::idealkit::Ideal;

    #[test]
    fn validation_examples() {
        let r = Ring::new(2, &["x"]).unwrap();
        let alg = CartierAlgebraSpec::single(CartierOp::scalar(1, &parse_poly(&r, "x").unwrap(), 1).unwrap());
        assert!(CartierModule::validate(&PresentedModule::free(&r, 1), &alg).is_ok());
        let rx = PresentedModule::direct_sum_of_cyclics(&r, &[Ideal::parse(&r, &["x"]).unwrap()]).unwrap();
        assert!(CartierModule::validate(&rx, &alg).is_ok());

        let r2 = Ring::new(2, &["x", "y"]).unwrap();
        let alg2 = CartierAlgebraSpec::single(CartierOp::scalar(1, &parse_poly(&r2, "x").unwrap(), 1).unwrap());
        let ry = PresentedModule::direct_sum_of_cyclics(&r2, &[Ideal::parse(&r2, &["y"]).unwrap()]).unwrap();
        let w = CartierModule::find_violation(&ry, &alg2).unwrap().unwrap();
        assert_eq!(w.monomial, vec![0, 0]);
        assert!(matches!(CartierModule::validate(&ry, &alg2), Err(CartierError::InvalidStructure(_))));
    }

    #[test]
    fn restriction_keeps_the_action() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let alg = CartierAlgebraSpec::single(CartierOp::scalar(1, &parse_poly(&r, "x^2").unwrap(), 1).unwrap());
        let m = CartierModule::free(&alg);
        let n = Submodule::new(m.module(), vec![Vector::from_poly_at(&parse_poly(&r, "x").unwrap(), 0)]);
        let (sub, incl) = m.restrict(&n).unwrap();
        CartierModule::check_equivariant(&incl, &sub, &m).unwrap();
    }
}
