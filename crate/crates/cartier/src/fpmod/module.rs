use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{CartierError, Result};
use crate::fppoly::{check_ring, parse_poly, Poly, RingRef};
use crate::idealkit::{colon_by_poly, colon_module, full_reduce, groebner, intersect, Ideal, LiftData, Vector};

/// R^r modulo the span of the relation vectors, kept as a reduced Gröbner basis.
pub struct PresentedModule {
    ring: RingRef,
    rank: usize,
    relations: Vec<Vector>,
}

pub type ModRef = Arc<PresentedModule>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModuleRecord {
    pub rank: usize,
    pub relations: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SubmoduleRecord {
    pub generators: Vec<Vec<String>>,
}

impl PresentedModule {
    pub fn new(ring: &RingRef, rank: usize, relations: Vec<Vector>) -> Result<ModRef> {
        for r in &relations {
            check_ring(r.ring(), ring)?;
            r.check_rank(rank)?;
        }
        let gb = groebner(ring, &relations)?;
        Ok(Arc::new(PresentedModule { ring: ring.clone(), rank, relations: gb }))
    }

    pub fn free(ring: &RingRef, rank: usize) -> ModRef {
        Arc::new(PresentedModule { ring: ring.clone(), rank, relations: Vec::new() })
    }

    /// R^r with diagonal relations I_k e_k.
    pub fn direct_sum_of_cyclics(ring: &RingRef, ideals: &[Ideal]) -> Result<ModRef> {
        let mut rels = Vec::new();
        for (k, i) in ideals.iter().enumerate() {
            for g in i.gens() {
                rels.push(Vector::from_poly_at(g, k));
            }
        }
        PresentedModule::new(ring, ideals.len(), rels)
    }

    pub fn from_record(ring: &RingRef, rec: &ModuleRecord) -> Result<ModRef> {
        let rels = rec
            .relations
            .iter()
            .map(|col| parse_vector(ring, col, rec.rank))
            .collect::<Result<Vec<_>>>()?;
        PresentedModule::new(ring, rec.rank, rels)
    }

    pub fn to_record(&self) -> ModuleRecord {
        ModuleRecord { rank: self.rank, relations: self.relations.iter().map(|v| vector_strings(v, self.rank)).collect() }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[Vector] {
        &self.relations
    }

    pub fn normal_form(&self, v: &Vector) -> Vector {
        full_reduce(v, &self.relations)
    }

    pub fn is_zero_element(&self, v: &Vector) -> bool {
        self.normal_form(v).is_zero()
    }

    pub fn same_as(&self, other: &PresentedModule) -> bool {
        self.ring == other.ring && self.rank == other.rank && self.relations == other.relations
    }

    /// ann(M) = (Rel : R^r).
    pub fn annihilator(self: &ModRef) -> Result<Ideal> {
        Submodule::whole(self).annihilator()
    }

    pub fn is_zero_module(self: &ModRef) -> Result<bool> {
        Ok((0..self.rank).all(|i| self.is_zero_element(&Vector::unit(&self.ring, i))))
    }
}

impl fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|v| v.format(self.rank)).collect();
        write!(f, "<rank {} | {}>", self.rank, rels.join(", "))
    }
}

pub fn parse_vector(ring: &RingRef, comps: &[String], rank: usize) -> Result<Vector> {
    if comps.len() != rank {
        return Err(CartierError::InvalidArgument(format!("vector has {} entries, expected {rank}", comps.len())));
    }
    let ps = comps.iter().map(|s| parse_poly(ring, s)).collect::<Result<Vec<_>>>()?;
    Ok(Vector::from_polys(ring, &ps))
}

pub fn vector_strings(v: &Vector, rank: usize) -> Vec<String> {
    v.to_polys(rank).iter().map(|p| p.to_string()).collect()
}

/// Submodule of a presented module, given by representatives in the free cover.
pub struct Submodule {
    module: ModRef,
    gens: Vec<Vector>,
    gb: OnceLock<Result<Vec<Vector>>>,
}

impl Clone for Submodule {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(v) = self.gb.get() {
            let _ = gb.set(v.clone());
        }
        Submodule { module: self.module.clone(), gens: self.gens.clone(), gb }
    }
}

impl Submodule {
    pub fn new(module: &ModRef, gens: Vec<Vector>) -> Submodule {
        let mut out: Vec<Vector> = Vec::new();
        for g in gens {
            let r = module.normal_form(&g);
            if !r.is_zero() && !out.contains(&r) {
                out.push(r);
            }
        }
        Submodule { module: module.clone(), gens: out, gb: OnceLock::new() }
    }

    pub fn try_new(module: &ModRef, gens: Vec<Vector>) -> Result<Submodule> {
        for g in &gens {
            check_ring(g.ring(), module.ring())?;
            g.check_rank(module.rank())?;
        }
        Ok(Submodule::new(module, gens))
    }

    pub fn zero(module: &ModRef) -> Submodule {
        Submodule::new(module, Vec::new())
    }

    pub fn whole(module: &ModRef) -> Submodule {
        Submodule::new(module, (0..module.rank()).map(|i| Vector::unit(module.ring(), i)).collect())
    }

    pub fn from_record(module: &ModRef, rec: &SubmoduleRecord) -> Result<Submodule> {
        let gens = rec.generators.iter().map(|c| parse_vector(module.ring(), c, module.rank())).collect::<Result<Vec<_>>>()?;
        Ok(Submodule::new(module, gens))
    }

    pub fn to_record(&self) -> Result<SubmoduleRecord> {
        let r = self.module.rank();
        Ok(SubmoduleRecord { generators: self.canonical_gens()?.iter().map(|v| vector_strings(v, r)).collect() })
    }

    pub fn module(&self) -> &ModRef {
        &self.module
    }

    pub fn ring(&self) -> &RingRef {
        self.module.ring()
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn gens(&self) -> &[Vector] {
        &self.gens
    }

    fn check_parent(&self, other: &Submodule) -> Result<()> {
        if Arc::ptr_eq(&self.module, &other.module) || self.module.same_as(&other.module) {
            Ok(())
        } else {
            Err(CartierError::InvalidArgument("submodules of different modules".into()))
        }
    }

    /// Gröbner basis of N + Rel in the free cover.
    pub fn gb(&self) -> Result<&[Vector]> {
        let r = self.gb.get_or_init(|| {
            let mut all = self.gens.clone();
            all.extend(self.module.relations().iter().cloned());
            groebner(self.module.ring(), &all)
        });
        match r {
            Ok(v) => Ok(v.as_slice()),
            Err(e) => Err(e.clone()),
        }
    }

    /// Canonical generators: the Gröbner basis of N + Rel with relation members removed.
    pub fn canonical_gens(&self) -> Result<Vec<Vector>> {
        let gb = self.gb()?;
        let mut out = Vec::new();
        for g in gb {
            let r = self.module.normal_form(g);
            if !r.is_zero() {
                out.push(r);
            }
        }
        Ok(out)
    }

    pub fn canonical(&self) -> Result<Submodule> {
        Ok(Submodule::new(&self.module, self.canonical_gens()?))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        Ok(full_reduce(v, self.gb()?).is_zero())
    }

    pub fn reduce(&self, v: &Vector) -> Result<Vector> {
        Ok(full_reduce(v, self.gb()?))
    }

    pub fn contains_sub(&self, other: &Submodule) -> Result<bool> {
        self.check_parent(other)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Submodule) -> Result<bool> {
        self.check_parent(other)?;
        Ok(self.gb()? == other.gb()?)
    }

    pub fn is_whole(&self) -> Result<bool> {
        self.contains_sub(&Submodule::whole(&self.module))
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check_parent(other)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ok(Submodule::new(&self.module, g))
    }

    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.check_parent(other)?;
        let v = intersect(self.ring(), self.gb()?, other.gb()?, self.rank())?;
        Submodule::new(&self.module, v).canonical()
    }

    pub fn mul_poly(&self, f: &Poly) -> Submodule {
        Submodule::new(&self.module, self.gens.iter().map(|g| g.mul_poly(f)).collect())
    }

    pub fn mul_ideal(&self, i: &Ideal) -> Submodule {
        let mut g = Vec::new();
        for h in i.gens() {
            for v in &self.gens {
                g.push(v.mul_poly(h));
            }
        }
        Submodule::new(&self.module, g)
    }

    /// ann(N) as an ideal of R.
    pub fn annihilator(&self) -> Result<Ideal> {
        let q = colon_module(self.ring(), self.module.relations(), &self.gens, self.rank())?;
        Ok(Ideal::new(self.ring(), q))
    }

    /// ann(self / sub): the ideal of f with f * self contained in sub.
    pub fn colon_sub(&self, sub: &Submodule) -> Result<Ideal> {
        self.check_parent(sub)?;
        let q = colon_module(self.ring(), sub.gb()?, &self.gens, self.rank())?;
        Ok(Ideal::new(self.ring(), q))
    }

    /// { m in M : f m in self }.
    pub fn colon_poly(&self, f: &Poly) -> Result<Submodule> {
        let v = colon_by_poly(self.ring(), self.gb()?, f, self.rank())?;
        Ok(Submodule::new(&self.module, v))
    }

    /// { m in M : I m in self }.
    pub fn colon_ideal(&self, i: &Ideal) -> Result<Submodule> {
        let mut acc = Submodule::whole(&self.module);
        for f in i.gb()? {
            acc = acc.intersect(&self.colon_poly(f)?)?;
        }
        Ok(acc)
    }

    /// { m in M : f^k m in self for some k }.
    pub fn saturate_poly(&self, f: &Poly) -> Result<Submodule> {
        let cap = self.ring().caps.max_chain * 4;
        let mut cur = self.clone();
        for _ in 0..cap {
            let next = cur.colon_poly(f)?;
            if next.equals(&cur)? {
                return Ok(cur);
            }
            cur = next;
        }
        Err(CartierError::NoStabilization(cap))
    }

    /// N_eta = 0, i.e. ann(N) not contained in eta.
    pub fn vanishes_at(&self, eta: &Ideal) -> Result<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        Ok(!eta.contains_ideal(&self.annihilator()?)?)
    }

    /// N_c = 0 after inverting c.
    pub fn vanishes_after_inverting(&self, c: &Poly) -> Result<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        let ann = self.annihilator()?;
        ann.saturate_elem(c)?.is_unit()
    }

    /// Presentation of N itself: R^k / syz, with the inclusion map into M.
    pub fn present(&self) -> Result<(ModRef, ModuleMap)> {
        let k = self.gens.len();
        let mut all = self.gens.clone();
        all.extend(self.module.relations().iter().cloned());
        let ld = LiftData::new(self.ring(), &all, self.rank())?;
        let rels: Vec<Vector> = ld.syzygies().iter().map(|s| s.slice(0, k)).filter(|v| !v.is_zero()).collect();
        let src = PresentedModule::new(self.ring(), k, rels)?;
        let map = ModuleMap::new(&src, &self.module, self.gens.clone())?;
        Ok((src, map))
    }

    /// Presentation of M / N.
    pub fn quotient_module(&self) -> Result<ModRef> {
        let mut rels = self.module.relations().to_vec();
        rels.extend(self.gens.iter().cloned());
        PresentedModule::new(self.ring(), self.rank(), rels)
    }

    pub fn format(&self) -> String {
        let r = self.rank();
        let g: Vec<String> = self.gens.iter().map(|v| v.format(r)).collect();
        format!("<{}>", g.join(", "))
    }
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

/// R-linear map given by the images of the free generators of the source.
#[derive(Clone)]
pub struct ModuleMap {
    source: ModRef,
    target: ModRef,
    images: Vec<Vector>,
}

impl ModuleMap {
    pub fn new(source: &ModRef, target: &ModRef, images: Vec<Vector>) -> Result<ModuleMap> {
        check_ring(source.ring(), target.ring())?;
        if images.len() != source.rank() {
            return Err(CartierError::InvalidArgument("one image per source generator required".into()));
        }
        for im in &images {
            im.check_rank(target.rank())?;
        }
        let m = ModuleMap { source: source.clone(), target: target.clone(), images };
        for rel in source.relations() {
            if !target.is_zero_element(&m.apply_free(rel)) {
                return Err(CartierError::InvalidStructure(format!(
                    "relation {} does not map to zero",
                    rel.format(source.rank())
                )));
            }
        }
        Ok(m)
    }

    pub fn identity(m: &ModRef) -> ModuleMap {
        ModuleMap { source: m.clone(), target: m.clone(), images: (0..m.rank()).map(|i| Vector::unit(m.ring(), i)).collect() }
    }

    pub fn source(&self) -> &ModRef {
        &self.source
    }

    pub fn target(&self) -> &ModRef {
        &self.target
    }

    pub fn images(&self) -> &[Vector] {
        &self.images
    }

    /// Image of a free-cover vector.
    pub fn apply_free(&self, v: &Vector) -> Vector {
        let comps = v.to_polys(self.source.rank());
        let mut acc = Vector::zero(self.source.ring());
        for (c, im) in comps.iter().zip(self.images.iter()) {
            if !c.is_zero() {
                acc = acc.add(&im.mul_poly(c));
            }
        }
        self.target.normal_form(&acc)
    }

    pub fn image(&self) -> Submodule {
        Submodule::new(&self.target, self.images.clone())
    }

    pub fn image_of(&self, n: &Submodule) -> Submodule {
        Submodule::new(&self.target, n.gens().iter().map(|g| self.apply_free(g)).collect())
    }

    pub fn kernel(&self) -> Result<Submodule> {
        let k = self.source.rank();
        let mut all = self.images.clone();
        all.extend(self.target.relations().iter().cloned());
        let ld = LiftData::new(self.source.ring(), &all, self.target.rank())?;
        let gens: Vec<Vector> = ld.syzygies().iter().map(|s| s.slice(0, k)).collect();
        Submodule::new(&self.source, gens).canonical()
    }

    pub fn cokernel(&self) -> Result<ModRef> {
        self.image().quotient_module()
    }

    /// Preimage of a submodule of the target.
    pub fn preimage(&self, n: &Submodule) -> Result<Submodule> {
        let k = self.source.rank();
        let mut all = self.images.clone();
        all.extend(n.gb()?.iter().cloned());
        let ld = LiftData::new(self.source.ring(), &all, self.target.rank())?;
        let gens: Vec<Vector> = ld.syzygies().iter().map(|s| s.slice(0, k)).collect();
        Submodule::new(&self.source, gens).canonical()
    }

    pub fn compose(&self, after: &ModuleMap) -> Result<ModuleMap> {
        let images = self.images.iter().map(|v| after.apply_free(v)).collect();
        ModuleMap::new(&self.source, &after.target, images)
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| self.target.is_zero_element(v))
    }
}
