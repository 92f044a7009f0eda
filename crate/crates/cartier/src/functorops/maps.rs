use serde::{Deserialize, Serialize};

use crate::cartiercore::CartierOp;
use crate::error::{CartierError, Result};
use crate::fppoly::{parse_poly, MonomialOrder, Poly, RingRef, ZERO_EXP};
use crate::idealkit::{Ideal, Vector};

/// Ring map description as it appears in scene files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingMap {
    Finite { adjoin: String, relation: String },
    Localize { at: String },
    AffineLine { var: String },
    /// Spec R -> point.
    ToPoint,
}

/// S = R[z]/(g) with g monic in z, modelled inside the polynomial ring R[z].
#[derive(Clone, Debug)]
pub struct FiniteExtension {
    base: RingRef,
    ring: RingRef,
    g: Poly,
    d: u32,
}

impl FiniteExtension {
    pub fn new(base: &RingRef, adjoin: &str, relation: &str) -> Result<FiniteExtension> {
        let ring = base.extended(&[adjoin], MonomialOrder::Grevlex)?;
        let z = base.n();
        let g = parse_poly(&ring, relation)?;
        let d = g.degree_in(z).unwrap_or(0);
        if d == 0 {
            return Err(CartierError::Unsupported(format!("{relation} does not involve {adjoin}")));
        }
        let lead: Vec<_> = g.terms().iter().filter(|(e, _)| e[z] == d).collect();
        if lead.len() != 1 || lead[0].0.iter().enumerate().any(|(i, &k)| i != z && k > 0) {
            return Err(CartierError::Unsupported(format!("{relation} is not monic in {adjoin}")));
        }
        let g = g.scale(ring.inv(lead[0].1));
        Ok(FiniteExtension { base: base.clone(), ring, g, d })
    }

    pub fn base(&self) -> &RingRef {
        &self.base
    }

    /// The polynomial ring R[z] that carries S-modules.
    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn relation(&self) -> &Poly {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.d as usize
    }

    fn z(&self) -> usize {
        self.base.n()
    }

    /// R -> R[z].
    pub fn lift(&self, f: &Poly) -> Result<Poly> {
        f.embed(&self.ring, &(0..self.base.n()).collect::<Vec<_>>())
    }

    pub fn lift_vector(&self, v: &Vector, rank: usize) -> Result<Vector> {
        v.map_components(rank, |f| self.lift(f)).map(|w| w.reorder(&self.ring))
    }

    pub fn z_power(&self, k: u64) -> Result<Poly> {
        Poly::var(&self.ring, self.z()).pow(k)
    }

    /// Remainder of f modulo g, as coordinates on 1, z, ..., z^{d-1} over R.
    pub fn coords(&self, f: &Poly) -> Result<Vec<Poly>> {
        let z = self.z();
        let d = self.d;
        let mut rem = f.clone();
        loop {
            let top = rem.terms().iter().filter(|(e, _)| e[z] >= d).map(|(e, c)| (*e, *c)).next();
            let Some((mut e, c)) = top else { break };
            e[z] -= d;
            rem = rem.add_scaled(&self.g, &e, self.ring.neg(c));
        }
        let mut out = vec![Vec::new(); self.degree()];
        for (e, c) in rem.terms() {
            let mut b = ZERO_EXP;
            b[..z].copy_from_slice(&e[..z]);
            out[e[z] as usize].push((b, *c));
        }
        Ok(out.into_iter().map(|t| Poly::from_terms(&self.base, t)).collect())
    }

    pub fn reduce(&self, f: &Poly) -> Result<Poly> {
        let mut acc = Poly::zero(&self.ring);
        for (i, c) in self.coords(f)?.iter().enumerate() {
            acc = acc.add(&self.lift(c)?.mul(&self.z_power(i as u64)?));
        }
        Ok(acc)
    }

    /// Matrix of multiplication by s on the basis 1, z, ..., z^{d-1}; column i is s z^i.
    pub fn multiplication_matrix(&self, s: &Poly) -> Result<Vec<Vec<Poly>>> {
        let d = self.degree();
        let mut m = vec![vec![Poly::zero(&self.base); d]; d];
        for i in 0..d {
            let col = self.coords(&s.mul(&self.z_power(i as u64)?))?;
            for (k, c) in col.into_iter().enumerate() {
                m[k][i] = c;
            }
        }
        Ok(m)
    }

    /// Trace of S over R.
    pub fn trace(&self, s: &Poly) -> Result<Poly> {
        let m = self.multiplication_matrix(s)?;
        Ok((0..self.degree()).fold(Poly::zero(&self.base), |acc, i| acc.add(&m[i][i])))
    }

    /// Primes of S over eta: minimal primes of eta S + (g).
    pub fn primes_over(&self, eta: &Ideal) -> Result<Vec<Ideal>> {
        let mut gens = eta.gens().iter().map(|f| self.lift(f)).collect::<Result<Vec<_>>>()?;
        gens.push(self.g.clone());
        let i = Ideal::new(&self.ring, gens);
        Ok(crate::idealkit::minimal_primes(&i)?.into_iter().map(|p| p.ideal).collect())
    }

    /// P intersected with R.
    pub fn contract(&self, p: &Ideal) -> Result<Ideal> {
        let elim = p.eliminate(&[self.z()])?;
        let gens = elim
            .gb()?
            .iter()
            .map(|f| Poly::from_terms(&self.base, f.terms().iter().cloned()))
            .collect();
        Ok(Ideal::new(&self.base, gens))
    }
}

/// kappa (x) s in the pulled back algebra; kappa acts over R and s lives in S.
#[derive(Clone, Debug)]
pub struct PulledElement {
    pub op: CartierOp,
    pub s: Poly,
}

/// Pullback of a Cartier algebra along a finite map, with its multiplication laws.
#[derive(Clone, Debug)]
pub struct PulledBackAlgebra {
    ext: FiniteExtension,
    generators: Vec<PulledElement>,
}

impl PulledBackAlgebra {
    pub fn new(ops: &[CartierOp], ext: &FiniteExtension) -> Result<PulledBackAlgebra> {
        let one = Poly::one(ext.ring());
        Ok(PulledBackAlgebra {
            ext: ext.clone(),
            generators: ops.iter().map(|op| PulledElement { op: op.clone(), s: one.clone() }).collect(),
        })
    }

    pub fn generators(&self) -> &[PulledElement] {
        &self.generators
    }

    pub fn extension(&self) -> &FiniteExtension {
        &self.ext
    }

    /// (kappa (x) s)(kappa' (x) t) = kappa kappa' (x) s^{p^{e'}} t.
    pub fn mul(&self, a: &PulledElement, b: &PulledElement) -> Result<PulledElement> {
        let s = self.ext.reduce(&a.s.frobenius(b.op.e())?.mul(&b.s))?;
        Ok(PulledElement { op: a.op.after(&b.op)?, s })
    }

    /// r (kappa (x) t) = kappa (x) r^{p^e} t.
    pub fn left_mul(&self, r: &Poly, a: &PulledElement) -> Result<PulledElement> {
        Ok(PulledElement { op: a.op.clone(), s: self.ext.reduce(&r.frobenius(a.op.e())?.mul(&a.s))? })
    }

    pub fn same(&self, a: &PulledElement, b: &PulledElement) -> Result<bool> {
        Ok(a.op == b.op && self.ext.reduce(&a.s.sub(&b.s))?.is_zero())
    }
}
