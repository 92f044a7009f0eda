use crate::cartiercore::{sort_primes, CartierModule};
use crate::error::{CartierError, Result};
use crate::fpmod::{module_ass, torsion_of, Submodule};
use crate::fppoly::Poly;
use crate::idealkit::{Ideal, LiftData, PrimeIdeal, Vector};
use crate::testmod::TauOptions;

/// m / c^k with k minimal.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalElement {
    pub numerator: Vector,
    pub k: u32,
}

/// M_c for a Cartier module M over R. Submodules of M_c are stored through their contractions,
/// which are exactly the c-saturated submodules of M.
#[derive(Clone, Debug)]
pub struct LocalizedModule {
    base: CartierModule,
    c: Poly,
}

pub fn shriek_localize(cm: &CartierModule, c: &Poly) -> Result<LocalizedModule> {
    if c.is_zero() {
        return Err(CartierError::InvalidArgument("cannot invert zero".into()));
    }
    if cm.algebra().is_twisted() {
        return Err(CartierError::Unsupported("localization is built for untwisted algebras".into()));
    }
    Ok(LocalizedModule { base: cm.clone(), c: c.clone() })
}

impl LocalizedModule {
    pub fn base(&self) -> &CartierModule {
        &self.base
    }

    pub fn c(&self) -> &Poly {
        &self.c
    }

    /// Contraction of N_c.
    pub fn saturate(&self, n: &Submodule) -> Result<Submodule> {
        if self.c.is_constant() {
            return n.canonical();
        }
        n.saturate_poly(&self.c)?.canonical()
    }

    pub fn whole(&self) -> Result<Submodule> {
        self.saturate(&self.base.whole())
    }

    /// Contraction of the zero submodule: the c-power torsion of M.
    pub fn zero(&self) -> Result<Submodule> {
        self.saturate(&self.base.zero())
    }

    pub fn same(&self, a: &Submodule, b: &Submodule) -> Result<bool> {
        self.saturate(a)?.equals(&self.saturate(b)?)
    }

    pub fn cplus(&self, n: &Submodule) -> Result<Submodule> {
        self.saturate(&self.base.apply_cplus(&self.saturate(n)?)?)
    }

    pub fn stable_member(&self, n: &Submodule) -> Result<Submodule> {
        let cap = self.base.ring().caps.max_chain;
        let mut cur = self.saturate(n)?;
        for _ in 0..=cap {
            let next = self.cplus(&cur)?;
            if next.contains_sub(&cur)? {
                return Ok(cur);
            }
            cur = next;
        }
        Err(CartierError::NoStabilization(cap))
    }

    pub fn underline(&self) -> Result<Submodule> {
        self.stable_member(&self.base.whole())
    }

    pub fn is_f_pure(&self) -> Result<bool> {
        self.cplus(&self.base.whole())?.contains_sub(&self.whole()?)
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        self.underline()?.equals(&self.zero()?)
    }

    /// Cartier-associated primes of M_c, computed on the saturated underline.
    pub fn ass_cartier(&self, candidates: &[Ideal]) -> Result<Vec<PrimeIdeal>> {
        let under = self.underline()?;
        let zero = self.zero()?;
        let mut out = Vec::new();
        for eta in module_ass(&under, candidates)? {
            if eta.ideal.contains(&self.c)? {
                continue;
            }
            let piece = self.torsion_piece(&under, &eta.ideal)?;
            if !piece.equals(&zero)? && !self.quotient_vanishes_at(&piece, &zero, &eta.ideal)? {
                out.push(eta);
            }
        }
        sort_primes(&mut out)?;
        Ok(out)
    }

    fn quotient_vanishes_at(&self, a: &Submodule, b: &Submodule, eta: &Ideal) -> Result<bool> {
        Ok(!eta.contains_ideal(&a.colon_sub(b)?)?)
    }

    fn torsion_piece(&self, under: &Submodule, eta: &Ideal) -> Result<Submodule> {
        self.stable_member(&torsion_of(under, eta)?)
    }

    /// tau(M_c): test elements are certified on M with c inverted as well.
    pub fn tau(&self, opts: &TauOptions) -> Result<Submodule> {
        let under = self.underline()?;
        let base_under = self.base.underline()?.0;
        let untwisted = &self.base;
        let mut total = self.zero()?;
        for eta in self.ass_cartier(&opts.candidates)? {
            let piece = self.torsion_piece(&under, &eta.ideal)?;
            let base_piece = self.base.torsion_part(&base_under, &eta.ideal)?;
            let cands = crate::testmod::candidate_elements(untwisted, &base_piece, opts.seed)?;
            let found = crate::testmod::search_test_element(untwisted, &base_piece, &eta.ideal, &cands, &self.c)?.map(|(c, _)| c);
            let c = found.ok_or_else(|| CartierError::SearchExhausted(format!("no test element for {} after localizing", eta.ideal)))?;
            let sum = self.base.twisted_sum(&piece.mul_poly(&c), opts.e0)?;
            total = total.sum(&sum.sub)?;
        }
        self.saturate(&total)
    }

    pub fn is_f_regular(&self, opts: &TauOptions) -> Result<bool> {
        Ok(self.is_f_pure()? && self.tau(opts)?.contains_sub(&self.whole()?)?)
    }

    /// Divides out c as long as the numerator stays in c M modulo c-torsion.
    pub fn normalize(&self, numerator: &Vector, k: u32) -> Result<LocalElement> {
        let ring = self.base.ring().clone();
        let r = self.base.rank();
        let torsion = self.zero()?;
        let mut gens: Vec<Vector> = (0..r).map(|i| Vector::unit(&ring, i).mul_poly(&self.c)).collect();
        gens.extend(torsion.gens().iter().cloned());
        gens.extend(self.base.module().relations().iter().cloned());
        let ld = LiftData::new(&ring, &gens, r)?;
        let mut num = self.base.module().normal_form(numerator);
        let mut k = k;
        while k > 0 && !self.c.is_constant() {
            let Some(coef) = ld.lift(&num) else { break };
            num = self.base.module().normal_form(&Vector::from_polys(&ring, &coef[..r]));
            k -= 1;
        }
        Ok(LocalElement { numerator: num, k })
    }

    /// kappa(m / c^k) = kappa(c^{k(q-1)} m) / c^k.
    pub fn act(&self, generator: usize, x: &LocalElement) -> Result<LocalElement> {
        let op = self
            .base
            .algebra()
            .generators()
            .get(generator)
            .ok_or_else(|| CartierError::InvalidArgument(format!("no generator {generator}")))?;
        let q = self.base.ring().q(op.e())?;
        let h = self.c.pow(x.k as u64 * (q - 1))?;
        let v = op.apply(&x.numerator, &h)?;
        self.normalize(&v, x.k)
    }
}
