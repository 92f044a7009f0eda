//! The C_+ operation, twisted sums over all degrees, and the descending chain.
//!
//! For degree-one generators write D(X) for the submodule generated by all kappa(r x), x in X.
//! The degree-e twisted component applied to X is then D^e(a^{u_e} X) with u_e = ceil(t p^e),
//! and the projection formula D(g^p X) = g D(X) lets every power be split into base-p digits.
//! For principal twists with t = a / (p^A (p^B - 1)) the members Y_e = D^{e-A}(f^{u_e} X) obey
//! Y_{e+B} = psi(Y_e) with psi(Y) = D^B(f^a Y), so the infinite sum is a finite head, plus D^A
//! applied to the psi-closure of B consecutive members. Closures are ascending chains and stop
//! exactly when psi(Z) lies in Z.

use log::debug;

use crate::error::{CartierError, Result};
use crate::fpmod::Submodule;
use crate::fppoly::Poly;
use crate::idealkit::{Ideal, Vector};
use crate::rational::{ceil_mul, common_period, Rat};

use super::module::CartierModule;

/// Outcome of a sum over infinitely many degrees.
#[derive(Clone, Debug)]
pub struct TwistedSum {
    pub sub: Submodule,
    /// False only for the degree-window fallback used with non-principal twists.
    pub exact: bool,
}

const WINDOW: usize = 4;

impl CartierModule {
    /// One application of every generator to R h X: the span of all kappa(x^b h g).
    pub fn apply_step(&self, x: &Submodule, h: &Poly) -> Result<Submodule> {
        let mut out = Vec::new();
        for op in self.algebra().generators() {
            for g in x.gens() {
                out.extend(op.pieces(g, h)?.into_values());
            }
        }
        Submodule::new(self.module(), out).canonical()
    }

    /// D^k(prod f_i^{u_i} X) via base-p digits of the exponents (degree-one generators).
    pub fn step_power(&self, x: &Submodule, k: u32, factors: &[Poly], exps: &[u64]) -> Result<Submodule> {
        let p = self.ring().p as u64;
        let mut rem: Vec<u64> = exps.to_vec();
        let mut cur = x.clone();
        for _ in 0..k {
            if cur.is_zero() {
                return Ok(cur);
            }
            let mut h = Poly::one(self.ring());
            for (f, r) in factors.iter().zip(rem.iter_mut()) {
                let d = *r % p;
                if d > 0 {
                    h = h.mul(&f.pow(d)?);
                }
                *r /= p;
            }
            cur = self.apply_step(&cur, &h)?;
        }
        let mut h = Poly::one(self.ring());
        for (f, r) in factors.iter().zip(rem) {
            if r > 0 {
                h = h.mul(&f.pow(r)?);
            }
        }
        if h.is_one() {
            Ok(cur)
        } else {
            cur.mul_poly(&h).canonical()
        }
    }

    /// Smallest submodule containing X and closed under `f`, assuming f is additive on submodules.
    fn ascending_closure(&self, x: &Submodule, mut f: impl FnMut(&Submodule) -> Result<Submodule>) -> Result<Submodule> {
        let cap = self.ring().caps.max_chain;
        let mut z = x.canonical()?;
        let mut frontier = z.clone();
        for round in 0..cap {
            if frontier.is_zero() {
                return Ok(z);
            }
            let img = f(&frontier)?;
            let mut fresh = Vec::new();
            for g in img.gens() {
                if !z.contains(g)? {
                    fresh.push(g.clone());
                }
            }
            if fresh.is_empty() {
                debug!("closure stable after {round} rounds");
                return Ok(z);
            }
            frontier = Submodule::new(self.module(), fresh);
            z = z.sum(&frontier)?.canonical()?;
        }
        Err(CartierError::NoStabilization(cap))
    }

    /// The C-submodule generated by X (sum over all degrees e >= 0, untwisted, all generator degrees).
    pub fn closure_untwisted(&self, x: &Submodule) -> Result<Submodule> {
        let one = Poly::one(self.ring());
        self.ascending_closure(x, |z| self.apply_step(z, &one))
    }

    /// sum over e >= e_min of C_e a^{ceil(t p^e)} X, for the module's (possibly twisted) algebra.
    pub fn twisted_sum(&self, x: &Submodule, e_min: u32) -> Result<TwistedSum> {
        let alg = self.algebra();
        let one = Poly::one(self.ring());
        if !alg.is_twisted() {
            if e_min > 1 && !alg.all_degree_one() {
                return Err(CartierError::Unsupported("sums from degree 2 on need degree-one generators".into()));
            }
            let mut start = x.clone();
            for _ in 0..e_min {
                start = self.apply_step(&start, &one)?;
            }
            return Ok(TwistedSum { sub: self.closure_untwisted(&start)?, exact: true });
        }
        if !alg.all_degree_one() {
            return Err(CartierError::Unsupported("twisted algebras need degree-one generators".into()));
        }
        match alg.principal_twist()? {
            Some(factors) => Ok(TwistedSum { sub: self.principal_sum(x, e_min, &factors)?, exact: true }),
            None => Ok(TwistedSum { sub: self.window_sum(x, e_min)?, exact: false }),
        }
    }

    fn principal_sum(&self, x: &Submodule, e_min: u32, factors: &[(Poly, Rat)]) -> Result<Submodule> {
        let p = self.ring().p;
        let ts: Vec<Rat> = factors.iter().map(|f| f.1).collect();
        let fs: Vec<Poly> = factors.iter().map(|f| f.0.clone()).collect();
        let (big_a, big_b) = common_period(&ts, p)?;
        let pa = (p as i64).checked_pow(big_a).ok_or_else(|| CartierError::ResourceCap("period too long".into()))?;
        let pb = (p as i64).checked_pow(big_b).ok_or_else(|| CartierError::ResourceCap("period too long".into()))?;
        let a_exps: Vec<u64> = ts.iter().map(|t| (*t * Rat::from_integer(pa * (pb - 1))).to_integer() as u64).collect();
        let u = |e: u32| -> Result<Vec<u64>> {
            let q = self.ring().q(e)? as i64;
            Ok(ts.iter().map(|t| ceil_mul(t, q) as u64).collect())
        };
        let e0 = big_a.max(e_min);
        let mut total = Submodule::zero(self.module());
        for e in e_min..e0 {
            total = total.sum(&self.step_power(x, e, &fs, &u(e)?)?)?;
        }
        let mut seed = Submodule::zero(self.module());
        for j in e0..e0 + big_b {
            seed = seed.sum(&self.step_power(x, j - big_a, &fs, &u(j)?)?)?;
        }
        let closed = self.ascending_closure(&seed, |z| self.step_power(z, big_b, &fs, &a_exps))?;
        let zero_exps = vec![0u64; fs.len()];
        total = total.sum(&self.step_power(&closed, big_a, &fs, &zero_exps)?)?;
        total.canonical()
    }

    /// D^e(I X) for an ideal I, reducing with a^N = a^[p] a^{N-p} whenever N exceeds l(p-1).
    fn step_ideal_power(&self, x: &Submodule, e: u32, ideals: &[(Ideal, u64)]) -> Result<Submodule> {
        let p = self.ring().p as u64;
        let one = Poly::one(self.ring());
        let mut pending: Vec<(Ideal, u64)> = ideals.to_vec();
        let mut cur = x.clone();
        for _ in 0..e {
            let mut outside: Vec<(Ideal, u64)> = Vec::new();
            let mut inside = cur.clone();
            for (i, n) in pending.iter_mut() {
                let l = i.gens().len().max(1) as u64;
                let threshold = l * (p - 1) + 1;
                let mut m = 0;
                while *n >= threshold && *n >= p {
                    *n -= p;
                    m += 1;
                }
                if *n > 0 {
                    inside = inside.mul_ideal(&i.power(*n as u32)?);
                }
                if m > 0 {
                    outside.push((i.clone(), m));
                }
                *n = 0;
            }
            cur = self.apply_step(&inside, &one)?;
            pending = outside;
        }
        for (i, n) in pending {
            cur = cur.mul_ideal(&i.power(n as u32)?);
        }
        cur.canonical()
    }

    fn window_sum(&self, x: &Submodule, e_min: u32) -> Result<Submodule> {
        let alg = self.algebra();
        let max_e = self.ring().caps.max_e;
        let mut total = Submodule::zero(self.module());
        let mut quiet = 0;
        for e in e_min..=max_e {
            let us = alg.twist_exponents(e)?;
            let ideals: Vec<(Ideal, u64)> = alg.twist().iter().zip(us).map(|(f, u)| (f.ideal.clone(), u)).collect();
            let term = self.step_ideal_power(x, e, &ideals)?;
            if total.contains_sub(&term)? {
                quiet += 1;
                if quiet >= WINDOW {
                    break;
                }
            } else {
                quiet = 0;
                total = total.sum(&term)?.canonical()?;
            }
        }
        Ok(total)
    }

    /// C_+ N: the sum over all positive degrees.
    pub fn apply_cplus(&self, n: &Submodule) -> Result<Submodule> {
        Ok(self.twisted_sum(n, 1)?.sub)
    }

    /// Stable member of N, C_+N, C_+^2 N, ... for a stable N; returns it with the number of steps.
    pub fn stable_member(&self, n: &Submodule) -> Result<(Submodule, usize)> {
        let cap = self.ring().caps.max_chain;
        let mut cur = n.canonical()?;
        for k in 0..=cap {
            if cur.is_zero() {
                return Ok((cur, k));
            }
            let next = self.apply_cplus(&cur)?;
            if next.contains_sub(&cur)? {
                return Ok((cur, k));
            }
            if !cur.contains_sub(&next)? {
                return Err(CartierError::InvariantViolation("C_+ chain is not descending; the start is not stable".into()));
            }
            cur = next;
        }
        Err(CartierError::NoStabilization(cap))
    }

    /// The largest F-pure submodule and the exponent at which the chain stabilized.
    pub fn underline(&self) -> Result<(Submodule, usize)> {
        self.stable_member(&self.whole())
    }

    pub fn is_f_pure(&self) -> Result<bool> {
        self.apply_cplus(&self.whole())?.is_whole()
    }

    pub fn is_stable(&self, n: &Submodule) -> Result<bool> {
        n.contains_sub(&self.apply_cplus(n)?)
    }

    fn require_stable(&self, n: &Submodule) -> Result<()> {
        if self.is_stable(n)? {
            Ok(())
        } else {
            Err(CartierError::InvalidArgument("submodule is not closed under the algebra".into()))
        }
    }

    /// Nilpotence of a stable N, globally or after localizing at a prime.
    pub fn is_nilpotent(&self, n: &Submodule, at: Option<&Ideal>) -> Result<bool> {
        self.require_stable(n)?;
        let (s, _) = self.stable_member(n)?;
        match at {
            None => Ok(s.is_zero()),
            Some(eta) => s.vanishes_at(eta),
        }
    }

    /// Elementwise action of a single generator.
    pub fn act(&self, generator: usize, v: &Vector) -> Result<Vector> {
        let op = self
            .algebra()
            .generators()
            .get(generator)
            .ok_or_else(|| CartierError::InvalidArgument(format!("no generator {generator}")))?;
        Ok(self.module().normal_form(&op.apply(v, &Poly::one(self.ring()))?))
    }
}
