use serde::{Deserialize, Serialize};

use crate::error::{CartierError, Result};
use crate::fppoly::{Poly, RingRef};
use crate::idealkit::Ideal;
use crate::rational::{ceil_mul, fmt_rat, is_nonneg, parse_rat, Rat};

use super::op::{CartierOp, OpRecord};

/// One factor a^t of a (possibly mixed) twist.
#[derive(Clone, Debug)]
pub struct TwistFactor {
    pub ideal: Ideal,
    pub t: Rat,
}

/// Finitely generated Cartier algebra, optionally twisted by a product of ideal powers.
#[derive(Clone, Debug)]
pub struct CartierAlgebraSpec {
    generators: Vec<CartierOp>,
    twist: Vec<TwistFactor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRecord {
    pub ideal: Vec<String>,
    pub t: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraRecord {
    pub generators: Vec<OpRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twist: Vec<TwistRecord>,
}

impl CartierAlgebraSpec {
    pub fn new(generators: Vec<CartierOp>) -> Result<CartierAlgebraSpec> {
        let first = generators.first().ok_or_else(|| CartierError::InvalidArgument("an algebra needs at least one generator".into()))?;
        let r = first.rank();
        for g in &generators {
            if g.rank() != r {
                return Err(CartierError::InvalidArgument("generators act on different ranks".into()));
            }
            crate::fppoly::check_ring(first.ring(), g.ring())?;
        }
        Ok(CartierAlgebraSpec { generators, twist: Vec::new() })
    }

    pub fn single(op: CartierOp) -> CartierAlgebraSpec {
        CartierAlgebraSpec { generators: vec![op], twist: Vec::new() }
    }

    /// Adds a factor a^t to the twist; the degree-e component becomes C_e a^{ceil(t p^e)}.
    pub fn twisted(&self, ideal: &Ideal, t: Rat) -> Result<CartierAlgebraSpec> {
        if !is_nonneg(&t) {
            return Err(CartierError::NegativeTwist(fmt_rat(&t)));
        }
        crate::fppoly::check_ring(self.ring(), ideal.ring())?;
        let mut out = self.clone();
        out.twist.push(TwistFactor { ideal: ideal.clone(), t });
        Ok(out)
    }

    pub fn untwisted(&self) -> CartierAlgebraSpec {
        CartierAlgebraSpec { generators: self.generators.clone(), twist: Vec::new() }
    }

    /// Subalgebra generated by the listed generators, keeping the twist.
    pub fn subalgebra(&self, keep: &[usize]) -> Result<CartierAlgebraSpec> {
        let gens: Vec<CartierOp> = keep.iter().filter_map(|&i| self.generators.get(i).cloned()).collect();
        let mut out = CartierAlgebraSpec::new(gens)?;
        out.twist = self.twist.clone();
        Ok(out)
    }

    pub fn with_generators(&self, generators: Vec<CartierOp>) -> Result<CartierAlgebraSpec> {
        let mut out = CartierAlgebraSpec::new(generators)?;
        out.twist = self.twist.clone();
        Ok(out)
    }

    pub fn ring(&self) -> &RingRef {
        self.generators[0].ring()
    }

    pub fn rank(&self) -> usize {
        self.generators[0].rank()
    }

    pub fn generators(&self) -> &[CartierOp] {
        &self.generators
    }

    pub fn twist(&self) -> &[TwistFactor] {
        &self.twist
    }

    /// True when some factor actually restricts the algebra.
    pub fn is_twisted(&self) -> bool {
        self.twist.iter().any(|f| *f.t.numer() != 0)
    }

    pub fn all_degree_one(&self) -> bool {
        self.generators.iter().all(|g| g.e() == 1)
    }

    /// ceil(t p^e) for each factor.
    pub fn twist_exponents(&self, e: u32) -> Result<Vec<u64>> {
        let q = self.ring().q(e)? as i64;
        Ok(self.twist.iter().map(|f| ceil_mul(&f.t, q) as u64).collect())
    }

    /// The ideal a_1^{u_1} ... a_m^{u_m} multiplying the degree-e component.
    pub fn twist_ideal(&self, e: u32) -> Result<Ideal> {
        let us = self.twist_exponents(e)?;
        let mut acc = Ideal::unit(self.ring());
        for (f, u) in self.twist.iter().zip(us) {
            if u > 0 {
                let pw = f.ideal.power(u32::try_from(u).map_err(|_| CartierError::ResourceCap("twist exponent too large".into()))?)?;
                acc = acc.product(&pw)?;
            }
        }
        Ok(acc)
    }

    /// Single generators of every twist ideal, if all of them are principal.
    pub fn principal_twist(&self) -> Result<Option<Vec<(Poly, Rat)>>> {
        let mut out = Vec::new();
        for f in &self.twist {
            if *f.t.numer() == 0 {
                continue;
            }
            let gb = f.ideal.gb()?;
            match gb.len() {
                0 => out.push((Poly::zero(self.ring()), f.t)),
                1 => out.push((gb[0].clone(), f.t)),
                _ => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    pub fn from_record(ring: &RingRef, rec: &AlgebraRecord) -> Result<CartierAlgebraSpec> {
        let gens = rec.generators.iter().map(|g| CartierOp::from_record(ring, g)).collect::<Result<Vec<_>>>()?;
        let mut out = CartierAlgebraSpec::new(gens)?;
        for tw in &rec.twist {
            let refs: Vec<&str> = tw.ideal.iter().map(|s| s.as_str()).collect();
            out = out.twisted(&Ideal::parse(ring, &refs)?, parse_rat(&tw.t)?)?;
        }
        Ok(out)
    }

    pub fn to_record(&self) -> Result<AlgebraRecord> {
        let twist = self
            .twist
            .iter()
            .map(|f| Ok(TwistRecord { ideal: f.ideal.canonical_strings()?, t: fmt_rat(&f.t) }))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraRecord { generators: self.generators.iter().map(|g| g.to_record()).collect(), twist })
    }
}
