use crate::error::{CartierError, Result};
use crate::idealkit::Ideal;

use super::module::{ModRef, Submodule};

/// H^0_I(M) together with the certified exponent k (I^k kills it).
pub fn torsion(m: &ModRef, i: &Ideal) -> Result<(Submodule, usize)> {
    let cap = m.ring().caps.max_chain;
    let mut cur = Submodule::zero(m);
    for k in 0..=cap {
        let next = cur.colon_ideal(i)?;
        if next.equals(&cur)? {
            return Ok((cur.canonical()?, k));
        }
        cur = next;
    }
    Err(CartierError::NoStabilization(cap))
}

/// H^0_I(N) = N ∩ H^0_I(M).
pub fn torsion_of(n: &Submodule, i: &Ideal) -> Result<Submodule> {
    let (t, _) = torsion(n.module(), i)?;
    n.intersect(&t)
}
