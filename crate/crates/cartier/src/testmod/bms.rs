use crate::error::{CartierError, Result};
use crate::fppoly::Poly;
use crate::idealkit::Ideal;
use crate::rational::{ceil_mul, periodic_form, Rat};

/// (f^u)^{[1/p^k]} through base-p digits of u.
pub fn root_of_power(f: &Poly, u: u64, k: u32) -> Result<Ideal> {
    let ring = f.ring();
    let p = ring.p as u64;
    let mut rem = u;
    let mut cur = Ideal::unit(ring);
    for _ in 0..k {
        let d = rem % p;
        rem /= p;
        cur = cur.mul_poly(&f.pow(d)?).frobenius_root(1)?;
    }
    let out = cur.mul_poly(&f.pow(rem)?);
    Ok(Ideal::new(ring, out.gb()?.to_vec()))
}

/// Stable ideal with the exponent at which stabilization was proved.
#[derive(Clone, Debug)]
pub struct BmsResult {
    pub ideal: Ideal,
    pub e: u32,
}

fn periodic_chain(f: &Poly, t: &Rat, e_max: u32, shift: i64, ascending: bool) -> Result<BmsResult> {
    if f.is_zero() {
        return Err(CartierError::InvalidArgument("the hypersurface equation must be nonzero".into()));
    }
    let ring = f.ring();
    let form = periodic_form(t, ring.p)?;
    let (a, b) = (form.big_a, form.big_b);
    let exp = |e: u32| -> Result<u64> {
        let q = ring.q(e)? as i64;
        Ok((ceil_mul(t, q) + shift).max(0) as u64)
    };
    let member = |e: u32| -> Result<Ideal> { root_of_power(f, exp(e)?, e - a) };
    let mut e = a;
    while e + b <= e_max {
        let y = member(e)?;
        let later = member(e + b)?;
        let stable = if ascending { y.contains_ideal(&later)? } else { later.contains_ideal(&y)? };
        if stable {
            return Ok(BmsResult { ideal: y.frobenius_root(a)?, e });
        }
        e += 1;
    }
    Err(CartierError::NoStabilization(e_max as usize))
}

/// tau(f^t) on the polynomial ring: the stable member of (f^{ceil(t p^e)})^{[1/p^e]}.
///
/// The members Y_e = (f^{u_e})^{[1/p^{e-A}]} for e >= A ascend and satisfy Y_{e+B} = psi(Y_e);
/// equality Y_e = Y_{e+B} therefore proves that the chain is constant from e on.
pub fn tau_bms(f: &Poly, t: &Rat, e_max: u32) -> Result<BmsResult> {
    if *t < Rat::from_integer(0) {
        return Err(CartierError::NegativeTwist(crate::rational::fmt_rat(t)));
    }
    if *t.numer() == 0 {
        return Ok(BmsResult { ideal: Ideal::unit(f.ring()), e: 0 });
    }
    periodic_chain(f, t, e_max, 0, true)
}

/// tau(f^{t - eps}) for all small eps > 0: the stable member of the descending chain
/// (f^{ceil(t p^e) - 1})^{[1/p^e]}, with the same periodicity proof.
pub fn tau_bms_left(f: &Poly, t: &Rat, e_max: u32) -> Result<BmsResult> {
    if *t <= Rat::from_integer(0) {
        return Ok(BmsResult { ideal: Ideal::unit(f.ring()), e: 0 });
    }
    periodic_chain(f, t, e_max, -1, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fppoly::{parse_poly, Ring};

    #[test]
    fn principal_monomial() {
        let r = Ring::new(2, &["y"]).unwrap();
        let y = parse_poly(&r, "y").unwrap();
        assert_eq!(tau_bms(&y, &Rat::from_integer(1), 8).unwrap().ideal.to_string(), "(y)");
        assert_eq!(tau_bms(&y, &Rat::new(1, 2), 8).unwrap().ideal.to_string(), "(1)");
        assert_eq!(tau_bms_left(&y, &Rat::from_integer(1), 8).unwrap().ideal.to_string(), "(1)");
        assert_eq!(tau_bms(&y, &Rat::new(1, 3), 8).unwrap().ideal.to_string(), "(1)");
    }

    #[test]
    fn cusp_threshold_p7() {
        let r = Ring::new(7, &["x", "y"]).unwrap();
        let f = parse_poly(&r, "x^2 + y^3").unwrap();
        let at = tau_bms(&f, &Rat::new(5, 6), 8).unwrap().ideal;
        let before = tau_bms_left(&f, &Rat::new(5, 6), 8).unwrap().ideal;
        assert!(before.is_unit().unwrap());
        assert!(!at.is_unit().unwrap());
    }
}
