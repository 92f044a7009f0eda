//! Exact rational thresholds and their base-p structure.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{CartierError, Result};

pub type Rat = Ratio<i64>;

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || CartierError::Parse(format!("bad rational '{s}'"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        Ok(Rat::new(a, b))
    } else {
        Ok(Rat::from_integer(s.parse().map_err(|_| bad())?))
    }
}

pub fn fmt_rat(t: &Rat) -> String {
    if *t.denom() == 1 {
        t.numer().to_string()
    } else {
        format!("{}/{}", t.numer(), t.denom())
    }
}

/// ceil(t * m) exactly.
pub fn ceil_mul(t: &Rat, m: i64) -> i64 {
    let num = *t.numer() as i128 * m as i128;
    let den = *t.denom() as i128;
    num.div_euclid(den) as i64 + if num.rem_euclid(den) != 0 { 1 } else { 0 }
}

pub fn floor_rat(t: &Rat) -> i64 {
    t.numer().div_euclid(*t.denom())
}

/// Multiplicative order of p modulo m (m coprime to p, m >= 1).
pub fn mult_order(p: i64, m: i64) -> i64 {
    if m == 1 {
        return 1;
    }
    let mut k = 1;
    let mut v = p.rem_euclid(m);
    while v != 1 {
        v = v * p % m;
        k += 1;
    }
    k
}

/// Writes t = a / (p^A (p^B - 1)) with A minimal and B the order of p modulo the p-free part of the denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicForm {
    pub a: i64,
    pub big_a: u32,
    pub big_b: u32,
}

pub fn periodic_form(t: &Rat, p: u32) -> Result<PeriodicForm> {
    let p64 = p as i64;
    let mut den = *t.denom();
    let mut big_a = 0u32;
    while den % p64 == 0 {
        den /= p64;
        big_a += 1;
    }
    let big_b = mult_order(p64, den) as u32;
    let pa = p64.checked_pow(big_a).ok_or_else(|| CartierError::ResourceCap("threshold denominator too large".into()))?;
    let pb = p64.checked_pow(big_b).ok_or_else(|| CartierError::ResourceCap("threshold period too large".into()))?;
    let full = pa.checked_mul(pb - 1).ok_or_else(|| CartierError::ResourceCap("threshold denominator too large".into()))?;
    let a = (*t * Rat::from_integer(full)).to_integer();
    Ok(PeriodicForm { a, big_a, big_b })
}

/// Common (A, B) for several thresholds: max of A, lcm of B.
pub fn common_period(ts: &[Rat], p: u32) -> Result<(u32, u32)> {
    let mut big_a = 0u32;
    let mut big_b = 1u32;
    for t in ts {
        let f = periodic_form(t, p)?;
        big_a = big_a.max(f.big_a);
        big_b = big_b.lcm(&f.big_b);
    }
    Ok((big_a, big_b))
}

pub fn to_f64(t: &Rat) -> f64 {
    t.to_f64().unwrap_or(f64::NAN)
}

pub fn is_nonneg(t: &Rat) -> bool {
    *t >= Rat::zero()
}
