use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CartierError, Result};

/// Maximum number of variables any ring may carry.
pub const MAX_VARS: usize = 6;

/// Exponent vector. Entries past the ring's variable count are always zero.
pub type Exp = [u32; MAX_VARS];

pub const ZERO_EXP: Exp = [0; MAX_VARS];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum MonomialOrder {
    #[default]
    Grevlex,
    Lex,
    /// Block order: the first `k` variables (grevlex) dominate the rest (grevlex).
    Elim(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Caps {
    pub max_vars: usize,
    pub max_e: u32,
    pub max_degree: u32,
    pub max_pairs: usize,
    pub max_chain: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_vars: MAX_VARS, max_e: 6, max_degree: 4096, max_pairs: 200_000, max_chain: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    pub p: u32,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    pub caps: Caps,
}

pub type RingRef = Arc<Ring>;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn new(p: u32, vars: &[&str]) -> Result<RingRef> {
        Self::with_order(p, vars.iter().map(|s| s.to_string()).collect(), MonomialOrder::Grevlex, Caps::default())
    }

    pub fn with_order(p: u32, vars: Vec<String>, order: MonomialOrder, caps: Caps) -> Result<RingRef> {
        if !is_prime(p) || p > 65536 {
            return Err(CartierError::InvalidArgument(format!("{p} is not a prime in [2, 2^16]")));
        }
        if vars.len() > caps.max_vars.min(MAX_VARS) {
            return Err(CartierError::ResourceCap(format!("{} variables exceed cap {}", vars.len(), caps.max_vars)));
        }
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || !v.chars().next().unwrap().is_alphabetic() || !v.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(CartierError::InvalidArgument(format!("bad variable name '{v}'")));
            }
            if vars[..i].contains(v) {
                return Err(CartierError::InvalidArgument(format!("duplicate variable '{v}'")));
            }
        }
        if let MonomialOrder::Elim(k) = order {
            if k > vars.len() {
                return Err(CartierError::InvalidArgument("elimination block larger than ring".into()));
            }
        }
        Ok(Arc::new(Ring { p, vars, order, caps }))
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    /// Same variables and characteristic under a different order.
    pub fn reordered(&self, order: MonomialOrder) -> RingRef {
        Arc::new(Ring { order, ..self.clone() })
    }

    /// Ring with extra variables appended (keeps p, caps and grevlex).
    pub fn extended(&self, extra: &[&str], order: MonomialOrder) -> Result<RingRef> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|s| s.to_string()));
        Ring::with_order(self.p, vars, order, self.caps.clone())
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// p^e with cap checks.
    pub fn q(&self, e: u32) -> Result<u64> {
        if e > self.caps.max_e {
            return Err(CartierError::ResourceCap(format!("e = {e} exceeds cap {}", self.caps.max_e)));
        }
        let q = (self.p as u64).checked_pow(e).ok_or_else(|| CartierError::ResourceCap("p^e overflows".into()))?;
        if q > u32::MAX as u64 / 2 {
            return Err(CartierError::ResourceCap(format!("p^e = {q} too large")));
        }
        Ok(q)
    }

    pub fn check_degree(&self, d: u64) -> Result<()> {
        if d > self.caps.max_degree as u64 {
            return Err(CartierError::ResourceCap(format!("degree {d} exceeds cap {}", self.caps.max_degree)));
        }
        Ok(())
    }

    // ---- coefficient arithmetic in F_p ----

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        ((a as u64 + p - b as u64) % p) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_p");
        self.pow_coeff(a, self.p - 2)
    }

    pub fn pow_coeff(&self, a: u32, mut k: u32) -> u32 {
        let p = self.p as u64;
        let mut base = a as u64 % p;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            k >>= 1;
        }
        acc as u32
    }

    pub fn reduce_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    // ---- monomials ----

    #[inline]
    pub fn deg(&self, a: &Exp) -> u64 {
        a[..self.n()].iter().map(|&x| x as u64).sum()
    }

    #[inline]
    pub fn cmp_exp(&self, a: &Exp, b: &Exp) -> Ordering {
        let n = self.n();
        match self.order {
            MonomialOrder::Grevlex => grevlex(&a[..n], &b[..n]),
            MonomialOrder::Lex => a[..n].cmp(&b[..n]),
            MonomialOrder::Elim(k) => grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..n], &b[k..n])),
        }
    }
}

#[inline]
fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

#[inline]
pub fn exp_divides(a: &Exp, b: &Exp) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

#[inline]
pub fn exp_add(a: &Exp, b: &Exp) -> Exp {
    let mut r = ZERO_EXP;
    for i in 0..MAX_VARS {
        r[i] = a[i] + b[i];
    }
    r
}

#[inline]
pub fn exp_sub(a: &Exp, b: &Exp) -> Exp {
    let mut r = ZERO_EXP;
    for i in 0..MAX_VARS {
        r[i] = a[i] - b[i];
    }
    r
}

#[inline]
pub fn exp_lcm(a: &Exp, b: &Exp) -> Exp {
    let mut r = ZERO_EXP;
    for i in 0..MAX_VARS {
        r[i] = a[i].max(b[i]);
    }
    r
}

#[inline]
pub fn exp_scale(a: &Exp, k: u32) -> Exp {
    let mut r = ZERO_EXP;
    for i in 0..MAX_VARS {
        r[i] = a[i] * k;
    }
    r
}

pub fn exp_is_zero(a: &Exp) -> bool {
    a.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_rings() {
        assert!(Ring::new(4, &["x"]).is_err());
        assert!(Ring::new(2, &["x", "x"]).is_err());
        assert!(Ring::new(2, &["a", "b", "c", "d", "e", "f", "g"]).is_err());
        assert!(Ring::new(65537, &["x"]).is_err());
        assert!(Ring::new(2, &[]).is_ok());
    }

    #[test]
    fn grevlex_order() {
        let r = Ring::new(3, &["x", "y", "z"]).unwrap();
        let e = |a: u32, b: u32, c: u32| -> Exp { [a, b, c, 0, 0, 0] };
        assert_eq!(r.cmp_exp(&e(1, 0, 0), &e(0, 1, 0)), Ordering::Greater);
        assert_eq!(r.cmp_exp(&e(0, 2, 0), &e(1, 0, 1)), Ordering::Greater);
        assert_eq!(r.cmp_exp(&e(0, 0, 3), &e(1, 0, 0)), Ordering::Greater);
    }

    #[test]
    fn field_inverse() {
        let r = Ring::new(65521, &["x"]).unwrap();
        for a in [1u32, 2, 17, 65520] {
            assert_eq!(r.mul(a, r.inv(a)), 1);
        }
    }
}
