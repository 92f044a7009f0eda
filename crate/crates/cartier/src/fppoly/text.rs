use crate::error::{CartierError, Result};

use super::poly::Poly;
use super::ring::{RingRef, ZERO_EXP};

/// Canonical text: terms in descending order, coefficients in [1, p).
pub fn format_poly(f: &Poly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let ring = f.ring();
    let mut parts = Vec::with_capacity(f.len());
    for (e, c) in f.terms() {
        let mut factors: Vec<String> = Vec::new();
        for (i, &k) in e[..ring.n()].iter().enumerate() {
            match k {
                0 => {}
                1 => factors.push(ring.vars[i].clone()),
                _ => factors.push(format!("{}^{}", ring.vars[i], k)),
            }
        }
        let s = if factors.is_empty() {
            c.to_string()
        } else if *c == 1 {
            factors.join("*")
        } else {
            format!("{}*{}", c, factors.join("*"))
        };
        parts.push(s);
    }
    parts.join(" + ")
}

pub fn parse_poly(ring: &RingRef, text: &str) -> Result<Poly> {
    let mut names: Vec<(usize, &str)> = ring.vars.iter().enumerate().map(|(i, v)| (i, v.as_str())).collect();
    names.sort_by_key(|(_, v)| std::cmp::Reverse(v.len()));
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(CartierError::Parse("empty polynomial".into()));
    }
    let mut p = Parser { ring, chars, pos: 0, names };
    let f = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(CartierError::Parse(format!("unexpected '{}' at offset {} in '{}'", p.chars[p.pos], p.pos, text)));
    }
    Ok(f)
}

struct Parser<'a> {
    ring: &'a RingRef,
    chars: Vec<char>,
    pos: usize,
    names: Vec<(usize, &'a str)>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.ring);
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(c) if c.is_alphanumeric() || c == '(' => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.integer()?;
            let k: u64 = k.parse().map_err(|_| CartierError::Parse(format!("exponent '{k}' too large")))?;
            return base.pow(k);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(CartierError::Parse(format!("expected integer at offset {start}")));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(CartierError::Parse(format!("expected ')' at offset {}", self.pos)));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.integer()?;
                let p = self.ring.p as u64;
                let v = digits.bytes().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(Poly::monomial(self.ring, ZERO_EXP, v as u32))
            }
            Some(c) if c.is_alphabetic() => {
                for &(i, name) in &self.names {
                    let n = name.chars().count();
                    if self.pos + n <= self.chars.len() && self.chars[self.pos..self.pos + n].iter().copied().eq(name.chars()) {
                        self.pos += n;
                        return Ok(Poly::var(self.ring, i));
                    }
                }
                Err(CartierError::Parse(format!("unknown variable at offset {} (ring has {:?})", self.pos, self.ring.vars)))
            }
            Some(c) => Err(CartierError::Parse(format!("unexpected '{c}' at offset {}", self.pos))),
            None => Err(CartierError::Parse("unexpected end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fppoly::Ring;

    #[test]
    fn parses_examples() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let f = parse_poly(&r, "x^2*y + 2y + 1").unwrap();
        assert_eq!(format_poly(&f), "x^2*y + 2*y + 1");
        assert_eq!(parse_poly(&r, "-y").unwrap(), parse_poly(&r, "2*y").unwrap());
        assert_eq!(parse_poly(&r, "(x+y)^3").unwrap(), parse_poly(&r, "x^3+y^3").unwrap());
        assert_eq!(parse_poly(&r, "3x").unwrap().to_string(), "0");
        assert_eq!(parse_poly(&r, "xy").unwrap().to_string(), "x*y");
    }

    #[test]
    fn longest_name_wins() {
        let r = Ring::new(5, &["x", "x1"]).unwrap();
        let f = parse_poly(&r, "x1*x").unwrap();
        assert_eq!(f.to_string(), "x*x1");
    }

    #[test]
    fn rejects_garbage() {
        let r = Ring::new(5, &["x"]).unwrap();
        assert!(parse_poly(&r, "x +").is_err());
        assert!(parse_poly(&r, "z").is_err());
        assert!(parse_poly(&r, "(x").is_err());
        assert!(parse_poly(&r, "").is_err());
    }
}
