//! Factorization over F_p: univariate Cantor–Zassenhaus and multivariate Kronecker lifting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CartierError, Result};
use crate::fppoly::{Exp, Poly, ZERO_EXP};

/// Dense univariate polynomial, coefficients low to high, no trailing zeros.
pub type UPoly = Vec<u32>;

struct Fp {
    p: u64,
}

impl Fp {
    fn trim(&self, mut a: UPoly) -> UPoly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn add(&self, a: &[u32], b: &[u32]) -> UPoly {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| ((*a.get(i).unwrap_or(&0) as u64 + *b.get(i).unwrap_or(&0) as u64) % self.p) as u32)
            .collect();
        self.trim(v)
    }

    fn sub(&self, a: &[u32], b: &[u32]) -> UPoly {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| ((*a.get(i).unwrap_or(&0) as u64 + self.p - *b.get(i).unwrap_or(&0) as u64) % self.p) as u32)
            .collect();
        self.trim(v)
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> UPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % self.p;
            }
        }
        self.trim(out.into_iter().map(|v| v as u32).collect())
    }

    fn inv(&self, a: u32) -> u32 {
        super::linalg::modinv(a as u64, self.p) as u32
    }

    fn monic(&self, a: &[u32]) -> UPoly {
        match a.last() {
            None => Vec::new(),
            Some(&l) => {
                let i = self.inv(l) as u64;
                a.iter().map(|&c| (c as u64 * i % self.p) as u32).collect()
            }
        }
    }

    fn divrem(&self, a: &[u32], b: &[u32]) -> (UPoly, UPoly) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let db = b.len() - 1;
        let inv = self.inv(*b.last().unwrap()) as u64;
        let mut q = vec![0u32; a.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db] % self.p * inv % self.p;
            q[k] = c as u32;
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    r[k + j] = (r[k + j] + (self.p - c) * bj as u64) % self.p;
                }
            }
        }
        r.truncate(db);
        (self.trim(q), self.trim(r.into_iter().map(|v| v as u32).collect()))
    }

    fn rem(&self, a: &[u32], b: &[u32]) -> UPoly {
        self.divrem(a, b).1
    }

    fn gcd(&self, a: &[u32], b: &[u32]) -> UPoly {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    fn derivative(&self, a: &[u32]) -> UPoly {
        let v = a.iter().enumerate().skip(1).map(|(i, &c)| ((i as u64 % self.p) * c as u64 % self.p) as u32).collect();
        self.trim(v)
    }

    fn mulmod(&self, a: &[u32], b: &[u32], m: &[u32]) -> UPoly {
        self.rem(&self.mul(a, b), m)
    }

    fn powmod(&self, a: &[u32], mut k: u64, m: &[u32]) -> UPoly {
        let mut acc: UPoly = self.rem(&[1], m);
        let mut base = self.rem(a, m);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            base = self.mulmod(&base, &base, m);
            k >>= 1;
        }
        acc
    }

    fn is_one(&self, a: &[u32]) -> bool {
        a.len() == 1 && a[0] == 1
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self, a: &[u32]) -> UPoly {
        let p = self.p as usize;
        (0..a.len()).step_by(p).map(|i| a[i]).collect()
    }

    fn squarefree(&self, f: &[u32]) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        let f = self.monic(f);
        if f.len() <= 1 {
            return out;
        }
        let d = self.derivative(&f);
        let mut c = self.gcd(&f, &d);
        let mut w = self.divrem(&f, &c).0;
        let mut i = 1u32;
        while !self.is_one(&w) {
            let y = self.gcd(&w, &c);
            let fac = self.divrem(&w, &y).0;
            if fac.len() > 1 {
                out.push((fac, i));
            }
            w = y.clone();
            c = self.divrem(&c, &y).0;
            i += 1;
        }
        if c.len() > 1 {
            let root = self.pth_root(&c);
            for (g, m) in self.squarefree(&root) {
                out.push((g, m * self.p as u32));
            }
        }
        out
    }

    fn distinct_degree(&self, f: &[u32]) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        let mut fs = f.to_vec();
        let x: UPoly = vec![0, 1];
        let mut h = self.rem(&x, &fs);
        let mut i = 1;
        while fs.len() > 2 * i {
            h = self.powmod(&h, self.p, &fs);
            let g = self.gcd(&fs, &self.sub(&h, &x));
            if !self.is_one(&g) {
                fs = self.divrem(&fs, &g).0;
                h = self.rem(&h, &fs);
                out.push((g, i));
            }
            i += 1;
        }
        if fs.len() > 1 {
            let d = fs.len() - 1;
            out.push((self.monic(&fs), d));
        }
        out
    }

    fn equal_degree(&self, f: &[u32], d: usize, rng: &mut ChaCha8Rng) -> Vec<UPoly> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let r = n / d;
        let mut factors = vec![f.to_vec()];
        let mut attempts = 0;
        while factors.len() < r {
            attempts += 1;
            assert!(attempts < 10_000, "equal-degree splitting did not converge");
            let h: UPoly = self.trim((0..n).map(|_| rng.gen_range(0..self.p) as u32).collect());
            if h.len() <= 1 {
                continue;
            }
            let g = if self.p == 2 {
                let mut t = self.rem(&h, f);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = self.mulmod(&t, &t, f);
                    acc = self.add(&acc, &t);
                }
                acc
            } else {
                // h^((p^d - 1)/2) = (prod_{i<d} h^(p^i))^((p-1)/2)
                let mut t = self.rem(&h, f);
                let mut prod = t.clone();
                for _ in 1..d {
                    t = self.powmod(&t, self.p, f);
                    prod = self.mulmod(&prod, &t, f);
                }
                let pw = self.powmod(&prod, (self.p - 1) / 2, f);
                self.sub(&pw, &[1])
            };
            let mut next = Vec::new();
            for u in factors {
                if u.len() - 1 > d {
                    let gu = self.gcd(&g, &u);
                    if !self.is_one(&gu) && gu.len() != u.len() {
                        let other = self.divrem(&u, &gu).0;
                        next.push(gu);
                        next.push(self.monic(&other));
                        continue;
                    }
                }
                next.push(u);
            }
            factors = next;
        }
        factors
    }
}

/// Monic irreducible factors with multiplicity, sorted by (degree, coefficients).
pub fn factor_univariate(p: u32, f: &[u32], seed: u64) -> Vec<(UPoly, u32)> {
    let fp = Fp { p: p as u64 };
    let f = fp.trim(f.to_vec());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (sf, m) in fp.squarefree(&f) {
        for (g, d) in fp.distinct_degree(&sf) {
            for h in fp.equal_degree(&g, d, &mut rng) {
                out.push((h, m));
            }
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

pub fn is_irreducible_univariate(p: u32, f: &[u32]) -> bool {
    let fs = factor_univariate(p, f, 0);
    fs.len() == 1 && fs[0].1 == 1
}

const MAX_KRONECKER_DEGREE: u64 = 4096;
const MAX_RECOMBINATION_FACTORS: usize = 18;

/// Irreducible factors of a multivariate polynomial with multiplicities (constants dropped).
/// Each factor is made monic.
pub fn factor_poly(f: &Poly, seed: u64) -> Result<Vec<(Poly, u32)>> {
    let ring = f.ring().clone();
    let n = ring.n();
    let mut out: Vec<(Poly, u32)> = Vec::new();
    if f.is_zero() {
        return Err(CartierError::InvalidArgument("cannot factor the zero polynomial".into()));
    }
    let content = f.monomial_content();
    for i in 0..n {
        if content[i] > 0 {
            out.push((Poly::var(&ring, i), content[i]));
        }
    }
    let mut g = f.divide_exact(&Poly::monomial(&ring, content, 1))?.expect("monomial content divides");
    if g.is_constant() {
        return Ok(sort_factors(out));
    }
    // Kronecker weights
    let degs: Vec<u32> = (0..n).map(|i| g.degree_in(i).unwrap_or(0)).collect();
    let mut w = vec![1u64; n];
    for i in 1..n {
        w[i] = w[i - 1] * (degs[i - 1] as u64 + 1);
    }
    let total: u64 = (0..n).map(|i| degs[i] as u64 * w[i]).sum();
    if total > MAX_KRONECKER_DEGREE {
        return Err(CartierError::ResourceCap(format!("Kronecker degree {total} exceeds {MAX_KRONECKER_DEGREE}")));
    }
    let kron = |h: &Poly| -> UPoly {
        let mut v = vec![0u32; total as usize + 1];
        for (e, c) in h.terms() {
            let k: u64 = (0..n).map(|i| e[i] as u64 * w[i]).sum();
            v[k as usize] = *c;
        }
        Fp { p: ring.p as u64 }.trim(v)
    };
    let inv_kron = |u: &[u32]| -> Option<Poly> {
        let mut terms = Vec::new();
        for (k, &c) in u.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut rest = k as u64;
            let mut e: Exp = ZERO_EXP;
            for i in (0..n).rev() {
                e[i] = (rest / w[i]) as u32;
                rest %= w[i];
                if e[i] > degs[i] {
                    return None;
                }
            }
            terms.push((e, c));
        }
        Some(Poly::from_terms(&ring, terms))
    };

    let fp = Fp { p: ring.p as u64 };
    let mut pieces: Vec<UPoly> = Vec::new();
    for (h, m) in factor_univariate(ring.p, &kron(&g), seed) {
        for _ in 0..m {
            pieces.push(h.clone());
        }
    }
    if pieces.len() > MAX_RECOMBINATION_FACTORS {
        return Err(CartierError::ResourceCap(format!("{} univariate factors exceed recombination cap", pieces.len())));
    }
    'outer: while !g.is_constant() {
        let k = pieces.len();
        for size in 1..=k {
            for subset in Subsets::new(k, size) {
                let prod = subset.iter().fold(vec![1u32], |acc, &i| fp.mul(&acc, &pieces[i]));
                let Some(cand) = inv_kron(&prod) else { continue };
                if cand.is_constant() {
                    continue;
                }
                if let Some(q) = g.divide_exact(&cand)? {
                    let cand = cand.monic();
                    let mut mult = 1u32;
                    g = q;
                    while let Some(q2) = g.divide_exact(&cand)? {
                        g = q2;
                        mult += 1;
                    }
                    // remove `mult` copies of the subset from the pieces
                    let kc = kron(&cand);
                    for _ in 0..mult {
                        let mut rest = kc.clone();
                        let mut keep = Vec::new();
                        for pc in pieces.drain(..) {
                            let (qq, rr) = fp.divrem(&rest, &pc);
                            if rr.is_empty() && rest.len() > 1 {
                                rest = qq;
                            } else {
                                keep.push(pc);
                            }
                        }
                        pieces = keep;
                    }
                    out.push((cand, mult));
                    continue 'outer;
                }
            }
        }
        return Err(CartierError::InvariantViolation(format!("Kronecker recombination failed for {g}")));
    }
    Ok(sort_factors(out))
}

fn sort_factors(mut v: Vec<(Poly, u32)>) -> Vec<(Poly, u32)> {
    v.sort_by(|a, b| {
        let ka = (a.0.total_degree(), a.0.to_string());
        let kb = (b.0.total_degree(), b.0.to_string());
        ka.cmp(&kb)
    });
    v
}

pub fn is_irreducible(f: &Poly) -> Result<bool> {
    if f.is_constant() {
        return Ok(false);
    }
    let fs = factor_poly(f, 0)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

struct Subsets {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Subsets {
        Subsets { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let cur = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(cur)
    }
}

/// Convert a univariate UPoly into a polynomial in variable `var`.
pub fn upoly_to_poly(u: &[u32], ring: &crate::fppoly::RingRef, var: usize) -> Poly {
    let terms = u.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| {
        let mut e = ZERO_EXP;
        e[var] = k as u32;
        (e, c)
    });
    Poly::from_terms(ring, terms)
}

/// Evaluate a univariate polynomial at an element of R.
pub fn upoly_eval(u: &[u32], at: &Poly) -> Poly {
    let ring = at.ring();
    let mut acc = Poly::zero(ring);
    for &c in u.iter().rev() {
        acc = acc.mul(at).add(&Poly::constant(ring, c as i64));
    }
    acc
}
