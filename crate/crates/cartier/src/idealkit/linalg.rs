//! Dense linear algebra over F_p.

/// Incremental row-echelon basis that remembers how each row was formed from the inserted vectors.
pub struct Echelon {
    p: u64,
    dim: usize,
    rows: Vec<(usize, Vec<u32>, Vec<u32>)>, // (pivot column, reduced row, combination of inputs)
    inserted: usize,
}

impl Echelon {
    pub fn new(p: u32, dim: usize) -> Echelon {
        Echelon { p: p as u64, dim, rows: Vec::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn combine(&self, a: &mut [u32], b: &[u32], f: u64) {
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x = ((*x as u64 + f * *y as u64) % self.p) as u32;
        }
    }

    /// Reduces `v` against the basis. Returns the residue and the combination of inputs subtracted.
    fn residue(&self, v: &[u32], track: usize) -> (Vec<u32>, Vec<u32>) {
        let mut v = v.to_vec();
        let mut comb = vec![0u32; track];
        for (piv, row, rc) in &self.rows {
            let c = v[*piv] as u64;
            if c != 0 {
                let f = self.p - c;
                self.combine(&mut v, row, f);
                let mut rc2 = rc.clone();
                rc2.resize(track, 0);
                self.combine(&mut comb, &rc2, f);
            }
        }
        (v, comb)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.residue(v, 0).0.iter().all(|&x| x == 0)
    }

    /// Inserts `v`. On linear dependence returns coefficients c with v = sum c_i input_i.
    pub fn insert(&mut self, v: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(v.len(), self.dim);
        let idx = self.inserted;
        self.inserted += 1;
        let (mut r, mut comb) = self.residue(v, idx + 1);
        comb[idx] = 1;
        match r.iter().position(|&x| x != 0) {
            None => {
                // 0 = v + sum comb_i input_i  =>  v = -sum comb_i input_i
                self.inserted -= 1;
                let deps: Vec<u32> = comb[..idx].iter().map(|&c| ((self.p - c as u64) % self.p) as u32).collect();
                Some(deps)
            }
            Some(piv) => {
                let inv = modinv(r[piv] as u64, self.p);
                for x in r.iter_mut() {
                    *x = (*x as u64 * inv % self.p) as u32;
                }
                for x in comb.iter_mut() {
                    *x = (*x as u64 * inv % self.p) as u32;
                }
                self.rows.push((piv, r, comb));
                None
            }
        }
    }
}

pub fn modinv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        k >>= 1;
    }
    r
}

/// Rank of a matrix given by rows.
pub fn rank(p: u32, rows: &[Vec<u32>]) -> usize {
    let dim = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut e = Echelon::new(p, dim);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}
