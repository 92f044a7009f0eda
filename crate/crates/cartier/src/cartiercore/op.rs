use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CartierError, Result};
use crate::fppoly::{cartier_trace, check_ring, parse_poly, pe_decompose, Exp, Poly, RingRef};
use crate::idealkit::Vector;

/// A homogeneous operator of degree `e` acting on R^r by v -> Lambda_e(U v), entrywise.
#[derive(Clone, Debug, PartialEq)]
pub struct CartierOp {
    e: u32,
    matrix: Vec<Vec<Poly>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpRecord {
    pub e: u32,
    pub matrix: Vec<Vec<String>>,
}

impl CartierOp {
    pub fn new(e: u32, matrix: Vec<Vec<Poly>>) -> Result<CartierOp> {
        if e == 0 {
            return Err(CartierError::InvalidArgument("structural operators need degree e >= 1".into()));
        }
        let r = matrix.len();
        if r == 0 {
            return Err(CartierError::InvalidArgument("empty operator matrix".into()));
        }
        let ring = matrix[0].first().map(|f| f.ring().clone()).ok_or_else(|| CartierError::InvalidArgument("empty row".into()))?;
        for row in &matrix {
            if row.len() != r {
                return Err(CartierError::InvalidArgument(format!("operator matrix must be square, got a row of length {} for rank {r}", row.len())));
            }
            for f in row {
                check_ring(&ring, f.ring())?;
            }
        }
        ring.q(e)?;
        Ok(CartierOp { e, matrix })
    }

    /// Diagonal operator diag(f, ..., f).
    pub fn scalar(e: u32, f: &Poly, rank: usize) -> Result<CartierOp> {
        let z = Poly::zero(f.ring());
        let m = (0..rank).map(|i| (0..rank).map(|j| if i == j { f.clone() } else { z.clone() }).collect()).collect();
        CartierOp::new(e, m)
    }

    pub fn diagonal(e: u32, fs: &[Poly]) -> Result<CartierOp> {
        let ring = fs.first().ok_or_else(|| CartierError::InvalidArgument("empty diagonal".into()))?.ring().clone();
        let z = Poly::zero(&ring);
        let m = (0..fs.len()).map(|i| (0..fs.len()).map(|j| if i == j { fs[i].clone() } else { z.clone() }).collect()).collect();
        CartierOp::new(e, m)
    }

    pub fn from_record(ring: &RingRef, rec: &OpRecord) -> Result<CartierOp> {
        let m = rec
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| parse_poly(ring, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        CartierOp::new(rec.e, m)
    }

    pub fn to_record(&self) -> OpRecord {
        OpRecord { e: self.e, matrix: self.matrix.iter().map(|row| row.iter().map(|f| f.to_string()).collect()).collect() }
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn ring(&self) -> &RingRef {
        self.matrix[0][0].ring()
    }

    pub fn matrix(&self) -> &[Vec<Poly>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.matrix[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|row| row.iter().all(|f| f.is_zero()))
    }

    /// U * (h v) as a list of components.
    pub fn premultiplied(&self, v: &Vector, h: &Poly) -> Vec<Poly> {
        let r = self.rank();
        let comps = v.to_polys(r);
        (0..r)
            .map(|i| {
                let mut acc = Poly::zero(self.ring());
                for (j, c) in comps.iter().enumerate() {
                    if !c.is_zero() && !self.matrix[i][j].is_zero() {
                        acc = acc.add(&self.matrix[i][j].mul(c));
                    }
                }
                if h.is_one() {
                    acc
                } else {
                    acc.mul(h)
                }
            })
            .collect()
    }

    /// Lambda_e(U h v).
    pub fn apply(&self, v: &Vector, h: &Poly) -> Result<Vector> {
        let one = Poly::one(self.ring());
        let comps: Vec<Poly> =
            self.premultiplied(v, h).iter().map(|w| cartier_trace(w, self.e, &one)).collect::<Result<_>>()?;
        Ok(Vector::from_polys(self.ring(), &comps))
    }

    /// All Lambda_e(U x^b h v) for b in [0, q-1]^n, indexed by the residue a = (q-1) - b of the piece.
    /// These generate the image of R h v under the operator.
    pub fn pieces(&self, v: &Vector, h: &Poly) -> Result<BTreeMap<Exp, Vector>> {
        let w = self.premultiplied(v, h);
        let mut by_res: BTreeMap<Exp, Vec<Poly>> = BTreeMap::new();
        let r = self.rank();
        for (i, comp) in w.iter().enumerate() {
            for (a, g) in pe_decompose(comp, self.e)? {
                by_res.entry(a).or_insert_with(|| vec![Poly::zero(self.ring()); r])[i] = g;
            }
        }
        Ok(by_res.into_iter().map(|(a, cs)| (a, Vector::from_polys(self.ring(), &cs))).collect())
    }

    /// (e,U) after (d,V) is (e+d, U^[p^d] V).
    pub fn after(&self, inner: &CartierOp) -> Result<CartierOp> {
        if self.rank() != inner.rank() {
            return Err(CartierError::InvalidArgument("rank mismatch in composition".into()));
        }
        let r = self.rank();
        let mut m = vec![vec![Poly::zero(self.ring()); r]; r];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc = Poly::zero(self.ring());
                for k in 0..r {
                    if !self.matrix[i][k].is_zero() && !inner.matrix[k][j].is_zero() {
                        acc = acc.add(&self.matrix[i][k].frobenius(inner.e)?.mul(&inner.matrix[k][j]));
                    }
                }
                *slot = acc;
            }
        }
        CartierOp::new(self.e + inner.e, m)
    }

    /// The p^{-e}-linear operator on R^k with prescribed values on x^a e_j,
    /// `values[j][a]` for every a in [0, q-1]^n (missing keys mean zero).
    pub fn from_basis_values(ring: &RingRef, e: u32, k: usize, values: &[BTreeMap<Exp, Vector>]) -> Result<CartierOp> {
        let q = ring.q(e)? as u32;
        let n = ring.n();
        let mut m = vec![vec![Poly::zero(ring); k]; k];
        for (j, vals) in values.iter().enumerate() {
            for (a, w) in vals {
                let mut shift = [0u32; crate::fppoly::MAX_VARS];
                for i in 0..n {
                    shift[i] = q - 1 - a[i];
                }
                for (i, row) in m.iter_mut().enumerate() {
                    let c = w.component(i);
                    if !c.is_zero() {
                        row[j] = row[j].add(&c.frobenius(e)?.mul_term(&shift, 1));
                    }
                }
            }
        }
        CartierOp::new(e, m)
    }
}
