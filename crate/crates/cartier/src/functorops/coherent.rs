use serde::Serialize;

use crate::cartiercore::{CartierAlgebraSpec, CartierModule, CartierOp};
use crate::error::{CartierError, Result};
use crate::fpmod::Submodule;
use crate::fppoly::Poly;
use crate::idealkit::Vector;
use crate::testmod::TauOptions;

use super::localize::{shriek_localize, LocalizedModule};
use super::push::gauge_cutoff;

const MAX_DEPTH: u32 = 12;

/// M with every generator replaced by kappa(c^{D(q-1)} -), a copy of M c^{-D} inside M_c.
pub fn scaled_copy(cm: &CartierModule, c: &Poly, depth: u32) -> Result<CartierModule> {
    let mut ops = Vec::new();
    for op in cm.algebra().generators() {
        let q = cm.ring().q(op.e())?;
        let h = c.pow(depth as u64 * (q - 1))?;
        let m = op.matrix().iter().map(|row| row.iter().map(|f| f.mul(&h)).collect()).collect();
        ops.push(CartierOp::new(op.e(), m)?);
    }
    CartierModule::validate(cm.module(), &CartierAlgebraSpec::new(ops)?)
}

/// Coherent model of j_* M_c for j: D(c) -> Spec R, as the copy M c^{-D} of smallest D whose
/// stable part already contains every stable element reached from deeper copies.
#[derive(Clone, Debug)]
pub struct CoherentModel {
    pub depth: u32,
    pub gauge_cutoff: u64,
    pub model: CartierModule,
    pub localized: LocalizedModule,
    /// Torsion of M along c, which dies in M_c.
    pub torsion: Submodule,
    /// The stable part at depth D + 1 agrees with the one at depth D + 2 after rescaling.
    pub independent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoherentReport {
    pub c: String,
    pub depth: u32,
    pub gauge_cutoff: u64,
    pub independent: bool,
    pub tau_model: Vec<Vec<String>>,
    pub inside_pushforward_of_tau: bool,
    pub strict_witness: Option<Vec<String>>,
}

fn matches_after_shift(
    low: &CartierModule,
    high: &CartierModule,
    c: &Poly,
    torsion: &Submodule,
) -> Result<bool> {
    let a = low.underline()?.0.mul_poly(c).sum(torsion)?;
    let b = high.underline()?.0.sum(torsion)?;
    a.equals(&b)
}

pub fn coherent_model(cm: &CartierModule, c: &Poly) -> Result<CoherentModel> {
    let localized = shriek_localize(cm, c)?;
    let torsion = localized.zero()?;
    let k = gauge_cutoff(cm)?;
    let mut low = scaled_copy(cm, c, 0)?;
    for depth in 0..MAX_DEPTH {
        let high = scaled_copy(cm, c, depth + 1)?;
        if matches_after_shift(&low, &high, c, &torsion)? {
            let deeper = scaled_copy(cm, c, depth + 2)?;
            let independent = matches_after_shift(&high, &deeper, c, &torsion)?;
            return Ok(CoherentModel { depth, gauge_cutoff: k, model: low, localized, torsion, independent });
        }
        low = high;
    }
    Err(CartierError::NoStabilization(MAX_DEPTH as usize))
}

impl CoherentModel {
    /// The element m of the model read as m / c^D, with powers of c cancelled.
    pub fn fraction(&self, m: &Vector) -> Result<Vec<String>> {
        self.fraction_at(m, self.depth)
    }

    fn fraction_at(&self, m: &Vector, depth: u32) -> Result<Vec<String>> {
        let r = self.model.rank();
        let el = self.localized.normalize(m, depth)?;
        let c = self.localized.c();
        Ok(el
            .numerator
            .to_polys(r)
            .iter()
            .map(|f| match el.k {
                0 => f.to_string(),
                1 => format!("({f})/({c})"),
                k => format!("({f})/({c})^{k}"),
            })
            .collect())
    }

    /// tau of the model, compared with the pushforward of tau(M_c).
    pub fn report(&self, opts: &TauOptions) -> Result<CoherentReport> {
        let tau = self.model.tau(opts)?.submodule;
        let pushed = self.localized.tau(opts)?;
        let inside = pushed.contains_sub(&tau)?;
        let shifted = tau.mul_poly(self.localized.c()).sum(&self.torsion)?;
        let mut witness = None;
        for g in pushed.gens() {
            if !shifted.contains(g)? {
                witness = Some(self.fraction_at(g, self.depth + 1)?);
                break;
            }
        }
        let mut tau_model = Vec::new();
        for g in tau.canonical_gens()? {
            tau_model.push(self.fraction(&g)?);
        }
        Ok(CoherentReport {
            c: self.localized.c().to_string(),
            depth: self.depth,
            gauge_cutoff: self.gauge_cutoff,
            independent: self.independent,
            tau_model,
            inside_pushforward_of_tau: inside,
            strict_witness: witness,
        })
    }
}
