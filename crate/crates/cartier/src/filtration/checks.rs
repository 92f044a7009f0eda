use serde::Serialize;

use crate::cartiercore::{CartierAlgebraSpec, CartierModule};
use crate::error::Result;
use crate::fpmod::Submodule;
use crate::idealkit::Ideal;
use crate::rational::{fmt_rat, Rat};
use crate::testmod::TauOptions;

use super::jumps::TauOracle;

/// One verified statement with the submodules compared.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub lhs: Vec<Vec<String>>,
    pub rhs: Vec<Vec<String>>,
}

impl CheckLine {
    fn new(name: String, passed: bool, lhs: &Submodule, rhs: &Submodule) -> Result<CheckLine> {
        Ok(CheckLine { name, passed, lhs: lhs.to_record()?.generators, rhs: rhs.to_record()?.generators })
    }
}

/// C twisted by a^t.
pub fn twist_algebra(alg: &CartierAlgebraSpec, ideal: &Ideal, t: Rat) -> Result<CartierAlgebraSpec> {
    alg.twisted(ideal, t)
}

/// Briançon–Skoda inclusion, Skoda equality for t >= mu(a), and right-continuity at t + eps.
pub fn inequality_checks(oracle: &TauOracle, t: &Rat, eps: &Rat) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    let one = Rat::from_integer(1);
    let (at, _) = oracle.tau_at(t)?;
    if *t >= one {
        let (prev, _) = oracle.tau_at(&(t - one))?;
        let lhs = prev.mul_ideal(oracle.ideal()).canonical()?;
        out.push(CheckLine::new(format!("a * tau(t-1) in tau(t) at t={}", fmt_rat(t)), at.contains_sub(&lhs)?, &lhs, &at)?);
        let mu = oracle.ideal().gens().iter().filter(|g| !g.is_zero()).count() as i64;
        if *t >= Rat::from_integer(mu) {
            out.push(CheckLine::new(format!("a * tau(t-1) = tau(t) at t={} (mu={mu})", fmt_rat(t)), lhs.equals(&at)?, &lhs, &at)?);
        }
    }
    let (later, _) = oracle.tau_at(&(t + eps))?;
    out.push(CheckLine::new(
        format!("tau(t) = tau(t+{}) at t={}", fmt_rat(eps), fmt_rat(t)),
        later.equals(&at)?,
        &at,
        &later,
    )?);
    Ok(out)
}

fn mixed_tau(cm: &CartierModule, factors: &[(Ideal, Rat)], opts: &TauOptions) -> Result<Submodule> {
    let mut alg = cm.algebra().clone();
    for (i, t) in factors {
        if *t.numer() != 0 {
            alg = alg.twisted(i, *t)?;
        }
    }
    Ok(cm.with_algebra(&alg)?.tau(opts)?.submodule)
}

fn label(factors: &[(Ideal, Rat)]) -> String {
    factors.iter().map(|(i, t)| format!("{i}^{}", fmt_rat(t))).collect::<Vec<_>>().join(" ")
}

/// Mixed Briançon–Skoda in every variable with t_i >= 1 and right-continuity at t + (eps, ..., eps).
pub fn mixed_checks(cm: &CartierModule, factors: &[(Ideal, Rat)], eps: &Rat, opts: &TauOptions) -> Result<Vec<CheckLine>> {
    let one = Rat::from_integer(1);
    let at = mixed_tau(cm, factors, opts)?;
    let mut out = Vec::new();
    for (k, (ideal, t)) in factors.iter().enumerate() {
        if *t < one {
            continue;
        }
        let mut lower = factors.to_vec();
        lower[k].1 = t - one;
        let lhs = mixed_tau(cm, &lower, opts)?.mul_ideal(ideal).canonical()?;
        out.push(CheckLine::new(
            format!("{ideal} * tau({}) in tau({})", label(&lower), label(factors)),
            at.contains_sub(&lhs)?,
            &lhs,
            &at,
        )?);
    }
    let shifted: Vec<(Ideal, Rat)> = factors.iter().map(|(i, t)| (i.clone(), t + eps)).collect();
    let later = mixed_tau(cm, &shifted, opts)?;
    out.push(CheckLine::new(format!("tau({}) = tau({})", label(factors), label(&shifted)), later.equals(&at)?, &at, &later)?);
    Ok(out)
}
