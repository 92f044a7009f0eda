use log::{debug, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartiercore::CartierModule;
use crate::error::{CartierError, Result};
use crate::fpmod::Submodule;
use crate::fppoly::Poly;
use crate::idealkit::{factor_poly, Ideal, PrimeIdeal};

use super::certificate::{attempt_regular, certify_regular, RegularityCertificate};

/// One entry (eta, c) of a test-element sequence.
#[derive(Clone, Debug)]
pub struct TestElement {
    pub eta: PrimeIdeal,
    pub c: Poly,
    pub certificate: Option<RegularityCertificate>,
}

#[derive(Clone, Debug, Default)]
pub struct TauOptions {
    /// Lower bound e_0 of the degree sum.
    pub e0: u32,
    pub seed: u64,
    /// Replaces the search; entries are trusted when no certificate can be produced.
    pub test_elements: Option<Vec<(Ideal, Poly)>>,
    /// Candidate primes for associated-prime computations outside the supported shapes.
    pub candidates: Vec<Ideal>,
}

#[derive(Clone, Debug)]
pub struct TauResult {
    pub submodule: Submodule,
    pub test_elements: Vec<TestElement>,
    pub e0: u32,
    /// Chain length of the underline computation.
    pub underline_steps: usize,
    /// False if some infinite sum was truncated heuristically.
    pub exact: bool,
    /// Per-prime check that the torsion of M at eta is recovered by tau up to nilpotence.
    pub nil_iso_checks: Vec<(String, bool)>,
}

#[derive(Serialize)]
pub struct TestElementRecord {
    pub eta: String,
    pub c: String,
    pub certified: bool,
}

impl TauResult {
    pub fn test_element_records(&self) -> Vec<TestElementRecord> {
        self.test_elements
            .iter()
            .map(|t| TestElementRecord { eta: t.eta.ideal.to_string(), c: t.c.to_string(), certified: t.certificate.is_some() })
            .collect()
    }
}

const MAX_CANDIDATES: usize = 400;
const RANDOM_FORMS: usize = 12;

/// Irreducible factors appearing in the data of the module, the piece and the twist.
fn factor_pool(cm: &CartierModule, piece: &Submodule, seed: u64) -> Result<Vec<Poly>> {
    let ring = cm.ring();
    let mut raw: Vec<Poly> = (0..ring.n()).map(|i| Poly::var(ring, i)).collect();
    for rel in cm.module().relations() {
        raw.extend(rel.to_polys(cm.rank()));
    }
    for op in cm.algebra().generators() {
        for row in op.matrix() {
            raw.extend(row.iter().cloned());
        }
    }
    raw.extend(piece.annihilator()?.gb()?.iter().cloned());
    for f in cm.algebra().twist() {
        raw.extend(f.ideal.gens().iter().cloned());
    }
    let mut pool: Vec<Poly> = Vec::new();
    for f in raw {
        if f.is_zero() || f.is_constant() {
            continue;
        }
        for (g, _) in factor_poly(&f, seed)? {
            if !g.is_constant() && !pool.contains(&g) {
                pool.push(g);
            }
        }
    }
    pool.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| a.to_string().cmp(&b.to_string())));
    Ok(pool)
}

/// Deterministic list: 1, single factors, products of two and three distinct factors, then seeded linear forms.
pub fn candidate_elements(cm: &CartierModule, piece: &Submodule, seed: u64) -> Result<Vec<Poly>> {
    let ring = cm.ring();
    let pool = factor_pool(cm, piece, seed)?;
    let mut out = vec![Poly::one(ring)];
    out.extend(pool.iter().cloned());
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            out.push(pool[i].mul(&pool[j]));
        }
    }
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            for k in j + 1..pool.len() {
                if out.len() >= MAX_CANDIDATES {
                    break;
                }
                out.push(pool[i].mul(&pool[j]).mul(&pool[k]));
            }
        }
    }
    out.truncate(MAX_CANDIDATES);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = ring.p;
    for _ in 0..RANDOM_FORMS {
        let mut f = Poly::constant(ring, rng.gen_range(0..p) as i64);
        for i in 0..ring.n() {
            f = f.add(&Poly::var(ring, i).scale(rng.gen_range(0..p)));
        }
        if !f.is_zero() && !f.is_constant() {
            out.push(f);
        }
    }
    Ok(out)
}

/// First candidate c (times a determinant when that is what is missing) such that the piece is
/// certified regular after inverting c and `extra`. The returned element excludes `extra`.
pub fn search_test_element(
    cm: &CartierModule,
    piece: &Submodule,
    eta: &Ideal,
    candidates: &[Poly],
    extra: &Poly,
) -> Result<Option<(Poly, RegularityCertificate)>> {
    for c in candidates {
        if eta.contains(c)? {
            continue;
        }
        let (cert, hint) = attempt_regular(cm, piece, eta, &c.mul(extra))?;
        if let Some(cert) = cert {
            debug!("test element {c} for {eta}");
            return Ok(Some((c.clone(), cert)));
        }
        if let Some(det) = hint {
            let wider = factor_poly(&det, 0)?.into_iter().fold(c.clone(), |acc, (f, _)| if f.is_constant() { acc } else { acc.mul(&f) });
            if let Some(cert) = certify_regular(cm, piece, eta, &wider.mul(extra))? {
                debug!("test element {wider} for {eta}");
                return Ok(Some((wider, cert)));
            }
        }
    }
    Ok(None)
}

/// Twist generators are inverted along with c, so the localized twisted algebra is untwisted.
fn twist_unit(cm: &CartierModule, eta: &Ideal) -> Result<Poly> {
    let mut h = Poly::one(cm.ring());
    for f in cm.algebra().twist() {
        if *f.t.numer() == 0 {
            continue;
        }
        let mut found = None;
        for g in f.ideal.gb()? {
            if !eta.contains(g)? {
                found = Some(g.clone());
                break;
            }
        }
        let g = found.ok_or_else(|| CartierError::Unsupported(format!("twist ideal lies inside the prime {eta}")))?;
        h = h.mul(&g);
    }
    Ok(h)
}

impl CartierModule {
    /// Searches a certified test element for every Cartier-associated prime.
    pub fn find_test_elements(&self, opts: &TauOptions) -> Result<Vec<TestElement>> {
        let (under, _) = self.underline()?;
        let ass = self.ass_cartier(&opts.candidates)?;
        let untwisted = self.with_algebra(&self.algebra().untwisted())?;
        let mut out = Vec::new();
        for eta in ass {
            let piece = self.torsion_part(&under, &eta.ideal)?;
            let h = twist_unit(self, &eta.ideal)?;
            let cands = candidate_elements(self, &piece, opts.seed)?;
            let found = search_test_element(&untwisted, &piece, &eta.ideal, &cands, &h)?
                .map(|(c, cert)| TestElement { eta: eta.clone(), c: c.mul(&h), certificate: Some(cert) });
            match found {
                Some(t) => out.push(t),
                None => {
                    return Err(CartierError::SearchExhausted(format!(
                        "no certified test element for the prime {} among {} candidates; supply one",
                        eta.ideal,
                        cands.len()
                    )))
                }
            }
        }
        Ok(out)
    }

    fn supplied_test_elements(&self, given: &[(Ideal, Poly)], opts: &TauOptions) -> Result<Vec<TestElement>> {
        let (under, _) = self.underline()?;
        let ass = self.ass_cartier(&opts.candidates)?;
        let untwisted = self.with_algebra(&self.algebra().untwisted())?;
        let mut out = Vec::new();
        for eta in ass {
            let mut hit = None;
            for (i, c) in given {
                if i.equals(&eta.ideal)? {
                    hit = Some(c.clone());
                }
            }
            let c = hit.ok_or_else(|| CartierError::InvalidArgument(format!("no test element supplied for {}", eta.ideal)))?;
            if eta.ideal.contains(&c)? {
                return Err(CartierError::InvalidArgument(format!("test element {c} lies in {}", eta.ideal)));
            }
            let piece = self.torsion_part(&under, &eta.ideal)?;
            let cert = certify_regular(&untwisted, &piece, &eta.ideal, &c)?;
            if cert.is_none() {
                warn!("supplied test element {c} for {} could not be certified", eta.ideal);
            }
            out.push(TestElement { eta, c, certificate: cert });
        }
        Ok(out)
    }

    fn tau_over(&self, opts: &TauOptions, minimal_only: bool) -> Result<TauResult> {
        let (under, underline_steps) = self.underline()?;
        let mut elems = match &opts.test_elements {
            Some(given) => self.supplied_test_elements(given, opts)?,
            None => self.find_test_elements(opts)?,
        };
        if minimal_only {
            let all: Vec<Ideal> = elems.iter().map(|t| t.eta.ideal.clone()).collect();
            let mut keep = Vec::new();
            for t in elems {
                let mut minimal = true;
                for other in &all {
                    if !other.equals(&t.eta.ideal)? && t.eta.ideal.contains_ideal(other)? {
                        minimal = false;
                    }
                }
                if minimal {
                    keep.push(t);
                }
            }
            elems = keep;
        }
        let mut total = self.zero();
        let mut exact = true;
        for t in &elems {
            let piece = self.torsion_part(&under, &t.eta.ideal)?;
            let sum = self.twisted_sum(&piece.mul_poly(&t.c), opts.e0)?;
            exact &= sum.exact;
            total = total.sum(&sum.sub)?;
        }
        let total = total.canonical()?;
        if !self.is_stable(&total)? {
            return Err(CartierError::InvariantViolation("test module is not stable".into()));
        }
        let mut checks = Vec::new();
        for t in &elems {
            let piece = self.torsion_part(&under, &t.eta.ideal)?;
            let gap = piece.sum(&total)?.colon_sub(&total)?;
            checks.push((t.eta.ideal.to_string(), !t.eta.ideal.contains_ideal(&gap)?));
        }
        Ok(TauResult { submodule: total, test_elements: elems, e0: opts.e0, underline_steps, exact, nil_iso_checks: checks })
    }

    /// The test module: sum over Cartier-associated primes of the closures of c_i underline(H^0_{eta_i}).
    pub fn tau(&self, opts: &TauOptions) -> Result<TauResult> {
        self.tau_over(opts, false)
    }

    /// The variant that only asks for agreement at the minimal primes of the support.
    pub fn tau_prime(&self, opts: &TauOptions) -> Result<TauResult> {
        self.tau_over(opts, true)
    }

    /// F-pure and equal to its own test module.
    pub fn is_f_regular(&self, opts: &TauOptions) -> Result<bool> {
        if !self.is_f_pure()? {
            return Ok(false);
        }
        self.tau(opts)?.submodule.is_whole()
    }
}
