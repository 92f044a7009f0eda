use crate::error::Result;
use crate::fpmod::{module_ass, torsion_of, ModuleMap, Submodule};
use crate::idealkit::{Ideal, PrimeIdeal};

use super::module::CartierModule;

/// Result of a nil-isomorphism test, with the chain lengths used as evidence.
#[derive(Clone, Debug)]
pub struct NilIsoReport {
    pub kernel_nilpotent: bool,
    pub kernel_steps: usize,
    pub cokernel_nilpotent: bool,
}

impl NilIsoReport {
    pub fn holds(&self) -> bool {
        self.kernel_nilpotent && self.cokernel_nilpotent
    }
}

/// Sorts primes so that every prime comes after all primes it contains.
pub fn sort_primes(v: &mut [PrimeIdeal]) -> Result<()> {
    let mut keyed = Vec::with_capacity(v.len());
    for p in v.iter() {
        keyed.push((p.ideal.codim()?.unwrap_or(usize::MAX), p.ideal.to_string()));
    }
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| keyed[a].cmp(&keyed[b]));
    let sorted: Vec<PrimeIdeal> = idx.iter().map(|&i| v[i].clone()).collect();
    v.clone_from_slice(&sorted);
    Ok(())
}

impl CartierModule {
    /// Kernel and cokernel nilpotence of an equivariant map.
    pub fn nil_isomorphism(phi: &ModuleMap, source: &CartierModule, target: &CartierModule) -> Result<NilIsoReport> {
        CartierModule::check_equivariant(phi, source, target)?;
        let ker = phi.kernel()?;
        let (ks, kernel_steps) = source.stable_member(&ker)?;
        let (under, _) = target.underline()?;
        let image = phi.image();
        Ok(NilIsoReport { kernel_nilpotent: ks.is_zero(), kernel_steps, cokernel_nilpotent: image.contains_sub(&under)? })
    }

    /// underline(H^0_eta(N)) for a stable N.
    pub fn torsion_part(&self, n: &Submodule, eta: &Ideal) -> Result<Submodule> {
        let h = torsion_of(n, eta)?;
        Ok(self.stable_member(&h)?.0)
    }

    /// Primes eta for which H^0_eta(M_eta) is not nilpotent, in inclusion-compatible order.
    pub fn ass_cartier(&self, candidates: &[Ideal]) -> Result<Vec<PrimeIdeal>> {
        let (under, _) = self.underline()?;
        let mut out = Vec::new();
        for eta in module_ass(&under, candidates)? {
            let s = self.torsion_part(&under, &eta.ideal)?;
            if !s.vanishes_at(&eta.ideal)? {
                out.push(eta);
            }
        }
        sort_primes(&mut out)?;
        Ok(out)
    }

    /// Module-level associated primes of M itself.
    pub fn ass_module(&self, candidates: &[Ideal]) -> Result<Vec<PrimeIdeal>> {
        let mut v = module_ass(&self.whole(), candidates)?;
        sort_primes(&mut v)?;
        Ok(v)
    }
}
