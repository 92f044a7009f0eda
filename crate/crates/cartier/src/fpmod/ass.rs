//! Associated primes of finitely presented modules.
//!
//! Candidates of codimension c are the minimal primes of ann Ext^c(M, R) that have codimension c;
//! each candidate eta is then confirmed directly: eta is associated iff ann(0 :_M eta) ⊆ eta.

use crate::error::{CartierError, Result};
use crate::fppoly::Poly;
use crate::idealkit::{colon_module, minimal_primes_with_candidates, syzygies, Ideal, PrimeIdeal, Provenance, Vector};

use super::module::{ModRef, Submodule};

/// One differential of a free resolution: `cols` are vectors in R^target_rank.
#[derive(Clone, Debug)]
pub struct Differential {
    pub target_rank: usize,
    pub cols: Vec<Vector>,
}

/// Free resolution F_len -> ... -> F_0 = R^r of M (d_1 is the relation matrix).
pub fn free_resolution(m: &ModRef, len: usize) -> Result<Vec<Differential>> {
    let ring = m.ring();
    let mut out = vec![Differential { target_rank: m.rank(), cols: m.relations().to_vec() }];
    while out.len() < len {
        let last = out.last().unwrap();
        if last.cols.is_empty() {
            break;
        }
        let syz = syzygies(ring, &last.cols, last.target_rank)?;
        out.push(Differential { target_rank: last.cols.len(), cols: syz });
    }
    Ok(out)
}

fn transpose(d: &Differential, ring: &crate::fppoly::RingRef) -> Vec<Vector> {
    let a = d.cols.len();
    let comps: Vec<Vec<Poly>> = d.cols.iter().map(|c| c.to_polys(d.target_rank)).collect();
    (0..d.target_rank)
        .map(|i| Vector::from_polys(ring, &(0..a).map(|j| comps[j][i].clone()).collect::<Vec<_>>()))
        .collect()
}

/// ann Ext^c(M, R) for c = 0..=n.
pub fn ext_annihilators(m: &ModRef) -> Result<Vec<Ideal>> {
    let ring = m.ring().clone();
    let n = ring.n();
    let res = free_resolution(m, n + 2)?;
    let rank_of = |c: usize| -> usize {
        if c == 0 {
            m.rank()
        } else if c <= res.len() {
            res[c - 1].cols.len()
        } else {
            0
        }
    };
    let mut out = Vec::new();
    for c in 0..=n {
        let rk = rank_of(c);
        if rk == 0 {
            out.push(Ideal::unit(&ring));
            continue;
        }
        // kernel of d_{c+1}^T : R^rk -> R^{rank F_{c+1}}
        let ker: Vec<Vector> = match res.get(c) {
            Some(d) if !d.cols.is_empty() => syzygies(&ring, &transpose(d, &ring), d.cols.len())?,
            _ => (0..rk).map(|i| Vector::unit(&ring, i)).collect(),
        };
        let im: Vec<Vector> = if c == 0 { Vec::new() } else { transpose(&res[c - 1], &ring) };
        let ann = colon_module(&ring, &im, &ker, rk)?;
        out.push(Ideal::new(&ring, ann));
    }
    Ok(out)
}

/// eta ∈ Ass(N) iff ann(0 :_N eta) ⊆ eta.
pub fn is_associated(n: &Submodule, eta: &Ideal) -> Result<bool> {
    let killed = Submodule::zero(n.module()).colon_ideal(eta)?;
    let inside = n.intersect(&killed)?;
    if inside.is_zero() {
        return Ok(false);
    }
    eta.contains_ideal(&inside.annihilator()?)
}

/// Associated primes of a submodule N (as an abstract module).
pub fn module_ass(n: &Submodule, candidates: &[Ideal]) -> Result<Vec<PrimeIdeal>> {
    let ring = n.ring().clone();
    if n.is_zero() {
        return Ok(Vec::new());
    }
    if n.module().relations().is_empty() {
        // nonzero submodule of a free module over a domain
        return Ok(vec![PrimeIdeal { ideal: Ideal::zero(&ring), provenance: Provenance::Proved }]);
    }
    let (pres, _) = n.present()?;
    let anns = ext_annihilators(&pres)?;
    let mut found: Vec<PrimeIdeal> = Vec::new();
    for (c, ann) in anns.iter().enumerate() {
        if ann.is_unit()? {
            continue;
        }
        let mps = match minimal_primes_with_candidates(ann, candidates) {
            Ok(v) => v,
            Err(CartierError::Unsupported(msg)) => {
                return Err(CartierError::Unsupported(format!("associated primes: {msg}")));
            }
            Err(e) => return Err(e),
        };
        for p in mps {
            if p.ideal.codim()? != Some(c) {
                continue;
            }
            if is_associated(n, &p.ideal)? && !contains_prime(&found, &p.ideal)? {
                found.push(p);
            }
        }
    }
    Ok(found)
}

fn contains_prime(list: &[PrimeIdeal], p: &Ideal) -> Result<bool> {
    for q in list {
        if q.ideal.equals(p)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpmod::PresentedModule;
    use crate::fppoly::Ring;

    fn names(v: &[PrimeIdeal]) -> Vec<String> {
        v.iter().map(|p| p.ideal.to_string()).collect()
    }

    #[test]
    fn ass_of_cyclic_modules() {
        let r = Ring::new(2, &["x", "y"]).unwrap();
        let m = PresentedModule::direct_sum_of_cyclics(&r, &[Ideal::parse(&r, &["x^2", "x*y"]).unwrap()]).unwrap();
        let a = module_ass(&Submodule::whole(&m), &[]).unwrap();
        assert_eq!(names(&a), vec!["(x)", "(x, y)"]);

        let m2 = PresentedModule::direct_sum_of_cyclics(&r, &[Ideal::parse(&r, &["y"]).unwrap(), Ideal::zero(&r)]).unwrap();
        let a2 = module_ass(&Submodule::whole(&m2), &[]).unwrap();
        assert_eq!(names(&a2), vec!["(0)", "(y)"]);
    }

    #[test]
    fn ext_of_free_module() {
        let r = Ring::new(3, &["x"]).unwrap();
        let m = PresentedModule::free(&r, 2);
        let anns = ext_annihilators(&m).unwrap();
        assert!(anns[0].is_zero());
        assert!(anns[1].is_unit().unwrap());
    }
}
