//! Gröbner bases for ideals and submodules of free modules, ideal arithmetic, minimal primes and Frobenius roots.

mod factor;
mod groebner;
mod ideal;
pub mod linalg;
mod modops;
mod primes;
mod vector;

pub use factor::{factor_poly, factor_univariate, is_irreducible, is_irreducible_univariate, upoly_eval, upoly_to_poly, UPoly};
pub use groebner::{full_reduce, groebner};
pub use ideal::Ideal;
pub use modops::{colon_by_poly, colon_elem, colon_module, intersect, syzygies, LiftData};
pub use primes::{is_prime, minimal_primes, minimal_primes_with_candidates, minimalize, PrimeIdeal, Provenance};
pub use vector::{cmp_pot, Vector};
