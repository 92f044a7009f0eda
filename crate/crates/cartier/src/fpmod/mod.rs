//! Finitely presented modules over R, their submodules, maps, torsion and associated primes.

mod ass;
mod module;
mod torsion;

pub use ass::{ext_annihilators, free_resolution, is_associated, module_ass, Differential};
pub use module::{parse_vector, vector_strings, ModRef, ModuleMap, ModuleRecord, PresentedModule, Submodule, SubmoduleRecord};
pub use torsion::{torsion, torsion_of};
