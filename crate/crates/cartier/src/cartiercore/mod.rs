//! Cartier algebras acting on presented modules: operators, validation, the C_+ chain,
//! nilpotence, nil-isomorphisms and associated primes in the Cartier sense.

mod algebra;
mod ass;
mod chain;
mod module;
mod op;

pub use algebra::{AlgebraRecord, CartierAlgebraSpec, TwistFactor, TwistRecord};
pub use ass::{sort_primes, NilIsoReport};
pub use chain::TwistedSum;
pub use module::{CartierModule, StructureWitness};
pub use op::{CartierOp, OpRecord};
