//! Exact computation of Cartier modules over polynomial rings in characteristic p.

pub mod error;
pub mod fppoly;
pub mod idealkit;
pub mod fpmod;
pub mod rational;
pub mod cartiercore;
pub mod testmod;
pub mod filtration;
pub mod functorops;

pub use error::{CartierError, Result};
pub mod cliharness;
