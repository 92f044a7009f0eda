//! Filtrations by twisted test modules: jumping numbers on a rational grid, associated graded
//! pieces, and Briançon–Skoda type inclusions.

mod checks;
mod jumps;

pub use checks::{inequality_checks, mixed_checks, twist_algebra, CheckLine};
pub use jumps::{gr, grid, jumping_numbers, GridMemo, Jump, JumpRecord, JumpSpectrum, Spectrum, SpectrumPolicy, TauOracle};
