//! Pullbacks, pushforwards and localization of Cartier modules, with the checks that compare
//! test modules across them.

mod coherent;
mod gauge;
mod localize;
mod maps;
mod push;
mod shriek;
mod suite;

pub use coherent::{coherent_model, scaled_copy, CoherentModel, CoherentReport};
pub use gauge::{contraction_failures, contraction_holds, gauge_growth, growth_family_member, growth_identity, random_poly, GaugeBound, GaugeGrowthReport};
pub use localize::{shriek_localize, LocalElement, LocalizedModule};
pub use maps::{FiniteExtension, PulledBackAlgebra, PulledElement, RingMap};
pub use push::{counit, gauge_cutoff, push_to_point, pushforward_finite, pushforward_sub, PointModel};
pub use shriek::{affine_line_sub, shriek_affine_line, shriek_finite, shriek_finite_sub};
pub use suite::{commutation_suite, pushforward_suite, SuiteLine, Verdict};
