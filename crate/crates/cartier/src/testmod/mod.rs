//! Test elements, the test module and its minimal-prime variant, F-regularity,
//! and the hypersurface fast path.

mod bms;
mod certificate;
mod tau;

pub use bms::{root_of_power, tau_bms, tau_bms_left, BmsResult};
pub use certificate::{attempt_regular, certify_regular, coordinate_prime, straighten, RegularityCertificate};
pub use tau::{candidate_elements, search_test_element, TauOptions, TauResult, TestElement, TestElementRecord};
