//! Polynomials over F_p, Frobenius decompositions, the Cartier trace and gauges.

mod frob;
mod poly;
mod ring;
mod text;

pub use frob::{cartier_trace, gauge_of, pe_decompose, pe_recompose, trace_shifted, Gauge};
pub use poly::{check_ring, same_ring, Poly};
pub use ring::{
    exp_add, exp_divides, exp_is_zero, exp_lcm, exp_scale, exp_sub, is_prime, Caps, Exp, MonomialOrder, Ring, RingRef,
    MAX_VARS, ZERO_EXP,
};
pub use text::{format_poly, parse_poly};

/// Builds an exponent vector from a short slice.
pub fn exp_from(v: &[u32]) -> Exp {
    let mut e = ZERO_EXP;
    e[..v.len()].copy_from_slice(v);
    e
}
