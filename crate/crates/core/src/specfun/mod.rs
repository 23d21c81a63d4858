//! Real-order special functions: Gamma, Bessel `J_ν`, first Bessel zeros,
//! the sine integral, and Gauss quadrature rules.

mod bessel;
mod gamma;
pub mod quad;
mod sine;

pub use bessel::{
    bessel_first_zero, bessel_j, bessel_ladder, tail_safe_index, BesselLadder, MAX_ARGUMENT,
    SERIES_LIMIT,
};
pub(crate) use bessel::ladder_into;
pub(crate) use gamma::gamma;
pub use gamma::{gamma_fn, ln_gamma, GAMMA_MAX_ARG};
pub use sine::sine_integral;
