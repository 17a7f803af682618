//! Arbitrary-precision numerical kernel.

mod bessel;
mod context;
mod gamma;
pub(crate) mod grid;
mod pfq;
pub mod quadrature;
mod sum;

pub use bessel::{bessel_j, bessel_j_half_pi_grid, MAX_ORDER};
pub use grid::clear_grid_cache;
pub use context::{pi, PrecisionContext, DEFAULT_GUARD_BITS, EVAL_GUARD_BITS};
pub use gamma::gamma_real;
pub use pfq::{kummer_diff, pfq, pfq_pi_square_grid};
pub use quadrature::{quadrature, sine_moments, Integrand, Weight};
pub use sum::{block_tree_sum, BLOCK};
