//! Special functions, adaptive quadrature and scalar minimization.
//!
//! Everything here is pure and stateless.

mod minimize;
mod quadrature;
mod special;

pub use minimize::{minimize_scalar, minimize_scalar_with, Minimum, DEFAULT_GRID_POINTS};
pub use quadrature::{integrate, integrate_with_error, Tolerance};
pub use special::{ln_gamma, q_function, q_inverse, reg_lower_gamma, reg_upper_gamma};
