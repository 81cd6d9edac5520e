//! Grid, field, quadrature, interpolation, linear-system and root-finding
//! primitives shared by all solvers.

mod field;
mod interp;
mod order;
mod quadrature;
mod roots;
mod tridiag;

pub use field::{make_uniform_grid, Grid, ScalarField};
pub use interp::{eval_linear, invert_monotone_field, DOMAIN_SLACK};
pub use order::observed_order;
pub use quadrature::{cumulative_integral, integrate};
pub use roots::{find_root_monotone, find_root_monotone_newton, MAX_DOUBLINGS};
pub use tridiag::solve_tridiagonal;
