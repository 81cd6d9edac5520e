//! Quasi-stationary morphoelastic growth of a one-dimensional rod.
//!
//! A growth field `G` on the reference interval `[0, L0]` evolves by a
//! pointwise ODE whose rate depends on the (constant) elastic stress `S` of a
//! hyperelastic rod clamped to length `l0` and on the nutrient concentration
//! `N` solving a reaction-diffusion problem in the deformed rod. Stress and
//! nutrient are recomputed from the instantaneous `G`; only `G` carries time
//! dynamics.
//!
//! Module map:
//! - [`numerics`]: grids, P1 fields, trapezoid quadrature, Thomas solver,
//!   safeguarded monotone root finding, observed convergence order.
//! - [`energy`]: stored energy densities and the inverse stress map.
//! - [`elasticity`]: constant-stress reduction of the elastic problem.
//! - [`nutrient`]: Lagrangian and Eulerian nutrient solvers.
//! - [`growth`]: the product-form growth law and its exponential envelope.
//! - [`sim`]: RK4 time stepping, trajectories and well-posedness checks.
//! - [`scenario`], [`commands`]: JSON scenarios and the CLI workflows.

// `!(x > 0.0)` is used on purpose so that NaN fails validation too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod elasticity;
pub mod energy;
pub mod error;
pub mod growth;
pub mod numerics;
pub mod nutrient;
pub mod scenario;
pub mod sim;

pub use error::{Error, Result};
