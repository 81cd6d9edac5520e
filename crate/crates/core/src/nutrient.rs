//! Quasi-static nutrient concentration.
//!
//! In the deformed rod `[0, l0]` the nutrient solves
//! `-(D n')' + beta n = 0`, `n(0) = nL`, `n(l0) = nR`, with
//! `D = (D0 Fe) o y^-1` and `beta = (beta0 / Fe) o y^-1`. Changing variables
//! `x = y(X)` with `y' = Fe G`, the stretch cancels and the pullback
//! `N = n o y` solves
//!
//! ```text
//! -((D0 / G) N')' + beta0 G N = 0  on [0, L0],  N(0) = nL, N(L0) = nR.
//! ```
//!
//! The Lagrangian form is the production path. The Eulerian form is kept as
//! an independent cross-check.

use crate::elasticity::{check_growth, ElasticSolution};
use crate::error::{Error, Result};
use crate::numerics::{eval_linear, invert_monotone_field, solve_tridiagonal, ScalarField};

/// Slack, relative to `max(1, l0)`, allowed between `y(L0)` and `l0` before
/// the current configuration is declared inconsistent.
const GEOMETRY_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct NutrientSolution {
    /// Concentration pulled back to the reference rod.
    pub reference: ScalarField,
    /// Concentration on the current rod `[0, l0]`; Eulerian path only.
    pub current: Option<ScalarField>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentCoefficients {
    pub diffusion: ScalarField,
    pub absorption: ScalarField,
}

fn check_positive(field: &ScalarField, name: &str) -> Result<()> {
    match field.values().iter().position(|&v| !(v > 0.0)) {
        Some(i) => Err(Error::InvalidCoefficient(format!(
            "{name} must be positive, got {} at node {i}",
            field.value(i)
        ))),
        None => Ok(()),
    }
}

fn check_boundary(n_left: f64, n_right: f64) -> Result<()> {
    if n_left >= 0.0 && n_right >= 0.0 && n_left.is_finite() && n_right.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "boundary concentrations must be non-negative, got {n_left}, {n_right}"
        )))
    }
}

/// `a = D0 / G`, `c = beta0 G`.
pub fn lagrangian_coefficients(
    growth: &ScalarField,
    d0: &ScalarField,
    beta0: &ScalarField,
) -> Result<(ScalarField, ScalarField)> {
    check_growth(growth)?;
    check_positive(d0, "D0")?;
    check_positive(beta0, "beta0")?;
    Ok((d0.zip_with(growth, |d, g| d / g)?, beta0.zip_with(growth, |b, g| b * g)?))
}

/// Solves `-(a u')' + c u = 0` with Dirichlet data on the grid of `a`.
///
/// Interior rows use the arithmetic mean of `a` at cell faces; boundary rows
/// are identity rows, so the matrix is an M-matrix and the boundary nodes
/// carry the Dirichlet values exactly.
pub fn solve_sturm_liouville(a: &ScalarField, c: &ScalarField, left: f64, right: f64) -> Result<ScalarField> {
    if a.grid() != c.grid() {
        return Err(Error::InvalidArgument("coefficients live on different grids".into()));
    }
    check_positive(a, "diffusion coefficient")?;
    if let Some(i) = c.values().iter().position(|&v| !(v >= 0.0)) {
        return Err(Error::InvalidCoefficient(format!(
            "absorption must be non-negative, got {} at node {i}",
            c.value(i)
        )));
    }
    let grid = *a.grid();
    let n = grid.node_count();
    let h2 = grid.spacing() * grid.spacing();
    let (av, cv) = (a.values(), c.values());

    let mut lower = vec![0.0; n - 1];
    let mut diag = vec![1.0; n];
    let mut upper = vec![0.0; n - 1];
    let mut rhs = vec![0.0; n];
    rhs[0] = left;
    rhs[n - 1] = right;
    for i in 1..n - 1 {
        let west = 0.5 * (av[i - 1] + av[i]);
        let east = 0.5 * (av[i] + av[i + 1]);
        lower[i - 1] = -west;
        upper[i] = -east;
        diag[i] = west + east + cv[i] * h2;
    }
    ScalarField::new(grid, solve_tridiagonal(&lower, &diag, &upper, &rhs)?)
}

pub fn solve_nutrient_lagrangian(
    growth: &ScalarField,
    d0: &ScalarField,
    beta0: &ScalarField,
    n_left: f64,
    n_right: f64,
) -> Result<NutrientSolution> {
    check_boundary(n_left, n_right)?;
    let (a, c) = lagrangian_coefficients(growth, d0, beta0)?;
    Ok(NutrientSolution {
        reference: solve_sturm_liouville(&a, &c, n_left, n_right)?,
        current: None,
    })
}

fn clamp_to_current(value: f64, l0: f64) -> Result<f64> {
    let slack = GEOMETRY_SLACK * l0.max(1.0);
    if value < -slack || value > l0 + slack {
        return Err(Error::InconsistentGeometry(format!(
            "deformed position {value} outside [0, {l0}]"
        )));
    }
    Ok(value.clamp(0.0, l0))
}

/// Diffusion `D0 Fe` and absorption `beta0 / Fe` transported to a uniform
/// grid on `[0, l0]` through the inverse of `y`.
pub fn eulerian_coefficients(
    sol: &ElasticSolution,
    d0: &ScalarField,
    beta0: &ScalarField,
    l0: f64,
) -> Result<CurrentCoefficients> {
    check_positive(d0, "D0")?;
    check_positive(beta0, "beta0")?;
    let y_end = sol.y.last();
    if (y_end - l0).abs() > GEOMETRY_SLACK * l0.max(1.0) {
        return Err(Error::InconsistentGeometry(format!(
            "y(L0) = {y_end} does not match l0 = {l0}"
        )));
    }
    let current = sol.y.grid().with_length(l0)?;
    let mut diffusion = Vec::with_capacity(current.node_count());
    let mut absorption = Vec::with_capacity(current.node_count());
    for x in current.nodes() {
        let target = x.min(y_end);
        let xref = invert_monotone_field(&sol.y, target).map_err(|e| match e {
            Error::OutOfRange { .. } => Error::InconsistentGeometry(e.to_string()),
            other => other,
        })?;
        let fe = eval_linear(&sol.fe, xref)?;
        diffusion.push(eval_linear(d0, xref)? * fe);
        absorption.push(eval_linear(beta0, xref)? / fe);
    }
    Ok(CurrentCoefficients {
        diffusion: ScalarField::new(current, diffusion)?,
        absorption: ScalarField::new(current, absorption)?,
    })
}

/// Solves on the current rod and pulls back with `N(X) = n(y(X))`.
pub fn solve_nutrient_eulerian(
    coeffs: &CurrentCoefficients,
    n_left: f64,
    n_right: f64,
    y: &ScalarField,
) -> Result<NutrientSolution> {
    check_boundary(n_left, n_right)?;
    let n = solve_sturm_liouville(&coeffs.diffusion, &coeffs.absorption, n_left, n_right)?;
    let l0 = n.grid().length();
    let pulled = y
        .values()
        .iter()
        .map(|&yv| eval_linear(&n, clamp_to_current(yv, l0)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(NutrientSolution {
        reference: ScalarField::new(*y.grid(), pulled)?,
        current: Some(n),
    })
}
