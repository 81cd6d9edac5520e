//! Quasi-static elastic response of the grown rod.
//!
//! In one dimension the Euler-Lagrange equation of the elastic energy says
//! the stress `S = dW/dp(X, phi'(g(X)))` is constant along the rod. The
//! elastic stretch is therefore `Fe = pi0(., S)` and the clamp condition
//! `y(L0) = l0` becomes the scalar equation
//!
//! ```text
//! Phi(S) = int_0^L0 pi0(X, S) G(X) dX - l0 = 0,
//! ```
//!
//! strictly increasing in `S`. The minimization is never discretized.

use crate::energy::{EnergyModel, StoredEnergy};
use crate::error::{Error, Result};
use crate::numerics::{cumulative_integral, find_root_monotone_newton, integrate, ScalarField};

#[derive(Debug, Clone, PartialEq)]
pub struct ElasticSolution {
    pub stress: f64,
    /// Elastic stretch `phi' o g = pi0(., S)` on the reference grid.
    pub fe: ScalarField,
    /// Growth map, `g(0) = 0`, `g' = G`.
    pub g: ScalarField,
    /// Total deformation `y = phi o g`, `y' = Fe G`.
    pub y: ScalarField,
}

impl ElasticSolution {
    /// `|y(L0) - l0|`.
    pub fn boundary_residual(&self, l0: f64) -> f64 {
        (self.y.last() - l0).abs()
    }
}

/// Rejects growth fields with a non-positive node.
pub fn check_growth(g: &ScalarField) -> Result<()> {
    match g.values().iter().position(|&v| !(v > 0.0)) {
        Some(node) => Err(Error::GrowthCollapse { node, value: g.value(node) }),
        None => Ok(()),
    }
}

fn check_grids(model: &EnergyModel, g: &ScalarField) -> Result<()> {
    if model.mu().grid() != g.grid() {
        return Err(Error::InvalidArgument(
            "growth field and stiffness live on different grids".into(),
        ));
    }
    Ok(())
}

fn stretch_field(model: &EnergyModel, growth: &ScalarField, stress: f64) -> Result<ScalarField> {
    let grid = *growth.grid();
    let fe = grid
        .nodes()
        .map(|x| model.pi0(x, stress))
        .collect::<Result<Vec<_>>>()?;
    ScalarField::new(grid, fe)
}

/// `Phi(S)` evaluated by the trapezoid rule.
pub fn phi_residual(model: &EnergyModel, growth: &ScalarField, stress: f64, l0: f64) -> Result<f64> {
    check_grids(model, growth)?;
    check_growth(growth)?;
    let fe = stretch_field(model, growth, stress)?;
    Ok(integrate(&fe.zip_with(growth, |a, b| a * b)?) - l0)
}

fn phi_and_slope(model: &EnergyModel, growth: &ScalarField, stress: f64, l0: f64) -> (f64, f64) {
    let grid = *growth.grid();
    let mut fe_g = Vec::with_capacity(grid.node_count());
    let mut dfe_g = Vec::with_capacity(grid.node_count());
    for (x, &gv) in grid.nodes().zip(growth.values()) {
        let (p, curv) = match model.pi0(x, stress).and_then(|p| Ok((p, model.d2w_dp2(x, p)?))) {
            Ok(v) => v,
            Err(_) => return (f64::NAN, f64::NAN),
        };
        fe_g.push(p * gv);
        dfe_g.push(gv / curv);
    }
    let integral = |v: Vec<f64>| {
        ScalarField::new(grid, v).map(|f| integrate(&f)).unwrap_or(f64::NAN)
    };
    (integral(fe_g) - l0, integral(dfe_g))
}

/// Constant stress `S` with `|Phi(S)| <= tol`.
pub fn solve_stress(model: &EnergyModel, growth: &ScalarField, l0: f64, tol: f64) -> Result<f64> {
    check_grids(model, growth)?;
    check_growth(growth)?;
    if !(l0 > 0.0 && l0.is_finite()) {
        return Err(Error::InvalidArgument(format!("l0 must be positive, got {l0}")));
    }
    // homogenized guess: uniform stretch l0 / int G at mid-rod
    let total = integrate(growth);
    let mid = 0.5 * growth.grid().length();
    let guess = model.dw_dp(mid, l0 / total)?;
    find_root_monotone_newton(|s| phi_and_slope(model, growth, s, l0), guess, tol)
}

pub fn reconstruct(model: &EnergyModel, growth: &ScalarField, stress: f64) -> Result<ElasticSolution> {
    check_grids(model, growth)?;
    check_growth(growth)?;
    let fe = stretch_field(model, growth, stress)?;
    let g = cumulative_integral(growth);
    let y = cumulative_integral(&fe.zip_with(growth, |a, b| a * b)?);
    Ok(ElasticSolution { stress, fe, g, y })
}

/// Stress solve followed by reconstruction; `|y(L0) - l0| <= 10 tol`.
pub fn elastic_response(model: &EnergyModel, growth: &ScalarField, l0: f64, tol: f64) -> Result<ElasticSolution> {
    let stress = solve_stress(model, growth, l0, tol)?;
    let sol = reconstruct(model, growth, stress)?;
    let residual = sol.boundary_residual(l0);
    if residual > 10.0 * tol {
        return Err(Error::NumericFailure(format!(
            "boundary residual {residual} exceeds {}",
            10.0 * tol
        )));
    }
    Ok(sol)
}
