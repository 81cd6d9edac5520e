//! Product-form growth law
//!
//! ```text
//! rate(X, G, S, N) = gamma(X) mu(S) eta(N) G
//! ```
//!
//! with a logistic stress response `mu` and a saturating nutrient response
//! `eta`, both increasing and bounded. Because every factor except `G` lives
//! in a box, the rate is bracketed by `c_min G` and `c_max G` and solutions
//! starting from `G0` stay inside `G0 e^{c_min t} .. G0 e^{c_max t}`.

use serde::Serialize;

use crate::elasticity::{check_growth, elastic_response, ElasticSolution};
use crate::energy::EnergyModel;
use crate::error::{Error, Result};
use crate::numerics::{eval_linear, ScalarField};
use crate::nutrient::{solve_nutrient_lagrangian, NutrientSolution};

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleLawParams {
    gamma: ScalarField,
    mu0: f64,
    mu1: f64,
    s_ref: f64,
    eta0: f64,
    eta1: f64,
    n_ref: f64,
}

impl ExampleLawParams {
    pub fn new(
        gamma: ScalarField,
        (mu0, mu1): (f64, f64),
        s_ref: f64,
        (eta0, eta1): (f64, f64),
        n_ref: f64,
    ) -> Result<Self> {
        if let Some(i) = gamma.values().iter().position(|&v| !(v > 0.0)) {
            return Err(Error::InvalidCoefficient(format!(
                "gamma must be positive, got {} at node {i}",
                gamma.value(i)
            )));
        }
        let finite = [mu0, mu1, s_ref, eta0, eta1, n_ref].iter().all(|v| v.is_finite());
        if !finite || mu0 > mu1 {
            return Err(Error::InvalidArgument(format!("need mu0 <= mu1, got {mu0}, {mu1}")));
        }
        if !(eta0 >= 0.0 && eta0 <= eta1) {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= eta0 <= eta1, got {eta0}, {eta1}"
            )));
        }
        if !(s_ref > 0.0 && n_ref > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "reference scales must be positive, got S_ref {s_ref}, N_ref {n_ref}"
            )));
        }
        Ok(Self { gamma, mu0, mu1, s_ref, eta0, eta1, n_ref })
    }

    pub fn gamma(&self) -> &ScalarField {
        &self.gamma
    }

    pub fn gamma_bounds(&self) -> (f64, f64) {
        (self.gamma.min(), self.gamma.max())
    }

    pub fn mu_bounds(&self) -> (f64, f64) {
        (self.mu0, self.mu1)
    }

    pub fn eta_bounds(&self) -> (f64, f64) {
        (self.eta0, self.eta1)
    }
}

fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Logistic stress response in `(mu0, mu1)`; Lipschitz constant
/// `(mu1 - mu0) / (4 S_ref)`.
pub fn response_mu(params: &ExampleLawParams, stress: f64) -> f64 {
    params.mu0 + (params.mu1 - params.mu0) * logistic(stress / params.s_ref)
}

/// Saturating nutrient response `eta0 + (eta1 - eta0)(1 - e^{-N/N_ref})`.
pub fn response_eta(params: &ExampleLawParams, nutrient: f64) -> Result<f64> {
    if !(nutrient >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "nutrient concentration must be non-negative, got {nutrient}"
        )));
    }
    Ok(params.eta0 - (params.eta1 - params.eta0) * (-nutrient / params.n_ref).exp_m1())
}

pub fn example_law(params: &ExampleLawParams, growth: f64, stress: f64, nutrient: f64, x: f64) -> Result<f64> {
    if !(growth > 0.0) {
        return Err(Error::GrowthCollapse { node: 0, value: growth });
    }
    let eta = response_eta(params, nutrient)?;
    let gamma = eval_linear(&params.gamma, x)?;
    Ok(gamma * response_mu(params, stress) * eta * growth)
}

/// Exponential comparison rates bracketing the law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthEnvelope {
    pub c_min: f64,
    pub c_max: f64,
}

impl GrowthEnvelope {
    /// `(e^{c_min t}, e^{c_max t})`, the envelope for unit initial growth.
    pub fn bounds(&self, t: f64) -> (f64, f64) {
        ((self.c_min * t).exp(), (self.c_max * t).exp())
    }
}

/// Extremes of the trilinear product `gamma mu eta` over the parameter box,
/// attained at its corners.
pub fn envelope(params: &ExampleLawParams) -> GrowthEnvelope {
    let (g0, g1) = params.gamma_bounds();
    let mut c_min = f64::INFINITY;
    let mut c_max = f64::NEG_INFINITY;
    for g in [g0, g1] {
        for m in [params.mu0, params.mu1] {
            for e in [params.eta0, params.eta1] {
                let c = g * m * e;
                c_min = c_min.min(c);
                c_max = c_max.max(c);
            }
        }
    }
    GrowthEnvelope { c_min, c_max }
}

/// Everything the right-hand side needs besides the growth field itself.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledModel {
    pub energy: EnergyModel,
    pub d0: ScalarField,
    pub beta0: ScalarField,
    pub n_left: f64,
    pub n_right: f64,
    /// Clamped length of the deformed rod.
    pub l0: f64,
    pub law: ExampleLawParams,
    pub root_tol: f64,
}

/// Rate field together with the quasi-static states it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsEvaluation {
    pub rate: ScalarField,
    pub elastic: ElasticSolution,
    pub nutrient: NutrientSolution,
}

/// One elastic and one nutrient solve, then the law at every node.
pub fn evaluate_rhs(model: &CoupledModel, growth: &ScalarField) -> Result<RhsEvaluation> {
    check_growth(growth)?;
    let elastic = elastic_response(&model.energy, growth, model.l0, model.root_tol)?;
    let nutrient = solve_nutrient_lagrangian(growth, &model.d0, &model.beta0, model.n_left, model.n_right)?;
    let rate = growth
        .grid()
        .nodes()
        .zip(growth.values())
        .zip(nutrient.reference.values())
        .map(|((x, &g), &n)| example_law(&model.law, g, elastic.stress, n, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(RhsEvaluation { rate: ScalarField::new(*growth.grid(), rate)?, elastic, nutrient })
}

pub fn growth_rhs(model: &CoupledModel, growth: &ScalarField) -> Result<ScalarField> {
    evaluate_rhs(model, growth).map(|e| e.rate)
}
