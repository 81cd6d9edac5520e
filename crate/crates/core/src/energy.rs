//! Stored energy densities `W(X, p)` on the reference rod and the inverse
//! stress map `pi0(X, S)`, the unique stretch with `dW/dp(X, pi0) = S`.
//!
//! The default density is `W = mu(X) (p^2 - 1 - 2 ln p)`. It vanishes at
//! `p = 1`, is strictly convex in `p`, blows up as `p -> 0+`, and has a
//! closed-form inverse stress map. A second family,
//! `W = mu(X) ((p^3 - 1)/3 - ln p)`, goes through the generic Newton path.
//!
//! The stiffness `mu` is a piecewise-linear field, so `dmu/dX` is the slope
//! of the containing cell (right-hand cell at interior nodes).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eval_linear, find_root_monotone_newton, ScalarField};

/// Absolute tolerance on the stress residual of `pi0`, scaled by `max(1, |S|)`.
pub const PI0_TOL: f64 = 1e-12;

/// Stored energy density with the derivatives needed by the solvers.
pub trait StoredEnergy {
    /// Nodes of the reference grid at which assumption checks are made.
    fn reference_nodes(&self) -> Vec<f64>;
    fn w(&self, x: f64, p: f64) -> Result<f64>;
    fn dw_dp(&self, x: f64, p: f64) -> Result<f64>;
    fn d2w_dp2(&self, x: f64, p: f64) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyKind {
    /// `mu (p^2 - 1 - 2 ln p)`
    LogQuadratic,
    /// `mu ((p^3 - 1)/3 - ln p)`
    CubicLog,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyModel {
    kind: EnergyKind,
    mu: ScalarField,
}

/// Stress interval and the stretch interval it maps into under `pi0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StressBracket {
    pub sigma0: f64,
    pub sigma1: f64,
    pub p0: f64,
    pub p1: f64,
}

pub fn make_log_quadratic(mu: ScalarField) -> Result<EnergyModel> {
    EnergyModel::new(EnergyKind::LogQuadratic, mu)
}

fn check_stretch(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidStretch(p))
    }
}

impl EnergyModel {
    pub fn new(kind: EnergyKind, mu: ScalarField) -> Result<Self> {
        if let Some((i, &v)) = mu.values().iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
            return Err(Error::InvalidCoefficient(format!(
                "stiffness mu must be positive, got {v} at node {i}"
            )));
        }
        Ok(Self { kind, mu })
    }

    pub fn kind(&self) -> EnergyKind {
        self.kind
    }

    pub fn mu(&self) -> &ScalarField {
        &self.mu
    }

    fn mu_at(&self, x: f64) -> Result<f64> {
        eval_linear(&self.mu, x)
    }

    /// `W` divided by `mu`.
    fn shape(&self, p: f64) -> f64 {
        match self.kind {
            EnergyKind::LogQuadratic => p * p - 1.0 - 2.0 * p.ln(),
            EnergyKind::CubicLog => (p * p * p - 1.0) / 3.0 - p.ln(),
        }
    }

    fn shape_dp(&self, p: f64) -> f64 {
        match self.kind {
            EnergyKind::LogQuadratic => 2.0 * (p - 1.0 / p),
            EnergyKind::CubicLog => p * p - 1.0 / p,
        }
    }

    fn shape_dpp(&self, p: f64) -> f64 {
        match self.kind {
            EnergyKind::LogQuadratic => 2.0 * (1.0 + 1.0 / (p * p)),
            EnergyKind::CubicLog => 2.0 * p + 1.0 / (p * p),
        }
    }

    /// Mixed derivative `d^2 W / dX dp`.
    pub fn d2w_dxdp(&self, x: f64, p: f64) -> Result<f64> {
        check_stretch(p)?;
        self.mu_at(x)?;
        Ok(self.mu.slope_at(x) * self.shape_dp(p))
    }

    pub fn pi0(&self, x: f64, s: f64) -> Result<f64> {
        let mu = self.mu_at(x)?;
        self.pi0_with_mu(mu, s)
    }

    fn pi0_with_mu(&self, mu: f64, s: f64) -> Result<f64> {
        if !s.is_finite() {
            return Err(Error::NumericFailure(format!("non-finite stress {s}")));
        }
        match self.kind {
            EnergyKind::LogQuadratic => {
                // positive root of 2 mu p^2 - S p - 2 mu = 0, cancellation-free
                let disc = (s * s + 16.0 * mu * mu).sqrt();
                Ok(if s >= 0.0 { (s + disc) / (4.0 * mu) } else { 4.0 * mu / (disc - s) })
            }
            _ => {
                // Newton in q = ln p keeps iterates in (0, inf)
                let tol = PI0_TOL * s.abs().max(1.0);
                let q = find_root_monotone_newton(
                    |q| {
                        let p = q.exp();
                        (mu * self.shape_dp(p) - s, mu * self.shape_dpp(p) * p)
                    },
                    0.0,
                    tol,
                )?;
                Ok(q.exp())
            }
        }
    }

    /// `d pi0 / dS = 1 / W_pp(X, pi0(X, S))`.
    pub fn dpi0_ds(&self, x: f64, s: f64) -> Result<f64> {
        let p = self.pi0(x, s)?;
        self.d2w_dp2(x, p).map(|w| 1.0 / w)
    }

    /// `d pi0 / dX = -W_Xp / W_pp` at `p = pi0(X, S)`.
    pub fn dpi0_dx(&self, x: f64, s: f64) -> Result<f64> {
        let p = self.pi0(x, s)?;
        Ok(-self.d2w_dxdp(x, p)? / self.d2w_dp2(x, p)?)
    }

    /// Stress interval `[dW/dp(., p_lo)]_min .. [dW/dp(., p_hi)]_max` over the
    /// nodes, with the stretch bounds `pi0` actually attains on it. For a
    /// constant stiffness these are exactly `p_lo` and `p_hi`; for a varying
    /// one they are wider.
    pub fn stress_bracket(&self, p_lo: f64, p_hi: f64) -> Result<StressBracket> {
        check_stretch(p_lo)?;
        check_stretch(p_hi)?;
        if p_lo > p_hi {
            return Err(Error::InvalidArgument(format!(
                "stretch bounds out of order: {p_lo} > {p_hi}"
            )));
        }
        let mus = self.mu.values();
        let sigma0 = mus.iter().map(|m| m * self.shape_dp(p_lo)).fold(f64::INFINITY, f64::min);
        let sigma1 = mus.iter().map(|m| m * self.shape_dp(p_hi)).fold(f64::NEG_INFINITY, f64::max);
        let mut p0 = p_lo;
        let mut p1 = p_hi;
        for &m in mus {
            p0 = p0.min(self.pi0_with_mu(m, sigma0)?);
            p1 = p1.max(self.pi0_with_mu(m, sigma1)?);
        }
        Ok(StressBracket { sigma0, sigma1, p0, p1 })
    }
}

impl StoredEnergy for EnergyModel {
    fn reference_nodes(&self) -> Vec<f64> {
        self.mu.grid().nodes().collect()
    }

    fn w(&self, x: f64, p: f64) -> Result<f64> {
        check_stretch(p)?;
        Ok(self.mu_at(x)? * self.shape(p))
    }

    fn dw_dp(&self, x: f64, p: f64) -> Result<f64> {
        check_stretch(p)?;
        Ok(self.mu_at(x)? * self.shape_dp(p))
    }

    fn d2w_dp2(&self, x: f64, p: f64) -> Result<f64> {
        check_stretch(p)?;
        Ok(self.mu_at(x)? * self.shape_dpp(p))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub pass: bool,
    /// Extremal value of the checked quantity over all probes.
    pub worst_value: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub probes: Vec<f64>,
    pub checks: Vec<AssumptionCheck>,
}

impl EnergyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Probe-based checks of the structural assumptions on `W`: zero energy at
/// unit stretch, positive curvature, strictly increasing stress, and growth
/// of `W` as the stretch decreases below one.
pub fn validate_energy<E: StoredEnergy + ?Sized>(model: &E, probes: &[f64]) -> EnergyReport {
    let mut sorted: Vec<f64> = probes.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nodes = model.reference_nodes();
    let mut checks = Vec::new();

    let bad_probe = sorted.iter().copied().find(|p| !(*p > 0.0 && p.is_finite()));
    if let Some(p) = bad_probe {
        checks.push(AssumptionCheck {
            name: "probes_positive",
            pass: false,
            worst_value: p,
            detail: format!("probe {p} is not a positive stretch"),
        });
        return EnergyReport { probes: sorted, checks };
    }

    let mut worst = 0.0f64;
    let mut err = None;
    for &x in &nodes {
        match model.w(x, 1.0) {
            Ok(v) => worst = worst.max(v.abs()),
            Err(e) => err = Some(e),
        }
    }
    checks.push(AssumptionCheck {
        name: "zero_energy_at_unit_stretch",
        pass: err.is_none() && worst <= 1e-12,
        worst_value: worst,
        detail: err.map_or("max |W(X,1)| over nodes, limit 1e-12".into(), |e| e.to_string()),
    });

    let mut min_curv = f64::INFINITY;
    let mut min_gap = f64::INFINITY;
    let mut min_blowup = f64::INFINITY;
    let mut err = None;
    let small: Vec<f64> = sorted.iter().copied().filter(|&p| p < 1.0).collect();
    for &x in &nodes {
        for &p in &sorted {
            match model.d2w_dp2(x, p) {
                Ok(v) => min_curv = min_curv.min(v),
                Err(e) => err = Some(e),
            }
        }
        for w in sorted.windows(2) {
            match (model.dw_dp(x, w[0]), model.dw_dp(x, w[1])) {
                (Ok(a), Ok(b)) => min_gap = min_gap.min(b - a),
                (Err(e), _) | (_, Err(e)) => err = Some(e),
            }
        }
        for w in small.windows(2) {
            match (model.w(x, w[0]), model.w(x, w[1])) {
                (Ok(a), Ok(b)) => min_blowup = min_blowup.min(a - b),
                (Err(e), _) | (_, Err(e)) => err = Some(e),
            }
        }
    }
    let failed = err.map(|e| e.to_string());
    checks.push(AssumptionCheck {
        name: "positive_curvature",
        pass: failed.is_none() && min_curv > 0.0,
        worst_value: min_curv,
        detail: failed.clone().unwrap_or_else(|| "min d2W/dp2 over nodes and probes".into()),
    });
    checks.push(AssumptionCheck {
        name: "stress_strictly_increasing",
        pass: failed.is_none() && (sorted.len() < 2 || min_gap > 0.0),
        worst_value: if sorted.len() < 2 { 0.0 } else { min_gap },
        detail: failed.clone().unwrap_or_else(|| "min increment of dW/dp between sorted probes".into()),
    });
    checks.push(AssumptionCheck {
        name: "blow_up_at_zero_stretch",
        pass: failed.is_none() && (small.len() < 2 || min_blowup > 0.0),
        worst_value: if small.len() < 2 { 0.0 } else { min_blowup },
        detail: failed.unwrap_or_else(|| {
            if small.len() < 2 {
                "fewer than two probes below 1, not probed".into()
            } else {
                "min decrease of W between consecutive probes below 1".into()
            }
        }),
    });
    EnergyReport { probes: sorted, checks }
}
