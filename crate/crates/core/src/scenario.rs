//! JSON scenario documents.
//!
//! Every key is optional; the defaults describe a unit rod clamped at its
//! natural length, bathed in nutrient at both ends, with a logistic stress
//! response in `[0.5, 1.5]` and a saturating nutrient response in `[0, 1]`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{EnergyKind, EnergyModel};
use crate::error::Error as SolverError;
use crate::growth::{CoupledModel, ExampleLawParams};
use crate::numerics::{make_uniform_grid, Grid, ScalarField};
use crate::sim::TimeSettings;

/// A spatial coefficient on `[0, L0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientSpec {
    Constant { value: f64 },
    /// `a + b X`
    Affine { a: f64, b: f64 },
    /// Piecewise-linear through `(xs[i], values[i])`.
    Table { xs: Vec<f64>, values: Vec<f64> },
}

impl CoefficientSpec {
    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::Affine { a, b } => a + b * x,
            Self::Table { xs, values } => {
                let j = xs.partition_point(|&t| t < x).clamp(1, xs.len() - 1);
                let w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
                values[j - 1] + w.clamp(0.0, 1.0) * (values[j] - values[j - 1])
            }
        }
    }

    pub fn on_grid(&self, grid: Grid) -> Result<ScalarField, SolverError> {
        ScalarField::from_fn(grid, |x| self.eval(x))
    }

    fn validate(&self, path: &str, length: f64, errors: &mut Vec<FieldError>) {
        let mut push = |msg: String| errors.push(FieldError::new(path, msg));
        match self {
            Self::Constant { value } if !value.is_finite() => push("value must be finite".into()),
            Self::Affine { a, b } if !(a.is_finite() && b.is_finite()) => push("a and b must be finite".into()),
            Self::Table { xs, values } => {
                if xs.len() < 2 || xs.len() != values.len() {
                    push(format!(
                        "table needs at least two points and matching lengths, got {} xs and {} values",
                        xs.len(),
                        values.len()
                    ));
                } else if xs.iter().chain(values).any(|v| !v.is_finite()) {
                    push("table entries must be finite".into());
                } else if xs.windows(2).any(|w| !(w[1] > w[0])) {
                    push("table xs must be strictly increasing".into());
                } else if xs[0] > 1e-12 || xs[xs.len() - 1] < length - 1e-12 {
                    push(format!(
                        "table xs must span [0, {length}], got [{}, {}]",
                        xs[0],
                        xs[xs.len() - 1]
                    ));
                }
            }
            _ => {}
        }
    }

    fn validate_positive(&self, path: &str, grid: Option<Grid>, errors: &mut Vec<FieldError>) {
        let before = errors.len();
        self.validate(path, grid.map_or(f64::INFINITY, |g| g.length()), errors);
        if errors.len() > before {
            return;
        }
        if let Some(grid) = grid {
            if let Some((x, v)) = grid.nodes().map(|x| (x, self.eval(x))).find(|(_, v)| !(*v > 0.0)) {
                errors.push(FieldError::new(path, format!("must be positive, got {v} at X = {x}")));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Geometry {
    #[serde(rename = "L0")]
    pub reference_length: f64,
    #[serde(rename = "l0")]
    pub clamped_length: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Self { reference_length: 1.0, clamped_length: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    #[serde(rename = "T")]
    pub t_end: f64,
    pub n_steps: usize,
    pub snapshot_every: usize,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self { t_end: 1.0, n_steps: 100, snapshot_every: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    #[serde(rename = "M")]
    pub intervals: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { intervals: 128 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergySection {
    pub kind: EnergyKind,
    pub mu: CoefficientSpec,
}

impl Default for EnergySection {
    fn default() -> Self {
        Self { kind: EnergyKind::LogQuadratic, mu: CoefficientSpec::constant(1.0) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NutrientSection {
    #[serde(rename = "D0")]
    pub diffusion: CoefficientSpec,
    #[serde(rename = "beta0")]
    pub absorption: CoefficientSpec,
    #[serde(rename = "nL")]
    pub n_left: f64,
    #[serde(rename = "nR")]
    pub n_right: f64,
}

impl Default for NutrientSection {
    fn default() -> Self {
        Self {
            diffusion: CoefficientSpec::constant(1.0),
            absorption: CoefficientSpec::constant(1.0),
            n_left: 1.0,
            n_right: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LawSection {
    pub gamma: CoefficientSpec,
    pub mu0: f64,
    pub mu1: f64,
    #[serde(rename = "S_ref")]
    pub s_ref: f64,
    pub eta0: f64,
    pub eta1: f64,
    #[serde(rename = "N_ref")]
    pub n_ref: f64,
}

impl Default for LawSection {
    fn default() -> Self {
        Self {
            gamma: CoefficientSpec::constant(1.0),
            mu0: 0.5,
            mu1: 1.5,
            s_ref: 1.0,
            eta0: 0.0,
            eta1: 1.0,
            n_ref: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsSection {
    pub root_tol: f64,
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self { root_tol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSection {
    #[serde(rename = "G")]
    pub growth: CoefficientSpec,
}

impl Default for InitialSection {
    fn default() -> Self {
        Self { growth: CoefficientSpec::constant(1.0) }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub geometry: Geometry,
    pub time: TimeSection,
    pub grid: GridSection,
    pub energy: EnergySection,
    pub nutrient: NutrientSection,
    pub law: LawSection,
    pub numerics: NumericsSection,
    pub initial: InitialSection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl FieldError {
    fn new(path: &str, message: impl Into<String>) -> Self {
        Self { path: path.to_owned(), message: message.into() }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("invalid scenario:\n{}", .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<FieldError>),
    #[error("scenario construction failed: {0}")]
    Build(#[from] SolverError),
}

/// Fully constructed solver inputs.
#[derive(Debug, Clone)]
pub struct Problem {
    pub model: CoupledModel,
    pub initial: ScalarField,
    pub settings: TimeSettings,
}

/// Extremes of the nutrient coefficients on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientBounds {
    #[serde(rename = "D_min")]
    pub d_min: f64,
    #[serde(rename = "D_max")]
    pub d_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
}

fn require(errors: &mut Vec<FieldError>, ok: bool, path: &str, msg: impl Into<String>) {
    if !ok {
        errors.push(FieldError::new(path, msg));
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let scenario: Self = serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        let errors = scenario.validate();
        if errors.is_empty() {
            Ok(scenario)
        } else {
            Err(ScenarioError::Validation(errors))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("scenario serializes")
    }

    /// Every violated constraint, tagged with its JSON path.
    pub fn validate(&self) -> Vec<FieldError> {
        let mut e = Vec::new();
        let geo = &self.geometry;
        require(&mut e, geo.reference_length > 0.0 && geo.reference_length.is_finite(), "geometry.L0", format!("must be positive, got {}", geo.reference_length));
        require(&mut e, geo.clamped_length > 0.0 && geo.clamped_length.is_finite(), "geometry.l0", format!("must be positive, got {}", geo.clamped_length));
        let t = &self.time;
        require(&mut e, t.t_end > 0.0 && t.t_end.is_finite(), "time.T", format!("must be positive, got {}", t.t_end));
        require(&mut e, t.n_steps >= 1, "time.n_steps", "must be at least 1");
        require(&mut e, t.snapshot_every >= 1, "time.snapshot_every", "must be at least 1");
        require(&mut e, self.grid.intervals >= 8, "grid.M", format!("must be at least 8, got {}", self.grid.intervals));
        let n = &self.nutrient;
        require(&mut e, n.n_left >= 0.0 && n.n_left.is_finite(), "nutrient.nL", format!("must be non-negative, got {}", n.n_left));
        require(&mut e, n.n_right >= 0.0 && n.n_right.is_finite(), "nutrient.nR", format!("must be non-negative, got {}", n.n_right));
        let l = &self.law;
        require(&mut e, l.mu0.is_finite() && l.mu1.is_finite() && l.mu0 <= l.mu1, "law.mu1", format!("need finite mu0 <= mu1, got {} and {}", l.mu0, l.mu1));
        require(&mut e, l.s_ref > 0.0 && l.s_ref.is_finite(), "law.S_ref", format!("must be positive, got {}", l.s_ref));
        require(&mut e, l.eta0 >= 0.0 && l.eta0.is_finite(), "law.eta0", format!("must be non-negative, got {}", l.eta0));
        require(&mut e, l.eta1.is_finite() && l.eta1 >= l.eta0, "law.eta1", format!("need eta0 <= eta1, got {} and {}", l.eta0, l.eta1));
        require(&mut e, l.n_ref > 0.0 && l.n_ref.is_finite(), "law.N_ref", format!("must be positive, got {}", l.n_ref));
        let tol = self.numerics.root_tol;
        require(&mut e, tol > 0.0 && tol.is_finite(), "numerics.root_tol", format!("must be positive, got {tol}"));

        let grid = make_uniform_grid(geo.reference_length, self.grid.intervals.max(2)).ok();
        self.energy.mu.validate_positive("energy.mu", grid, &mut e);
        n.diffusion.validate_positive("nutrient.D0", grid, &mut e);
        n.absorption.validate_positive("nutrient.beta0", grid, &mut e);
        l.gamma.validate_positive("law.gamma", grid, &mut e);
        self.initial.growth.validate_positive("initial.G", grid, &mut e);
        e
    }

    pub fn with_intervals(&self, intervals: usize) -> Self {
        let mut s = self.clone();
        s.grid.intervals = intervals;
        s
    }

    pub fn with_steps(&self, n_steps: usize) -> Self {
        let mut s = self.clone();
        s.time.n_steps = n_steps;
        s
    }

    pub fn reference_grid(&self) -> Result<Grid, SolverError> {
        make_uniform_grid(self.geometry.reference_length, self.grid.intervals)
    }

    pub fn energy_model(&self) -> Result<EnergyModel, ScenarioError> {
        let grid = self.reference_grid()?;
        Ok(EnergyModel::new(self.energy.kind, self.energy.mu.on_grid(grid)?)?)
    }

    pub fn coefficient_bounds(&self) -> Result<CoefficientBounds, ScenarioError> {
        let grid = self.reference_grid()?;
        let d = self.nutrient.diffusion.on_grid(grid)?;
        let b = self.nutrient.absorption.on_grid(grid)?;
        Ok(CoefficientBounds { d_min: d.min(), d_max: d.max(), beta_min: b.min(), beta_max: b.max() })
    }

    /// Validates and evaluates every coefficient on the reference grid.
    pub fn build(&self) -> Result<Problem, ScenarioError> {
        let errors = self.validate();
        if !errors.is_empty() {
            return Err(ScenarioError::Validation(errors));
        }
        let grid = self.reference_grid()?;
        let law = &self.law;
        let model = CoupledModel {
            energy: self.energy_model()?,
            d0: self.nutrient.diffusion.on_grid(grid)?,
            beta0: self.nutrient.absorption.on_grid(grid)?,
            n_left: self.nutrient.n_left,
            n_right: self.nutrient.n_right,
            l0: self.geometry.clamped_length,
            law: ExampleLawParams::new(
                law.gamma.on_grid(grid)?,
                (law.mu0, law.mu1),
                law.s_ref,
                (law.eta0, law.eta1),
                law.n_ref,
            )?,
            root_tol: self.numerics.root_tol,
        };
        Ok(Problem {
            model,
            initial: self.initial.growth.on_grid(grid)?,
            settings: TimeSettings {
                t_end: self.time.t_end,
                n_steps: self.time.n_steps,
                snapshot_every: self.time.snapshot_every,
            },
        })
    }
}

pub fn parse_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
    Scenario::from_json(&text)
}
