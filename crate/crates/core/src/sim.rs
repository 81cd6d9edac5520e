//! Time integration of `dG/dt = rate(G)` with classical fixed-step RK4.
//!
//! Stress and nutrient are recomputed from the stage field at every stage, so
//! one step costs four elastic solves and four nutrient solves. A stage or
//! result with a non-positive node aborts the run with a growth collapse; no
//! clipping is applied.

use serde::Serialize;

use crate::elasticity::check_growth;
use crate::error::{Error, Result};
use crate::growth::{envelope, evaluate_rhs, CoupledModel, RhsEvaluation};
use crate::numerics::ScalarField;

/// Maximum-principle slack on the nutrient.
pub const MAX_PRINCIPLE_TOL: f64 = 1e-12;
/// Relative slack of the exponential envelope.
pub const ENVELOPE_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub growth: ScalarField,
}

impl SimState {
    pub fn new(t: f64, growth: ScalarField) -> Result<Self> {
        check_growth(&growth)?;
        Ok(Self { t, growth })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TimeSettings {
    pub t_end: f64,
    pub n_steps: usize,
    pub snapshot_every: usize,
}

impl TimeSettings {
    /// Number of steps actually taken; zero when `t_end == 0`.
    pub fn effective_steps(&self) -> usize {
        if self.t_end == 0.0 {
            0
        } else {
            self.n_steps
        }
    }

    pub fn time_at(&self, step: usize) -> f64 {
        let n = self.effective_steps();
        if step == n {
            self.t_end
        } else {
            self.t_end * step as f64 / n as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckResult {
    pub pass: bool,
    pub worst_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `min G`, must be positive.
    pub positivity: CheckResult,
    /// Smallest distance of `G` to the exponential envelope (negative when
    /// outside); passes down to `-1e-8 G0 e^{c_max t}`.
    pub envelope: CheckResult,
    /// `|y(L0) - l0|`, at most `10 root_tol`.
    pub boundary_residual: CheckResult,
    /// Largest excursion of `N` outside `[0, max(nL, nR)]` (negative when
    /// inside), at most `1e-12`.
    pub max_principle: CheckResult,
}

impl Diagnostics {
    pub fn all_pass(&self) -> bool {
        self.positivity.pass && self.envelope.pass && self.boundary_residual.pass && self.max_principle.pass
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub stress: f64,
    pub growth: ScalarField,
    pub g: ScalarField,
    pub y: ScalarField,
    pub fe: ScalarField,
    pub nutrient: ScalarField,
    pub diagnostics: Diagnostics,
}

/// One row of the per-step time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub stress: f64,
    pub y_residual: f64,
    pub g_min: f64,
    pub g_max: f64,
    pub n_min: f64,
    pub n_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Abort {
    pub step: usize,
    pub t: f64,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub series: Vec<SeriesRow>,
    pub snapshots: Vec<Snapshot>,
    pub abort: Option<Abort>,
}

impl Trajectory {
    pub fn final_snapshot(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }
}

fn axpy(base: &ScalarField, scale: f64, dir: &ScalarField) -> Result<ScalarField> {
    base.zip_with(dir, |b, d| b + scale * d)
}

fn rk4_from(model: &CoupledModel, state: &SimState, dt: f64, k1: &ScalarField) -> Result<SimState> {
    let g = &state.growth;
    let k2 = evaluate_rhs(model, &axpy(g, 0.5 * dt, k1)?)?.rate;
    let k3 = evaluate_rhs(model, &axpy(g, 0.5 * dt, &k2)?)?.rate;
    let k4 = evaluate_rhs(model, &axpy(g, dt, &k3)?)?.rate;
    let sixth = dt / 6.0;
    let next: Vec<f64> = (0..g.values().len())
        .map(|i| g.value(i) + sixth * (k1.value(i) + 2.0 * k2.value(i) + 2.0 * k3.value(i) + k4.value(i)))
        .collect();
    SimState::new(state.t + dt, ScalarField::new(*g.grid(), next)?)
}

pub fn rk4_step(model: &CoupledModel, state: &SimState, dt: f64) -> Result<SimState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let k1 = evaluate_rhs(model, &state.growth)?.rate;
    rk4_from(model, state, dt, &k1)
}

/// Positivity, envelope containment relative to `initial`, boundary
/// restoration and the nutrient maximum principle.
pub fn check_wellposedness(
    model: &CoupledModel,
    initial: &ScalarField,
    t: f64,
    growth: &ScalarField,
    y: &ScalarField,
    nutrient: &ScalarField,
) -> Diagnostics {
    let g_min = growth.min();
    let env = envelope(&model.law);
    let (lo, hi) = env.bounds(t);
    let mut margin = f64::INFINITY;
    let mut inside = true;
    for (&g, &g0) in growth.values().iter().zip(initial.values()) {
        let m = (g - g0 * lo).min(g0 * hi - g);
        inside &= m >= -ENVELOPE_REL_TOL * g0 * hi;
        margin = margin.min(m);
    }
    let residual = (y.last() - model.l0).abs();
    let n_cap = model.n_left.max(model.n_right);
    let excursion = (-nutrient.min()).max(nutrient.max() - n_cap);
    Diagnostics {
        positivity: CheckResult { pass: g_min > 0.0, worst_value: g_min },
        envelope: CheckResult { pass: inside, worst_value: margin },
        boundary_residual: CheckResult { pass: residual <= 10.0 * model.root_tol, worst_value: residual },
        max_principle: CheckResult { pass: excursion <= MAX_PRINCIPLE_TOL, worst_value: excursion },
    }
}

fn snapshot(model: &CoupledModel, initial: &ScalarField, step: usize, state: &SimState, eval: &RhsEvaluation) -> Snapshot {
    let diagnostics = check_wellposedness(
        model,
        initial,
        state.t,
        &state.growth,
        &eval.elastic.y,
        &eval.nutrient.reference,
    );
    Snapshot {
        step,
        t: state.t,
        stress: eval.elastic.stress,
        growth: state.growth.clone(),
        g: eval.elastic.g.clone(),
        y: eval.elastic.y.clone(),
        fe: eval.elastic.fe.clone(),
        nutrient: eval.nutrient.reference.clone(),
        diagnostics,
    }
}

fn series_row(model: &CoupledModel, state: &SimState, eval: &RhsEvaluation) -> SeriesRow {
    SeriesRow {
        t: state.t,
        stress: eval.elastic.stress,
        y_residual: eval.elastic.boundary_residual(model.l0),
        g_min: state.growth.min(),
        g_max: state.growth.max(),
        n_min: eval.nutrient.reference.min(),
        n_max: eval.nutrient.reference.max(),
    }
}

/// Fixed-step march from `t = 0` to `t_end`. A failure stops the march and
/// is recorded in [`Trajectory::abort`] alongside the partial results.
pub fn run(model: &CoupledModel, initial: &ScalarField, settings: &TimeSettings) -> Trajectory {
    let mut traj = Trajectory { series: Vec::new(), snapshots: Vec::new(), abort: None };
    let n = settings.effective_steps();
    let every = settings.snapshot_every.max(1);
    let mut state = match SimState::new(0.0, initial.clone()) {
        Ok(s) => s,
        Err(error) => {
            traj.abort = Some(Abort { step: 0, t: 0.0, error });
            return traj;
        }
    };
    for step in 0..=n {
        let eval = match evaluate_rhs(model, &state.growth) {
            Ok(e) => e,
            Err(error) => {
                traj.abort = Some(Abort { step, t: state.t, error });
                return traj;
            }
        };
        traj.series.push(series_row(model, &state, &eval));
        if step % every == 0 || step == n {
            traj.snapshots.push(snapshot(model, initial, step, &state, &eval));
        }
        if step == n {
            break;
        }
        let dt = settings.time_at(step + 1) - state.t;
        match rk4_from(model, &state, dt, &eval.rate) {
            Ok(mut next) => {
                next.t = settings.time_at(step + 1);
                state = next;
            }
            Err(error) => {
                traj.abort = Some(Abort { step: step + 1, t: settings.time_at(step + 1), error });
                return traj;
            }
        }
    }
    traj
}
