//! CLI workflows: simulate a scenario, run refinement studies, and check the
//! stored energy. Each `cmd_*` returns the process exit code:
//! 0 ok, 1 configuration or I/O error, 2 run aborted (growth collapse or
//! another solver failure), 3 energy assumption check failed.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::energy::validate_energy;
use crate::numerics::{eval_linear, observed_order, ScalarField};
use crate::scenario::{parse_scenario, Scenario, ScenarioError};
use crate::sim::{run, CheckResult, Trajectory, MAX_PRINCIPLE_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_ABORTED: i32 = 2;
pub const EXIT_ASSUMPTIONS: i32 = 3;

pub const SERIES_HEADER: &str = "t,S,yL0_residual,G_min,G_max,N_min,N_max";
pub const SNAPSHOT_HEADER: &str = "X,G,g,y,Fe,N";
pub const ORDERS_HEADER: &str = "quantity,h_or_dt,error,observed_order";

/// Errors below this are treated as converged and left out of order fits.
pub const ERROR_FLOOR: f64 = 1e-12;

pub const SPACE_LEVELS: [usize; 4] = [64, 128, 256, 512];
pub const SPACE_REFERENCE: usize = 1024;
pub const TIME_LEVELS: [usize; 4] = [25, 50, 100, 200];
pub const TIME_REFERENCE: usize = 400;

pub const DEFAULT_PROBES: [f64; 6] = [0.01, 0.1, 0.5, 1.0, 2.0, 10.0];

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("run aborted at step {step} (t = {t}): {error}")]
    Aborted { step: usize, t: f64, error: crate::Error },
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Scenario(_) | Self::Io { .. } => EXIT_CONFIG,
            Self::Aborted { .. } => EXIT_ABORTED,
        }
    }
}

/// 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), CommandError> {
    fs::File::create(path)
        .and_then(|mut f| f.write_all(contents.as_bytes()))
        .map_err(|source| CommandError::Io { path: path.to_owned(), source })
}

fn create_dir(dir: &Path) -> Result<(), CommandError> {
    fs::create_dir_all(dir).map_err(|source| CommandError::Io { path: dir.to_owned(), source })
}

pub fn series_csv(traj: &Trajectory) -> String {
    let mut out = String::from(SERIES_HEADER);
    out.push('\n');
    for r in &traj.series {
        let cols = [r.t, r.stress, r.y_residual, r.g_min, r.g_max, r.n_min, r.n_max];
        let line: Vec<String> = cols.iter().map(|&v| fmt_num(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn snapshot_csv(s: &crate::sim::Snapshot) -> String {
    let mut out = String::from(SNAPSHOT_HEADER);
    out.push('\n');
    for (i, x) in s.growth.grid().nodes().enumerate() {
        let cols = [x, s.growth.value(i), s.g.value(i), s.y.value(i), s.fe.value(i), s.nutrient.value(i)];
        let line: Vec<String> = cols.iter().map(|&v| fmt_num(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn snapshot_file_name(step: usize) -> String {
    format!("snapshot_{step:04}.csv")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AggregateChecks {
    pub positivity: CheckResult,
    pub envelope: CheckResult,
    pub boundary_residual_max: CheckResult,
    pub max_principle: CheckResult,
}

/// Snapshot checks combined with the per-step series.
pub fn aggregate_checks(traj: &Trajectory, root_tol: f64, n_cap: f64) -> AggregateChecks {
    let snaps = &traj.snapshots;
    let min_check = |f: &dyn Fn(&crate::sim::Snapshot) -> CheckResult| CheckResult {
        pass: snaps.iter().all(|s| f(s).pass),
        worst_value: snaps.iter().map(|s| f(s).worst_value).fold(f64::INFINITY, f64::min),
    };
    let positivity = min_check(&|s| s.diagnostics.positivity);
    let envelope = min_check(&|s| s.diagnostics.envelope);
    let residual = traj.series.iter().map(|r| r.y_residual).fold(0.0, f64::max);
    let excursion = traj
        .series
        .iter()
        .map(|r| (-r.n_min).max(r.n_max - n_cap))
        .fold(f64::NEG_INFINITY, f64::max);
    AggregateChecks {
        positivity,
        envelope,
        boundary_residual_max: CheckResult { pass: residual <= 10.0 * root_tol, worst_value: residual },
        max_principle: CheckResult {
            pass: excursion <= MAX_PRINCIPLE_TOL && snaps.iter().all(|s| s.diagnostics.max_principle.pass),
            worst_value: excursion,
        },
    }
}

pub fn summary_json(scenario: &Scenario, traj: &Trajectory) -> Result<serde_json::Value, ScenarioError> {
    let checks = aggregate_checks(
        traj,
        scenario.numerics.root_tol,
        scenario.nutrient.n_left.max(scenario.nutrient.n_right),
    );
    let final_state = traj.final_snapshot().map(|s| {
        json!({"t": s.t, "S": s.stress, "G_min": s.growth.min(), "G_max": s.growth.max()})
    });
    let abort = traj
        .abort
        .as_ref()
        .map(|a| json!({"step": a.step, "t": a.t, "error": a.error.to_string()}));
    Ok(json!({
        "scenario": scenario.to_json(),
        "n_snapshots": traj.snapshots.len(),
        "final": final_state,
        "checks": checks,
        "coefficient_bounds": scenario.coefficient_bounds()?,
        "abort": abort,
    }))
}

/// Runs `scenario` and writes `series.csv`, the snapshot files and
/// `summary.json` into `out_dir`. Partial outputs are written on abort.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> Result<Trajectory, CommandError> {
    let problem = scenario.build()?;
    create_dir(out_dir)?;
    let traj = run(&problem.model, &problem.initial, &problem.settings);
    write_file(&out_dir.join("series.csv"), &series_csv(&traj))?;
    for s in &traj.snapshots {
        write_file(&out_dir.join(snapshot_file_name(s.step)), &snapshot_csv(s))?;
    }
    let summary = summary_json(scenario, &traj)?;
    write_file(
        &out_dir.join("summary.json"),
        &(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"),
    )?;
    if let Some(a) = &traj.abort {
        return Err(CommandError::Aborted { step: a.step, t: a.t, error: a.error.clone() });
    }
    Ok(traj)
}

fn report(err: &CommandError) -> i32 {
    eprintln!("error: {err}");
    err.exit_code()
}

pub fn cmd_run(scenario_path: &Path, out_dir: &Path) -> i32 {
    let scenario = match parse_scenario(scenario_path) {
        Ok(s) => s,
        Err(e) => return report(&e.into()),
    };
    match run_scenario(&scenario, out_dir) {
        Ok(traj) => {
            let last = traj.final_snapshot().expect("completed run has a final snapshot");
            println!(
                "t = {}  S = {}  G in [{}, {}]  ({} snapshots in {})",
                last.t,
                last.stress,
                last.growth.min(),
                last.growth.max(),
                traj.snapshots.len(),
                out_dir.display()
            );
            if !last.diagnostics.all_pass() {
                eprintln!("warning: well-posedness checks failed, see summary.json");
            }
            EXIT_OK
        }
        Err(e) => report(&e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RefinementMode {
    Space,
    Time,
}

/// Final-time observables compared across refinement levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub stress: f64,
    pub growth_mid: f64,
    pub nutrient_mid: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantityStudy {
    pub quantity: &'static str,
    /// Grid spacing or time step per level, coarse to fine.
    pub spacings: Vec<f64>,
    pub errors: Vec<f64>,
    /// Fitted to consecutive-level differences; `None` when fewer than two
    /// of them exceed [`ERROR_FLOOR`].
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub mode: RefinementMode,
    pub studies: Vec<QuantityStudy>,
}

impl ConvergenceReport {
    pub fn study(&self, quantity: &str) -> Option<&QuantityStudy> {
        self.studies.iter().find(|s| s.quantity == quantity)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(ORDERS_HEADER);
        out.push('\n');
        for s in &self.studies {
            let last = s.errors.len() - 1;
            for (i, (h, e)) in s.spacings.iter().zip(&s.errors).enumerate() {
                let order = match (i == last, s.order) {
                    (true, Some(p)) => fmt_num(p),
                    (true, None) => "NA".to_owned(),
                    _ => String::new(),
                };
                let _ = writeln!(out, "{},{},{},{}", s.quantity, fmt_num(*h), fmt_num(*e), order);
            }
        }
        out
    }
}

fn observe(scenario: &Scenario) -> Result<Observables, CommandError> {
    let problem = scenario.build()?;
    let traj = run(&problem.model, &problem.initial, &problem.settings);
    if let Some(a) = traj.abort {
        return Err(CommandError::Aborted { step: a.step, t: a.t, error: a.error });
    }
    let last = traj.final_snapshot().expect("completed run has a final snapshot");
    let mid = 0.5 * scenario.geometry.reference_length;
    let at_mid = |f: &ScalarField| eval_linear(f, mid).expect("midpoint inside the rod");
    Ok(Observables { stress: last.stress, growth_mid: at_mid(&last.growth), nutrient_mid: at_mid(&last.nutrient) })
}

/// Order fit over the levels whose error exceeds [`ERROR_FLOOR`].
pub fn fit_order(errors: &[f64], spacings: &[f64]) -> Option<f64> {
    let (e, h): (Vec<f64>, Vec<f64>) = errors
        .iter()
        .zip(spacings)
        .filter(|(e, _)| **e >= ERROR_FLOOR)
        .map(|(e, h)| (*e, *h))
        .unzip();
    if e.len() < 2 {
        return None;
    }
    observed_order(&e, &h).ok()
}

/// Refinement study against a finer reference solution. The levels run
/// concurrently; results are combined after all of them finish.
pub fn convergence_study(scenario: &Scenario, mode: RefinementMode) -> Result<ConvergenceReport, CommandError> {
    let (levels, reference): (&[usize], usize) = match mode {
        RefinementMode::Space => (&SPACE_LEVELS, SPACE_REFERENCE),
        RefinementMode::Time => (&TIME_LEVELS, TIME_REFERENCE),
    };
    let variant = |n: usize| match mode {
        RefinementMode::Space => scenario.with_intervals(n),
        RefinementMode::Time => scenario.with_steps(n),
    };
    let mut all: Vec<usize> = levels.to_vec();
    all.push(reference);
    let results: Vec<Observables> = all
        .par_iter()
        .map(|&n| observe(&variant(n)))
        .collect::<Result<_, _>>()?;
    let reference = results[levels.len()];
    let spacings: Vec<f64> = levels
        .iter()
        .map(|&n| match mode {
            RefinementMode::Space => scenario.geometry.reference_length / n as f64,
            RefinementMode::Time => scenario.time.t_end / n as f64,
        })
        .collect();
    let study = |quantity: &'static str, pick: fn(&Observables) -> f64| {
        let errors: Vec<f64> = results[..levels.len()].iter().map(|o| (pick(o) - pick(&reference)).abs()).collect();
        // Errors against the reference carry the reference's own error and
        // bias the slope upward, so the order is fitted to the differences
        // between consecutive levels instead.
        let steps: Vec<f64> = results.windows(2).map(|w| (pick(&w[0]) - pick(&w[1])).abs()).collect();
        let order = fit_order(&steps, &spacings);
        QuantityStudy { quantity, spacings: spacings.clone(), errors, order }
    };
    Ok(ConvergenceReport {
        mode,
        studies: vec![
            study("S", |o| o.stress),
            study("G_mid", |o| o.growth_mid),
            study("N_mid", |o| o.nutrient_mid),
        ],
    })
}

pub fn cmd_convergence(scenario_path: &Path, mode: RefinementMode, out_dir: &Path) -> i32 {
    let result = parse_scenario(scenario_path)
        .map_err(CommandError::from)
        .and_then(|s| convergence_study(&s, mode))
        .and_then(|r| {
            create_dir(out_dir)?;
            write_file(&out_dir.join("orders.csv"), &r.to_csv())?;
            Ok(r)
        });
    match result {
        Ok(r) => {
            for s in &r.studies {
                let order = s.order.map_or("n/a (errors at floor)".to_owned(), |p| format!("{p:.3}"));
                println!("{:6} finest error {:.3e}  observed order {}", s.quantity, s.errors[s.errors.len() - 1], order);
            }
            EXIT_OK
        }
        Err(e) => report(&e),
    }
}

/// Human-readable form of an energy report.
pub fn format_energy_report(r: &crate::energy::EnergyReport) -> String {
    let mut out = format!("energy assumption checks on probes {:?}\n", r.probes);
    for c in &r.checks {
        let _ = writeln!(
            out,
            "  [{}] {:28} worst = {:.6e}  ({})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.worst_value,
            c.detail
        );
    }
    out
}

pub fn cmd_validate_energy(scenario_path: &Path, probes: Option<&[f64]>, report_path: Option<&Path>) -> i32 {
    let model = match parse_scenario(scenario_path).and_then(|s| s.energy_model()) {
        Ok(m) => m,
        Err(e) => return report(&e.into()),
    };
    let r = validate_energy(&model, probes.unwrap_or(&DEFAULT_PROBES));
    print!("{}", format_energy_report(&r));
    if let Some(path) = report_path {
        let body = serde_json::to_string_pretty(&json!({"pass": r.passed(), "report": r})).expect("report serializes");
        if let Err(e) = write_file(path, &(body + "\n")) {
            return report(&e);
        }
    }
    if r.passed() {
        EXIT_OK
    } else {
        EXIT_ASSUMPTIONS
    }
}
