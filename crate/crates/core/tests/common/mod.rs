#![allow(dead_code)]

use morphorod::energy::make_log_quadratic;
use morphorod::growth::{CoupledModel, ExampleLawParams};
use morphorod::numerics::{Grid, ScalarField};
use rand::Rng;
use std::f64::consts::PI;

/// Smooth random profile with values in `[lo, hi]`: a mean plus three sine
/// modes whose amplitudes fit inside the interval.
#[derive(Debug, Clone)]
pub struct SmoothProfile {
    mean: f64,
    modes: [(f64, f64); 3],
    length: f64,
}

impl SmoothProfile {
    pub fn random(rng: &mut impl Rng, lo: f64, hi: f64, length: f64) -> Self {
        let span = hi - lo;
        let mean = rng.gen_range(lo + 0.25 * span..hi - 0.25 * span);
        let budget = (mean - lo).min(hi - mean);
        let weights: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
        let total: f64 = weights.iter().sum::<f64>().max(1e-9);
        let modes = std::array::from_fn(|k| {
            (budget * weights[k] / total * 0.999, rng.gen_range(0.0..2.0 * PI))
        });
        Self { mean, modes, length }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.mean
            + self
                .modes
                .iter()
                .enumerate()
                .map(|(k, (a, phase))| a * ((k + 1) as f64 * PI * x / self.length + phase).sin())
                .sum::<f64>()
    }

    pub fn on(&self, grid: Grid) -> ScalarField {
        ScalarField::from_fn(grid, |x| self.eval(x)).unwrap()
    }
}

/// Unit rod, unit stiffness and nutrient coefficients.
pub fn unit_model(grid: Grid, law: ExampleLawParams, n_left: f64, n_right: f64) -> CoupledModel {
    let one = ScalarField::constant(grid, 1.0).unwrap();
    CoupledModel {
        energy: make_log_quadratic(one.clone()).unwrap(),
        d0: one.clone(),
        beta0: one,
        n_left,
        n_right,
        l0: grid.length(),
        law,
        root_tol: 1e-12,
    }
}
