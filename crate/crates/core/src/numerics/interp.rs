use super::field::ScalarField;
use crate::error::{Error, Result};

/// Absolute slack accepted at the ends of a domain or value range.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Piecewise-linear interpolation; exact at nodes. Points within
/// [`DOMAIN_SLACK`] of an end are clamped onto it.
pub fn eval_linear(field: &ScalarField, x: f64) -> Result<f64> {
    let grid = field.grid();
    let len = grid.length();
    if !(x >= -DOMAIN_SLACK && x <= len + DOMAIN_SLACK) {
        return Err(Error::OutOfDomain { x, lo: 0.0, hi: len });
    }
    let x = x.clamp(0.0, len);
    let h = grid.spacing();
    let m = grid.intervals();
    let k = ((x / h).floor() as usize).min(m - 1);
    let x0 = grid.node(k);
    let x1 = grid.node(k + 1);
    let v = field.values();
    if x == x1 {
        return Ok(v[k + 1]);
    }
    let w = (x - x0) / (x1 - x0);
    Ok(v[k] + w * (v[k + 1] - v[k]))
}

/// Inverse of a strictly increasing piecewise-linear field: the abscissa at
/// which the field takes the value `target`.
pub fn invert_monotone_field(field: &ScalarField, target: f64) -> Result<f64> {
    let v = field.values();
    if let Some(i) = v.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NotMonotone { node: i + 1 });
    }
    let (lo, hi) = (v[0], v[v.len() - 1]);
    if !(target >= lo && target <= hi) {
        return Err(Error::OutOfRange { target, lo, hi });
    }
    // first node whose value is >= target
    let j = v.partition_point(|&val| val < target);
    let grid = field.grid();
    if j == 0 || v[j] == target {
        return Ok(grid.node(j));
    }
    let (x0, x1) = (grid.node(j - 1), grid.node(j));
    let w = (target - v[j - 1]) / (v[j] - v[j - 1]);
    Ok(x0 + w * (x1 - x0))
}
