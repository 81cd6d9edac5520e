use crate::error::{Error, Result};

/// Least-squares slope of `ln(error)` against `ln(spacing)`.
pub fn observed_order(errors: &[f64], spacings: &[f64]) -> Result<f64> {
    if errors.len() != spacings.len() || errors.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least two (error, spacing) pairs of equal length, got {} and {}",
            errors.len(),
            spacings.len()
        )));
    }
    if errors.iter().chain(spacings).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument("errors and spacings must be positive".into()));
    }
    if spacings.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidArgument("spacings must be strictly decreasing".into()));
    }
    let n = errors.len() as f64;
    let xs: Vec<f64> = spacings.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
