//! Composite trapezoid quadrature. Both entry points accumulate in the same
//! order, so `integrate(f)` is bit-identical to the last node of
//! `cumulative_integral(f)`.

use super::field::ScalarField;

fn trapezoid_increments(field: &ScalarField) -> impl Iterator<Item = f64> + '_ {
    let half_h = 0.5 * field.grid().spacing();
    field.values().windows(2).map(move |w| half_h * (w[0] + w[1]))
}

pub fn integrate(field: &ScalarField) -> f64 {
    trapezoid_increments(field).fold(0.0, |acc, d| acc + d)
}

/// Running trapezoid integral from the left end; the first node is zero.
pub fn cumulative_integral(field: &ScalarField) -> ScalarField {
    let mut out = Vec::with_capacity(field.grid().node_count());
    out.push(0.0);
    let mut acc = 0.0;
    for d in trapezoid_increments(field) {
        acc += d;
        out.push(acc);
    }
    ScalarField::new(*field.grid(), out).expect("finite increments of a finite field")
}
