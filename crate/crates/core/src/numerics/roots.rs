//! Root finding for continuous, strictly increasing scalar functions.
//!
//! A bracket is located by geometric expansion away from the guess
//! (half-widths 1, 2, 4, ... up to [`MAX_DOUBLINGS`] doublings). Expansion
//! requires a strict sign change; a probe that evaluates to exactly zero is
//! not trusted on its own, since underflow can produce spurious zeros.
//! Inside the bracket, Newton (or secant) steps are taken and replaced by
//! bisection whenever they leave the bracket or stall.

use crate::error::{Error, Result};

pub const MAX_DOUBLINGS: u32 = 60;
const MAX_ITER: usize = 300;
const POLISH_STEPS: usize = 2;

/// Root of a strictly increasing `f` with `|f(root)| <= tol`, using secant
/// steps safeguarded by bisection.
pub fn find_root_monotone(mut f: impl FnMut(f64) -> f64, guess: f64, tol: f64) -> Result<f64> {
    solve(|x| (f(x), None), guess, tol)
}

/// As [`find_root_monotone`], with `f_df` returning the value and the
/// derivative so that Newton steps can be taken.
pub fn find_root_monotone_newton(
    mut f_df: impl FnMut(f64) -> (f64, f64),
    guess: f64,
    tol: f64,
) -> Result<f64> {
    solve(
        |x| {
            let (v, d) = f_df(x);
            (v, Some(d))
        },
        guess,
        tol,
    )
}

fn checked(x: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericFailure(format!("f({x}) = {v}")))
    }
}

fn solve(mut eval: impl FnMut(f64) -> (f64, Option<f64>), guess: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !guess.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "root finding needs finite guess and positive tol, got guess {guess}, tol {tol}"
        )));
    }
    let (f0, d0) = eval(guess);
    let f0 = checked(guess, f0)?;
    if f0 == 0.0 {
        return Ok(guess);
    }

    // Bracket [a, b] with f(a) < 0 < f(b).
    let (mut a, mut b);
    let dir = if f0 > 0.0 { -1.0 } else { 1.0 };
    let mut inner = (guess, f0, d0);
    let mut outer = None;
    let mut width = 1.0;
    for _ in 0..=MAX_DOUBLINGS {
        let x = guess + dir * width;
        let (v, d) = eval(x);
        let v = checked(x, v)?;
        if v * f0 < 0.0 {
            outer = Some((x, v, d));
            break;
        }
        if v != 0.0 {
            inner = (x, v, d);
        }
        width *= 2.0;
    }
    let Some(outer) = outer else {
        return Err(Error::NoBracket { guess, doublings: MAX_DOUBLINGS });
    };
    if dir < 0.0 {
        (a, b) = (outer.0, inner.0);
    } else {
        (a, b) = (inner.0, outer.0);
    }

    // Current iterate: the bracket end with the smaller residual.
    let (mut x, mut fx, mut dx) = if inner.1.abs() <= outer.1.abs() { inner } else { outer };
    let mut prev = if x == inner.0 { (outer.0, outer.1) } else { (inner.0, inner.1) };
    let mut stalled = false;
    let mut best = (x, fx);
    let mut polish = 0;

    for _ in 0..MAX_ITER {
        if fx.abs() <= tol {
            if polish == POLISH_STEPS {
                break;
            }
            polish += 1;
        }
        let step = match dx {
            Some(d) if d.is_finite() && d > 0.0 => x - fx / d,
            _ if prev.1 != fx => x - fx * (x - prev.0) / (fx - prev.1),
            _ => f64::NAN,
        };
        let cand = if !stalled && step > a && step < b { step } else { a + 0.5 * (b - a) };
        if cand <= a || cand >= b {
            // bracket collapsed to adjacent floats
            break;
        }
        let (v, d) = eval(cand);
        let v = checked(cand, v)?;
        stalled = v.abs() > 0.5 * fx.abs();
        prev = (x, fx);
        (x, fx, dx) = (cand, v, d);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        } else if polish > 0 {
            break;
        }
        if fx < 0.0 {
            a = x;
        } else {
            b = x;
        }
    }
    if best.1.abs() <= tol {
        Ok(best.0)
    } else {
        Err(Error::NumericFailure(format!(
            "residual {} above tolerance {tol} at {}",
            best.1, best.0
        )))
    }
}
