//! Safeguarded Newton iteration on a bracket.

use crate::error::{Error, Result};

/// Finds the zero of `f` in `(lo, hi)`, assuming `f < 0` near `lo` and
/// `f > 0` near `hi`. `f` returns value and derivative and is never evaluated
/// at the bracket ends, so it may be singular there.
pub(crate) fn solve_increasing<F>(f: F, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("bad bracket [{lo}, {hi}]")));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (v, dv) = f(x);
        if v == 0.0 {
            return Ok(x);
        }
        if v < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - v / dv;
        let next = if dv > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE)
            || hi - lo <= 2.0 * f64::EPSILON * x.abs().max(1e-300)
        {
            return Ok(x);
        }
    }
    Ok(x)
}
