//! Predictor-corrector continuation of a solution of `G(u) = T(s)` along a
//! straight path in `s`.
//!
//! Both sides are compared through `log(G(u) / T(s))`, so Newton steps read
//! `du = -log(G / T) / (G' / G)` and stay well scaled for large degrees.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_CORRECTOR: usize = 12;
const CORRECTOR_TOL: f64 = 1e-13;
/// Bound on the change of `log T` in one step.
const MAX_LOG_STEP: f64 = 0.3;
const MIN_DT: f64 = 1e-10;
const MAX_STEPS: usize = 20_000;

/// A homotopy `G(u) = T(s)`.
pub(crate) trait Homotopy {
    /// `log(G(u) / T(s))` (principal imaginary part) and `G'(u) / G(u)`.
    fn residual(&self, u: Complex64, s: Complex64) -> Result<(Complex64, Complex64)>;
    /// `T'(s) / T(s)`.
    fn target_log_derivative(&self, s: Complex64) -> Result<Complex64>;
}

pub(crate) fn wrap_angle(x: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let mut y = x % t;
    if y > std::f64::consts::PI {
        y -= t;
    } else if y <= -std::f64::consts::PI {
        y += t;
    }
    y
}

/// Newton iteration for `G(u) = T(s)` started at `u`.
pub(crate) fn correct<H: Homotopy + ?Sized>(
    hom: &H,
    mut u: Complex64,
    s: Complex64,
) -> Result<Complex64> {
    let mut last = f64::INFINITY;
    for _ in 0..MAX_CORRECTOR {
        let (r, d) = hom.residual(u, s)?;
        if r == Complex64::new(0.0, 0.0) {
            return Ok(u);
        }
        let step = r / d;
        let size = step.norm();
        if !size.is_finite() || size > last && size > CORRECTOR_TOL * (1.0 + u.norm()) {
            break;
        }
        u -= step;
        if size <= CORRECTOR_TOL * (1.0 + u.norm()) {
            return Ok(u);
        }
        last = size;
    }
    Err(Error::NoConvergence {
        context: "continuation corrector",
        iterations: MAX_CORRECTOR,
        residual: last,
    })
}

/// Follows the solution `u0` of `G(u) = T(s0)` to `s1`.
pub(crate) fn track<H: Homotopy + ?Sized>(
    hom: &H,
    u0: Complex64,
    s0: Complex64,
    s1: Complex64,
) -> Result<Complex64> {
    let mut u = u0;
    let mut t = 0.0f64;
    let mut dt = 0.05f64;
    let ds = s1 - s0;
    for _ in 0..MAX_STEPS {
        if t >= 1.0 {
            return correct(hom, u, s1);
        }
        dt = dt.min(1.0 - t);
        if dt < MIN_DT {
            break;
        }
        let sa = s0 + ds * t;
        let sb = if t + dt >= 1.0 {
            s1
        } else {
            s0 + ds * (t + dt)
        };
        let dlog_t = hom.target_log_derivative(sa)? * (sb - sa);
        if dlog_t.norm() > MAX_LOG_STEP {
            dt *= 0.5;
            continue;
        }
        let (_, dlog_g) = hom.residual(u, sa)?;
        let u_pred = u + dlog_t / dlog_g;
        match correct(hom, u_pred, sb) {
            Ok(u_new)
                if (u_new - u_pred).norm()
                    <= 0.2 * (u_new - u).norm() + 1e-12 * (1.0 + u.norm()) =>
            {
                u = u_new;
                t += dt;
                dt = (dt * 1.5).min(0.25);
            }
            _ => dt *= 0.5,
        }
    }
    Err(Error::NoConvergence {
        context: "continuation path",
        iterations: MAX_STEPS,
        residual: 1.0 - t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `u^3 = s`, continued from `s = 8` to `s = 8 e^{i 3 pi / 2}` along an
    /// arc-free straight path avoiding the origin.
    struct Cube;

    impl Homotopy for Cube {
        fn residual(&self, u: Complex64, s: Complex64) -> Result<(Complex64, Complex64)> {
            let r = (u * u * u / s).ln();
            Ok((r, 3.0 / u))
        }
        fn target_log_derivative(&self, s: Complex64) -> Result<Complex64> {
            Ok(1.0 / s)
        }
    }

    #[test]
    fn follows_cube_root_branch() {
        let s0 = Complex64::new(8.0, 0.0);
        let s1 = Complex64::new(0.0, 8.0);
        let u = track(&Cube, Complex64::new(2.0, 0.0), s0, s1).unwrap();
        let expect = Complex64::from_polar(2.0, std::f64::consts::PI / 6.0);
        assert!((u - expect).norm() < 1e-13);
    }

    #[test]
    fn wraps_angles() {
        assert!((wrap_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-15);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-15);
    }
}
