//! The power-sum system characterizing unions of real intervals that are
//! polynomial preimages of `[-1, 1]`, and the explicit polynomial built from
//! a solution.
//!
//! Endpoints `c_1 < c_2 <= c_3 < c_4 <= ... < c_{2n}` describe a degree-`n`
//! preimage iff for `k = 1, ..., n-1`
//!
//! ```text
//! c_1^k - (c_2^k + c_3^k) + (c_4^k + c_5^k) - ... + (-1)^n c_{2n}^k = 0.
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

/// Convergence threshold for [`solve_endpoints`], scaled by `max(1, M^k)`
/// for the `k`-th equation where `M = max |c_i|`.
pub const ENDPOINT_TOL: f64 = 1e-12;
const MAX_NEWTON_STEPS: usize = 100;

/// Sign of endpoint `i` (zero-based) in the power-sum system.
fn sign(i: usize) -> f64 {
    if i.div_ceil(2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn degree_of(c: &[f64]) -> Result<usize> {
    if c.len() < 2 || !c.len().is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "expected an even number (>= 2) of endpoints, got {}",
            c.len()
        )));
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("endpoints must be finite".into()));
    }
    Ok(c.len() / 2)
}

/// Checks `c_1 < c_2 <= c_3 < c_4 <= ... < c_{2n}`.
pub fn check_order(c: &[f64]) -> Result<()> {
    degree_of(c)?;
    for i in 0..c.len() - 1 {
        let ok = if i % 2 == 0 {
            c[i] < c[i + 1]
        } else {
            c[i] <= c[i + 1]
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "endpoints out of order at positions {} and {}: {} vs {}",
                i + 1,
                i + 2,
                c[i],
                c[i + 1]
            )));
        }
    }
    Ok(())
}

/// Residual vector of the power-sum system, one entry per `k = 1..n-1`.
pub fn endpoint_residual(c: &[f64]) -> Result<Vec<f64>> {
    let n = degree_of(c)?;
    Ok((1..n as i32)
        .map(|k| c.iter().enumerate().map(|(i, x)| sign(i) * x.powi(k)).sum())
        .collect())
}

fn scaled_residual_norm(c: &[f64], r: &[f64]) -> f64 {
    let m = c.iter().map(|x| x.abs()).fold(1.0, f64::max);
    r.iter()
        .enumerate()
        .map(|(k, v)| v.abs() / m.powi(k as i32 + 1))
        .fold(0.0, f64::max)
}

/// Result of a Newton solve of the endpoint system.
#[derive(Clone, Debug)]
pub struct EndpointSolution {
    pub endpoints: Vec<f64>,
    /// Values of the free parameters at the solution.
    pub params: Vec<f64>,
    pub iterations: usize,
    /// Max-norm of the residual at the solution.
    pub residual: f64,
}

/// Solves the endpoint system with `n - 1` free coordinates.
///
/// `pinned[i]` fixes coordinate `i`; `None` marks a free coordinate, whose
/// initial guess is taken from `guesses` in order.
pub fn solve_endpoints(pinned: &[Option<f64>], guesses: &[f64]) -> Result<EndpointSolution> {
    let free: Vec<usize> = pinned
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_none())
        .map(|(i, _)| i)
        .collect();
    if free.len() != guesses.len() {
        return Err(Error::InvalidInput(format!(
            "{} free coordinates but {} guesses",
            free.len(),
            guesses.len()
        )));
    }
    let base: Vec<f64> = pinned.iter().map(|p| p.unwrap_or(0.0)).collect();
    let directions: Vec<Vec<f64>> = free
        .iter()
        .map(|&i| {
            let mut d = vec![0.0; pinned.len()];
            d[i] = 1.0;
            d
        })
        .collect();
    solve_endpoints_affine(&base, &directions, guesses)
}

/// Solves the endpoint system over an affine family
/// `c(t) = base + sum_i t_i * directions[i]` with `n - 1` parameters.
///
/// Newton's method with an analytic Jacobian; steps are halved whenever the
/// ordering of the endpoints would break or the residual would grow.
pub fn solve_endpoints_affine(
    base: &[f64],
    directions: &[Vec<f64>],
    params0: &[f64],
) -> Result<EndpointSolution> {
    let n = degree_of(base)?;
    if directions.len() != n - 1 || params0.len() != n - 1 {
        return Err(Error::InvalidInput(format!(
            "degree {n} needs {} free parameters, got {}",
            n - 1,
            directions.len()
        )));
    }
    if directions.iter().any(|d| d.len() != base.len()) {
        return Err(Error::InvalidInput("direction length mismatch".into()));
    }
    let point = |t: &[f64]| -> Vec<f64> {
        let mut c = base.to_vec();
        for (ti, d) in t.iter().zip(directions) {
            for (ci, di) in c.iter_mut().zip(d) {
                *ci += ti * di;
            }
        }
        c
    };

    let mut t = params0.to_vec();
    let mut c = point(&t);
    check_order(&c)?;
    let mut r = endpoint_residual(&c)?;
    let mut norm = scaled_residual_norm(&c, &r);
    let m = n - 1;

    for iter in 0..=MAX_NEWTON_STEPS {
        if norm <= ENDPOINT_TOL {
            let residual = r.iter().map(|v| v.abs()).fold(0.0, f64::max);
            return Ok(EndpointSolution {
                endpoints: c,
                params: t,
                iterations: iter,
                residual,
            });
        }
        if iter == MAX_NEWTON_STEPS || m == 0 {
            break;
        }
        // d r_k / d c_i = sign_i * k * c_i^(k-1); chain through the directions.
        let jac = DMatrix::from_fn(m, m, |row, col| {
            let k = row as i32 + 1;
            directions[col]
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    if *d == 0.0 {
                        0.0
                    } else {
                        d * sign(i) * k as f64 * c[i].powi(k - 1)
                    }
                })
                .sum()
        });
        let rhs = DVector::from_iterator(m, r.iter().map(|v| -v));
        let step = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Inconsistent(format!("singular endpoint Jacobian at {c:?}")))?;

        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand_t: Vec<f64> = t
                .iter()
                .zip(step.iter())
                .map(|(a, s)| a + lambda * s)
                .collect();
            let cand = point(&cand_t);
            if check_order(&cand).is_ok() {
                let cand_r = endpoint_residual(&cand)?;
                let cand_norm = scaled_residual_norm(&cand, &cand_r);
                if cand_norm < norm || cand_norm <= ENDPOINT_TOL {
                    t = cand_t;
                    c = cand;
                    r = cand_r;
                    norm = cand_norm;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence {
                context: "endpoint system (ordering or descent lost)",
                iterations: iter,
                residual: norm,
            });
        }
    }
    Err(Error::NoConvergence {
        context: "endpoint system",
        iterations: MAX_NEWTON_STEPS,
        residual: norm,
    })
}

/// The degree-`n` real polynomial with `P^{-1}([-1, 1]) = [c_1, c_2] u ... u
/// [c_{2n-1}, c_{2n}]`:
///
/// ```text
/// P(z) = 1 - 2 (z - c_1)(z - c_4)(z - c_5)(z - c_8)(z - c_9)...
///            / ((c_2 - c_1)(c_2 - c_4)(c_2 - c_5)...)
/// ```
///
/// so that `P(c_1) = 1` and `P(c_2) = -1`. The polynomial is unique up to
/// sign.
pub fn polynomial_from_endpoints(c: &[f64]) -> Result<ComplexPoly> {
    check_order(c)?;
    let residual = endpoint_residual(c)?;
    let norm = scaled_residual_norm(c, &residual);
    if norm > 1e-8 {
        return Err(Error::InvalidInput(format!(
            "endpoints do not solve the preimage system (scaled residual {norm:e})"
        )));
    }
    let chosen: Vec<f64> = c
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 4 == 0 || i % 4 == 3)
        .map(|(_, &x)| x)
        .collect();
    let denom: f64 = chosen.iter().map(|x| c[1] - x).product();
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::InvalidInput(
            "degenerate endpoint configuration (coincident values)".into(),
        ));
    }
    let roots: Vec<Complex64> = chosen.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let num = ComplexPoly::from_roots(Complex64::new(-2.0 / denom, 0.0), &roots);
    Ok(&num + &ComplexPoly::constant(Complex64::new(1.0, 0.0)))
}
