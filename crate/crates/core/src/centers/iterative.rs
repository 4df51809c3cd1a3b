//! Alternating Newton iteration for the centers.
//!
//! Each outer step solves `Q(w_j) = h(z_j)` (`j < ell`) together with
//! `sum n_j a_j = -p_{n-1} / p_n` for the centers with the critical points
//! `w_j` of the previous `Q` held fixed, then recomputes the `w_j`. The
//! equations are solved for `log |Q|`, whose Jacobian is
//! `d log|Q(w_j)| / d a_i = -n_i / (w_j - a_i)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{q_critical_points, Axis, LemniscaticData};
use crate::error::{Error, Result};
use crate::preimage::Preimage;

/// Tolerances and budgets of [`centers_iterative`].
#[derive(Clone, Debug, Serialize)]
pub struct IterationOptions {
    pub abstol: f64,
    pub reltol: f64,
    pub max_outer: usize,
    pub inner_tol: f64,
    pub max_inner: usize,
}

impl Default for IterationOptions {
    fn default() -> Self {
        IterationOptions {
            abstol: 1e-13,
            reltol: 1e-13,
            max_outer: 50,
            inner_tol: 1e-14,
            max_inner: 50,
        }
    }
}

/// History of an iteration. Entry 0 holds the initial values.
#[derive(Clone, Debug, Default, Serialize)]
pub struct IterationTrace {
    pub centers: Vec<Vec<f64>>,
    pub critical_points: Vec<Vec<f64>>,
    /// `max_j |a_j^{k+1} - a_j^k|` per outer step.
    pub deltas: Vec<f64>,
    /// Newton steps spent in each inner solve.
    pub inner_iterations: Vec<usize>,
    pub converged: bool,
    /// Outer steps after the first solve until the stopping rule held.
    pub steps: usize,
}

struct System<'a> {
    counts: &'a [f64],
    /// `log |h(z_j)| - log |2 p_n|`.
    targets: &'a [f64],
    /// `-p_{n-1} / p_n`.
    moment: f64,
}

impl System<'_> {
    fn residual(&self, a: &[f64], w: &[f64]) -> DVector<f64> {
        let ell = a.len();
        let mut f = DVector::zeros(ell);
        for j in 0..ell - 1 {
            let s: f64 = (0..ell)
                .map(|i| self.counts[i] * (w[j] - a[i]).abs().ln())
                .sum();
            f[j] = s - self.targets[j];
        }
        f[ell - 1] = (0..ell).map(|i| self.counts[i] * a[i]).sum::<f64>() - self.moment;
        f
    }

    fn jacobian(&self, a: &[f64], w: &[f64]) -> DMatrix<f64> {
        let ell = a.len();
        DMatrix::from_fn(ell, ell, |j, i| {
            if j + 1 < ell {
                -self.counts[i] / (w[j] - a[i])
            } else {
                self.counts[i]
            }
        })
    }
}

fn interlaced(a: &[f64], w: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite()) && (0..w.len()).all(|j| a[j] < w[j] && w[j] < a[j + 1])
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton solve for the centers with `w` fixed. Returns the centers and the
/// number of steps.
fn solve_inner(
    sys: &System,
    a0: &[f64],
    w: &[f64],
    opts: &IterationOptions,
) -> Result<(Vec<f64>, usize)> {
    let mut a = a0.to_vec();
    let mut f = sys.residual(&a, w);
    let mut fnorm = inf_norm(&f);
    for step in 1..=opts.max_inner {
        let jac = sys.jacobian(&a, w);
        let delta = jac.lu().solve(&f).ok_or(Error::NoConvergence {
            context: "center Newton step (singular Jacobian)",
            iterations: step,
            residual: fnorm,
        })?;
        let scale = 1.0 + a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let full = inf_norm(&delta);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let cand: Vec<f64> = a
                .iter()
                .zip(delta.iter())
                .map(|(x, d)| x - lambda * d)
                .collect();
            if interlaced(&cand, w) {
                let fc = sys.residual(&cand, w);
                let nc = inf_norm(&fc);
                if nc.is_finite() && (nc < fnorm || lambda * full <= 1e-10 * scale) {
                    accepted = Some((cand, fc, nc));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let Some((cand, fc, nc)) = accepted else {
            return Err(Error::NoConvergence {
                context: "center Newton line search",
                iterations: step,
                residual: fnorm,
            });
        };
        a = cand;
        f = fc;
        fnorm = nc;
        if lambda * full <= opts.inner_tol * scale || fnorm == 0.0 {
            return Ok((a, step));
        }
    }
    Err(Error::NoConvergence {
        context: "center Newton iteration",
        iterations: opts.max_inner,
        residual: fnorm,
    })
}

/// Computes the centers of a preimage with `ell >= 2` real-symmetric
/// components by alternating Newton solves and critical point updates.
///
/// The initial centers are the midpoints of the components and the initial
/// critical points the midpoints of the gaps.
pub fn centers_iterative(
    pre: &Preimage,
    opts: &IterationOptions,
) -> Result<(LemniscaticData, IterationTrace)> {
    let ell = pre.ell();
    if ell < 2 {
        return Err(Error::NotApplicable(
            "the iteration needs at least two components".into(),
        ));
    }
    let counts: Vec<f64> = pre.zero_counts().iter().map(|&c| c as f64).collect();
    let pn = pre.leading();
    let log_2pn = (2.0 * pn.abs()).ln();

    // Q(w_j) is real with sign sign(p_n) (-1)^{n_{j+1} + ... + n_ell}; the
    // target must carry the same sign.
    let mut targets = Vec::with_capacity(ell - 1);
    for (j, &h) in pre.critical_images().iter().enumerate() {
        let tail: usize = pre.zero_counts()[j + 1..].iter().sum();
        let expected = pn.signum() * if tail.is_multiple_of(2) { 1.0 } else { -1.0 };
        if h.signum() != expected {
            return Err(Error::Inconsistent(format!(
                "h(z_{}) = {h} does not have the sign of Q at the matching critical point",
                j + 1
            )));
        }
        targets.push(h.abs().ln() - log_2pn);
    }
    let sys = System {
        counts: &counts,
        targets: &targets,
        moment: -pre.subleading() / pn,
    };

    let e = pre.components();
    let mut a: Vec<f64> = (0..ell).map(|j| e.midpoint(j)).collect();
    let mut w: Vec<f64> = (0..ell - 1).map(|j| e.gap_midpoint(j)).collect();
    let mut trace = IterationTrace {
        centers: vec![a.clone()],
        critical_points: vec![w.clone()],
        ..Default::default()
    };

    for k in 0..opts.max_outer {
        let (next, inner) = solve_inner(&sys, &a, &w, opts)?;
        let w_next = q_critical_points(&next, pre.zero_counts())?;
        let delta = next
            .iter()
            .zip(&a)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        let done = next
            .iter()
            .zip(&a)
            .all(|(x, y)| (x - y).abs() < opts.abstol + opts.reltol * y.abs());
        log::trace!("outer step {k}: centers {next:?}, delta {delta:e}");
        trace.centers.push(next.clone());
        trace.critical_points.push(w_next.clone());
        trace.deltas.push(delta);
        trace.inner_iterations.push(inner);
        a = next;
        w = w_next;
        if done {
            trace.converged = true;
            trace.steps = k;
            log::info!("centers converged after {k} steps");
            let data = LemniscaticData::new(a, Axis::Real, pre.zero_counts().to_vec(), pn)?;
            return Ok((data, trace));
        }
    }
    Err(Error::NoConvergence {
        context: "center iteration",
        iterations: opts.max_outer,
        residual: trace.deltas.last().copied().unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centers::{centers_three_double_symmetry, centers_two_components};
    use crate::poly::ComplexPoly;

    fn two_interval_family(alpha: f64) -> ComplexPoly {
        let d = (1.0 - alpha * alpha).powi(2);
        let a2 = alpha * alpha;
        ComplexPoly::from_real(&[
            -4.0 * a2 / d,
            (a2 * a2 - 2.0 * a2 - 3.0) / d,
            4.0 * a2 / d,
            4.0 / d,
        ])
    }

    #[test]
    fn symmetric_pair_converges_immediately() {
        let (alpha, beta) = (0.2, 2.0);
        let d = beta * beta - alpha * alpha;
        let p = ComplexPoly::from_real(&[1.0 - 2.0 * beta * beta / d, 0.0, 2.0 / d]);
        let pre = Preimage::analyze(p).unwrap();
        let (lem, trace) = centers_iterative(&pre, &IterationOptions::default()).unwrap();
        assert_eq!(trace.steps, 0);
        assert!((lem.centers()[1] - 1.1).abs() < 1e-14);
    }

    #[test]
    fn agrees_with_two_component_formula() {
        for alpha in [0.05, 0.1, 0.5] {
            let pre = Preimage::analyze(two_interval_family(alpha)).unwrap();
            let (lem, trace) = centers_iterative(&pre, &IterationOptions::default()).unwrap();
            let exact = centers_two_components(&pre).unwrap();
            for (x, y) in lem.centers().iter().zip(exact.centers()) {
                assert!((x - y).abs() < 1e-13, "alpha {alpha}: {x} vs {y}");
            }
            assert!(trace.converged && trace.steps <= 6);
        }
    }

    #[test]
    fn agrees_with_three_component_formula() {
        let alpha = 0.2;
        let s = alpha * (1.0 - alpha);
        let p = ComplexPoly::from_real(&[0.0, -(1.0 - alpha + alpha * alpha) / s, 0.0, 1.0 / s]);
        let pre = Preimage::analyze(p).unwrap();
        let (lem, _) = centers_iterative(&pre, &IterationOptions::default()).unwrap();
        let exact = centers_three_double_symmetry(&pre).unwrap();
        for (x, y) in lem.centers().iter().zip(exact.centers()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn trace_records_every_step() {
        let pre = Preimage::analyze(two_interval_family(0.1)).unwrap();
        let (_, trace) = centers_iterative(&pre, &IterationOptions::default()).unwrap();
        assert_eq!(trace.centers.len(), trace.steps + 2);
        assert_eq!(trace.deltas.len(), trace.steps + 1);
        assert_eq!(trace.critical_points.len(), trace.centers.len());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let pre = Preimage::analyze(two_interval_family(0.1)).unwrap();
        let opts = IterationOptions {
            max_outer: 1,
            ..Default::default()
        };
        let err = centers_iterative(&pre, &opts).unwrap_err();
        assert!(err.is_convergence());
    }
}
