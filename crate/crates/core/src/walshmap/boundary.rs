use num_complex::Complex64;
use serde::Serialize;

use super::track::{track, wrap_angle, Homotopy};
use super::MapContext;
use crate::error::{Error, Result};

/// Smallest accepted number of samples per component.
pub const MIN_BOUNDARY_SAMPLES: usize = 16;
/// Required accuracy `||Q(w)| - 1|` of traced points.
const BOUNDARY_TOL: f64 = 1e-10;
const RAY_STEPS: usize = 128;
const MAX_FAILED_FRACTION: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceMethod {
    Radial,
    Marching,
}

/// A closed curve of `∂L` around one center; the last point connects back
/// to the first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub component: usize,
    pub center: f64,
    pub method: TraceMethod,
    pub points: Vec<Complex64>,
}

/// Samples the boundary of every component of `L`.
///
/// Points are first located on equally spaced rays from each center. When a
/// ray finds no crossing or the radial samples do not form a connected
/// curve, the component is traced instead by following `Q(w) = e^{i phi}`
/// from its rightmost real point.
pub fn trace_boundary(
    ctx: &MapContext,
    samples_per_component: usize,
) -> Result<Vec<BoundaryCurve>> {
    if samples_per_component < MIN_BOUNDARY_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_BOUNDARY_SAMPLES} samples per component, got {samples_per_component}"
        )));
    }
    (0..ctx.lemniscatic().ell())
        .map(|j| trace_component(ctx, j, samples_per_component))
        .collect()
}

fn trace_component(ctx: &MapContext, j: usize, m: usize) -> Result<BoundaryCurve> {
    let lem = ctx.lemniscatic();
    let a = lem.centers()[j];
    let c = ctx.boundary_crossings();
    let rho = (a - c[2 * j]).max(c[2 * j + 1] - a);
    let mut points = Vec::with_capacity(m);
    let mut failed = 0;
    for k in 0..m {
        let dir = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64);
        match ray_crossing(ctx, a, dir, rho) {
            Some(w) => points.push(w),
            None => failed += 1,
        }
    }
    let connected = failed == 0 && is_connected(&points, a);
    if connected {
        return Ok(BoundaryCurve {
            component: j,
            center: a,
            method: TraceMethod::Radial,
            points,
        });
    }
    log::info!("radial trace around {a} incomplete ({failed} failed rays); marching instead");
    match march(ctx, j, m) {
        Ok(points) => Ok(BoundaryCurve {
            component: j,
            center: a,
            method: TraceMethod::Marching,
            points,
        }),
        Err(e) if failed as f64 > MAX_FAILED_FRACTION * m as f64 || points.is_empty() => Err(e),
        Err(_) => Ok(BoundaryCurve {
            component: j,
            center: a,
            method: TraceMethod::Radial,
            points,
        }),
    }
}

/// First point of `|Q| = 1` on the ray `a + r dir`, `0 < r <= 4 rho`.
fn ray_crossing(ctx: &MapContext, a: f64, dir: Complex64, rho: f64) -> Option<Complex64> {
    let lem = ctx.lemniscatic();
    let at = |r: f64| Complex64::new(a, 0.0) + dir * r;
    let f = |r: f64| lem.log_abs_q(at(r));
    let dr = rho / 32.0;
    let (mut lo, mut hi) = (0.0, None);
    for i in 1..=RAY_STEPS {
        let r = dr * i as f64;
        if f(r) > 0.0 {
            hi = Some(r);
            break;
        }
        lo = r;
    }
    let mut hi = hi?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (wl, wh) = (at(lo), at(hi));
    let w = if f(lo).abs() <= f(hi).abs() { wl } else { wh };
    ((lem.q_eval(w).norm() - 1.0).abs() <= BOUNDARY_TOL).then_some(w)
}

/// Whether consecutive samples are close compared with a regular polygon of
/// the same mean radius.
fn is_connected(points: &[Complex64], a: f64) -> bool {
    let m = points.len();
    let mean_r = points.iter().map(|w| (w - a).norm()).sum::<f64>() / m as f64;
    let spacing = std::f64::consts::TAU * mean_r / m as f64;
    (0..m).all(|k| (points[(k + 1) % m] - points[k]).norm() <= 4.0 * spacing)
}

struct UnitCircle<'a> {
    ctx: &'a MapContext,
}

impl Homotopy for UnitCircle<'_> {
    fn residual(&self, w: Complex64, s: Complex64) -> Result<(Complex64, Complex64)> {
        let lem = self.ctx.lemniscatic();
        let r = Complex64::new(lem.log_abs_q(w), wrap_angle(self.ctx.arg_q(w) - s.re));
        Ok((r, lem.log_derivative(w)))
    }

    fn target_log_derivative(&self, _s: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 1.0))
    }
}

/// Follows `Q(w) = e^{i phi}` around component `j`; `phi` runs over
/// `2 pi n_j` while `w` goes once around the component.
fn march(ctx: &MapContext, j: usize, m: usize) -> Result<Vec<Complex64>> {
    let lem = ctx.lemniscatic();
    let hom = UnitCircle { ctx };
    let start = ctx.boundary_crossings()[2 * j + 1];
    let mut w = Complex64::new(start, 0.0);
    let phi0 = ctx.arg_q(w);
    let span = std::f64::consts::TAU * lem.counts()[j] as f64;
    let mut points = Vec::with_capacity(m);
    points.push(w);
    for k in 1..m {
        let s0 = Complex64::new(phi0 + span * (k - 1) as f64 / m as f64, 0.0);
        let s1 = Complex64::new(phi0 + span * k as f64 / m as f64, 0.0);
        w = track(&hom, w, s0, s1)?;
        if !((lem.q_eval(w).norm() - 1.0).abs() <= BOUNDARY_TOL) {
            return Err(Error::NoConvergence {
                context: "boundary marching",
                iterations: k,
                residual: (lem.q_eval(w).norm() - 1.0).abs(),
            });
        }
        points.push(w);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Example;
    use crate::centers::{compute_centers, IterationOptions, Method};
    use crate::poly::ComplexPoly;
    use crate::preimage::Preimage;
    use crate::walshmap::tests::context;

    fn check_on_boundary(ctx: &MapContext, curves: &[BoundaryCurve]) {
        for curve in curves {
            for w in &curve.points {
                let q = ctx.lemniscatic().q_eval(*w).norm();
                assert!((q - 1.0).abs() <= BOUNDARY_TOL, "{w}: |Q| = {q}");
            }
        }
    }

    #[test]
    fn disk() {
        let pre = Preimage::analyze(ComplexPoly::from_real(&[0.0, 1.0])).unwrap();
        let lem = compute_centers(&pre, Method::Auto, &IterationOptions::default())
            .unwrap()
            .data;
        let ctx = MapContext::new(pre, lem).unwrap();
        let curves = trace_boundary(&ctx, 64).unwrap();
        assert_eq!(curves.len(), 1);
        for w in &curves[0].points {
            assert!((w.norm() - 0.5).abs() <= 1e-10);
        }
    }

    #[test]
    fn symmetric_pair_ovals() {
        let ctx = context(Example::SymmetricPair {
            alpha: 0.2,
            beta: 2.0,
        });
        let curves = trace_boundary(&ctx, 128).unwrap();
        assert_eq!(curves.len(), 2);
        check_on_boundary(&ctx, &curves);
        let c = ctx.boundary_crossings();
        let right = &curves[1].points;
        let max_re = right.iter().map(|w| w.re).fold(f64::MIN, f64::max);
        assert!((max_re - c[3]).abs() < 1e-10);
        assert!(right.iter().all(|w| w.re >= c[2] - 1e-10));
    }

    #[test]
    fn marching_agrees_with_rays() {
        let ctx = context(Example::FiveIntervals);
        for j in 0..5 {
            for w in march(&ctx, j, 32).unwrap() {
                assert!((ctx.lemniscatic().q_eval(w).norm() - 1.0).abs() <= BOUNDARY_TOL);
            }
        }
        let curves = trace_boundary(&ctx, 32).unwrap();
        check_on_boundary(&ctx, &curves);
    }

    #[test]
    fn too_few_samples() {
        let ctx = context(Example::TwoIntervals { alpha: 0.1 });
        assert!(trace_boundary(&ctx, 8).is_err());
    }
}
