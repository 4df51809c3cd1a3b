//! The Walsh map `Phi` from the exterior of `E` onto the exterior of `L`.
//!
//! `Phi(z)` is the solution `w` of `Q(w) = h(z)` selected by the mapping
//! properties of `Phi`:
//!
//! * on the real line `Phi` is real and increasing on every gap, and maps the
//!   gap `(b_{2j}, b_{2j+1})` onto `(c_{2j}, c_{2j+1})`, where the `c_k` are
//!   the real points of `∂L`; the outer critical point `z_j` goes to the
//!   critical point `w_j` of `Q`;
//! * the upper half-plane is mapped into itself, and `Phi(conj z) =
//!   conj Phi(z)`;
//! * `Phi(z) = z + O(1/z)` at infinity.
//!
//! Real points are found by bracketed monotone solves. For `Im z > 0` the
//! root is continued from a point far out on the ray through `z`, where
//! `Phi(z) ≈ z`.

mod boundary;
mod grid;
mod track;

pub use boundary::{trace_boundary, BoundaryCurve, TraceMethod, MIN_BOUNDARY_SAMPLES};
pub use grid::{map_grid, DroppedPoint, GridMap, GridSpec, MappedPoint, MappedPolyline, JUMP_TOL};

use num_complex::Complex64;
use serde::Serialize;

use crate::centers::{Axis, LemniscaticData};
use crate::error::{Error, Result};
use crate::preimage::{exterior_map_with_derivative, Preimage};
use crate::solve1d::solve_increasing;
use track::{correct, track, wrap_angle, Homotopy};

/// Residual tolerance `|Q(Phi(z)) - h(z)| <= TOL_MAP max(1, |h(z)|)`.
pub const TOL_MAP: f64 = 1e-9;

/// A preimage with its lemniscatic data, ready for map evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct MapContext {
    pre: Preimage,
    lem: LemniscaticData,
    crossings: Vec<f64>,
    r_big: f64,
}

impl MapContext {
    pub fn new(pre: Preimage, lem: LemniscaticData) -> Result<Self> {
        if lem.axis() != Axis::Real {
            return Err(Error::NotApplicable(
                "the map is implemented for centers on the real axis".into(),
            ));
        }
        if lem.counts() != pre.zero_counts() || lem.leading() != pre.leading() {
            return Err(Error::InvalidInput(
                "lemniscatic data does not belong to this preimage".into(),
            ));
        }
        let crossings = real_crossings(&lem)?;
        let (lo, hi) = pre.components().hull();
        let r_big = 10.0 * lo.abs().max(hi.abs()).max(1.0);
        Ok(MapContext {
            pre,
            lem,
            crossings,
            r_big,
        })
    }

    pub fn preimage(&self) -> &Preimage {
        &self.pre
    }

    pub fn lemniscatic(&self) -> &LemniscaticData {
        &self.lem
    }

    /// The `2 ell` real points `c_1 < ... < c_{2 ell}` of `∂L`;
    /// `L ∩ R = [c_1, c_2] ∪ ... ∪ [c_{2ell-1}, c_{2ell}]`.
    pub fn boundary_crossings(&self) -> &[f64] {
        &self.crossings
    }

    /// `Phi(z)` for `z` outside `E`.
    pub fn phi(&self, z: Complex64) -> Result<Complex64> {
        let w = if z.im == 0.0 {
            Complex64::new(self.phi_real(z.re)?, 0.0)
        } else if z.im > 0.0 {
            self.phi_upper(z)?
        } else {
            self.phi_upper(z.conj())?.conj()
        };
        let h = self.pre.h(z)?;
        let res = (self.lem.q_eval(w) - h).norm();
        if !(res <= TOL_MAP * h.norm().max(1.0)) {
            return Err(Error::NoConvergence {
                context: "map evaluation",
                iterations: 0,
                residual: res,
            });
        }
        Ok(w)
    }

    /// `Phi(z)` together with the residual `|Q(Phi(z)) - h(z)|`.
    pub fn phi_with_residual(&self, z: Complex64) -> Result<(Complex64, f64)> {
        let w = self.phi(z)?;
        Ok((w, (self.lem.q_eval(w) - self.pre.h(z)?).norm()))
    }

    /// All `n` solutions of `Q(w) = h(z)`.
    pub fn candidates(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let h = self.pre.h(z)?;
        let shifted = self.lem.q() - &crate::poly::ComplexPoly::constant(h);
        shifted.roots()
    }

    /// The solution of `Q(w) = h(z)` closest to `z` in the half-plane of `z`.
    /// Fast but not always the right branch; kept for comparison with
    /// [`MapContext::phi`].
    pub fn phi_closest(&self, z: Complex64) -> Result<Complex64> {
        let side = if z.im >= 0.0 { 1.0 } else { -1.0 };
        self.candidates(z)?
            .into_iter()
            .filter(|w| side * w.im >= 0.0)
            .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
            .ok_or_else(|| Error::Inconsistent(format!("no candidate on the side of {z}")))
    }

    fn log_abs_q_real(&self, x: f64) -> (f64, f64) {
        let w = Complex64::new(x, 0.0);
        (self.lem.log_abs_q(w), self.lem.log_derivative(w).re)
    }

    fn phi_real(&self, x: f64) -> Result<f64> {
        let h = self.pre.h_real(x)?;
        let target = h.abs().ln();
        let e = self.pre.components();
        let c = &self.crossings;
        let ell = e.ell();
        let up = |w: f64| {
            let (v, d) = self.log_abs_q_real(w);
            (v - target, d)
        };
        let down = |w: f64| {
            let (v, d) = self.log_abs_q_real(w);
            (target - v, -d)
        };
        let (lo, hi) = e.hull();
        if x > hi {
            let top = grow(c[2 * ell - 1], 1.0, |w| self.log_abs_q_real(w).0 > target);
            return solve_increasing(up, c[2 * ell - 1], top);
        }
        if x < lo {
            let bottom = grow(c[0], -1.0, |w| self.log_abs_q_real(w).0 > target);
            return solve_increasing(down, bottom, c[0]);
        }
        let j = e
            .gap_containing(x)
            .ok_or(Error::OnSet(Complex64::new(x, 0.0)))?;
        let zj = self.pre.outer_critical_points()[j];
        let wj = self.lem.q_critical_points()[j];
        if x == zj {
            Ok(wj)
        } else if x < zj {
            solve_increasing(up, c[2 * j + 1], wj)
        } else {
            solve_increasing(down, wj, c[2 * j + 2])
        }
    }

    fn phi_upper(&self, z: Complex64) -> Result<Complex64> {
        let hom = ForwardMap { ctx: self };
        if z.norm() >= self.r_big {
            return correct(&hom, z, z);
        }
        let mut last_err = None;
        for start in [
            z * (self.r_big / z.norm()),
            Complex64::new(z.re, self.r_big),
        ] {
            let attempt = correct(&hom, start, start).and_then(|w0| track(&hom, w0, start, z));
            match attempt {
                Ok(w) => return Ok(w),
                Err(e) => {
                    log::trace!("continuation to {z} from {start} failed: {e}");
                    last_err = Some(e);
                }
            }
        }
        Err(last_err.unwrap())
    }

    /// `Phi^{-1}(w)` for `w` outside `L`.
    pub fn phi_inverse(&self, w: Complex64) -> Result<Complex64> {
        if !(self.lem.log_abs_q(w) > 1e-13) {
            return Err(Error::OnSet(w));
        }
        let z = if w.im == 0.0 {
            Complex64::new(self.phi_inverse_real(w.re)?, 0.0)
        } else if w.im > 0.0 {
            self.phi_inverse_upper(w)?
        } else {
            self.phi_inverse_upper(w.conj())?.conj()
        };
        Ok(z)
    }

    fn log_abs_h_real(&self, x: f64) -> (f64, f64) {
        let p = self.pre.poly();
        match self.pre.h_real(x) {
            Ok(h) => {
                let (v, dv) = p.eval_real_with_derivative(x);
                (h.abs().ln(), dv / (h - v))
            }
            // Numerically on E: the Green function vanishes there.
            Err(_) => (0.0, 1.0),
        }
    }

    fn phi_inverse_real(&self, w: f64) -> Result<f64> {
        let target = self.lem.log_abs_q(Complex64::new(w, 0.0));
        let e = self.pre.components();
        let c = &self.crossings;
        let ell = e.ell();
        let up = |x: f64| {
            let (v, d) = self.log_abs_h_real(x);
            (v - target, d)
        };
        let down = |x: f64| {
            let (v, d) = self.log_abs_h_real(x);
            (target - v, -d)
        };
        let (lo, hi) = e.hull();
        if w > c[2 * ell - 1] {
            let top = grow(hi, 1.0, |x| self.log_abs_h_real(x).0 > target);
            return solve_increasing(up, hi, top);
        }
        if w < c[0] {
            let bottom = grow(lo, -1.0, |x| self.log_abs_h_real(x).0 > target);
            return solve_increasing(down, bottom, lo);
        }
        let j = (0..ell - 1)
            .find(|&j| c[2 * j + 1] < w && w < c[2 * j + 2])
            .ok_or(Error::OnSet(Complex64::new(w, 0.0)))?;
        let (b_left, b_right) = e.gap(j);
        let zj = self.pre.outer_critical_points()[j];
        let wj = self.lem.q_critical_points()[j];
        if w == wj {
            Ok(zj)
        } else if w < wj {
            solve_increasing(up, b_left, zj)
        } else {
            solve_increasing(down, zj, b_right)
        }
    }

    fn phi_inverse_upper(&self, w: Complex64) -> Result<Complex64> {
        let hom = InverseMap { ctx: self };
        if w.norm() >= self.r_big {
            return correct(&hom, w, w);
        }
        let mut last_err = None;
        for start in [
            Complex64::new(w.re, self.r_big),
            w * (self.r_big / w.norm()),
        ] {
            let attempt = correct(&hom, start, start).and_then(|z0| track(&hom, z0, start, w));
            match attempt {
                Ok(z) => return Ok(z),
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap())
    }

    /// `arg Q(w)` from the product form.
    fn arg_q(&self, w: Complex64) -> f64 {
        let base = if self.lem.leading() > 0.0 {
            0.0
        } else {
            std::f64::consts::PI
        };
        (0..self.lem.ell()).fold(base, |s, j| {
            s + self.lem.counts()[j] as f64 * (w - self.lem.center(j)).arg()
        })
    }
}

/// Moves from `start` in direction `dir` with doubling steps until `ok`.
fn grow(start: f64, dir: f64, ok: impl Fn(f64) -> bool) -> f64 {
    let mut step = start.abs().max(1.0);
    loop {
        let x = start + dir * step;
        if ok(x) || !x.is_finite() {
            return x;
        }
        step *= 2.0;
    }
}

/// The `2 ell` points where `∂L` meets the real line.
fn real_crossings(lem: &LemniscaticData) -> Result<Vec<f64>> {
    let ell = lem.ell();
    let a = lem.centers();
    let w = lem.q_critical_points();
    let log_q = |x: f64| {
        let p = Complex64::new(x, 0.0);
        (lem.log_abs_q(p), lem.log_derivative(p).re)
    };
    let mut c = Vec::with_capacity(2 * ell);
    for j in 0..ell {
        let left = if j == 0 {
            grow(a[0], -1.0, |x| log_q(x).0 > 0.0)
        } else {
            w[j - 1]
        };
        let right = if j + 1 == ell {
            grow(a[ell - 1], 1.0, |x| log_q(x).0 > 0.0)
        } else {
            w[j]
        };
        for (lo, hi, sign) in [(left, a[j], -1.0), (a[j], right, 1.0)] {
            if log_q(if sign < 0.0 { lo } else { hi }).0 <= 0.0 {
                return Err(Error::Inconsistent(format!(
                    "|Q| <= 1 at a critical point of Q; components of L touch near {}",
                    a[j]
                )));
            }
            let f = |x: f64| {
                let (v, d) = log_q(x);
                (sign * v, sign * d)
            };
            c.push(solve_increasing(f, lo, hi)?);
        }
    }
    Ok(c)
}

struct ForwardMap<'a> {
    ctx: &'a MapContext,
}

impl Homotopy for ForwardMap<'_> {
    fn residual(&self, w: Complex64, z: Complex64) -> Result<(Complex64, Complex64)> {
        let h = self.ctx.pre.h(z)?;
        let re = self.ctx.lem.log_abs_q(w) - h.norm().ln();
        let im = wrap_angle(self.ctx.arg_q(w) - h.arg());
        Ok((Complex64::new(re, im), self.ctx.lem.log_derivative(w)))
    }

    fn target_log_derivative(&self, z: Complex64) -> Result<Complex64> {
        let (h, dh) = exterior_map_with_derivative(self.ctx.pre.poly(), z)?;
        Ok(dh / h)
    }
}

struct InverseMap<'a> {
    ctx: &'a MapContext,
}

impl Homotopy for InverseMap<'_> {
    fn residual(&self, z: Complex64, w: Complex64) -> Result<(Complex64, Complex64)> {
        let (h, dh) = exterior_map_with_derivative(self.ctx.pre.poly(), z)?;
        let re = h.norm().ln() - self.ctx.lem.log_abs_q(w);
        let im = wrap_angle(h.arg() - self.ctx.arg_q(w));
        Ok((Complex64::new(re, im), dh / h))
    }

    fn target_log_derivative(&self, w: Complex64) -> Result<Complex64> {
        if !(self.ctx.lem.log_abs_q(w) > 0.0) {
            return Err(Error::OnSet(w));
        }
        Ok(self.ctx.lem.log_derivative(w))
    }
}
