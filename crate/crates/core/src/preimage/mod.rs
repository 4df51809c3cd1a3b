//! Polynomial preimages `E = P^{-1}([-1, 1])`.
//!
//! For a real polynomial `P` whose preimage consists of `ell` components,
//! each symmetric with respect to the real line, [`Preimage::analyze`]
//! recovers the real trace of every component, the number of zeros of `P`
//! in each component, the `ell - 1` critical points of `P` outside `E` (one
//! per gap) and the logarithmic capacity `(2 |p_n|)^{-1/n}`.
//!
//! The exterior map `h(z) = P(z) + sqrt(P(z)^2 - 1)` is evaluated on the
//! branch with `|h| > 1`; that inequality characterizes the correct branch
//! everywhere off `E`, so no branch cut needs to be tracked.

mod endpoints;
mod intervals;

pub use endpoints::{
    check_order, endpoint_residual, polynomial_from_endpoints, solve_endpoints,
    solve_endpoints_affine, EndpointSolution, ENDPOINT_TOL,
};
pub use intervals::IntervalSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

/// A critical value closer than this to `[-1, 1]` counts as lying in `E`.
pub const TOL_VAL: f64 = 1e-9;
/// Imaginary parts below this (relative to `max(1, |Re|)`) count as real.
pub const TOL_IM: f64 = 1e-9;
/// Maximal distance from a zero of `P` to the component it is assigned to.
pub const TOL_ASSIGN: f64 = 1e-7;
/// `|h| <= 1 + TOL_BRANCH` means the point is numerically on `E`.
pub const TOL_BRANCH: f64 = 1e-13;
/// Critical values within this relative distance of `[-1, 1]` are touching
/// points (two intervals sharing an endpoint).
const TOL_TOUCH: f64 = 1e-12;
const REAL_COEFF_TOL: f64 = 1e-14;

fn distance_to_unit_segment(v: Complex64) -> f64 {
    let dx = (v.re.abs() - 1.0).max(0.0);
    dx.hypot(v.im)
}

fn is_real_root(z: Complex64) -> bool {
    z.im.abs() <= TOL_IM * z.re.abs().max(1.0)
}

pub(crate) fn require_real(p: &ComplexPoly) -> Result<()> {
    if p.degree() == 0 {
        return Err(Error::Degenerate(p.degree()));
    }
    if !p.is_real(REAL_COEFF_TOL) {
        return Err(Error::InvalidInput(
            "preimage analysis needs a polynomial with real coefficients".into(),
        ));
    }
    Ok(())
}

/// Logarithmic capacity `(2 |p_n|)^{-1/n}` of `P^{-1}([-1, 1])`.
pub fn capacity(p: &ComplexPoly) -> Result<f64> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::Degenerate(0));
    }
    Ok((2.0 * p.leading().norm()).powf(-1.0 / n as f64))
}

/// `h(z) = P(z) + sqrt(P(z)^2 - 1)` on the branch with `|h| > 1`.
pub fn exterior_map(p: &ComplexPoly, z: Complex64) -> Result<Complex64> {
    branch_from_value(p.eval(z), z)
}

fn branch_from_value(v: Complex64, z: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let h = if v.norm() > 1.0 {
        // v (1 + sqrt(1 - 1/v^2)); the principal root has Re >= 0, which
        // selects the larger of the two candidates and avoids overflow.
        v * (one + (one - (v * v).inv()).sqrt())
    } else {
        let d = v * v - one;
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::OnSet(z));
        }
        let s = d.sqrt();
        let (a, b) = (v + s, v - s);
        if a.norm() >= b.norm() {
            a
        } else {
            b
        }
    };
    if !(h.norm() > 1.0 + TOL_BRANCH) {
        return Err(Error::OnSet(z));
    }
    Ok(h)
}

/// `h(z)` together with `h'(z) = P'(z) h(z) / (h(z) - P(z))`.
pub fn exterior_map_with_derivative(
    p: &ComplexPoly,
    z: Complex64,
) -> Result<(Complex64, Complex64)> {
    let (v, dv) = p.eval_with_derivative(z);
    let h = branch_from_value(v, z)?;
    Ok((h, dv * h / (h - v)))
}

/// `h(x)` at a real point, where it is real.
pub fn exterior_map_real(p: &ComplexPoly, x: f64) -> Result<f64> {
    let v = p.eval_real(x);
    if !(v.abs() > 1.0) {
        return Err(Error::OnSet(Complex64::new(x, 0.0)));
    }
    let h = v * (1.0 + (1.0 - 1.0 / (v * v)).sqrt());
    if !(h.abs() > 1.0 + TOL_BRANCH) {
        return Err(Error::OnSet(Complex64::new(x, 0.0)));
    }
    Ok(h)
}

/// Green's function of the complement of `E` with pole at infinity,
/// `g_E(z) = log |h(z)| / n`.
pub fn green_function(p: &ComplexPoly, z: Complex64) -> Result<f64> {
    Ok(exterior_map(p, z)?.norm().ln() / p.degree() as f64)
}

/// Real trace of the components of `P^{-1}([-1, 1])`.
///
/// The real roots of `P - 1` and `P + 1` are collected (double roots at
/// touching endpoints are clustered) and consecutive roots are joined where
/// `|P| <= 1` in between. The number of components found this way must agree
/// with `1 + #{critical points z : P(z) not in [-1, 1]}`; otherwise some
/// component is not symmetric with respect to the real line and an error is
/// returned.
pub fn components_of(p: &ComplexPoly) -> Result<IntervalSet> {
    require_real(p)?;
    let one = ComplexPoly::constant(Complex64::new(1.0, 0.0));
    let mut roots: Vec<f64> = Vec::new();
    for q in [p - &one, p + &one] {
        for c in q.root_clusters()? {
            if is_real_root(c.value) {
                roots.push(c.value.re);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    if roots.is_empty() {
        return Err(Error::Inconsistent(
            "P^{-1}([-1, 1]) does not meet the real line; components are not symmetric \
             with respect to it"
                .into(),
        ));
    }

    let inside_segment: Vec<bool> = roots
        .windows(2)
        .map(|w| p.eval_real(0.5 * (w[0] + w[1])).abs() <= 1.0)
        .collect();
    let mut endpoints = Vec::new();
    let mut start = f64::NAN;
    for (i, &r) in roots.iter().enumerate() {
        let left = i > 0 && inside_segment[i - 1];
        let right = i + 1 < roots.len() && inside_segment[i];
        match (left, right) {
            (false, true) => start = r,
            (true, false) => {
                endpoints.push(start);
                endpoints.push(r);
            }
            (false, false) => {
                endpoints.push(r);
                endpoints.push(r);
            }
            (true, true) => {}
        }
    }
    let set = IntervalSet::new(endpoints)?;

    let ell_from_critical = 1 + count_outer_critical(p)?;
    if ell_from_critical != set.ell() {
        return Err(Error::Inconsistent(format!(
            "real trace has {} components but P has {} critical points outside E; \
             the components are not all symmetric with respect to the real line",
            set.ell(),
            ell_from_critical - 1
        )));
    }
    Ok(set)
}

/// Critical points of `P` with critical value outside `[-1, 1]`, counted with
/// multiplicity.
pub(crate) fn outer_critical_clusters(p: &ComplexPoly) -> Result<Vec<(Complex64, usize)>> {
    let dp = p.derivative();
    if dp.degree() == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for c in dp.root_clusters()? {
        let v = p.eval(c.value);
        let dist = distance_to_unit_segment(v);
        let touch = TOL_TOUCH * p.abs_scale(c.value).max(1.0);
        if dist > TOL_VAL {
            out.push((c.value, c.multiplicity));
        } else if dist > touch {
            return Err(Error::Inconsistent(format!(
                "critical value {v} lies within {TOL_VAL:e} of [-1, 1]; cannot decide \
                 whether the adjacent components touch"
            )));
        }
    }
    Ok(out)
}

fn count_outer_critical(p: &ComplexPoly) -> Result<usize> {
    Ok(outer_critical_clusters(p)?.iter().map(|c| c.1).sum())
}

/// Number of zeros of `P` in each component, by nearest-component assignment.
pub fn zero_counts(p: &ComplexPoly, set: &IntervalSet) -> Result<Vec<usize>> {
    let mut counts = vec![0usize; set.ell()];
    for z in p.roots()? {
        let (j, d) = set.nearest(z);
        if d > TOL_ASSIGN {
            return Err(Error::Inconsistent(format!(
                "zero {z} of P lies {d:e} away from every component"
            )));
        }
        counts[j] += 1;
    }
    if let Some(j) = counts.iter().position(|&c| c == 0) {
        return Err(Error::Inconsistent(format!(
            "component {} contains no zero of P",
            j + 1
        )));
    }
    Ok(counts)
}

/// The `ell - 1` real critical points of `P` outside `E`, one in each gap,
/// in ascending order.
pub fn outer_critical_points(p: &ComplexPoly, set: &IntervalSet) -> Result<Vec<f64>> {
    require_real(p)?;
    let dp = p.derivative();
    let mut points = Vec::new();
    for (z, mult) in outer_critical_clusters(p)? {
        if !is_real_root(z) || mult != 1 {
            return Err(Error::Inconsistent(format!(
                "outer critical point {z} (multiplicity {mult}) is not a simple real point"
            )));
        }
        // A few real Newton steps on P'.
        let mut x = z.re;
        for _ in 0..4 {
            let (v, dv) = dp.eval_real_with_derivative(x);
            if dv == 0.0 {
                break;
            }
            let next = x - v / dv;
            if (next - x).abs() > 1e-6 * x.abs().max(1.0) {
                break;
            }
            x = next;
        }
        points.push(x);
    }
    points.sort_by(f64::total_cmp);
    if points.len() + 1 != set.ell() {
        return Err(Error::Inconsistent(format!(
            "{} outer critical points for {} components",
            points.len(),
            set.ell()
        )));
    }
    for (j, &z) in points.iter().enumerate() {
        let (lo, hi) = set.gap(j);
        if !(lo < z && z < hi) {
            return Err(Error::Inconsistent(format!(
                "outer critical point {z} is not inside gap ({lo}, {hi})"
            )));
        }
    }
    Ok(points)
}

/// A polynomial together with the structure of its preimage of `[-1, 1]`.
#[derive(Clone, Debug, Serialize)]
pub struct Preimage {
    poly: ComplexPoly,
    components: IntervalSet,
    zero_counts: Vec<usize>,
    outer_critical_points: Vec<f64>,
    critical_images: Vec<f64>,
    capacity: f64,
}

impl Preimage {
    /// Analyzes `P^{-1}([-1, 1])` for a real polynomial `P` whose components
    /// are all symmetric with respect to the real line.
    pub fn analyze(poly: ComplexPoly) -> Result<Self> {
        let components = components_of(&poly)?;
        let zero_counts = zero_counts(&poly, &components)?;
        let outer_critical_points = outer_critical_points(&poly, &components)?;
        let critical_images = outer_critical_points
            .iter()
            .map(|&z| exterior_map_real(&poly, z))
            .collect::<Result<Vec<_>>>()?;
        let capacity = capacity(&poly)?;
        log::info!(
            "preimage of degree {} with {} components, zero counts {:?}",
            poly.degree(),
            components.ell(),
            zero_counts
        );
        Ok(Preimage {
            poly,
            components,
            zero_counts,
            outer_critical_points,
            critical_images,
            capacity,
        })
    }

    /// Builds `P` from `2n` endpoints and analyzes it.
    pub fn from_endpoints(c: &[f64]) -> Result<Self> {
        Self::analyze(polynomial_from_endpoints(c)?)
    }

    pub fn poly(&self) -> &ComplexPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// Leading coefficient `p_n` (real).
    pub fn leading(&self) -> f64 {
        self.poly.leading().re
    }

    /// `p_{n-1}` (real).
    pub fn subleading(&self) -> f64 {
        self.poly.coeff(self.degree() - 1).re
    }

    pub fn components(&self) -> &IntervalSet {
        &self.components
    }

    pub fn ell(&self) -> usize {
        self.components.ell()
    }

    pub fn zero_counts(&self) -> &[usize] {
        &self.zero_counts
    }

    pub fn outer_critical_points(&self) -> &[f64] {
        &self.outer_critical_points
    }

    /// `h(z_j)` at the outer critical points; real numbers with `|h| > 1`.
    pub fn critical_images(&self) -> &[f64] {
        &self.critical_images
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn h(&self, z: Complex64) -> Result<Complex64> {
        exterior_map(&self.poly, z)
    }

    pub fn h_real(&self, x: f64) -> Result<f64> {
        exterior_map_real(&self.poly, x)
    }

    pub fn green(&self, z: Complex64) -> Result<f64> {
        green_function(&self.poly, z)
    }

    /// Whether `P` is even (all odd coefficients vanish).
    pub fn is_even(&self) -> bool {
        let scale = self
            .poly
            .coeffs()
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        self.poly
            .coeffs()
            .iter()
            .skip(1)
            .step_by(2)
            .all(|c| c.norm() <= 1e-14 * scale)
    }
}
