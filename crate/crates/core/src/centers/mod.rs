//! Lemniscatic data: centers, exponents and the polynomial `Q`.
//!
//! The lemniscatic domain belonging to `E = P^{-1}([-1, 1])` is the exterior
//! of `L = {w : |Q(w)| <= 1}` with
//!
//! ```text
//! Q(w) = 2 p_n (w - a_1)^{n_1} ... (w - a_ell)^{n_ell},
//! ```
//!
//! where `n_j` is the number of zeros of `P` in the `j`-th component. The
//! centers are computed by closed formulas when the geometry allows
//! ([`centers_two_components`], [`centers_double_symmetry_two`],
//! [`centers_three_double_symmetry`]) and otherwise by the alternating Newton
//! iteration of [`centers_iterative`]. [`compute_centers`] picks one.

mod closed_form;
mod iterative;
mod symmetry;
mod validate;

pub use closed_form::{
    centers_double_symmetry_two, centers_three_double_symmetry, centers_two_components,
    SymmetryCase,
};
pub use iterative::{centers_iterative, IterationOptions, IterationTrace};
pub use symmetry::{classify_symmetry, require_origin_symmetry, Symmetry};
pub use validate::{validate_centers, ValidationReport};

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::preimage::Preimage;
use crate::solve1d::solve_increasing;

/// Line on which the centers lie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// `a_j` real.
    Real,
    /// `a_j = i t_j` with real `t_j`.
    Imaginary,
}

/// Centers, multiplicities, capacity and `Q` of a lemniscatic domain.
#[derive(Clone, Debug, Serialize)]
pub struct LemniscaticData {
    centers: Vec<f64>,
    axis: Axis,
    counts: Vec<usize>,
    capacity: f64,
    leading: f64,
    q: ComplexPoly,
    q_critical_points: Vec<f64>,
}

impl LemniscaticData {
    /// Assembles the data from center coordinates along `axis`, zero counts
    /// and the real leading coefficient `p_n` of `P`.
    pub fn new(centers: Vec<f64>, axis: Axis, counts: Vec<usize>, leading: f64) -> Result<Self> {
        if centers.is_empty() || centers.len() != counts.len() {
            return Err(Error::InvalidInput(format!(
                "{} centers for {} counts",
                centers.len(),
                counts.len()
            )));
        }
        if counts.contains(&0) {
            return Err(Error::InvalidInput("zero counts must be positive".into()));
        }
        if !(leading.is_finite() && leading != 0.0) {
            return Err(Error::InvalidInput(
                "leading coefficient must be nonzero".into(),
            ));
        }
        if centers.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput("centers must be finite".into()));
        }
        if centers.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Inconsistent(format!(
                "centers are not strictly increasing: {centers:?}"
            )));
        }
        let n: usize = counts.iter().sum();
        let capacity = (2.0 * leading.abs()).powf(-1.0 / n as f64);
        let points: Vec<Complex64> = centers.iter().map(|&t| axis.point(t)).collect();
        let q = q_poly(Complex64::new(leading, 0.0), &points, &counts)?;
        let q_critical_points = q_critical_points(&centers, &counts)?;
        Ok(LemniscaticData {
            centers,
            axis,
            counts,
            capacity,
            leading,
            q,
            q_critical_points,
        })
    }

    pub fn ell(&self) -> usize {
        self.centers.len()
    }

    pub fn degree(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Center coordinates along [`Self::axis`], ascending.
    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// Center `j` (0-based) as a point of the plane.
    pub fn center(&self, j: usize) -> Complex64 {
        self.axis.point(self.centers[j])
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Exponents `m_j = n_j / n`; they sum to one exactly.
    pub fn exponents(&self) -> Vec<Ratio<u64>> {
        let n = self.degree() as u64;
        self.counts
            .iter()
            .map(|&c| Ratio::new(c as u64, n))
            .collect()
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    /// `p_n`; `Q` has leading coefficient `2 p_n`.
    pub fn leading(&self) -> f64 {
        self.leading
    }

    /// `Q` in expanded form.
    pub fn q(&self) -> &ComplexPoly {
        &self.q
    }

    /// Coordinates (along [`Self::axis`]) of the critical points of `Q`
    /// that are not centers, one between consecutive centers.
    pub fn q_critical_points(&self) -> &[f64] {
        &self.q_critical_points
    }

    /// `Q(w)` evaluated in product form.
    pub fn q_eval(&self, w: Complex64) -> Complex64 {
        let mut v = Complex64::new(2.0 * self.leading, 0.0);
        for j in 0..self.ell() {
            v *= (w - self.center(j)).powu(self.counts[j] as u32);
        }
        v
    }

    /// `log |Q(w)|`, free of overflow for large degrees.
    pub fn log_abs_q(&self, w: Complex64) -> f64 {
        let mut s = (2.0 * self.leading.abs()).ln();
        for j in 0..self.ell() {
            s += self.counts[j] as f64 * (w - self.center(j)).norm().ln();
        }
        s
    }

    /// Logarithmic derivative `Q'(w) / Q(w) = sum_j n_j / (w - a_j)`.
    pub fn log_derivative(&self, w: Complex64) -> Complex64 {
        (0..self.ell())
            .map(|j| self.counts[j] as f64 / (w - self.center(j)))
            .sum()
    }

    /// `U(w) = prod (w - a_j)^{m_j}` in modulus; `L = {|U| <= cap}`.
    pub fn abs_u(&self, w: Complex64) -> f64 {
        let n = self.degree() as f64;
        (0..self.ell())
            .map(|j| (w - self.center(j)).norm().powf(self.counts[j] as f64 / n))
            .product()
    }

    /// Green's function of the lemniscatic domain, `log |Q(w)| / n`.
    pub fn green(&self, w: Complex64) -> f64 {
        self.log_abs_q(w) / self.degree() as f64
    }
}

impl Axis {
    pub fn point(self, t: f64) -> Complex64 {
        match self {
            Axis::Real => Complex64::new(t, 0.0),
            Axis::Imaginary => Complex64::new(0.0, t),
        }
    }
}

/// `Q(w) = 2 p_n prod (w - a_j)^{n_j}` in expanded form.
pub fn q_poly(leading: Complex64, centers: &[Complex64], counts: &[usize]) -> Result<ComplexPoly> {
    if centers.len() != counts.len() {
        return Err(Error::InvalidInput(
            "centers and counts differ in length".into(),
        ));
    }
    let roots: Vec<Complex64> = centers
        .iter()
        .zip(counts)
        .flat_map(|(&a, &m)| std::iter::repeat_n(a, m))
        .collect();
    Ok(ComplexPoly::from_roots(leading * 2.0, &roots))
}

/// Zeros of `sum_k n_k / (w - a_k)` for real increasing centers: exactly one
/// in each interval `(a_j, a_{j+1})`, returned ascending.
pub fn q_critical_points(centers: &[f64], counts: &[usize]) -> Result<Vec<f64>> {
    let ell = centers.len();
    if ell != counts.len() {
        return Err(Error::InvalidInput(
            "centers and counts differ in length".into(),
        ));
    }
    if centers.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput(
            "centers must be strictly increasing".into(),
        ));
    }
    let nf: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let n: f64 = nf.iter().sum();
    let w = match ell {
        1 => Vec::new(),
        2 => vec![(nf[1] * centers[0] + nf[0] * centers[1]) / n],
        3 => {
            let (a1, a2, a3) = (centers[0], centers[1], centers[2]);
            let (n1, n2, n3) = (nf[0], nf[1], nf[2]);
            let s = (n2 + n3) * a1 + (n1 + n3) * a2 + (n1 + n2) * a3;
            let c = n3 * a1 * a2 + n2 * a1 * a3 + n1 * a2 * a3;
            let disc = s * s - 4.0 * n * c;
            if disc <= 0.0 {
                return Err(Error::Inconsistent(format!(
                    "critical points of Q are not real (discriminant {disc:e})"
                )));
            }
            // Cancellation-free quadratic formula.
            let sgn = if s >= 0.0 { 1.0 } else { -1.0 };
            let q = 0.5 * (s + sgn * disc.sqrt());
            let (r1, r2) = (q / n, c / q);
            vec![r1.min(r2), r1.max(r2)]
        }
        _ => (0..ell - 1)
            .map(|j| {
                // -S is increasing on (a_j, a_{j+1}) from -inf to +inf.
                let f = |x: f64| {
                    let mut v = 0.0;
                    let mut dv = 0.0;
                    for k in 0..ell {
                        let d = x - centers[k];
                        v -= nf[k] / d;
                        dv += nf[k] / (d * d);
                    }
                    (v, dv)
                };
                solve_increasing(f, centers[j], centers[j + 1])
            })
            .collect::<Result<Vec<_>>>()?,
    };
    for (j, &x) in w.iter().enumerate() {
        if !(centers[j] < x && x < centers[j + 1]) {
            return Err(Error::Inconsistent(format!(
                "critical point {x} of Q does not interlace ({}, {})",
                centers[j],
                centers[j + 1]
            )));
        }
    }
    Ok(w)
}

/// Which algorithm computes the centers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// A closed formula when one applies, the iteration otherwise.
    #[default]
    Auto,
    ClosedForm,
    Iterative,
}

/// Formula or algorithm that produced a [`CentersResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodUsed {
    SingleComponent,
    TwoComponents,
    DoubleSymmetryTwo,
    DoubleSymmetryThree,
    Iterative,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentersResult {
    pub data: LemniscaticData,
    pub method: MethodUsed,
    pub trace: Option<IterationTrace>,
}

/// Centers of a single component: `a_1 = -p_{n-1} / (n p_n)`.
pub fn centers_single(pre: &Preimage) -> Result<LemniscaticData> {
    if pre.ell() != 1 {
        return Err(Error::NotApplicable(format!(
            "{} components, expected 1",
            pre.ell()
        )));
    }
    let n = pre.degree() as f64;
    // Adding 0.0 turns a negative zero into +0.
    let a = -pre.subleading() / (n * pre.leading()) + 0.0;
    LemniscaticData::new(vec![a], Axis::Real, vec![pre.degree()], pre.leading())
}

fn closed_form(pre: &Preimage) -> Result<(LemniscaticData, MethodUsed)> {
    match pre.ell() {
        1 => Ok((centers_single(pre)?, MethodUsed::SingleComponent)),
        2 if pre.is_even() => Ok((
            centers_double_symmetry_two(pre.poly(), Some(SymmetryCase::SelfConjugate))?,
            MethodUsed::DoubleSymmetryTwo,
        )),
        2 => Ok((centers_two_components(pre)?, MethodUsed::TwoComponents)),
        3 => Ok((
            centers_three_double_symmetry(pre)?,
            MethodUsed::DoubleSymmetryThree,
        )),
        ell => Err(Error::NotApplicable(format!(
            "no closed formula for {ell} components"
        ))),
    }
}

/// Computes the lemniscatic data with the requested method.
pub fn compute_centers(
    pre: &Preimage,
    method: Method,
    opts: &IterationOptions,
) -> Result<CentersResult> {
    let iterate = || -> Result<CentersResult> {
        if pre.ell() == 1 {
            return Ok(CentersResult {
                data: centers_single(pre)?,
                method: MethodUsed::SingleComponent,
                trace: None,
            });
        }
        let (data, trace) = centers_iterative(pre, opts)?;
        Ok(CentersResult {
            data,
            method: MethodUsed::Iterative,
            trace: Some(trace),
        })
    };
    match method {
        Method::Iterative => iterate(),
        Method::ClosedForm => {
            let (data, method) = closed_form(pre)?;
            Ok(CentersResult {
                data,
                method,
                trace: None,
            })
        }
        Method::Auto => match closed_form(pre) {
            Ok((data, method)) => Ok(CentersResult {
                data,
                method,
                trace: None,
            }),
            Err(Error::NotApplicable(reason)) => {
                log::info!("closed form not applicable ({reason}); iterating");
                iterate()
            }
            Err(e) => Err(e),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn q_single_center_is_monomial() {
        let q = q_poly(Complex64::new(1.5, 0.0), &[Complex64::new(0.0, 0.0)], &[4]).unwrap();
        assert_eq!(q, ComplexPoly::from_real(&[0.0, 0.0, 0.0, 0.0, 3.0]));
    }

    #[test]
    fn q_leading_coefficient() {
        let a = [Complex64::new(-0.8, 0.0), Complex64::new(0.4, 0.0)];
        let q = q_poly(Complex64::new(-2.5, 0.0), &a, &[2, 1]).unwrap();
        assert_eq!(q.degree(), 3);
        assert_eq!(q.leading(), Complex64::new(-5.0, 0.0));
    }

    #[test]
    fn critical_points_two_centers() {
        let w = q_critical_points(&[-1.0, 2.0], &[2, 1]).unwrap();
        assert!((w[0] - (-1.0 + 2.0 * 2.0) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn critical_points_symmetric_three() {
        let a3: f64 = 0.9;
        let w = q_critical_points(&[-a3, 0.0, a3], &[1, 1, 1]).unwrap();
        let e = a3 / 3f64.sqrt();
        assert!((w[0] + e).abs() < 1e-15 && (w[1] - e).abs() < 1e-15);
        let w = q_critical_points(&[-a3, 0.0, a3], &[2, 3, 2]).unwrap();
        let e = a3 * (3.0f64 / 7.0).sqrt();
        assert!((w[0] + e).abs() < 1e-15 && (w[1] - e).abs() < 1e-15);
    }

    fn check_general(centers: &[f64], counts: &[usize]) {
        let w = q_critical_points(centers, counts).unwrap();
        assert_eq!(w.len(), centers.len() - 1);
        for &x in &w {
            let s: f64 = centers
                .iter()
                .zip(counts)
                .map(|(a, &m)| m as f64 / (x - a))
                .sum();
            let scale: f64 = centers
                .iter()
                .zip(counts)
                .map(|(a, &m)| m as f64 / (x - a).abs())
                .sum();
            assert!(s.abs() <= 1e-13 * scale, "{s} at {x}");
        }
    }

    #[test]
    fn critical_points_general_three_and_four() {
        check_general(&[-0.9, -0.1, 0.7], &[2, 1, 3]);
        check_general(&[-0.9, -0.1, 0.4, 0.7], &[2, 1, 3, 1]);
    }

    #[test]
    fn critical_points_match_polynomial_roots() {
        // Zeros of sum_k n_k prod_{j != k} (w - a_j).
        let a = [-0.8, -0.35, 0.3, 0.9];
        let m = [2usize, 1, 3, 1];
        let mut r = ComplexPoly::zero();
        for (k, &mk) in m.iter().enumerate() {
            let others: Vec<Complex64> = (0..4)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(a[j], 0.0))
                .collect();
            r = &r + &ComplexPoly::from_roots(Complex64::new(mk as f64, 0.0), &others);
        }
        let roots = r.real_roots_in(-1.0, 1.0, 1e-10).unwrap();
        let w = q_critical_points(&a, &m).unwrap();
        for (x, y) in roots.iter().zip(&w) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn exponents_sum_to_one() {
        let lem =
            LemniscaticData::new(vec![-0.5, 0.1, 0.6], Axis::Real, vec![2, 3, 2], 1.0).unwrap();
        let s: Ratio<u64> = lem.exponents().into_iter().sum();
        assert_eq!(s, Ratio::from_integer(1));
    }

    #[test]
    fn q_modulus_matches_u() {
        let lem = LemniscaticData::new(vec![-0.6, 0.7], Axis::Real, vec![2, 1], 3.0).unwrap();
        for k in 0..20 {
            let w = Complex64::from_polar(0.3 + 0.1 * k as f64, 0.37 * k as f64);
            let via_u = (lem.abs_u(w) / lem.capacity()).powi(3);
            assert!((lem.q_eval(w).norm() - via_u).abs() <= 1e-12 * via_u.max(1.0));
            assert!((lem.q().eval(w) - lem.q_eval(w)).norm() <= 1e-12 * via_u.max(1.0));
        }
    }

    proptest! {
        #[test]
        fn critical_points_interlace(
            gaps in proptest::collection::vec(0.05..1.0f64, 1..7),
            counts in proptest::collection::vec(1usize..5, 7),
        ) {
            let mut a = vec![-1.0];
            for g in &gaps {
                let last = *a.last().unwrap();
                a.push(last + g);
            }
            let m = &counts[..a.len()];
            let w = q_critical_points(&a, m).unwrap();
            prop_assert_eq!(w.len(), a.len() - 1);
            for j in 0..w.len() {
                prop_assert!(a[j] < w[j] && w[j] < a[j + 1]);
            }
        }
    }
}
