//! Dense complex polynomials and a global root finder.
//!
//! [`ComplexPoly`] stores coefficients in ascending order of degree. The root
//! finder is the Aberth–Ehrlich simultaneous iteration started on a circle
//! whose radius is the Cauchy bound, followed by Newton polishing on the
//! original coefficients and clustering of (numerically) multiple roots.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scaled residual a polished root must satisfy.
pub const TOL_ROOT: f64 = 1e-12;
/// Iteration budget of the simultaneous iteration.
pub const MAX_ABERTH_ITERATIONS: usize = 500;
/// Newton polishing steps per root.
pub const POLISH_STEPS: usize = 20;
/// Roots closer than this (relative to `max(1, |z|)`) are merged.
pub const CLUSTER_TOL: f64 = 1e-7;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A polynomial with complex coefficients, `coeffs[k]` multiplying `z^k`.
///
/// Trailing zero coefficients are trimmed on construction, so the leading
/// coefficient of a nonzero polynomial is never zero. The zero polynomial has
/// no coefficients at all.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

impl ComplexPoly {
    pub fn new(coeffs: impl IntoIterator<Item = Complex64>) -> Self {
        let mut coeffs: Vec<Complex64> = coeffs.into_iter().collect();
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        ComplexPoly { coeffs }
    }

    /// Polynomial with real coefficients, ascending order.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)))
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new([c])
    }

    /// The polynomial `z`.
    pub fn identity() -> Self {
        Self::new([ZERO, ONE])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; constants and the zero polynomial report 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Whether every coefficient has imaginary part below `tol` times the
    /// largest coefficient modulus.
    pub fn is_real(&self, tol: f64) -> bool {
        let scale = self.max_coeff_norm();
        self.coeffs.iter().all(|c| c.im.abs() <= tol * scale)
    }

    /// Real parts of the coefficients.
    pub fn real_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.re).collect()
    }

    fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Horner evaluation at a real point using the real parts only.
    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.re)
    }

    /// Real value and derivative, real parts only.
    pub fn eval_real_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c.re;
        }
        (p, dp)
    }

    /// `sum |c_k| |z|^k`, the natural scale for residuals at `z`.
    pub fn abs_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> ComplexPoly {
        ComplexPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> ComplexPoly {
        ComplexPoly::new(
            std::iter::once(ZERO).chain(
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| c / (k as f64 + 1.0)),
            ),
        )
    }

    /// The polynomial `z -> p(a z + b)`.
    pub fn compose_affine(&self, a: Complex64, b: Complex64) -> ComplexPoly {
        let inner = ComplexPoly::new([b, a]);
        self.coeffs
            .iter()
            .rev()
            .fold(ComplexPoly::zero(), |acc, &c| {
                &(&acc * &inner) + &ComplexPoly::constant(c)
            })
    }

    pub fn scale(&self, s: Complex64) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|&c| c * s))
    }

    /// Expands `leading * prod (z - r)`.
    pub fn from_roots(leading: Complex64, roots: &[Complex64]) -> ComplexPoly {
        let mut coeffs = vec![leading];
        for &r in roots {
            coeffs.push(ZERO);
            for k in (1..coeffs.len()).rev() {
                coeffs[k] = coeffs[k - 1] - r * coeffs[k];
            }
            coeffs[0] *= -r;
        }
        ComplexPoly::new(coeffs)
    }

    /// All roots, repeated according to multiplicity.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        Ok(self
            .root_clusters()?
            .into_iter()
            .flat_map(|c| std::iter::repeat_n(c.value, c.multiplicity))
            .collect())
    }

    /// Distinct roots with multiplicities. Roots closer than
    /// [`CLUSTER_TOL`] are merged into their mean.
    pub fn root_clusters(&self) -> Result<Vec<RootCluster>> {
        let n = self.degree();
        if self.is_zero() || n == 0 {
            return Err(Error::Degenerate(n));
        }
        // Exact zeros at the origin.
        let zeros_at_origin = self.coeffs.iter().take_while(|c| **c == ZERO).count();
        let reduced: Vec<Complex64> = self.coeffs[zeros_at_origin..].to_vec();
        let scale = reduced.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let normalized: Vec<Complex64> = reduced.iter().map(|&c| c / scale).collect();

        let mut roots = if normalized.len() > 1 {
            aberth(&normalized)
        } else {
            Vec::new()
        };
        for r in roots.iter_mut() {
            *r = polish(self, *r);
        }
        roots.extend(std::iter::repeat_n(ZERO, zeros_at_origin));

        let mut clusters = cluster(&roots);
        for c in clusters.iter_mut().filter(|c| c.multiplicity > 1) {
            c.value = refine_cluster(self, c.value, c.multiplicity);
        }
        let worst = clusters
            .iter()
            .map(|c| {
                let s = self.abs_scale(c.value);
                if s == 0.0 {
                    0.0
                } else {
                    self.eval(c.value).norm() / s
                }
            })
            .fold(0.0, f64::max);
        if worst > TOL_ROOT || !worst.is_finite() {
            return Err(Error::RootsNotConverged {
                best: roots,
                residual: worst,
            });
        }
        Ok(clusters)
    }

    /// Real roots in `[lo, hi]`: clusters with `|Im| <= tol_im`, returned as
    /// distinct ascending reals.
    pub fn real_roots_in(&self, lo: f64, hi: f64, tol_im: f64) -> Result<Vec<f64>> {
        if lo > hi {
            return Err(Error::InvalidInput(format!("empty range [{lo}, {hi}]")));
        }
        let mut out: Vec<f64> = self
            .root_clusters()?
            .into_iter()
            .filter(|c| c.value.im.abs() <= tol_im && c.value.re >= lo && c.value.re <= hi)
            .map(|c| c.value.re)
            .collect();
        out.sort_by(f64::total_cmp);
        Ok(out)
    }
}

fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let cauchy = 1.0 + c[..n].iter().map(|a| (a / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.7;
            Complex64::from_polar(cauchy, theta)
        })
        .collect();
    let mut done = vec![false; n];
    let eps = f64::EPSILON;

    for _ in 0..MAX_ABERTH_ITERATIONS {
        if done.iter().all(|&d| d) {
            break;
        }
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (mut p, mut dp) = (ZERO, ZERO);
            let mut scale = 0.0;
            let r = zi.norm();
            for &a in c.iter().rev() {
                dp = dp * zi + p;
                p = p * zi + a;
                scale = scale * r + a.norm();
            }
            if p.norm() <= 4.0 * eps * scale {
                done[i] = true;
                continue;
            }
            let ratio = if dp == ZERO {
                // Nudge off a critical point.
                Complex64::new(1e-3 * (1.0 + r), 1e-3 * (1.0 + r))
            } else {
                p / dp
            };
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = zi - z[j];
                    if d == ZERO {
                        ZERO
                    } else {
                        ONE / d
                    }
                })
                .sum();
            let corr = ratio / (ONE - ratio * repulsion);
            if corr.is_finite() {
                z[i] = zi - corr;
                if corr.norm() <= eps * z[i].norm() {
                    done[i] = true;
                }
            }
        }
    }
    z
}

fn polish(p: &ComplexPoly, mut z: Complex64) -> Complex64 {
    let mut res = p.eval(z).norm();
    for _ in 0..POLISH_STEPS {
        let (v, dv) = p.eval_with_derivative(z);
        if dv == ZERO || v == ZERO {
            break;
        }
        let step = v / dv;
        let cand = z - step;
        let cand_res = p.eval(cand).norm();
        if !(cand_res <= res) {
            break;
        }
        z = cand;
        res = cand_res;
        if step.norm() <= f64::EPSILON * z.norm() {
            break;
        }
    }
    z
}

/// A root of multiplicity `m` is a simple root of the `(m-1)`-th derivative,
/// where Newton converges quadratically.
fn refine_cluster(p: &ComplexPoly, z0: Complex64, m: usize) -> Complex64 {
    let mut d = p.clone();
    for _ in 1..m {
        d = d.derivative();
    }
    let tol = CLUSTER_TOL * z0.norm().max(1.0);
    let mut z = z0;
    for _ in 0..POLISH_STEPS {
        let (v, dv) = d.eval_with_derivative(z);
        if dv == ZERO || v == ZERO {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() <= f64::EPSILON * z.norm() {
            break;
        }
    }
    if (z - z0).norm() <= tol && p.eval(z).norm() <= p.eval(z0).norm().max(f64::MIN_POSITIVE) * 1e3
    {
        z
    } else {
        z0
    }
}

fn cluster(roots: &[Complex64]) -> Vec<RootCluster> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let tol = CLUSTER_TOL * roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &z) in roots.iter().enumerate() {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += z;
                g.2 += 1;
            }
            None => groups.push((r, z, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, m)| RootCluster {
            value: sum / m as f64,
            multiplicity: m,
        })
        .collect()
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)))
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;

    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)))
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut coeffs = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ComplexPoly::new(coeffs)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;

    fn neg(self) -> ComplexPoly {
        self.scale(-ONE)
    }
}
