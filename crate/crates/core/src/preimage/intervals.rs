use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered disjoint closed intervals `[b_1, b_2] ∪ … ∪ [b_{2ℓ-1}, b_{2ℓ}]`.
///
/// Intervals may degenerate to points; gaps between consecutive intervals
/// are strictly positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct IntervalSet {
    endpoints: Vec<f64>,
}

impl IntervalSet {
    pub fn new(endpoints: Vec<f64>) -> Result<Self> {
        if endpoints.is_empty() || !endpoints.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "an interval set needs a positive even number of endpoints, got {}",
                endpoints.len()
            )));
        }
        if endpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidInput("endpoints must be finite".into()));
        }
        for (i, w) in endpoints.windows(2).enumerate() {
            let ok = if i % 2 == 0 {
                w[0] <= w[1]
            } else {
                w[0] < w[1]
            };
            if !ok {
                return Err(Error::InvalidInput(format!(
                    "endpoints are not ordered at position {}: {} vs {}",
                    i + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(IntervalSet { endpoints })
    }

    pub fn from_intervals(intervals: &[(f64, f64)]) -> Result<Self> {
        Self::new(intervals.iter().flat_map(|&(a, b)| [a, b]).collect())
    }

    /// Number of components.
    pub fn ell(&self) -> usize {
        self.endpoints.len() / 2
    }

    pub fn endpoints(&self) -> &[f64] {
        &self.endpoints
    }

    /// Component `j` (0-based) as `(left, right)`.
    pub fn component(&self, j: usize) -> (f64, f64) {
        (self.endpoints[2 * j], self.endpoints[2 * j + 1])
    }

    /// Gap `j` (0-based) between components `j` and `j + 1`.
    pub fn gap(&self, j: usize) -> (f64, f64) {
        (self.endpoints[2 * j + 1], self.endpoints[2 * j + 2])
    }

    pub fn midpoint(&self, j: usize) -> f64 {
        let (a, b) = self.component(j);
        0.5 * (a + b)
    }

    pub fn gap_midpoint(&self, j: usize) -> f64 {
        let (a, b) = self.gap(j);
        0.5 * (a + b)
    }

    /// Smallest interval containing the set.
    pub fn hull(&self) -> (f64, f64) {
        (self.endpoints[0], *self.endpoints.last().unwrap())
    }

    /// Index of the component containing `x` (within `tol`), if any.
    pub fn component_containing(&self, x: f64, tol: f64) -> Option<usize> {
        (0..self.ell()).find(|&j| {
            let (a, b) = self.component(j);
            x >= a - tol && x <= b + tol
        })
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.component_containing(x, tol).is_some()
    }

    /// Whether `z` lies within `tol` of the set.
    pub fn contains_complex(&self, z: Complex64, tol: f64) -> bool {
        self.nearest(z).1 <= tol
    }

    /// Nearest component to `z` and the distance to it.
    pub fn nearest(&self, z: Complex64) -> (usize, f64) {
        (0..self.ell())
            .map(|j| {
                let (a, b) = self.component(j);
                let dx = if z.re < a {
                    a - z.re
                } else if z.re > b {
                    z.re - b
                } else {
                    0.0
                };
                (j, dx.hypot(z.im))
            })
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap()
    }

    /// Index of the gap containing real `x`, if `x` lies strictly in a gap.
    pub fn gap_containing(&self, x: f64) -> Option<usize> {
        (0..self.ell().saturating_sub(1)).find(|&j| {
            let (a, b) = self.gap(j);
            a < x && x < b
        })
    }

    /// Whether `E = -E` within `tol`.
    pub fn is_origin_symmetric(&self, tol: f64) -> bool {
        let m = self.endpoints.len();
        (0..m).all(|i| (self.endpoints[i] + self.endpoints[m - 1 - i]).abs() <= tol)
    }

    /// The image `s E + t` for `s > 0`.
    pub fn affine(&self, s: f64, t: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidInput("scale must be positive".into()));
        }
        Self::new(self.endpoints.iter().map(|b| s * b + t).collect())
    }
}

impl TryFrom<Vec<f64>> for IntervalSet {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<IntervalSet> for Vec<f64> {
    fn from(s: IntervalSet) -> Self {
        s.endpoints
    }
}
