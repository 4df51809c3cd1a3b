use num_complex::Complex64;
use serde::Serialize;

use super::{classify_symmetry, LemniscaticData, Symmetry};
use crate::preimage::Preimage;

/// Residuals of the equations that determine the centers.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    /// `|Q(w_j) - h(z_j)|` for each gap.
    pub equation_residuals: Vec<f64>,
    /// The same, divided by `max(1, |h(z_j)|)`.
    pub relative_residuals: Vec<f64>,
    /// `|sum n_j a_j + p_{n-1} / p_n|`.
    pub moment_residual: f64,
    /// `a_1 < w_1 < a_2 < ... < a_ell`.
    pub interlacing: bool,
    /// `|a_{j1} + a_{j2}|` for components paired by `z -> -z` (empty unless
    /// `E = -E`).
    pub symmetry_residuals: Vec<f64>,
}

impl ValidationReport {
    /// Largest of all relative and symmetry residuals.
    pub fn max_residual(&self) -> f64 {
        self.relative_residuals
            .iter()
            .chain(&self.symmetry_residuals)
            .fold(self.moment_residual, |m, &x| m.max(x))
    }
}

pub fn validate_centers(pre: &Preimage, lem: &LemniscaticData) -> ValidationReport {
    let w = lem.q_critical_points();
    let mut equation_residuals = Vec::new();
    let mut relative_residuals = Vec::new();
    for (j, &h) in pre.critical_images().iter().enumerate() {
        let r = match w.get(j) {
            Some(&x) => (lem.q_eval(lem.axis().point(x)) - Complex64::new(h, 0.0)).norm(),
            None => f64::INFINITY,
        };
        equation_residuals.push(r);
        relative_residuals.push(r / h.abs().max(1.0));
    }
    let moment: Complex64 = (0..lem.ell())
        .map(|j| lem.center(j) * lem.counts()[j] as f64)
        .sum();
    let moment_residual = (moment + pre.subleading() / pre.leading()).norm();
    let a = lem.centers();
    let interlacing =
        w.len() + 1 == a.len() && (0..w.len()).all(|j| a[j] < w[j] && w[j] < a[j + 1]);
    let (lo, hi) = pre.components().hull();
    let tol = 1e-9 * lo.abs().max(hi.abs()).max(1.0);
    let symmetry_residuals = match classify_symmetry(pre.components(), tol) {
        Symmetry::Origin { pairs, fixed } if a.len() == pre.ell() => pairs
            .iter()
            .map(|&(j1, j2)| (a[j1] + a[j2]).abs())
            .chain(fixed.map(|j| a[j].abs()))
            .collect(),
        _ => Vec::new(),
    };
    ValidationReport {
        equation_residuals,
        relative_residuals,
        moment_residual,
        interlacing,
        symmetry_residuals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centers::{centers_iterative, centers_two_components, Axis, IterationOptions};
    use crate::poly::ComplexPoly;

    fn five_intervals() -> Preimage {
        Preimage::analyze(ComplexPoly::from_real(&[0.5, 7.0, -5.0, -32.0, 5.0, 26.0])).unwrap()
    }

    #[test]
    fn computed_centers_validate() {
        let pre = five_intervals();
        let (lem, _) = centers_iterative(&pre, &IterationOptions::default()).unwrap();
        let report = validate_centers(&pre, &lem);
        assert!(report.interlacing);
        assert!(report.max_residual() <= 1e-10, "{report:?}");
    }

    #[test]
    fn perturbation_is_detected() {
        let pre = five_intervals();
        let (lem, _) = centers_iterative(&pre, &IterationOptions::default()).unwrap();
        let mut a = lem.centers().to_vec();
        a[0] += 1e-3;
        let bad =
            LemniscaticData::new(a, Axis::Real, lem.counts().to_vec(), lem.leading()).unwrap();
        let report = validate_centers(&pre, &bad);
        assert!(report.equation_residuals[0] >= 1e-4);
    }

    #[test]
    fn closed_form_has_roundoff_residuals() {
        let (alpha, beta) = (0.2, 2.0);
        let d = beta * beta - alpha * alpha;
        let p = ComplexPoly::from_real(&[1.0 - 2.0 * beta * beta / d, 0.0, 2.0 / d]);
        let pre = Preimage::analyze(p).unwrap();
        let lem = centers_two_components(&pre).unwrap();
        let report = validate_centers(&pre, &lem);
        assert!(report.max_residual() <= 1e-14);
        assert_eq!(report.symmetry_residuals.len(), 1);
    }
}
