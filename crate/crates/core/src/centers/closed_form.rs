//! Explicit center formulas for two components and for doubly symmetric
//! sets with two or three components.

use num_complex::Complex64;
use serde::Serialize;

use super::{Axis, LemniscaticData};
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::preimage::{outer_critical_clusters, require_real, Preimage};

/// How the two components of a real even preimage sit relative to the real
/// line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryCase {
    /// Each component is symmetric with respect to the real line.
    SelfConjugate,
    /// The components are mirror images of each other under conjugation.
    ConjugatePair,
}

/// Centers for `ell = 2` from the value `h(z_1)` at the outer critical point.
pub fn centers_two_components(pre: &Preimage) -> Result<LemniscaticData> {
    if pre.ell() != 2 {
        return Err(Error::NotApplicable(format!(
            "{} components, expected 2",
            pre.ell()
        )));
    }
    let (n1, n2) = (pre.zero_counts()[0], pre.zero_counts()[1]);
    let n = (n1 + n2) as f64;
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let pn = pre.leading();
    let h1 = pre.critical_images()[0];
    let parity = if n2 % 2 == 0 { 1.0 } else { -1.0 };
    if parity * h1.signum() * pn.signum() <= 0.0 {
        return Err(Error::Inconsistent(format!(
            "h(z_1) = {h1} has the wrong sign for counts ({n1}, {n2})"
        )));
    }
    let shift = -pre.subleading() / (n * pn);
    let log_h = h1.abs().ln() - (2.0 * pn.abs()).ln();
    let left = ((n1f * (n2f / n1f).ln() + log_h) / n).exp();
    let right = ((n2f * (n1f / n2f).ln() + log_h) / n).exp();
    LemniscaticData::new(
        vec![shift - left, shift + right],
        Axis::Real,
        vec![n1, n2],
        pn,
    )
}

fn is_even(p: &ComplexPoly) -> bool {
    let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    p.coeffs()
        .iter()
        .skip(1)
        .step_by(2)
        .all(|c| c.norm() <= 1e-14 * scale)
}

fn meets_real_line(p: &ComplexPoly) -> Result<bool> {
    let one = ComplexPoly::constant(Complex64::new(1.0, 0.0));
    for q in [p - &one, p + &one] {
        if !q
            .real_roots_in(f64::NEG_INFINITY, f64::INFINITY, 1e-9)?
            .is_empty()
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Centers `a_1 = -a_2` for a real even `P` whose only critical point
/// outside `E` is the simple critical point `0`.
///
/// With `case = None` the case is detected: the components are
/// self-conjugate exactly when `E` meets the real line. In the
/// [`SymmetryCase::ConjugatePair`] case the centers lie on the imaginary
/// axis.
pub fn centers_double_symmetry_two(
    p: &ComplexPoly,
    case: Option<SymmetryCase>,
) -> Result<LemniscaticData> {
    require_real(p)?;
    let n = p.degree();
    if !n.is_multiple_of(2) || !is_even(p) {
        return Err(Error::NotApplicable("P is not an even polynomial".into()));
    }
    let p0 = p.coeff(0).re;
    if p0.abs() <= 1.0 {
        return Err(Error::NotApplicable(format!(
            "P(0) = {p0} lies in [-1, 1], so 0 belongs to E"
        )));
    }
    let outer = outer_critical_clusters(p)?;
    if outer.len() != 1 || outer[0].1 != 1 || outer[0].0.norm() > 1e-9 {
        return Err(Error::NotApplicable(
            "P needs exactly one critical point outside E, simple and at 0".into(),
        ));
    }
    let detected = if meets_real_line(p)? {
        SymmetryCase::SelfConjugate
    } else {
        SymmetryCase::ConjugatePair
    };
    if let Some(c) = case {
        if c != detected {
            return Err(Error::NotApplicable(format!(
                "requested case {c:?} but the components are {detected:?}"
            )));
        }
    }
    let pn = p.leading().re;
    let h0 = p0 + p0.signum() * (p0 * p0 - 1.0).sqrt();
    let (base, axis) = match detected {
        SymmetryCase::SelfConjugate => {
            let sign = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
            (sign * h0 / (2.0 * pn), Axis::Real)
        }
        SymmetryCase::ConjugatePair => (h0 / (2.0 * pn), Axis::Imaginary),
    };
    if !(base > 0.0) {
        return Err(Error::Inconsistent(format!(
            "radicand {base} of the center formula is not positive"
        )));
    }
    let t = base.powf(1.0 / n as f64);
    LemniscaticData::new(vec![-t, t], axis, vec![n / 2, n / 2], pn)
}

/// Centers `a_1 = -a_3`, `a_2 = 0` for three components with `E = -E`, each
/// symmetric with respect to the real line.
pub fn centers_three_double_symmetry(pre: &Preimage) -> Result<LemniscaticData> {
    if pre.ell() != 3 {
        return Err(Error::NotApplicable(format!(
            "{} components, expected 3",
            pre.ell()
        )));
    }
    let counts = pre.zero_counts();
    let (n2, n3) = (counts[1], counts[2]);
    if counts[0] != n3 {
        return Err(Error::NotApplicable(format!(
            "outer components carry {} and {n3} zeros",
            counts[0]
        )));
    }
    let z = pre.outer_critical_points();
    if (z[0] + z[1]).abs() > 1e-9 * z[1].abs().max(1.0) {
        return Err(Error::NotApplicable(format!(
            "critical points {} and {} are not symmetric",
            z[0], z[1]
        )));
    }
    let e = pre.components();
    let (lo, hi) = e.hull();
    if !e.is_origin_symmetric(1e-9 * lo.abs().max(hi.abs()).max(1.0)) {
        return Err(Error::NotApplicable("E is not symmetric about 0".into()));
    }
    let n = pre.degree() as f64;
    let (n2f, n3f) = (n2 as f64, n3 as f64);
    let h2 = pre.critical_images()[1].abs();
    let log_a3 = 0.5 * n.ln()
        + (h2.ln()
            - (2.0 * pre.leading().abs()).ln()
            - 0.5 * n2f * n2f.ln()
            - n3f * (2.0 * n3f).ln())
            / n;
    let a3 = log_a3.exp();
    LemniscaticData::new(
        vec![-a3, 0.0, a3],
        Axis::Real,
        counts.to_vec(),
        pre.leading(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn symmetric_pair(alpha: f64, beta: f64) -> ComplexPoly {
        let d = beta * beta - alpha * alpha;
        ComplexPoly::from_real(&[1.0 - 2.0 * beta * beta / d, 0.0, 2.0 / d])
    }

    fn symmetric_triple(alpha: f64) -> ComplexPoly {
        let s = alpha * (1.0 - alpha);
        ComplexPoly::from_real(&[0.0, -(1.0 - alpha + alpha * alpha) / s, 0.0, 1.0 / s])
    }

    fn crossing_quartic(alpha: f64) -> ComplexPoly {
        ComplexPoly::from_real(&[alpha.powi(4), 0.0, -2.0 * alpha * alpha, 0.0, 1.0])
    }

    #[test]
    fn two_interval_family_matches_explicit_centers() {
        for alpha in [0.01, 0.05, 0.1, 0.3, 0.6, 0.9] {
            let a2: f64 = alpha * alpha;
            let x = 2.0 * a2.powi(3) - 9.0 * a2 * a2
                + 108.0 * a2
                + 27.0
                + 2.0 * alpha * (9.0 - a2) * (3.0 + a2).powf(1.5);
            let r = x.cbrt() / 4f64.cbrt();
            let e1 = -a2 / 3.0 - r / 6.0;
            let e2 = -a2 / 3.0 + r / 3.0;
            let pre = Preimage::analyze(two_interval_family(alpha)).unwrap();
            let lem = centers_two_components(&pre).unwrap();
            assert!((lem.centers()[0] - e1).abs() < 1e-14, "alpha {alpha}");
            assert!((lem.centers()[1] - e2).abs() < 1e-14, "alpha {alpha}");
        }
    }

    #[test]
    fn symmetric_pair_centers_are_mean_of_endpoints() {
        let pre = Preimage::analyze(symmetric_pair(0.2, 2.0)).unwrap();
        let lem = centers_two_components(&pre).unwrap();
        assert!((lem.centers()[0] + 1.1).abs() < 1e-14);
        assert!((lem.centers()[1] - 1.1).abs() < 1e-14);
        let lem = centers_double_symmetry_two(pre.poly(), None).unwrap();
        assert_eq!(lem.axis(), Axis::Real);
        assert!((lem.centers()[1] - 1.1).abs() < 1e-14);
    }

    #[test]
    fn crossing_quartic_center() {
        for alpha in [1.001f64, 1.01, 1.1, 1.5] {
            let lem = centers_double_symmetry_two(&crossing_quartic(alpha), None).unwrap();
            let a8 = alpha.powi(8);
            let expect = (0.5 * (alpha.powi(4) + (a8 - 1.0).sqrt())).powf(0.25);
            assert!((lem.centers()[1] - expect).abs() < 1e-14);
            assert!((lem.centers()[0] + expect).abs() < 1e-14);
        }
    }

    #[test]
    fn rotated_polynomial_gives_rotated_centers() {
        // P(iz) has the components of P turned by -i.
        let p = symmetric_pair(0.3, 1.4);
        let rotated = p.compose_affine(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0));
        let rotated = ComplexPoly::from_real(&rotated.real_coeffs());
        let lem = centers_double_symmetry_two(&p, None).unwrap();
        let rot = centers_double_symmetry_two(&rotated, None).unwrap();
        assert_eq!(rot.axis(), Axis::Imaginary);
        let expect = Complex64::new(0.0, 1.0) * lem.center(1);
        assert!((rot.center(1) - expect).norm() < 1e-14);
        assert!(centers_double_symmetry_two(&rotated, Some(SymmetryCase::SelfConjugate)).is_err());
    }

    #[test]
    fn double_symmetry_rejects_bad_input() {
        assert!(centers_double_symmetry_two(&two_interval_family(0.1), None).is_err());
        // P(0) inside [-1, 1].
        let p = ComplexPoly::from_real(&[0.5, 0.0, 1.0]);
        assert!(matches!(
            centers_double_symmetry_two(&p, None),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn symmetric_triple_center() {
        for alpha in [0.01f64, 0.1, 0.2, 0.3, 0.45] {
            let expect = (0.5 * (1.0 - alpha + alpha * alpha).powf(1.5)
                + 0.25 * (2.0 - 3.0 * alpha - 3.0 * alpha * alpha + 2.0 * alpha.powi(3)))
            .cbrt();
            let pre = Preimage::analyze(symmetric_triple(alpha)).unwrap();
            let lem = centers_three_double_symmetry(&pre).unwrap();
            assert!((lem.centers()[2] - expect).abs() < 1e-14, "alpha {alpha}");
            assert_eq!(lem.centers()[1], 0.0);
            assert_eq!(lem.centers()[0], -lem.centers()[2]);
        }
    }

    #[test]
    fn symmetric_triple_limits() {
        let a3 = |alpha: f64| {
            let pre = Preimage::analyze(symmetric_triple(alpha)).unwrap();
            centers_three_double_symmetry(&pre).unwrap().centers()[2]
        };
        let limit_half = 3f64.sqrt() / (2.0 * 2f64.cbrt());
        assert!((limit_half - 0.6874).abs() < 1e-4);
        let d1 = (a3(0.499) - limit_half).abs();
        let d2 = (a3(0.4999) - limit_half).abs();
        assert!(d2 < d1 && d2 < 1e-3);
        let d1 = (a3(1e-3) - 1.0).abs();
        let d2 = (a3(1e-4) - 1.0).abs();
        assert!(d2 < d1 && d2 < 1e-3);
    }

    #[test]
    fn nearly_touching_components_are_ambiguous() {
        let err = Preimage::analyze(symmetric_triple(0.5 - 1e-6)).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
    }

    #[test]
    fn three_component_formula_needs_symmetry() {
        // Three intervals without symmetry about 0.
        let (alpha, beta): (f64, f64) = (0.05, 0.3);
        let g1 = 0.5 * (alpha * alpha - beta * beta - 1.0);
        let p = crate::preimage::polynomial_from_endpoints(&[
            -1.0,
            g1 - alpha,
            g1 + alpha,
            0.5 * (alpha * alpha - beta * beta + 1.0) - beta,
            0.5 * (alpha * alpha - beta * beta + 1.0) + beta,
            1.0,
        ])
        .unwrap();
        let pre = Preimage::analyze(p).unwrap();
        assert!(matches!(
            centers_three_double_symmetry(&pre),
            Err(Error::NotApplicable(_))
        ));
    }
}
