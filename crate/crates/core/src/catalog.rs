//! Named reference configurations with known centers or iteration counts.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

/// Chebyshev polynomial `T_n` from `T_{k+1} = 2 z T_k - T_{k-1}`.
pub fn chebyshev(n: usize) -> ComplexPoly {
    let mut prev = ComplexPoly::from_real(&[1.0]);
    if n == 0 {
        return prev;
    }
    let mut cur = ComplexPoly::identity();
    let two_z = ComplexPoly::from_real(&[0.0, 2.0]);
    for _ in 1..n {
        let next = &(&two_z * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Degree-7 polynomial with four intervals and zero counts `(2, 1, 3, 1)`,
/// descending coefficients.
pub const SEVEN_FOUR_DESCENDING: [f64; 8] = [
    -75.60176146228515,
    -6.112631353464664,
    130.38101983617594,
    7.91625847587283,
    -63.44786532361087,
    -1.793124210064775,
    7.668606949720056,
    -0.010502912343433701,
];

/// Published centers for [`Example::SevenFour`].
pub const SEVEN_FOUR_CENTERS: [f64; 4] = [
    -0.807906463544657,
    -0.367217238438923,
    0.341284084426686,
    0.878324884021925,
];

/// Published centers for [`Example::FiveIntervals`].
pub const FIVE_INTERVALS_CENTERS: [f64; 5] = [
    -0.957893296657925,
    -0.570567929561560,
    -0.079252067054220,
    0.464367835203743,
    0.951037765762270,
];

/// Reference configurations. Parameters default to the values used in the
/// published tables.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "example")]
pub enum Example {
    /// `1 + (z - 1)(2z + 1 + a^2)^2 / (1 - a^2)^2`, `0 < a < 1`: two
    /// intervals `[-1, b_2] ∪ [b_3, 1]` with zero counts `(2, 1)`.
    TwoIntervals { alpha: f64 },
    /// `[-b, -a] ∪ [a, b]`.
    SymmetricPair { alpha: f64, beta: f64 },
    /// `(z^2 - a^2)^2`, `a > 1`: two components, each an interval crossed by
    /// an arc.
    CrossingQuartic { alpha: f64 },
    /// `[-1, g_1 - a] ∪ [g_1 + a, g_2 - b] ∪ [g_2 + b, 1]` with
    /// `g_{1,2} = (a^2 - b^2 ∓ 1) / 2`.
    ThreeIntervals { alpha: f64, beta: f64 },
    /// `[-1, -(1 - a)] ∪ [-a, a] ∪ [1 - a, 1]`, `0 < a < 1/2`.
    SymmetricTriple { alpha: f64 },
    /// Degree 7, four intervals.
    SevenFour,
    /// `26z^5 + 5z^4 - 32z^3 - 5z^2 + 7z + 1/2`, five intervals.
    FiveIntervals,
    /// `scale * T_n`, `n` intervals for `scale > 1`.
    Chebyshev { n: usize, scale: f64 },
}

/// Values an example is expected to reproduce.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Reference {
    /// Centers from a closed formula or published digits.
    pub centers: Option<Vec<f64>>,
    /// Absolute accuracy of `centers` (digits printed, or roundoff).
    pub centers_tol: f64,
    /// Published number of outer iteration steps.
    pub steps: Option<usize>,
}

impl Example {
    /// Looks up an example by its identifier (see [`Example::id`]).
    pub fn from_id(id: &str) -> Option<Example> {
        Some(match id {
            "two-intervals" => Example::TwoIntervals { alpha: 0.1 },
            "symmetric-pair" => Example::SymmetricPair {
                alpha: 0.2,
                beta: 2.0,
            },
            "crossing-quartic" => Example::CrossingQuartic { alpha: 1.01 },
            "three-intervals" => Example::ThreeIntervals {
                alpha: 0.05,
                beta: 0.3,
            },
            "symmetric-triple" => Example::SymmetricTriple { alpha: 0.2 },
            "seven-four" => Example::SevenFour,
            "five-intervals" => Example::FiveIntervals,
            "chebyshev-10" => Example::Chebyshev { n: 10, scale: 1.05 },
            "chebyshev-20" => Example::Chebyshev { n: 20, scale: 1.05 },
            _ => return None,
        })
    }

    pub const IDS: [&'static str; 9] = [
        "two-intervals",
        "symmetric-pair",
        "crossing-quartic",
        "three-intervals",
        "symmetric-triple",
        "seven-four",
        "five-intervals",
        "chebyshev-10",
        "chebyshev-20",
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Example::TwoIntervals { .. } => "two-intervals",
            Example::SymmetricPair { .. } => "symmetric-pair",
            Example::CrossingQuartic { .. } => "crossing-quartic",
            Example::ThreeIntervals { .. } => "three-intervals",
            Example::SymmetricTriple { .. } => "symmetric-triple",
            Example::SevenFour => "seven-four",
            Example::FiveIntervals => "five-intervals",
            Example::Chebyshev { n: 20, .. } => "chebyshev-20",
            Example::Chebyshev { .. } => "chebyshev-10",
        }
    }

    /// Replaces the parameters that are given.
    pub fn with_params(self, alpha: Option<f64>, beta: Option<f64>) -> Result<Example> {
        let ex = match self {
            Example::TwoIntervals { alpha: a } => Example::TwoIntervals {
                alpha: alpha.unwrap_or(a),
            },
            Example::SymmetricPair { alpha: a, beta: b } => Example::SymmetricPair {
                alpha: alpha.unwrap_or(a),
                beta: beta.unwrap_or(b),
            },
            Example::CrossingQuartic { alpha: a } => Example::CrossingQuartic {
                alpha: alpha.unwrap_or(a),
            },
            Example::ThreeIntervals { alpha: a, beta: b } => Example::ThreeIntervals {
                alpha: alpha.unwrap_or(a),
                beta: beta.unwrap_or(b),
            },
            Example::SymmetricTriple { alpha: a } => Example::SymmetricTriple {
                alpha: alpha.unwrap_or(a),
            },
            Example::Chebyshev { n, scale } => Example::Chebyshev {
                n,
                scale: alpha.unwrap_or(scale),
            },
            other => {
                if alpha.is_some() || beta.is_some() {
                    return Err(Error::InvalidInput(format!(
                        "example {} has no parameters",
                        other.id()
                    )));
                }
                other
            }
        };
        ex.check()?;
        Ok(ex)
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            Example::TwoIntervals { alpha } => 0.0 < alpha && alpha < 1.0,
            Example::SymmetricPair { alpha, beta } => 0.0 < alpha && alpha < beta,
            Example::CrossingQuartic { alpha } => alpha > 1.0,
            Example::ThreeIntervals { alpha, beta } => {
                alpha > 0.0 && beta > 0.0 && alpha + beta < 1.0
            }
            Example::SymmetricTriple { alpha } => 0.0 < alpha && alpha < 0.5,
            Example::Chebyshev { n, scale } => n >= 1 && scale > 1.0,
            Example::SevenFour | Example::FiveIntervals => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "parameters out of range: {self:?}"
            )))
        }
    }

    pub fn polynomial(&self) -> Result<ComplexPoly> {
        self.check()?;
        let p = match *self {
            Example::TwoIntervals { alpha } => {
                let a2 = alpha * alpha;
                let d = (1.0 - a2).powi(2);
                // (z - 1)(2z + 1 + a^2)^2 / d + 1
                let lin = ComplexPoly::from_real(&[1.0 + a2, 2.0]);
                let f = &(&ComplexPoly::from_real(&[-1.0, 1.0]) * &lin) * &lin;
                &f.scale(Complex64::new(1.0 / d, 0.0)) + &ComplexPoly::from_real(&[1.0])
            }
            Example::SymmetricPair { alpha, beta } => {
                let d = beta * beta - alpha * alpha;
                ComplexPoly::from_real(&[1.0 - 2.0 * beta * beta / d, 0.0, 2.0 / d])
            }
            Example::CrossingQuartic { alpha } => {
                ComplexPoly::from_real(&[alpha.powi(4), 0.0, -2.0 * alpha * alpha, 0.0, 1.0])
            }
            Example::ThreeIntervals { alpha, beta } => {
                let g1 = 0.5 * (alpha * alpha - beta * beta - 1.0);
                // -1 - ((z - g1)^2 - a^2)(z - 1) / ((1 + g1)^2 - a^2)
                let d = (1.0 + g1).powi(2) - alpha * alpha;
                let quad = ComplexPoly::from_real(&[g1 * g1 - alpha * alpha, -2.0 * g1, 1.0]);
                let f = &quad * &ComplexPoly::from_real(&[-1.0, 1.0]);
                &f.scale(Complex64::new(-1.0 / d, 0.0)) - &ComplexPoly::from_real(&[1.0])
            }
            Example::SymmetricTriple { alpha } => {
                let s = alpha * (1.0 - alpha);
                ComplexPoly::from_real(&[0.0, -(1.0 - alpha + alpha * alpha) / s, 0.0, 1.0 / s])
            }
            Example::SevenFour => {
                let mut c = SEVEN_FOUR_DESCENDING.to_vec();
                c.reverse();
                ComplexPoly::from_real(&c)
            }
            Example::FiveIntervals => ComplexPoly::from_real(&[0.5, 7.0, -5.0, -32.0, 5.0, 26.0]),
            Example::Chebyshev { n, scale } => chebyshev(n).scale(Complex64::new(scale, 0.0)),
        };
        Ok(p)
    }

    /// Known centers and iteration counts.
    pub fn reference(&self) -> Reference {
        match *self {
            Example::TwoIntervals { alpha } => {
                let a2 = alpha * alpha;
                let x = 2.0 * a2.powi(3) - 9.0 * a2 * a2
                    + 108.0 * a2
                    + 27.0
                    + 2.0 * alpha * (9.0 - a2) * (3.0 + a2).powf(1.5);
                let r = x.cbrt() / 4f64.cbrt();
                Reference {
                    centers: Some(vec![-a2 / 3.0 - r / 6.0, -a2 / 3.0 + r / 3.0]),
                    centers_tol: 1e-12,
                    steps: Some(4),
                }
            }
            Example::SymmetricPair { alpha, beta } => Reference {
                centers: Some(vec![-(alpha + beta) / 2.0, (alpha + beta) / 2.0]),
                centers_tol: 1e-12,
                steps: Some(0),
            },
            Example::CrossingQuartic { alpha } => {
                let a = (0.5 * (alpha.powi(4) + (alpha.powi(8) - 1.0).sqrt())).powf(0.25);
                Reference {
                    centers: Some(vec![-a, a]),
                    centers_tol: 1e-12,
                    steps: Some(1),
                }
            }
            Example::ThreeIntervals { alpha, beta } => Reference {
                centers: (alpha == 0.05 && beta == 0.3).then(|| vec![-0.7751, -0.1648, 0.8525]),
                centers_tol: 5e-5,
                steps: Some(4),
            },
            Example::SymmetricTriple { alpha } => {
                let a3 = (0.5 * (1.0 - alpha + alpha * alpha).powf(1.5)
                    + 0.25 * (2.0 - 3.0 * alpha - 3.0 * alpha * alpha + 2.0 * alpha.powi(3)))
                .cbrt();
                Reference {
                    centers: Some(vec![-a3, 0.0, a3]),
                    centers_tol: 1e-12,
                    steps: Some(4),
                }
            }
            Example::SevenFour => Reference {
                centers: Some(SEVEN_FOUR_CENTERS.to_vec()),
                centers_tol: 1e-10,
                steps: Some(5),
            },
            Example::FiveIntervals => Reference {
                centers: Some(FIVE_INTERVALS_CENTERS.to_vec()),
                centers_tol: 1e-10,
                steps: Some(4),
            },
            Example::Chebyshev { n, scale } => Reference {
                centers: None,
                centers_tol: 0.0,
                steps: match (n, scale == 1.05) {
                    (10, true) => Some(5),
                    (20, true) => Some(6),
                    _ => None,
                },
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_recurrence() {
        assert_eq!(chebyshev(2), ComplexPoly::from_real(&[-1.0, 0.0, 2.0]));
        assert_eq!(chebyshev(3), ComplexPoly::from_real(&[0.0, -3.0, 0.0, 4.0]));
        let t20 = chebyshev(20);
        assert_eq!(t20.leading().re, 2f64.powi(19));
        for k in 0..20 {
            let x = (k as f64 * 0.31).cos();
            let expect = (20.0 * x.acos()).cos();
            assert!((t20.eval_real(x) - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn two_interval_family_expansion() {
        let alpha: f64 = 0.3;
        let a2 = alpha * alpha;
        let d = (1.0 - a2).powi(2);
        let p = Example::TwoIntervals { alpha }.polynomial().unwrap();
        let expect = [
            -4.0 * a2 / d,
            (a2 * a2 - 2.0 * a2 - 3.0) / d,
            4.0 * a2 / d,
            4.0 / d,
        ];
        for (c, e) in p.coeffs().iter().zip(expect) {
            assert!((c.re - e).abs() < 1e-14);
        }
    }

    #[test]
    fn three_interval_expansion_matches_endpoints() {
        let (alpha, beta): (f64, f64) = (0.05, 0.3);
        let p = Example::ThreeIntervals { alpha, beta }
            .polynomial()
            .unwrap();
        let g1 = 0.5 * (alpha * alpha - beta * beta - 1.0);
        let g2 = 0.5 * (alpha * alpha - beta * beta + 1.0);
        for c in [-1.0, g1 - alpha, g1 + alpha, g2 - beta, g2 + beta, 1.0] {
            assert!((p.eval_real(c).abs() - 1.0).abs() < 1e-13);
        }
        let d = (1.0 + g1).powi(2) - alpha * alpha;
        assert!((p.leading().re + 1.0 / d).abs() < 1e-14);
        assert!((p.coeff(2).re + (beta * beta - alpha * alpha) / d).abs() < 1e-14);
    }

    #[test]
    fn ids_round_trip() {
        for id in Example::IDS {
            assert_eq!(Example::from_id(id).unwrap().id(), id);
        }
        assert!(Example::from_id("nope").is_none());
    }

    #[test]
    fn parameter_checks() {
        let ex = Example::from_id("symmetric-triple").unwrap();
        assert!(ex.with_params(Some(0.7), None).is_err());
        assert!(Example::FiveIntervals.with_params(Some(0.1), None).is_err());
        let ex = Example::from_id("three-intervals").unwrap();
        assert_eq!(
            ex.with_params(Some(0.1), None).unwrap(),
            Example::ThreeIntervals {
                alpha: 0.1,
                beta: 0.3
            }
        );
    }
}
