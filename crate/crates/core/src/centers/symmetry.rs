use serde::Serialize;

use crate::error::{Error, Result};
use crate::preimage::IntervalSet;

/// Behavior of a set of real-symmetric components under `z -> -z`.
///
/// Indices are 0-based and count components from left to right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Symmetry {
    /// `E != -E`.
    None,
    /// `E = -E`: component `j` is mapped onto component `ell - 1 - j`;
    /// for odd `ell` the middle component is mapped onto itself and
    /// contains `0`.
    Origin {
        pairs: Vec<(usize, usize)>,
        fixed: Option<usize>,
    },
}

impl Symmetry {
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Symmetry::Origin { .. })
    }
}

/// Classifies `E` by comparing `E` with `-E` to within `tol`.
pub fn classify_symmetry(e: &IntervalSet, tol: f64) -> Symmetry {
    if !e.is_origin_symmetric(tol) {
        return Symmetry::None;
    }
    let ell = e.ell();
    let pairs = (0..ell / 2).map(|j| (j, ell - 1 - j)).collect();
    let fixed = (ell % 2 == 1).then_some(ell / 2);
    Symmetry::Origin { pairs, fixed }
}

/// Like [`classify_symmetry`], but fails unless `E = -E`.
pub fn require_origin_symmetry(e: &IntervalSet, tol: f64) -> Result<Symmetry> {
    match classify_symmetry(e, tol) {
        Symmetry::None => Err(Error::Inconsistent(format!(
            "the set {:?} is not symmetric about 0 within {tol:e}",
            e.endpoints()
        ))),
        s => Ok(s),
    }
}
