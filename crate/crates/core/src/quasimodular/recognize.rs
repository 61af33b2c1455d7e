//! Identify a truncated q-series as an element of `M~_{<=K}`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::expand::Expander;
use super::poly::{monomials_up_to, QMPoly};
use crate::error::{Error, Result};
use crate::linalg::{column_rank, fit_columns, Fit};
use crate::series::{QSeries, Rational};

/// Where an exact fit broke down: `target - fit` first differs from zero
/// at `index`, with that difference as `value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub index: usize,
    #[serde(with = "crate::serde_rational")]
    pub value: Rational,
    /// Truncation of the series that was fitted.
    pub truncation: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    Form(QMPoly),
    Residual(ResidualReport),
}

impl Recognition {
    pub fn form(&self) -> Option<&QMPoly> {
        match self {
            Recognition::Form(p) => Some(p),
            Recognition::Residual(_) => None,
        }
    }
}

/// Smallest truncation (from `start`, doubling) at which `columns_at(t)` has
/// full column rank.
pub(crate) fn rank_certified_truncation(
    count: usize,
    start: usize,
    mut columns_at: impl FnMut(usize) -> Vec<QSeries>,
) -> usize {
    let mut t = start;
    loop {
        let cols = columns_at(t);
        let refs: Vec<&[Rational]> = cols.iter().map(|c| c.coeffs()).collect();
        if column_rank(&refs, t + 1) == count {
            return t;
        }
        t *= 2;
    }
}

fn truncation_memo() -> &'static Mutex<HashMap<u32, usize>> {
    static MEMO: OnceLock<Mutex<HashMap<u32, usize>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Truncation that makes recognition in `M~_{<=K}` unique.
///
/// Starts at `dim M~_{<=K} + 10` and doubles until the monomial expansions
/// have full column rank.
pub fn required_truncation(max_weight: u32) -> usize {
    let k = max_weight - max_weight % 2;
    if let Some(&t) = truncation_memo().lock().unwrap().get(&k) {
        return t;
    }
    let basis = monomials_up_to(k);
    let t = rank_certified_truncation(basis.len(), basis.len() + 10, |t| {
        let mut ex = Expander::new(t);
        basis.iter().map(|m| ex.monomial(*m)).collect()
    });
    truncation_memo().lock().unwrap().insert(k, t);
    t
}

/// Find the unique polynomial of mixed weight `<= max_weight` whose expansion
/// equals `s` to its full truncation, or report the first mismatch.
pub fn recognize(s: &QSeries, max_weight: u32) -> Result<Recognition> {
    let required = required_truncation(max_weight);
    if s.truncation() < required {
        return Err(Error::InsufficientTruncation { available: s.truncation(), required });
    }
    let basis = monomials_up_to(max_weight - max_weight % 2);
    let mut ex = Expander::new(s.truncation());
    let columns: Vec<QSeries> = basis.iter().map(|m| ex.monomial(*m)).collect();
    let refs: Vec<&[Rational]> = columns.iter().map(|c| c.coeffs()).collect();
    match fit_columns(&refs, s.coeffs()) {
        Fit::Exact(x) => Ok(Recognition::Form(QMPoly::from_terms(basis.into_iter().zip(x)))),
        Fit::Mismatch { index, value, .. } => {
            Ok(Recognition::Residual(ResidualReport { index, value, truncation: s.truncation() }))
        }
        Fit::RankDeficient { .. } => {
            Err(Error::InsufficientTruncation { available: s.truncation(), required })
        }
    }
}
