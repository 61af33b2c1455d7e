//! Cusp forms and the splitting of `M~_{2k}` into Eisenstein derivatives and
//! derivatives of cusp forms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::expand::{delta_poly, e4_poly, e6_poly, eisenstein_derivative_series, qm_expand, Expander};
use super::poly::{modular_monomials, monomials_of_weight, QMPoly};
use super::recognize::rank_certified_truncation;
use crate::linalg::{fit_columns, Fit, Rref};
use crate::series::{QSeries, Rational};

/// Echelonized basis of the level-one cusp forms of the given weight.
///
/// Built as `Delta * E4^b E6^c` with `4b + 6c = weight - 12`, then row reduced
/// so element `i` is `q^{i+1} + (higher terms)` with zeros at the other
/// leading positions.
pub fn cusp_basis(weight: u32, truncation: usize) -> Vec<QSeries> {
    if weight < 12 || !weight.is_multiple_of(2) {
        return Vec::new();
    }
    let monos = modular_monomials(weight - 12);
    if monos.is_empty() {
        return Vec::new();
    }
    let work = truncation.max(monos.len());
    let mut ex = Expander::new(work);
    let d = ex.expand(&delta_poly());
    let e4 = qm_expand(&e4_poly(), work);
    let e6 = qm_expand(&e6_poly(), work);
    let rows: Vec<Vec<Rational>> =
        monos.iter().map(|m| d.mul(&e4.pow(m.g4)).mul(&e6.pow(m.g6)).into_coeffs()).collect();
    let rref = Rref::new(rows, work + 1);
    debug_assert!(rref.pivots.iter().enumerate().all(|(i, &p)| p == i + 1));
    rref.rows.into_iter().map(|r| QSeries::new(r).unwrap().truncate(truncation)).collect()
}

/// `dim S_weight` as the rank of the constructed basis.
pub fn cusp_dimension(weight: u32) -> usize {
    cusp_basis(weight, (weight as usize / 12) + 2).len()
}

/// One column of the grade-`2k` decomposition basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Column {
    /// `D^order G_weight`
    Eisenstein { order: u32, weight: u32 },
    /// `D^order` of cusp basis element `index` of `weight`
    Cusp { order: u32, weight: u32, index: usize },
}

struct GradeBasis {
    truncation: usize,
    columns: Vec<Column>,
    expansions: Vec<QSeries>,
}

fn grade_columns(grade: u32) -> Vec<Column> {
    let k = grade / 2;
    let mut cols: Vec<Column> =
        (0..k).map(|r| Column::Eisenstein { order: r, weight: grade - 2 * r }).collect();
    for r in 0..k {
        let w = grade - 2 * r;
        for index in 0..cusp_dimension(w) {
            cols.push(Column::Cusp { order: r, weight: w, index });
        }
    }
    cols
}

fn column_expansions(columns: &[Column], truncation: usize) -> Vec<QSeries> {
    let mut cusp_cache: HashMap<u32, Vec<QSeries>> = HashMap::new();
    columns
        .iter()
        .map(|c| match *c {
            Column::Eisenstein { order, weight } => eisenstein_derivative_series(weight, order, truncation),
            Column::Cusp { order, weight, index } => {
                cusp_cache.entry(weight).or_insert_with(|| cusp_basis(weight, truncation))[index]
                    .derivative(order)
            }
        })
        .collect()
}

fn grade_basis(grade: u32) -> Arc<GradeBasis> {
    static MEMO: OnceLock<Mutex<HashMap<u32, Arc<GradeBasis>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = memo.lock().unwrap().get(&grade) {
        return b.clone();
    }
    let columns = grade_columns(grade);
    let truncation =
        rank_certified_truncation(columns.len(), columns.len() + 10, |t| column_expansions(&columns, t));
    let expansions = column_expansions(&columns, truncation);
    let basis = Arc::new(GradeBasis { truncation, columns, expansions });
    memo.lock().unwrap().insert(grade, basis.clone());
    basis
}

/// `coeff * D^order G_weight`; weight 0 stands for a constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinTerm {
    pub order: u32,
    pub weight: u32,
    #[serde(with = "crate::serde_rational")]
    pub coeff: Rational,
}

/// `D^order` of the cusp form of `weight` with the given coordinates in
/// [`cusp_basis`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspTerm {
    pub order: u32,
    pub weight: u32,
    #[serde(with = "crate::serde_rational::vec")]
    pub coords: Vec<Rational>,
    pub series: QSeries,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub eisenstein_part: Vec<EisensteinTerm>,
    pub cusp_part: Vec<CuspTerm>,
}

impl Decomposition {
    pub fn is_eisenstein(&self) -> bool {
        self.cusp_part.is_empty()
    }

    /// Expansion of the Eisenstein part alone.
    pub fn eisenstein_expansion(&self, truncation: usize) -> QSeries {
        let mut acc = QSeries::zero(truncation);
        for t in &self.eisenstein_part {
            if t.weight == 0 {
                acc.add_scaled(&t.coeff, &QSeries::one(truncation));
            } else {
                acc.add_scaled(&t.coeff, &eisenstein_derivative_series(t.weight, t.order, truncation));
            }
        }
        acc
    }

    /// Expansion of the cuspidal part, recomputed at any truncation.
    pub fn cusp_expansion(&self, truncation: usize) -> QSeries {
        let mut acc = QSeries::zero(truncation);
        for t in &self.cusp_part {
            let basis = cusp_basis(t.weight, truncation);
            for (c, b) in t.coords.iter().zip(&basis) {
                acc.add_scaled(c, &b.derivative(t.order));
            }
        }
        acc
    }

    /// Sum of all parts.
    pub fn expand(&self, truncation: usize) -> QSeries {
        self.eisenstein_expansion(truncation).add(&self.cusp_expansion(truncation))
    }

    /// First nonzero cusp coordinate in output order.
    pub fn first_cusp_coordinate(&self) -> Option<(&CuspTerm, usize, &Rational)> {
        self.cusp_part
            .iter()
            .find_map(|t| t.coords.iter().enumerate().find(|(_, c)| !c.is_zero()).map(|(i, c)| (t, i, c)))
    }
}

/// Split `p` gradewise into Eisenstein derivatives and cusp-form derivatives.
///
/// Each pure-weight piece is solved exactly against its rank-certified basis;
/// a weight-0 constant goes to the Eisenstein part as `order 0, weight 0`.
pub fn decompose(p: &QMPoly) -> Decomposition {
    let mut out = Decomposition::default();
    for grade in p.weights() {
        let piece = p.graded_piece(grade);
        if grade == 0 {
            out.eisenstein_part.push(EisensteinTerm {
                order: 0,
                weight: 0,
                coeff: piece.coefficient(&super::poly::Monomial::ONE),
            });
            continue;
        }
        let basis = grade_basis(grade);
        let target = qm_expand(&piece, basis.truncation);
        let refs: Vec<&[Rational]> = basis.expansions.iter().map(|c| c.coeffs()).collect();
        let x = match fit_columns(&refs, target.coeffs()) {
            Fit::Exact(x) => x,
            other => panic!("grade {grade} basis does not span its piece: {other:?}"),
        };
        let mut cusp_groups: Vec<(u32, u32, Vec<Rational>)> = Vec::new();
        for (col, c) in basis.columns.iter().zip(x) {
            match *col {
                Column::Eisenstein { order, weight } => {
                    if !c.is_zero() {
                        out.eisenstein_part.push(EisensteinTerm { order, weight, coeff: c });
                    }
                }
                Column::Cusp { order, weight, .. } => match cusp_groups.last_mut() {
                    Some((o, w, coords)) if *o == order && *w == weight => coords.push(c),
                    _ => cusp_groups.push((order, weight, vec![c])),
                },
            }
        }
        for (order, weight, coords) in cusp_groups {
            if coords.iter().all(Zero::is_zero) {
                continue;
            }
            let t = basis.truncation;
            let mut series = QSeries::zero(t);
            for (c, b) in coords.iter().zip(cusp_basis(weight, t)) {
                series.add_scaled(c, &b.derivative(order));
            }
            out.cusp_part.push(CuspTerm { order, weight, coords, series });
        }
    }
    out
}

/// Both sides of the dimension count for `M~_{2k}`: the number of
/// monomials, and `k + sum_r dim S_{2k-2r}` from the cusp construction.
pub fn dim_check(two_k: u32) -> (usize, usize) {
    let lhs = monomials_of_weight(two_k).len();
    let k = two_k / 2;
    let rhs = k as usize + (0..k).map(|r| cusp_dimension(two_k - 2 * r)).sum::<usize>();
    (lhs, rhs)
}
