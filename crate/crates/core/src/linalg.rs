//! Exact linear algebra over the rationals.
//!
//! The solvers here back series recognition, decomposition and the
//! prime-detecting search. Everything is exact; rank is decided by exact
//! zero tests, so a full-rank answer certifies uniqueness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::series::Rational;

/// Result of matching a target vector by a combination of columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fit {
    /// Unique exact coordinates.
    Exact(Vec<Rational>),
    /// No exact combination exists. `coords` is the unique combination that
    /// matches the target on the earliest linearly independent rows, and
    /// `index`/`value` is the first row where target minus fit is nonzero.
    Mismatch { coords: Vec<Rational>, index: usize, value: Rational },
    /// The columns are dependent on the available rows.
    RankDeficient { rank: usize },
}

/// Fit `target` as a combination of `columns`, using rows `0..target.len()`.
///
/// Every column must have at least `target.len()` entries.
pub fn fit_columns(columns: &[&[Rational]], target: &[Rational]) -> Fit {
    let ncols = columns.len();
    let nrows = target.len();
    assert!(columns.iter().all(|c| c.len() >= nrows), "column shorter than target");

    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::with_capacity(ncols);
    for i in 0..nrows {
        if basis.len() == ncols {
            break;
        }
        let entries: Vec<&Rational> = columns.iter().map(|c| &c[i]).chain([&target[i]]).collect();
        let mut row = integer_row(&entries);
        for (p, b) in &basis {
            eliminate(&mut row, *p, b);
        }
        if let Some(p) = row[..ncols].iter().position(|v| !v.is_zero()) {
            make_primitive(&mut row);
            basis.push((p, row));
        }
    }
    if basis.len() < ncols {
        return Fit::RankDeficient { rank: basis.len() };
    }

    let mut x = vec![Rational::zero(); ncols];
    for (p, b) in basis.iter().rev() {
        let mut acc = Rational::from_integer(b[ncols].clone());
        for (j, v) in b[..ncols].iter().enumerate() {
            if j != *p && !v.is_zero() {
                acc -= &x[j] * Rational::from_integer(v.clone());
            }
        }
        x[*p] = acc / Rational::from_integer(b[*p].clone());
    }

    match first_residual(columns, target, &x) {
        None => Fit::Exact(x),
        Some((index, value)) => Fit::Mismatch { coords: x, index, value },
    }
}

/// First row where `target - sum_j coords[j] * columns[j]` is nonzero.
pub fn first_residual(
    columns: &[&[Rational]],
    target: &[Rational],
    coords: &[Rational],
) -> Option<(usize, Rational)> {
    let active: Vec<(&[Rational], &Rational)> =
        columns.iter().zip(coords).filter(|(_, c)| !c.is_zero()).map(|(col, c)| (*col, c)).collect();
    (0..target.len()).find_map(|i| {
        let mut r = target[i].clone();
        for (col, c) in &active {
            if !col[i].is_zero() {
                r -= &col[i] * *c;
            }
        }
        (!r.is_zero()).then_some((i, r))
    })
}

/// Rank of the column family on rows `0..nrows`.
pub fn column_rank(columns: &[&[Rational]], nrows: usize) -> usize {
    let ncols = columns.len();
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for i in 0..nrows {
        if basis.len() == ncols {
            break;
        }
        let entries: Vec<&Rational> = columns.iter().map(|c| &c[i]).collect();
        let mut row = integer_row(&entries);
        for (p, b) in &basis {
            eliminate(&mut row, *p, b);
        }
        if let Some(p) = row.iter().position(|v| !v.is_zero()) {
            make_primitive(&mut row);
            basis.push((p, row));
        }
    }
    basis.len()
}

fn integer_row(entries: &[&Rational]) -> Vec<BigInt> {
    let den = entries
        .iter()
        .fold(BigInt::one(), |acc, c| if c.denom().is_one() { acc } else { acc.lcm(c.denom()) });
    entries.iter().map(|c| c.numer() * (&den / c.denom())).collect()
}

/// Clear `row[p]` using the basis row `b` whose pivot is `p`.
fn eliminate(row: &mut [BigInt], p: usize, b: &[BigInt]) {
    if row[p].is_zero() {
        return;
    }
    let g = row[p].gcd(&b[p]);
    let fr = &b[p] / &g;
    let fb = &row[p] / &g;
    for (r, bv) in row.iter_mut().zip(b) {
        let scaled = &*r * &fr;
        *r = if bv.is_zero() { scaled } else { scaled - bv * &fb };
    }
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Reduced row echelon form over the rationals.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Rref {
    pub fn new(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == rows.len() {
                break;
            }
            let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, sel);
            let inv = rows[r][c].recip();
            for v in rows[r].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        Rref { rows, pivots, ncols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Nullspace basis: one vector per free column, with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[f] = Rational::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

/// Scale a rational vector to the primitive integer vector on the same ray,
/// with positive leading nonzero entry.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let den =
        v.iter().fold(BigInt::one(), |acc, c| if c.denom().is_one() { acc } else { acc.lcm(c.denom()) });
    let mut ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    make_primitive(&mut ints);
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in ints.iter_mut() {
            *x = -&*x;
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{int, rat};

    fn cols(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter().map(|c| c.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn exact_fit() {
        let c = cols(&[&[1, 0, 1, 2], &[0, 1, 1, 3]]);
        let refs: Vec<&[Rational]> = c.iter().map(|v| v.as_slice()).collect();
        let target: Vec<Rational> = [2, 3, 5, 13].iter().map(|&v| int(v)).collect();
        assert_eq!(fit_columns(&refs, &target), Fit::Exact(vec![int(2), int(3)]));
    }

    #[test]
    fn mismatch_reports_first_bad_row() {
        let c = cols(&[&[1, 0, 1, 2], &[0, 1, 1, 3]]);
        let refs: Vec<&[Rational]> = c.iter().map(|v| v.as_slice()).collect();
        let target: Vec<Rational> = [2, 3, 5, 14].iter().map(|&v| int(v)).collect();
        match fit_columns(&refs, &target) {
            Fit::Mismatch { coords, index, value } => {
                assert_eq!(coords, vec![int(2), int(3)]);
                assert_eq!(index, 3);
                assert_eq!(value, int(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dependent_columns_are_rank_deficient() {
        let c = cols(&[&[1, 2, 3], &[2, 4, 6]]);
        let refs: Vec<&[Rational]> = c.iter().map(|v| v.as_slice()).collect();
        let target = vec![int(1), int(2), int(3)];
        assert_eq!(fit_columns(&refs, &target), Fit::RankDeficient { rank: 1 });
        assert_eq!(column_rank(&refs, 3), 1);
    }

    #[test]
    fn fit_with_fractions_and_late_pivots() {
        // columns whose first rows vanish, forcing pivots out of order
        let c = [vec![int(0), rat(1, 2), int(0), int(5)],
            vec![int(0), int(0), rat(2, 3), int(1)],
            vec![rat(1, 7), int(1), int(1), int(1)]];
        let refs: Vec<&[Rational]> = c.iter().map(|v| v.as_slice()).collect();
        let x = [rat(3, 4), rat(-2, 5), rat(7, 3)];
        let target: Vec<Rational> = (0..4).map(|i| (0..3).map(|j| &c[j][i] * &x[j]).sum()).collect();
        assert_eq!(fit_columns(&refs, &target), Fit::Exact(x.to_vec()));
    }

    #[test]
    fn rref_nullspace() {
        let rows = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
        let r = Rref::new(rows.clone(), 3);
        assert_eq!(r.rank(), 1);
        let ns = r.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &rows {
                let dot: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![rat(-1, 2), rat(3, 4), int(0)];
        assert_eq!(primitive_integer_vector(&v), vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
