//! q-expansions of Eisenstein series and of polynomials in them.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{modular_monomials, Monomial, QMPoly};
use crate::linalg::{fit_columns, Fit};
use crate::number_theory::{bernoulli, sigma_table};
use crate::series::{int, rat, QSeries, Rational};

/// Constant term `-B_{2k} / 4k` of the weight `2k` Eisenstein series.
pub fn eisenstein_constant(two_k: u32) -> Rational {
    assert!(two_k >= 2 && two_k.is_multiple_of(2), "Eisenstein weight must be even and >= 2");
    -bernoulli(two_k as usize) / int(2 * two_k)
}

/// `G_{2k} = -B_{2k}/4k + sum sigma_{2k-1}(n) q^n` to order `truncation`.
pub fn eisenstein_series(two_k: u32, truncation: usize) -> QSeries {
    eisenstein_derivative_series(two_k, 0, truncation)
}

/// `D^r G_{2k}`: coefficient `n^r sigma_{2k-1}(n)`, constant only when `r = 0`.
pub fn eisenstein_derivative_series(two_k: u32, r: u32, truncation: usize) -> QSeries {
    let constant = eisenstein_constant(two_k);
    let sigmas = sigma_table(two_k - 1, truncation);
    QSeries::from_fn(truncation, |n| match n {
        0 if r == 0 => constant.clone(),
        0 => Rational::zero(),
        _ if r == 0 => Rational::from_integer(sigmas[n].clone()),
        _ => Rational::from_integer(&sigmas[n] * BigInt::from(n).pow(r)),
    })
}

/// Evaluates polynomials on the G-series at a fixed truncation, caching
/// generator powers and monomial expansions between calls.
pub struct Expander {
    truncation: usize,
    powers: [Vec<QSeries>; 3],
    cache: HashMap<Monomial, QSeries>,
}

impl Expander {
    pub fn new(truncation: usize) -> Self {
        let base = |w| vec![QSeries::one(truncation), eisenstein_series(w, truncation)];
        Expander { truncation, powers: [base(2), base(4), base(6)], cache: HashMap::new() }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    fn power(&mut self, generator: usize, e: u32) -> QSeries {
        let list = &mut self.powers[generator];
        while list.len() <= e as usize {
            let next = list.last().unwrap().mul(&list[1]);
            list.push(next);
        }
        list[e as usize].clone()
    }

    pub fn monomial(&mut self, m: Monomial) -> QSeries {
        if let Some(s) = self.cache.get(&m) {
            return s.clone();
        }
        let mut factors: Vec<QSeries> = [(0, m.g2), (1, m.g4), (2, m.g6)]
            .into_iter()
            .filter(|&(_, e)| e > 0)
            .map(|(g, e)| self.power(g, e))
            .collect();
        let s = match factors.len() {
            0 => QSeries::one(self.truncation),
            _ => {
                let first = factors.remove(0);
                factors.iter().fold(first, |acc, f| acc.mul(f))
            }
        };
        self.cache.insert(m, s.clone());
        s
    }

    pub fn expand(&mut self, p: &QMPoly) -> QSeries {
        let mut acc = QSeries::zero(self.truncation);
        for (m, c) in p.terms() {
            let s = self.monomial(*m);
            acc.add_scaled(c, &s);
        }
        acc
    }
}

/// Exact q-expansion of a polynomial in `G2, G4, G6`.
pub fn qm_expand(p: &QMPoly, truncation: usize) -> QSeries {
    Expander::new(truncation).expand(p)
}

/// `Delta = (240^3 G4^3 - 504^2 G6^2) / 1728`, i.e. `(E4^3 - E6^2)/1728`.
pub fn delta_poly() -> QMPoly {
    let g4_cubed = QMPoly::monomial(Monomial::new(0, 3, 0)).scale(&int(240i64.pow(3)));
    let g6_squared = QMPoly::monomial(Monomial::new(0, 0, 2)).scale(&int(504i64.pow(2)));
    g4_cubed.sub(&g6_squared).scale(&rat(1, 1728))
}

/// Normalized discriminant `q - 24q^2 + 252q^3 - ...`.
pub fn delta(truncation: usize) -> QSeries {
    qm_expand(&delta_poly(), truncation)
}

/// `E4 = 240 G4`.
pub fn e4_poly() -> QMPoly {
    QMPoly::g4().scale(&int(240))
}

/// `E6 = -504 G6`.
pub fn e6_poly() -> QMPoly {
    QMPoly::g6().scale(&int(-504))
}

fn eisenstein_poly_memo() -> &'static Mutex<HashMap<u32, QMPoly>> {
    static MEMO: OnceLock<Mutex<HashMap<u32, QMPoly>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `G_{2k}` as a polynomial: the generators for 2, 4, 6 and otherwise the
/// unique element of `Q[G4, G6]` of that weight matching the expansion.
pub fn eisenstein_poly(two_k: u32) -> QMPoly {
    assert!(two_k >= 2 && two_k.is_multiple_of(2), "Eisenstein weight must be even and >= 2");
    match two_k {
        2 => return QMPoly::g2(),
        4 => return QMPoly::g4(),
        6 => return QMPoly::g6(),
        _ => {}
    }
    if let Some(p) = eisenstein_poly_memo().lock().unwrap().get(&two_k) {
        return p.clone();
    }
    let basis = modular_monomials(two_k);
    let mut truncation = basis.len() + 10;
    let poly = loop {
        let mut ex = Expander::new(truncation);
        let columns: Vec<QSeries> = basis.iter().map(|m| ex.monomial(*m)).collect();
        let refs: Vec<&[Rational]> = columns.iter().map(|c| c.coeffs()).collect();
        let target = eisenstein_series(two_k, truncation);
        match fit_columns(&refs, target.coeffs()) {
            Fit::Exact(x) => break QMPoly::from_terms(basis.iter().copied().zip(x)),
            Fit::RankDeficient { .. } => truncation *= 2,
            Fit::Mismatch { index, .. } => {
                panic!("G_{two_k} not in the modular monomial span (row {index})")
            }
        }
    };
    eisenstein_poly_memo().lock().unwrap().insert(two_k, poly.clone());
    poly
}
