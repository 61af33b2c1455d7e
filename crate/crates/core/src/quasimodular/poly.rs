//! Polynomials in `G2, G4, G6` and Ramanujan's derivation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::series::{format_rational, parse_rational, rat, Rational};

/// Exponent triple `(a, b, c)` standing for `G2^a G4^b G6^c`.
///
/// Ordered by weight (ascending), then total degree (descending), then
/// lexicographically descending on `(a, b, c)`. So weight 6 lists as
/// `G2^3, G2 G4, G6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub g2: u32,
    pub g4: u32,
    pub g6: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { g2: 0, g4: 0, g6: 0 };

    pub const fn new(g2: u32, g4: u32, g6: u32) -> Self {
        Monomial { g2, g4, g6 }
    }

    pub fn weight(&self) -> u32 {
        2 * self.g2 + 4 * self.g4 + 6 * self.g6
    }

    pub fn degree(&self) -> u32 {
        self.g2 + self.g4 + self.g6
    }

    pub fn exponents(&self) -> [u32; 3] {
        [self.g2, self.g4, self.g6]
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.g2 + other.g2, self.g4 + other.g4, self.g6 + other.g6)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.degree().cmp(&self.degree()))
            .then_with(|| other.exponents().cmp(&self.exponents()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("G2", self.g2), ("G4", self.g4), ("G6", self.g6)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All monomials of the given weight, in canonical order. Empty for odd weight.
pub fn monomials_of_weight(weight: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if !weight.is_multiple_of(2) {
        return out;
    }
    let half = weight / 2; // a + 2b + 3c = half
    for c in 0..=half / 3 {
        for b in 0..=(half - 3 * c) / 2 {
            let a = half - 3 * c - 2 * b;
            out.push(Monomial::new(a, b, c));
        }
    }
    out.sort();
    out
}

/// Monomials of every even weight `0, 2, ..., max_weight`.
pub fn monomials_up_to(max_weight: u32) -> Vec<Monomial> {
    (0..=max_weight).step_by(2).flat_map(monomials_of_weight).collect()
}

/// Pure modular monomials `G4^b G6^c` of the given weight.
pub fn modular_monomials(weight: u32) -> Vec<Monomial> {
    monomials_of_weight(weight).into_iter().filter(|m| m.g2 == 0).collect()
}

/// A quasimodular form as an exact polynomial in `G2, G4, G6`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QMPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl QMPoly {
    pub fn zero() -> Self {
        QMPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = QMPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn g2() -> Self {
        Self::monomial(Monomial::new(1, 0, 0))
    }

    pub fn g4() -> Self {
        Self::monomial(Monomial::new(0, 1, 0))
    }

    pub fn g6() -> Self {
        Self::monomial(Monomial::new(0, 0, 1))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = QMPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Terms in canonical order; coefficients are never zero.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest weight among the terms, `None` for the zero polynomial.
    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    /// Distinct weights present, ascending.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(Monomial::weight).collect();
        w.dedup();
        w
    }

    /// The homogeneous component of the given weight.
    pub fn graded_piece(&self, weight: u32) -> QMPoly {
        QMPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == weight)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &QMPoly) -> QMPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QMPoly) -> QMPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QMPoly {
        QMPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> QMPoly {
        if c.is_zero() {
            return QMPoly::zero();
        }
        QMPoly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn mul(&self, other: &QMPoly) -> QMPoly {
        let mut out = QMPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> QMPoly {
        (0..e).fold(QMPoly::one(), |acc, _| acc.mul(self))
    }

    /// Ramanujan's derivation `D`, extended from
    /// `DG2 = -2G2^2 + 5/6 G4`, `DG4 = -8G2G4 + 7/10 G6`,
    /// `DG6 = -12G2G6 + 400/7 G4^2` by the Leibniz rule.
    pub fn derivative(&self) -> QMPoly {
        let mut out = QMPoly::zero();
        for (m, c) in &self.terms {
            let (a, b, cc) = (m.g2 as i64, m.g4 as i64, m.g6 as i64);
            let raise = Monomial::new(m.g2 + 1, m.g4, m.g6);
            out.add_term(raise, c * rat(-(2 * a + 8 * b + 12 * cc), 1));
            if a > 0 {
                out.add_term(Monomial::new(m.g2 - 1, m.g4 + 1, m.g6), c * rat(5 * a, 6));
            }
            if b > 0 {
                out.add_term(Monomial::new(m.g2, m.g4 - 1, m.g6 + 1), c * rat(7 * b, 10));
            }
            if cc > 0 {
                out.add_term(Monomial::new(m.g2, m.g4 + 2, m.g6 - 1), c * rat(400 * cc, 7));
            }
        }
        out
    }

    /// `D^n` applied symbolically.
    pub fn derivative_n(&self, n: u32) -> QMPoly {
        (0..n).fold(self.clone(), |acc, _| acc.derivative())
    }
}

/// The monomials of one weight as polynomials, in canonical order.
pub fn monomial_basis(weight: u32) -> Vec<QMPoly> {
    monomials_of_weight(weight).into_iter().map(QMPoly::monomial).collect()
}

impl fmt::Display for QMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    monomial: [u32; 3],
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

impl Serialize for QMPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson { monomial: m.exponents(), coeff: format_rational(c) })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QMPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(deserializer)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| {
                let [a, b, c] = t.monomial;
                parse_rational(&t.coeff).map(|v| (Monomial::new(a, b, c), v))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(QMPoly::from_terms(terms))
    }
}

/// Parse the JSON interchange form of a polynomial.
pub fn poly_from_json(text: &str) -> Result<QMPoly> {
    serde_json::from_str(text).map_err(|e| invalid(e.to_string()))
}
