//! Truncated formal power series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] of truncation `N` stores the coefficients of `q^0 ..= q^N`.
//! Binary operations truncate to the smaller operand, and reading a
//! coefficient past the truncation is an error rather than a silent zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Exact rational number, always kept reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Parse `"p/q"` or `"p"` into a reduced [`Rational`].
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| invalid(format!("bad numerator in {text:?}")))?;
    let den = BigInt::from_str(den).map_err(|_| invalid(format!("bad denominator in {text:?}")))?;
    if den.is_zero() {
        return Err(invalid(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Below this length convolution stays on the calling thread.
const PARALLEL_THRESHOLD: usize = 160;

/// A truncated power series `c_0 + c_1 q + ... + c_N q^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Build from an explicit coefficient list; the truncation is `len - 1`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("a series needs at least the q^0 coefficient"));
        }
        Ok(QSeries { coeffs })
    }

    pub fn from_fn(truncation: usize, f: impl FnMut(usize) -> Rational) -> Self {
        QSeries { coeffs: (0..=truncation).map(f).collect() }
    }

    pub fn from_integers<I, T>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        QSeries::new(values.into_iter().map(|v| Rational::from_integer(v.into())).collect())
    }

    pub fn zero(truncation: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); truncation + 1] }
    }

    pub fn one(truncation: usize) -> Self {
        Self::constant(Rational::one(), truncation)
    }

    pub fn constant(c: Rational, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        s.coeffs[0] = c;
        s
    }

    /// `c q^n`, which is the zero series when `n > truncation`.
    pub fn monomial(c: Rational, n: usize, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if n <= truncation {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `q^n`. Fails when `n` exceeds the truncation.
    pub fn coefficient(&self, n: usize) -> Result<&Rational> {
        self.coeffs.get(n).ok_or(Error::IndexBeyondTruncation { index: n, truncation: self.truncation() })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Smallest index with a nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Drop coefficients above `truncation` (no-op if already shorter).
    pub fn truncate(&self, truncation: usize) -> Self {
        let n = truncation.min(self.truncation());
        QSeries { coeffs: self.coeffs[..=n].to_vec() }
    }

    /// True iff the coefficients agree up to the smaller truncation.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        if c.is_zero() {
            return QSeries::zero(self.truncation());
        }
        QSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// In-place `self += c * other`, truncating to the smaller operand.
    pub fn add_scaled(&mut self, c: &Rational, other: &QSeries) {
        self.coeffs.truncate(other.coeffs.len());
        if c.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    /// Cauchy product, truncated to the smaller operand.
    ///
    /// Both operands are brought to a common denominator first so the
    /// convolution itself runs over integers.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n = self.truncation().min(other.truncation());
        let (da, a) = integer_form(&self.coeffs[..=n]);
        let (db, b) = integer_form(&other.coeffs[..=n]);
        let den = da * db;
        let a_support: Vec<usize> = (0..=n).filter(|&i| !a[i].is_zero()).collect();
        let entry = |k: usize| -> Rational {
            let mut acc = BigInt::zero();
            for &i in a_support.iter().take_while(|&&i| i <= k) {
                let bj = &b[k - i];
                if !bj.is_zero() {
                    acc += &a[i] * bj;
                }
            }
            Rational::new(acc, den.clone())
        };
        let coeffs = if n + 1 >= PARALLEL_THRESHOLD {
            (0..=n).into_par_iter().map(entry).collect()
        } else {
            (0..=n).map(entry).collect()
        };
        QSeries { coeffs }
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut acc = QSeries::one(self.truncation());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `D^m` with `D = q d/dq`, i.e. `q^n -> n^m q^n`.
    pub fn derivative(&self, m: u32) -> QSeries {
        if m == 0 {
            return self.clone();
        }
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(
                    |(n, c)| {
                        if c.is_zero() {
                            c.clone()
                        } else {
                            c * Rational::from_integer(BigInt::from(n).pow(m))
                        }
                    },
                )
                .collect(),
        }
    }
}

/// Common denominator and the scaled integer numerators.
fn integer_form(coeffs: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let den =
        coeffs.iter().fold(BigInt::one(), |acc, c| if c.denom().is_one() { acc } else { acc.lcm(c.denom()) });
    let ints = coeffs
        .iter()
        .map(|c| if c.denom().is_one() { c.numer() * &den } else { c.numer() * (&den / c.denom()) })
        .collect();
    (den, ints)
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}

impl fmt::Display for QSeries {
    /// Human-readable rendering, omitting zero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            match n {
                0 => write!(f, "{abs}")?,
                _ if abs.is_one() => {}
                _ => write!(f, "{abs}*")?,
            }
            match n {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.truncation() + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    truncation: usize,
    coeffs: Vec<String>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            truncation: self.truncation(),
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeriesJson::deserialize(deserializer)?;
        if raw.coeffs.len() != raw.truncation + 1 {
            return Err(D::Error::custom(format!(
                "truncation {} needs {} coefficients, found {}",
                raw.truncation,
                raw.truncation + 1,
                raw.coeffs.len()
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(QSeries { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(values: &[i64]) -> QSeries {
        QSeries::from_integers(values.iter().copied()).unwrap()
    }

    #[test]
    fn additive_identity_and_inverse() {
        let f = series(&[1, 1]);
        assert_eq!(f.add(&QSeries::zero(1)), f);
        assert!(f.add(&f.neg()).is_zero());
    }

    #[test]
    fn fraction_addition_is_exact() {
        let a = QSeries::new(vec![rat(1, 2)]).unwrap();
        let b = QSeries::new(vec![rat(1, 3)]).unwrap();
        assert_eq!(a.add(&b).coeffs()[0], rat(5, 6));
    }

    #[test]
    fn binary_ops_truncate_to_min() {
        let a = series(&[1, 2, 3, 4]);
        let b = series(&[1, 1]);
        assert_eq!(a.add(&b).truncation(), 1);
        assert_eq!(a.mul(&b).truncation(), 1);
    }

    #[test]
    fn geometric_series_inverts_one_minus_q() {
        let n = 20;
        let one_minus_q = QSeries::from_fn(n, |i| match i {
            0 => int(1),
            1 => int(-1),
            _ => Rational::zero(),
        });
        let geom = QSeries::from_fn(n, |_| int(1));
        assert_eq!(one_minus_q.mul(&geom), QSeries::one(n));
    }

    #[test]
    fn sigma_one_square_at_q2() {
        // only the pair (1, 1) reaches q^2
        let s = series(&[0, 1, 3, 4]);
        assert_eq!(s.mul(&s).coeffs()[2], int(1));
        assert_eq!(s.mul(&s).coeffs()[3], int(6));
    }

    #[test]
    fn scaling() {
        let f = series(&[6, 12]);
        assert!(f.scale(&Rational::zero()).is_zero());
        assert_eq!(f.scale(&Rational::one()), f);
        assert_eq!(f.scale(&rat(1, 6)), series(&[1, 2]));
    }

    #[test]
    fn derivation_rule() {
        let f = series(&[1, 1, 1]);
        assert_eq!(f.derivative(0), f);
        assert_eq!(f.derivative(1), series(&[0, 1, 2]));
        let q3 = series(&[0, 0, 0, 1]);
        assert_eq!(q3.derivative(2), series(&[0, 0, 0, 9]));
    }

    #[test]
    fn coefficient_past_truncation_is_an_error() {
        let z = QSeries::zero(5);
        assert_eq!(z.coefficient(5).unwrap(), &Rational::zero());
        assert_eq!(z.coefficient(6), Err(Error::IndexBeyondTruncation { index: 6, truncation: 5 }));
    }

    #[test]
    fn equality_ignores_terms_past_truncation() {
        let f = series(&[1, 2, 3]);
        let g = f.add(&QSeries::zero(3)).truncate(2);
        let mut longer = f.coeffs().to_vec();
        longer.push(int(7));
        let h = QSeries::new(longer).unwrap();
        assert!(f.agrees_with(&h));
        assert!(f.agrees_with(&g));
        assert!(!f.agrees_with(&series(&[1, 2, 4])));
    }

    #[test]
    fn json_round_trip() {
        let f = QSeries::new(vec![rat(-1, 24), int(1), int(3), int(4)]).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"truncation":3,"coeffs":["-1/24","1","3","4"]}"#);
        let back: QSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn json_rejects_length_mismatch_and_bad_fraction() {
        assert!(serde_json::from_str::<QSeries>(r#"{"truncation":2,"coeffs":["1"]}"#).is_err());
        assert!(serde_json::from_str::<QSeries>(r#"{"truncation":0,"coeffs":["1/0"]}"#).is_err());
        assert!(serde_json::from_str::<QSeries>(r#"{"truncation":0,"coeffs":["x"]}"#).is_err());
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&parse_rational("6/-4").unwrap()), "-3/2");
    }

    #[test]
    fn display() {
        let f = QSeries::new(vec![rat(-1, 24), int(1), int(-3)]).unwrap();
        assert_eq!(f.to_string(), "-1/24 + q - 3*q^2 + O(q^3)");
    }

    fn arb_series(max_len: usize) -> impl Strategy<Value = QSeries> {
        prop::collection::vec((-20i64..20, 1i64..6), 1..max_len)
            .prop_map(|v| QSeries::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_laws(a in arb_series(65), b in arb_series(65), c in arb_series(65)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        }

        #[test]
        fn leibniz(a in arb_series(65), b in arb_series(65)) {
            let lhs = a.mul(&b).derivative(1);
            let rhs = a.derivative(1).mul(&b).add(&a.mul(&b.derivative(1)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn iterated_derivative(a in arb_series(40), m in 0u32..5) {
            let mut it = a.clone();
            for _ in 0..m {
                it = it.derivative(1);
            }
            prop_assert_eq!(it, a.derivative(m));
        }

        #[test]
        fn stored_values_are_reduced(a in arb_series(30), b in arb_series(30)) {
            for c in a.mul(&b).coeffs() {
                let re = Rational::new(c.numer().clone(), c.denom().clone());
                prop_assert_eq!(&re, c);
                prop_assert!(c.denom().is_positive());
            }
        }
    }
}
