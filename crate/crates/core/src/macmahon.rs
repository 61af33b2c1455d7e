//! MacMahon-type partition functions.
//!
//! For an exponent vector `v = (v1, ..., va)`,
//! `M_v(n) = sum m1^v1 * ... * ma^va` over all ways to write
//! `n = m1 s1 + ... + ma sa` with `0 < s1 < ... < sa` and every `mi >= 1`.
//! The exponent `vi` is paired with the `i`-th smallest size. With all
//! `vi = 1` this is `M_a(n)`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{primitive_integer_vector, Rref};
use crate::number_theory::primes_up_to;
use crate::omega::{coefficient_violation, omega_check, CoefficientReason, OmegaInput, Status};
use crate::quasimodular::{recognize, required_truncation, Recognition};
use crate::series::{parse_rational, QSeries, Rational};

/// Exponent vector. Entries may be zero: `m^0 = 1` while `m >= 1` still.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct PartVector(Vec<u32>);

impl PartVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(invalid("a part vector needs at least one entry"));
        }
        Ok(PartVector(entries))
    }

    /// `(1, ..., 1)` of length `a`, so that `M_v = M_a`.
    pub fn ones(a: usize) -> Result<Self> {
        Self::new(vec![1; a])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `|v| = sum (vi + 1)`.
    pub fn norm(&self) -> u32 {
        self.0.iter().map(|v| v + 1).sum()
    }

    pub fn reversed(&self) -> PartVector {
        PartVector(self.0.iter().rev().copied().collect())
    }

    /// Smallest `n` with `M_v(n) != 0`, namely `1 + 2 + ... + a`.
    pub fn min_n(&self) -> usize {
        let a = self.0.len();
        a * (a + 1) / 2
    }
}

impl TryFrom<Vec<u32>> for PartVector {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        PartVector::new(v)
    }
}

impl From<PartVector> for Vec<u32> {
    fn from(v: PartVector) -> Self {
        v.0
    }
}

impl FromStr for PartVector {
    type Err = Error;

    /// Accepts `2,0,1` or `(2,0,1)`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = body
            .split(',')
            .map(|t| {
                t.trim().parse::<u32>().map_err(|_| invalid(format!("bad part vector entry {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PartVector::new(entries)
    }
}

impl fmt::Display for PartVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn brute(exps: &[u32], min_s: u64, remaining: u64) -> BigInt {
    let Some((&v, rest)) = exps.split_first() else {
        return if remaining == 0 { BigInt::one() } else { BigInt::zero() };
    };
    let r = rest.len() as u64;
    let mut total = BigInt::zero();
    let mut s = min_s;
    // sizes s < s+1 < ... < s+r, each once
    while s * (r + 1) + r * (r + 1) / 2 <= remaining {
        if r == 0 {
            if remaining.is_multiple_of(s) {
                total += BigInt::from(remaining / s).pow(v);
            }
        } else {
            let tail_min = r * s + r * (r + 1) / 2;
            let mut m = 1;
            while m * s + tail_min <= remaining {
                total += BigInt::from(m).pow(v) * brute(rest, s + 1, remaining - m * s);
                m += 1;
            }
        }
        s += 1;
    }
    total
}

/// `M_a(n)` by direct enumeration.
#[allow(non_snake_case)]
pub fn macmahon_M(a: usize, n: u64) -> BigInt {
    assert!(a >= 1, "M_a needs a >= 1");
    brute(&vec![1; a], 1, n)
}

/// `M_v(n)` by direct enumeration of size tuples and multiplicities.
#[allow(non_snake_case)]
pub fn macmahonesque_M(vec: &PartVector, n: u64) -> BigInt {
    brute(vec.entries(), 1, n)
}

/// Coefficients `M_v(0..=n_max)` from the product side of the generating
/// function, adding one size at a time.
pub fn macmahon_table(vec: &PartVector, n_max: usize) -> Vec<BigInt> {
    let a = vec.len();
    let exps = vec.entries();
    // layers[j][t]: sum over the first j exponents placed on sizes seen so far
    let mut layers: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n_max + 1]; a + 1];
    layers[0][0] = BigInt::one();
    let weights: Vec<Vec<BigInt>> =
        exps.iter().map(|&v| (0..=n_max).map(|m| BigInt::from(m).pow(v)).collect()).collect();
    for s in 1..=n_max {
        let lo_sum = |j: usize| s + j * (j - 1) / 2;
        for j in (1..=a).rev() {
            // sizes 1, ..., j-1 and s
            if lo_sum(j) > n_max {
                continue;
            }
            let (below, above) = layers.split_at_mut(j);
            let prev = &below[j - 1];
            let w = &weights[j - 1];
            above[0].par_iter_mut().enumerate().skip(lo_sum(j)).for_each(|(t, slot)| {
                let mut m = 1;
                while m * s <= t {
                    let p = &prev[t - m * s];
                    if !p.is_zero() {
                        *slot += p * &w[m];
                    }
                    m += 1;
                }
            });
        }
    }
    layers.pop().unwrap()
}

/// `U_a = sum M_a(n) q^n`.
#[allow(non_snake_case)]
pub fn U_series(a: usize, truncation: usize) -> QSeries {
    U_vec_series(&PartVector::ones(a).expect("U_a needs a >= 1"), truncation)
}

/// `sum M_v(n) q^n`.
#[allow(non_snake_case)]
pub fn U_vec_series(vec: &PartVector, truncation: usize) -> QSeries {
    QSeries::from_integers(macmahon_table(vec, truncation)).expect("table has truncation + 1 entries")
}

/// Polynomial in `n`, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NPoly(#[serde(with = "crate::serde_rational::vec")] Vec<Rational>);

impl NPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        NPoly(coeffs)
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn eval(&self, n: u64) -> Rational {
        let x = Rational::from_integer(n.into());
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * &x + c)
    }
}

impl fmt::Display for NPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
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
            let a = c.abs();
            let show_coeff = d == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match d {
                0 => {}
                1 if show_coeff => write!(f, "*n")?,
                1 => write!(f, "n")?,
                _ if show_coeff => write!(f, "*n^{d}")?,
                _ => write!(f, "n^{d}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MMTerm {
    pub poly: NPoly,
    pub vec: PartVector,
}

/// `sum poly_i(n) * M_{v_i}(n)` with distinct vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawExpression", into = "RawExpression")]
pub struct MMExpression {
    terms: Vec<MMTerm>,
}

#[derive(Serialize, Deserialize)]
struct RawExpression {
    terms: Vec<MMTerm>,
}

impl TryFrom<RawExpression> for MMExpression {
    type Error = Error;
    fn try_from(r: RawExpression) -> Result<Self> {
        MMExpression::new(r.terms)
    }
}

impl From<MMExpression> for RawExpression {
    fn from(e: MMExpression) -> Self {
        RawExpression { terms: e.terms }
    }
}

impl MMExpression {
    pub fn new(terms: Vec<MMTerm>) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &terms {
            if !seen.insert(&t.vec) {
                return Err(invalid(format!("vector {} appears twice", t.vec)));
            }
        }
        Ok(MMExpression { terms })
    }

    /// Constant-weight expression `sum c_v M_v(n)`.
    pub fn linear(vectors: &[PartVector], coeffs: &[Rational]) -> Result<Self> {
        if vectors.len() != coeffs.len() {
            return Err(invalid("vector and coefficient counts differ"));
        }
        Self::new(
            vectors
                .iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(v, c)| MMTerm { poly: NPoly::constant(c.clone()), vec: v.clone() })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[MMTerm] {
        &self.terms
    }

    /// Value at `n` using the enumeration oracle.
    pub fn eval(&self, n: u64) -> Rational {
        self.terms.iter().map(|t| t.poly.eval(n) * Rational::from_integer(macmahonesque_M(&t.vec, n))).sum()
    }

    /// Values at `0..=n_max` using the generating-function tables.
    pub fn eval_range(&self, n_max: usize) -> Vec<Rational> {
        let tables: Vec<Vec<BigInt>> = self.terms.par_iter().map(|t| macmahon_table(&t.vec, n_max)).collect();
        (0..=n_max)
            .into_par_iter()
            .map(|n| {
                self.terms
                    .iter()
                    .zip(&tables)
                    .map(|(t, tab)| t.poly.eval(n as u64) * Rational::from_integer(tab[n].clone()))
                    .sum()
            })
            .collect()
    }

    /// Parse `builtin:1|2|3` or a JSON expression.
    pub fn parse(text: &str) -> Result<Self> {
        if let Some(id) = text.trim().strip_prefix("builtin:") {
            let idx: usize = id.parse().map_err(|_| invalid(format!("bad builtin index {id:?}")))?;
            return builtin_expressions()
                .into_iter()
                .nth(idx.wrapping_sub(1))
                .ok_or_else(|| invalid(format!("no builtin expression {idx}")));
        }
        serde_json::from_str(text).map_err(|e| invalid(format!("bad expression JSON: {e}")))
    }
}

/// `eval_expression(e, n)` with the enumeration oracle.
pub fn eval_expression(e: &MMExpression, n: u64) -> Rational {
    e.eval(n)
}

fn term(poly: &[i64], vec: &[u32]) -> MMTerm {
    MMTerm { poly: NPoly::from_integers(poly), vec: PartVector(vec.to_vec()) }
}

/// The three known prime-detecting expressions.
///
/// The third pairs its exponents with sizes in reverse: the 8-term
/// inequality is ordinarily written with the exponent of the largest size
/// first, e.g. `M_(3,0)` there is `M_(0,3)` here.
pub fn builtin_expressions() -> Vec<MMExpression> {
    let e = |terms| MMExpression::new(terms).expect("distinct vectors");
    vec![
        e(vec![term(&[2, -3, 1], &[1]), term(&[-8], &[1, 1])]),
        e(vec![term(&[-8, 18, -13, 3], &[1]), term(&[212, -120, 12], &[1, 1]), term(&[-960], &[1, 1, 1])]),
        e(vec![
            term(&[63], &[2, 2]),
            term(&[-12], &[0, 3]),
            term(&[-39], &[1, 3]),
            term(&[-12], &[3, 1]),
            term(&[80], &[1, 1, 1]),
            term(&[-12], &[1, 0, 2]),
            term(&[12], &[0, 1, 2]),
            term(&[12], &[0, 0, 3]),
        ]),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionFailure {
    pub n: u64,
    #[serde(with = "crate::serde_rational")]
    pub value: Rational,
    pub reason: CoefficientReason,
}

/// Outcome of scanning `n` in `[2, n_max]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub n_max: u64,
    pub zero_locus: Vec<u64>,
    pub detects_primes: bool,
    pub first_failure: Option<DetectionFailure>,
}

/// Check `>= 0` and zero exactly at primes over `values[2..]`.
pub fn detection_report(values: &[Rational]) -> DetectionReport {
    let n_max = values.len().saturating_sub(1) as u64;
    let zero_locus = (2..=n_max).filter(|&n| values[n as usize].is_zero()).collect();
    let first_failure = (2..=n_max).find_map(|n| {
        let v = &values[n as usize];
        coefficient_violation(n, v).map(|reason| DetectionFailure { n, value: v.clone(), reason })
    });
    DetectionReport { n_max, zero_locus, detects_primes: first_failure.is_none(), first_failure }
}

pub fn detect_primes(e: &MMExpression, n_max: usize) -> DetectionReport {
    detection_report(&e.eval_range(n_max))
}

/// All vectors with `|v| <= d`, ordered by norm, then length, then entries.
pub fn enumerate_vectors(d: u32) -> Vec<PartVector> {
    fn extend(prefix: &mut Vec<u32>, budget: u32, out: &mut Vec<PartVector>) {
        if !prefix.is_empty() {
            out.push(PartVector(prefix.clone()));
        }
        for v in 0..budget {
            prefix.push(v);
            extend(prefix, budget - v - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), d, &mut out);
    out.sort_by(|a, b| (a.norm(), a.len(), &a.0).cmp(&(b.norm(), b.len(), &b.0)));
    out
}

/// `M_v(n)` for every vector and `n <= n_max`, one table per vector.
fn value_tables(vectors: &[PartVector], n_max: usize) -> Vec<Vec<BigInt>> {
    vectors.par_iter().map(|v| macmahon_table(v, n_max)).collect()
}

fn prime_rows(tables: &[Vec<BigInt>], primes: &[usize]) -> Vec<Vec<Rational>> {
    primes.iter().map(|&p| tables.iter().map(|t| Rational::from_integer(t[p].clone())).collect()).collect()
}

/// Does `sum c_v M_v(p) = 0` hold for every prime `p <= prime_bound`?
pub fn in_prime_nullspace(vectors: &[PartVector], coeffs: &[Rational], prime_bound: usize) -> bool {
    let tables = value_tables(vectors, prime_bound);
    primes_up_to(prime_bound).iter().all(|&p| {
        tables
            .iter()
            .zip(coeffs)
            .map(|(t, c)| c * Rational::from_integer(t[p].clone()))
            .sum::<Rational>()
            .is_zero()
    })
}

/// Basis of `{c : sum c_v M_v(p) = 0 for primes p <= prime_bound}`.
pub fn prime_nullspace(vectors: &[PartVector], prime_bound: usize) -> Vec<Vec<Rational>> {
    let tables = value_tables(vectors, prime_bound);
    let rows = prime_rows(&tables, &primes_up_to(prime_bound));
    Rref::new(rows, vectors.len()).nullspace()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub bound: u64,
    pub passed: bool,
    pub first_failure: Option<DetectionFailure>,
}

/// Scan `n` in `[1, bound]`: `>= 0`, zero at primes, positive at composites.
pub fn verify_candidate(vectors: &[PartVector], coeffs: &[BigInt], bound: usize) -> Verification {
    let tables = value_tables(vectors, bound);
    verify_with_tables(&tables, coeffs, bound)
}

fn verify_with_tables(tables: &[Vec<BigInt>], coeffs: &[BigInt], bound: usize) -> Verification {
    let first_failure = (1..=bound).find_map(|n| {
        let v: BigInt = tables.iter().zip(coeffs).map(|(t, c)| c * &t[n]).sum();
        let v = Rational::from_integer(v);
        coefficient_violation(n as u64, &v).map(|reason| DetectionFailure { n: n as u64, value: v, reason })
    });
    Verification { bound: bound as u64, passed: first_failure.is_none(), first_failure }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossCertification {
    /// Status of the prime-detecting checker on the recognized form.
    Checked { status: Status },
    /// The generating series is not in `M~_{<=d}`.
    NotQuasimodular { index: usize },
    /// Not enough coefficients to recognize within `M~_{<=d}`.
    TooShort { required: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    #[serde(with = "crate::serde_bigint::vec")]
    pub coeffs: Vec<BigInt>,
    pub verification: Verification,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cross_certification: Option<CrossCertification>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    /// `|v|` is `sum (vi + 1)`.
    pub norm: String,
    pub weight_bound: u32,
    pub prime_bound: u64,
    pub verification_bound: u64,
    pub vectors: Vec<PartVector>,
    /// Nullspace dimension over primes `<= prime_bound`.
    pub nullspace_dim: usize,
    /// Dimension after also imposing vanishing at primes `<= verification_bound`.
    pub refined_dim: usize,
    pub candidates_tested: usize,
    pub hits: Vec<SearchHit>,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub weight_bound: u32,
    pub verification_bound: usize,
    pub prime_bound: usize,
    pub cross_certify: bool,
}

/// Search for prime-detecting combinations `sum c_v M_v(n)` with `|v| <= d`.
pub fn search_prime_detecting(d: u32, verification_bound: usize, prime_bound: usize) -> Result<SearchReport> {
    search(SearchOptions { weight_bound: d, verification_bound, prime_bound, cross_certify: false })
}

pub fn search(opts: SearchOptions) -> Result<SearchReport> {
    let SearchOptions { weight_bound: d, verification_bound: n, prime_bound: p, cross_certify } = opts;
    if p > n {
        return Err(invalid(format!("prime bound {p} exceeds verification bound {n}")));
    }
    let vectors = enumerate_vectors(d);
    let mut report = SearchReport {
        norm: "sum(v_i + 1)".into(),
        weight_bound: d,
        prime_bound: p as u64,
        verification_bound: n as u64,
        vectors: vectors.clone(),
        nullspace_dim: 0,
        refined_dim: 0,
        candidates_tested: 0,
        hits: Vec::new(),
    };
    if vectors.is_empty() {
        return Ok(report);
    }
    let tables = value_tables(&vectors, n);
    let ncols = vectors.len();
    let primes = primes_up_to(n);
    let cut = primes.partition_point(|&q| q <= p);
    report.nullspace_dim = Rref::new(prime_rows(&tables, &primes[..cut]), ncols).nullspace().len();
    // vanishing at the remaining primes is part of verification anyway
    let basis = Rref::new(prime_rows(&tables, &primes), ncols).nullspace();
    report.refined_dim = basis.len();

    let basis: Vec<Vec<BigInt>> = basis.iter().map(|b| primitive_integer_vector(b)).collect();
    let mut candidates: Vec<Vec<BigInt>> = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |v: Vec<BigInt>| {
        if v.iter().all(|c| c.is_zero()) {
            return;
        }
        let r: Vec<Rational> = v.into_iter().map(Rational::from_integer).collect();
        let prim = primitive_unsigned(&r);
        if seen.insert(prim.clone()) {
            candidates.push(prim);
        }
    };
    for (i, b) in basis.iter().enumerate() {
        push(b.clone());
        push(b.iter().map(|c| -c).collect());
        for c in &basis[i + 1..] {
            for (sb, sc) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                push(b.iter().zip(c).map(|(x, y)| x * sb + y * sc).collect());
            }
        }
    }
    report.candidates_tested = candidates.len();
    let verified: Vec<(Vec<BigInt>, Verification)> = candidates
        .into_par_iter()
        .map(|c| {
            let v = verify_with_tables(&tables, &c, n);
            (c, v)
        })
        .filter(|(_, v)| v.passed)
        .collect();
    for (coeffs, verification) in verified {
        let cross_certification = cross_certify.then(|| certify(&tables, &coeffs, d, n));
        report.hits.push(SearchHit { coeffs, verification, cross_certification });
    }
    Ok(report)
}

/// Primitive integer vector keeping the sign of the input.
fn primitive_unsigned(v: &[Rational]) -> Vec<BigInt> {
    let p = primitive_integer_vector(v);
    let lead_in = v.iter().find(|c| !c.is_zero()).map(|c| c.is_negative()).unwrap_or(false);
    if lead_in {
        p.into_iter().map(|c| -c).collect()
    } else {
        p
    }
}

fn certify(tables: &[Vec<BigInt>], coeffs: &[BigInt], d: u32, n: usize) -> CrossCertification {
    let k = d - d % 2;
    let required = required_truncation(k);
    let t = n.max(required);
    if tables.first().map_or(0, |tab| tab.len() - 1) < t {
        return CrossCertification::TooShort { required };
    }
    let series = QSeries::from_fn(t, |i| {
        Rational::from_integer(tables.iter().zip(coeffs).map(|(tab, c)| c * &tab[i]).sum())
    });
    match recognize(&series, k) {
        Ok(Recognition::Form(_)) => match omega_check(&OmegaInput::Series { series, weight_bound: k }, n) {
            Ok(v) => CrossCertification::Checked { status: v.status },
            Err(_) => CrossCertification::TooShort { required },
        },
        Ok(Recognition::Residual(r)) => CrossCertification::NotQuasimodular { index: r.index },
        Err(_) => CrossCertification::TooShort { required },
    }
}

/// Coefficients of a constant-weight expression over `vectors`.
pub fn expression_coefficients(e: &MMExpression, vectors: &[PartVector]) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::zero(); vectors.len()];
    for t in e.terms() {
        if t.poly.coeffs().len() > 1 {
            return Err(invalid("expression has n-dependent weights"));
        }
        let i = vectors
            .iter()
            .position(|v| v == &t.vec)
            .ok_or_else(|| invalid(format!("vector {} not enumerated", t.vec)))?;
        out[i] = t.poly.coeffs().first().cloned().unwrap_or_else(Rational::zero);
    }
    Ok(out)
}

/// Parse a comma-separated list of rationals.
pub fn parse_coefficients(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(|t| parse_rational(t.trim())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_theory::{is_prime, sigma};
    use crate::series::int;
    use proptest::prelude::*;

    fn pv(s: &str) -> PartVector {
        s.parse().unwrap()
    }

    #[test]
    fn macmahon_examples() {
        assert_eq!(macmahon_M(1, 4), BigInt::from(7));
        assert_eq!(macmahon_M(2, 5), BigInt::from(9));
        assert_eq!(macmahon_M(3, 4), BigInt::zero());
        assert_eq!(macmahonesque_M(&pv("2,2"), 6), BigInt::from(47));
        assert_eq!(macmahonesque_M(&pv("1,1,1"), 6), BigInt::from(1));
        for n in 0..=50 {
            assert_eq!(macmahonesque_M(&pv("1,1"), n), macmahon_M(2, n));
        }
    }

    #[test]
    fn series_examples() {
        let u1 = U_series(1, 100);
        for n in 1..=100 {
            assert_eq!(u1.coeffs()[n], Rational::from_integer(sigma(1, n as u64)));
        }
        let u2 = U_series(2, 10);
        assert_eq!(u2.coeffs()[5], int(9));
        assert_eq!(u2.coeffs()[2], int(0));
        assert_eq!(U_vec_series(&pv("2,2"), 8).coeffs()[6], int(47));
        assert_eq!(U_vec_series(&pv("1,1,1"), 30), U_series(3, 30));
    }

    #[test]
    fn table_matches_enumeration() {
        for a in 1..=3 {
            let tab = macmahon_table(&PartVector::ones(a).unwrap(), 200);
            for (n, v) in tab.iter().enumerate() {
                assert_eq!(*v, macmahon_M(a, n as u64), "a={a} n={n}");
            }
        }
    }

    #[test]
    fn part_vector_parsing() {
        assert_eq!(pv("(2,0,1)").entries(), &[2, 0, 1]);
        assert_eq!(pv("3").norm(), 4);
        assert!("".parse::<PartVector>().is_err());
        assert!("1,x".parse::<PartVector>().is_err());
        assert_eq!(pv("2,0,1").to_string(), "(2,0,1)");
        assert_eq!(serde_json::to_string(&pv("2,0,1")).unwrap(), "[2,0,1]");
        assert!(serde_json::from_str::<PartVector>("[]").is_err());
    }

    #[test]
    fn order_matters() {
        let a = pv("2,1");
        let b = pv("1,2");
        assert!((0..=20).any(|n| macmahonesque_M(&a, n) != macmahonesque_M(&b, n)));
    }

    #[test]
    fn expression_examples() {
        let b = builtin_expressions();
        assert_eq!(b.len(), 3);
        assert_eq!(eval_expression(&b[0], 4), int(18));
        assert_eq!(eval_expression(&b[0], 5), int(0));
        assert_eq!(eval_expression(&b[1], 4), int(108));
        for p in primes_up_to(97) {
            assert!(b[0].eval(p as u64).is_zero());
        }
        let r = b[2].eval_range(100);
        for n in 4..=100u64 {
            if !is_prime(n) {
                assert!(r[n as usize].is_positive(), "n={n}");
            }
        }
    }

    #[test]
    fn eval_paths_agree() {
        for e in builtin_expressions() {
            let fast = e.eval_range(60);
            for (n, v) in fast.iter().enumerate() {
                assert_eq!(*v, e.eval(n as u64));
            }
        }
    }

    #[test]
    fn detection_on_small_range() {
        for e in builtin_expressions() {
            let r = detect_primes(&e, 120);
            assert!(r.detects_primes, "{:?}", r.first_failure);
            assert_eq!(r.zero_locus, primes_up_to(120).iter().map(|&p| p as u64).collect::<Vec<_>>());
        }
    }

    #[test]
    fn literal_ordering_of_eight_term_fails() {
        let e = &builtin_expressions()[2];
        let flipped = MMExpression::new(
            e.terms().iter().map(|t| MMTerm { poly: t.poly.clone(), vec: t.vec.reversed() }).collect(),
        )
        .unwrap();
        assert!(!detect_primes(&flipped, 30).detects_primes);
    }

    #[test]
    fn expression_json_round_trip() {
        let e = &builtin_expressions()[1];
        let text = serde_json::to_string(e).unwrap();
        assert_eq!(&MMExpression::parse(&text).unwrap(), e);
        assert_eq!(&MMExpression::parse("builtin:2").unwrap(), e);
        assert!(MMExpression::parse("builtin:4").is_err());
        assert!(
            MMExpression::parse(r#"{"terms":[{"poly":["1"],"vec":[1]},{"poly":["2"],"vec":[1]}]}"#).is_err()
        );
    }

    #[test]
    fn npoly_display() {
        assert_eq!(NPoly::from_integers(&[2, -3, 1]).to_string(), "n^2 - 3*n + 2");
        assert_eq!(NPoly::from_integers(&[-8]).to_string(), "-8");
    }

    #[test]
    fn enumeration_counts() {
        // compositions: 2^(w-1) vectors of norm w
        for d in 1..=7u32 {
            assert_eq!(enumerate_vectors(d).len(), (1usize << d) - 1);
        }
        let v = enumerate_vectors(6);
        for t in builtin_expressions()[2].terms() {
            assert!(v.contains(&t.vec));
        }
    }

    #[test]
    fn eight_term_is_in_prime_nullspace() {
        let vectors = enumerate_vectors(6);
        let c = expression_coefficients(&builtin_expressions()[2], &vectors).unwrap();
        assert!(in_prime_nullspace(&vectors, &c, 100));
        let ints = primitive_unsigned(&c);
        assert!(verify_candidate(&vectors, &ints, 150).passed);
    }

    #[test]
    fn trivial_search_is_empty() {
        let r = search_prime_detecting(1, 20, 10).unwrap();
        assert!(r.hits.is_empty());
        assert!(search_prime_detecting(0, 20, 10).unwrap().vectors.is_empty());
        assert!(search_prime_detecting(3, 10, 20).is_err());
    }

    #[test]
    fn nullspace_grows_with_d() {
        let a = search_prime_detecting(4, 40, 30).unwrap();
        let b = search_prime_detecting(6, 40, 30).unwrap();
        assert!(b.nullspace_dim >= a.nullspace_dim);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn vanishes_below_minimal_sum(a in 1usize..=4, n in 0u64..10) {
            if n < (a * (a + 1) / 2) as u64 {
                prop_assert!(macmahon_M(a, n).is_zero());
            }
        }

        #[test]
        fn random_vectors_agree(entries in proptest::collection::vec(0u32..4, 1..4)) {
            let v = PartVector::new(entries).unwrap();
            let tab = macmahon_table(&v, 60);
            for n in 0..=60u64 {
                prop_assert_eq!(&tab[n as usize], &macmahonesque_M(&v, n));
            }
        }
    }
}
