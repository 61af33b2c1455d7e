//! The distinguished forms `H_k`, the quasimodular Eisenstein space, and a
//! checker for prime-detecting forms that emits re-checkable certificates.
//!
//! A form `f = sum b_n q^n` is prime-detecting when `b_n >= 0` for `n >= 1`
//! and, for `n >= 2`, `b_n = 0` exactly at primes. Any such form has no
//! cuspidal part and lies in the span of the `D^n H_k`. The checker runs
//! these conditions in turn and stops at the first failing one:
//!
//! 1. a nonzero cuspidal coordinate gives [`Status::RejectCuspidal`];
//! 2. a bad coefficient in `1..=N` gives [`Status::RejectCoefficient`];
//! 3. a form outside the span of the `D^n H_k` gives [`Status::RejectNotInSpan`];
//! 4. otherwise [`Status::AcceptUpTo`]`(N)`, which only covers `n <= N`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{fit_columns, Fit};
use crate::number_theory::{is_prime, sigma};
use crate::quasimodular::{
    decompose, eisenstein_constant, eisenstein_derivative_series, eisenstein_poly, eisenstein_series,
    qm_expand, rank_certified_truncation, recognize, Decomposition, QMPoly, Recognition, ResidualReport,
};
use crate::series::{rat, QSeries, Rational};

/// Identifies `D^deriv H_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HFormId {
    pub k: u32,
    pub deriv: u32,
}

impl HFormId {
    pub fn new(k: u32, deriv: u32) -> Result<Self> {
        if k < 6 || !k.is_multiple_of(2) {
            return Err(invalid(format!("H_k needs even k >= 6, got {k}")));
        }
        Ok(HFormId { k, deriv })
    }

    /// Weight of the top graded component.
    pub fn top_weight(&self) -> u32 {
        self.k + 2 * self.deriv
    }
}

impl fmt::Display for HFormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.deriv {
            0 => write!(f, "H_{}", self.k),
            1 => write!(f, "D H_{}", self.k),
            d => write!(f, "D^{d} H_{}", self.k),
        }
    }
}

fn check_k(k: u32) {
    assert!(k >= 6 && k.is_multiple_of(2), "H_k needs even k >= 6, got {k}");
}

/// Coefficient of `q^n` in `H_k`, from the closed divisor-sum formula.
pub fn h_coeff(k: u32, n: u64) -> Rational {
    check_k(k);
    if n == 0 {
        return if k == 6 {
            (eisenstein_constant(2) - eisenstein_constant(4)) * rat(1, 6)
        } else {
            (eisenstein_constant(k - 4) - eisenstein_constant(k - 2)) * rat(1, 24)
        };
    }
    let nn = BigInt::from(n);
    let n2 = &nn * &nn;
    if k == 6 {
        let v = (&n2 - &nn + 1) * sigma(1, n) - sigma(3, n);
        Rational::new(v, BigInt::from(6))
    } else {
        let v = -(&n2 * sigma(k - 7, n)) + (&n2 + 1) * sigma(k - 5, n) - sigma(k - 3, n);
        Rational::new(v, BigInt::from(24))
    }
}

/// `H_k` as a polynomial in `G2, G4, G6`, built with the symbolic `D`.
pub fn h_poly(k: u32) -> QMPoly {
    check_k(k);
    if k == 6 {
        let g2 = QMPoly::g2();
        g2.derivative_n(2).sub(&g2.derivative()).add(&g2).sub(&QMPoly::g4()).scale(&rat(1, 6))
    } else {
        let a = eisenstein_poly(k - 6);
        let b = eisenstein_poly(k - 4);
        let c = eisenstein_poly(k - 2);
        a.derivative_n(2).neg().add(&b.derivative_n(2)).add(&b).sub(&c).scale(&rat(1, 24))
    }
}

/// Expansion of `D^deriv H_k` assembled from Eisenstein series with series
/// arithmetic only.
pub fn h_series(id: HFormId, truncation: usize) -> QSeries {
    check_k(id.k);
    let t = truncation;
    let base = if id.k == 6 {
        let g2 = eisenstein_series(2, t);
        g2.derivative(2).sub(&g2.derivative(1)).add(&g2).sub(&eisenstein_series(4, t)).scale(&rat(1, 6))
    } else {
        let a = eisenstein_series(id.k - 6, t);
        let b = eisenstein_series(id.k - 4, t);
        let c = eisenstein_series(id.k - 2, t);
        a.derivative(2).neg().add(&b.derivative(2)).add(&b).sub(&c).scale(&rat(1, 24))
    };
    base.derivative(id.deriv)
}

/// `D^deriv H_k` both symbolically and as a q-expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HForm {
    pub id: HFormId,
    pub poly: QMPoly,
    pub series: QSeries,
}

pub fn h_form(id: HFormId, truncation: usize) -> HForm {
    HForm { id, poly: h_poly(id.k).derivative_n(id.deriv), series: h_series(id, truncation) }
}

/// `D^order G_weight` with its polynomial and expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EBasisElement {
    pub weight: u32,
    pub order: u32,
    pub poly: QMPoly,
    pub series: QSeries,
}

fn e_space_labels(max_weight: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for w in (2..=max_weight).step_by(2) {
        for r in 0..=(max_weight - w) / 2 {
            out.push((w, r));
        }
    }
    out
}

/// `{D^r G_w : w >= 2 even, w + 2r <= K}` in `(w, r)` order.
pub fn e_space_basis(max_weight: u32, truncation: usize) -> Vec<EBasisElement> {
    e_space_labels(max_weight)
        .into_iter()
        .map(|(weight, order)| EBasisElement {
            weight,
            order,
            poly: eisenstein_poly(weight).derivative_n(order),
            series: eisenstein_derivative_series(weight, order, truncation),
        })
        .collect()
}

fn memo_truncation(
    memo: &'static OnceLock<Mutex<HashMap<u32, usize>>>,
    key: u32,
    compute: impl FnOnce() -> usize,
) -> usize {
    let m = memo.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&t) = m.lock().unwrap().get(&key) {
        return t;
    }
    let t = compute();
    m.lock().unwrap().insert(key, t);
    t
}

fn e_columns(max_weight: u32, truncation: usize) -> Vec<QSeries> {
    let mut cols: Vec<QSeries> = e_space_labels(max_weight)
        .into_iter()
        .map(|(w, r)| eisenstein_derivative_series(w, r, truncation))
        .collect();
    cols.push(QSeries::one(truncation));
    cols
}

/// Rank-certified truncation for solving in the E-space plus constants.
pub fn e_required_truncation(max_weight: u32) -> usize {
    static MEMO: OnceLock<Mutex<HashMap<u32, usize>>> = OnceLock::new();
    memo_truncation(&MEMO, max_weight, || {
        let count = e_space_labels(max_weight).len() + 1;
        rank_certified_truncation(count, count + 10, |t| e_columns(max_weight, t))
    })
}

/// Coordinates on [`e_space_basis`] plus a separately reported constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ECombination {
    pub terms: Vec<ECoordinate>,
    #[serde(with = "crate::serde_rational")]
    pub constant: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ECoordinate {
    pub weight: u32,
    pub order: u32,
    #[serde(with = "crate::serde_rational")]
    pub coeff: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanResult<T> {
    InSpan(T),
    Residual(ResidualReport),
}

impl<T> SpanResult<T> {
    pub fn in_span(&self) -> Option<&T> {
        match self {
            SpanResult::InSpan(t) => Some(t),
            SpanResult::Residual(_) => None,
        }
    }
}

fn solve_span(columns: &[QSeries], s: &QSeries, required: usize) -> Result<SpanResult<Vec<Rational>>> {
    if s.truncation() < required {
        return Err(Error::InsufficientTruncation { available: s.truncation(), required });
    }
    let refs: Vec<&[Rational]> = columns.iter().map(|c| c.coeffs()).collect();
    match fit_columns(&refs, s.coeffs()) {
        Fit::Exact(x) => Ok(SpanResult::InSpan(x)),
        Fit::Mismatch { index, value, .. } => {
            Ok(SpanResult::Residual(ResidualReport { index, value, truncation: s.truncation() }))
        }
        Fit::RankDeficient { .. } => {
            Err(Error::InsufficientTruncation { available: s.truncation(), required })
        }
    }
}

/// Is `s` (up to an additive constant) in the span of `D^r G_w`, `w + 2r <= K`?
pub fn e_membership(s: &QSeries, max_weight: u32) -> Result<SpanResult<ECombination>> {
    let required = e_required_truncation(max_weight);
    let labels = e_space_labels(max_weight);
    let columns = e_columns(max_weight, s.truncation());
    Ok(match solve_span(&columns, s, required)? {
        SpanResult::InSpan(mut x) => {
            let constant = x.pop().unwrap();
            let terms = labels
                .into_iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .map(|((weight, order), coeff)| ECoordinate { weight, order, coeff })
                .collect();
            SpanResult::InSpan(ECombination { terms, constant })
        }
        SpanResult::Residual(r) => SpanResult::Residual(r),
    })
}

/// The finite family `{D^n H_k : 2n + k <= K + 4}`, ordered by `(k, n)`.
pub fn dh_family(max_weight: u32) -> Vec<HFormId> {
    let cutoff = max_weight + 4;
    let mut out = Vec::new();
    let mut k = 6;
    while k <= cutoff {
        for deriv in 0..=(cutoff - k) / 2 {
            out.push(HFormId { k, deriv });
        }
        k += 2;
    }
    out
}

fn dh_columns(family: &[HFormId], truncation: usize) -> Vec<QSeries> {
    let mut bases: HashMap<u32, QSeries> = HashMap::new();
    let mut cols: Vec<QSeries> = family
        .iter()
        .map(|id| {
            bases
                .entry(id.k)
                .or_insert_with(|| h_series(HFormId { k: id.k, deriv: 0 }, truncation))
                .derivative(id.deriv)
        })
        .collect();
    cols.push(QSeries::one(truncation));
    cols
}

/// Rank-certified truncation for the `D^n H_k` family at weight bound `K`.
pub fn dh_required_truncation(max_weight: u32) -> usize {
    static MEMO: OnceLock<Mutex<HashMap<u32, usize>>> = OnceLock::new();
    memo_truncation(&MEMO, max_weight, || {
        let family = dh_family(max_weight);
        let count = family.len() + 1;
        rank_certified_truncation(count, count + 10, |t| dh_columns(&family, t))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DhTerm {
    pub k: u32,
    pub deriv: u32,
    #[serde(with = "crate::serde_rational")]
    pub coeff: Rational,
}

/// `constant + sum coeff * D^deriv H_k`, with the family cutoff `2n + k <= cutoff`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DhCombination {
    pub terms: Vec<DhTerm>,
    #[serde(with = "crate::serde_rational")]
    pub constant: Rational,
    pub cutoff: u32,
}

impl DhCombination {
    pub fn coefficient(&self, k: u32, deriv: u32) -> Rational {
        self.terms
            .iter()
            .find(|t| t.k == k && t.deriv == deriv)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn poly(&self) -> QMPoly {
        let mut acc = QMPoly::constant(self.constant.clone());
        for t in &self.terms {
            acc = acc.add(&h_poly(t.k).derivative_n(t.deriv).scale(&t.coeff));
        }
        acc
    }

    pub fn series(&self, truncation: usize) -> QSeries {
        let mut acc = QSeries::constant(self.constant.clone(), truncation);
        for t in &self.terms {
            acc.add_scaled(&t.coeff, &h_series(HFormId { k: t.k, deriv: t.deriv }, truncation));
        }
        acc
    }

    /// Coefficient of `q^n` from the closed formula for `h_coeff`.
    pub fn coefficient_at(&self, n: u64) -> Rational {
        let mut acc = if n == 0 { self.constant.clone() } else { Rational::zero() };
        for t in &self.terms {
            let scale = Rational::from_integer(BigInt::from(n).pow(t.deriv));
            acc += &t.coeff * scale * h_coeff(t.k, n);
        }
        acc
    }
}

/// Solve `s = constant + sum c_{n,k} D^n H_k` over the family cut off at `K + 4`.
pub fn dh_span_solve(s: &QSeries, max_weight: u32) -> Result<SpanResult<DhCombination>> {
    let required = dh_required_truncation(max_weight);
    let family = dh_family(max_weight);
    let columns = dh_columns(&family, s.truncation());
    Ok(match solve_span(&columns, s, required)? {
        SpanResult::InSpan(mut x) => {
            let constant = x.pop().unwrap();
            let terms = family
                .into_iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .map(|(id, coeff)| DhTerm { k: id.k, deriv: id.deriv, coeff })
                .collect();
            SpanResult::InSpan(DhCombination { terms, constant, cutoff: max_weight + 4 })
        }
        SpanResult::Residual(r) => SpanResult::Residual(r),
    })
}

/// Why a coefficient disqualifies a form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientReason {
    Negative,
    NonzeroAtPrime,
    ZeroAtComposite,
}

/// The first violation of the prime-detecting conditions at `n`, if any.
pub fn coefficient_violation(n: u64, value: &Rational) -> Option<CoefficientReason> {
    if n == 0 {
        return None;
    }
    if value.is_negative() {
        return Some(CoefficientReason::Negative);
    }
    if n == 1 {
        return None;
    }
    match (is_prime(n), value.is_zero()) {
        (true, false) => Some(CoefficientReason::NonzeroAtPrime),
        (false, true) if n >= 4 => Some(CoefficientReason::ZeroAtComposite),
        _ => None,
    }
}

/// Smallest `n` in `1..=bound` violating the conditions.
pub fn scan_coefficients(s: &QSeries, bound: usize) -> Option<(usize, Rational, CoefficientReason)> {
    let coeffs = s.coeffs();
    (1..=bound.min(s.truncation()))
        .find_map(|n| coefficient_violation(n as u64, &coeffs[n]).map(|r| (n, coeffs[n].clone(), r)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    AcceptUpTo,
    RejectCuspidal,
    RejectNotInSpan,
    RejectCoefficient,
}

/// Which fit produced a not-in-span residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanStage {
    /// The input series is not in `M~_{<=K}` at all.
    Recognition,
    /// The form is quasimodular but outside the `D^n H_k` span.
    DhSpan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Accept {
        combination: DhCombination,
        verified_up_to: usize,
    },
    Cuspidal {
        grade: u32,
        order: u32,
        weight: u32,
        basis_index: usize,
        #[serde(with = "crate::serde_rational")]
        coordinate: Rational,
    },
    NotInSpan {
        stage: SpanStage,
        residual: ResidualReport,
    },
    Coefficient {
        index: usize,
        #[serde(with = "crate::serde_rational")]
        value: Rational,
        reason: CoefficientReason,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaVerdict {
    pub status: Status,
    /// Coefficients `1..=bound` were scanned.
    pub bound: usize,
    pub weight_bound: u32,
    /// The `D^n H_k` family used satisfies `2n + k <= cutoff`.
    pub cutoff: u32,
    pub certificate: Certificate,
    pub note: String,
}

/// Input to [`omega_check`].
#[derive(Clone, Debug)]
pub enum OmegaInput {
    Poly(QMPoly),
    /// A truncated expansion together with its mixed-weight bound.
    Series {
        series: QSeries,
        weight_bound: u32,
    },
}

impl OmegaInput {
    pub fn weight_bound(&self) -> u32 {
        match self {
            OmegaInput::Poly(p) => p.max_weight().unwrap_or(0),
            OmegaInput::Series { weight_bound, .. } => *weight_bound - weight_bound % 2,
        }
    }

    /// Expansion straight from the raw input, without any decomposition.
    fn raw_expansion(&self, truncation: usize) -> Result<QSeries> {
        match self {
            OmegaInput::Poly(p) => Ok(qm_expand(p, truncation)),
            OmegaInput::Series { series, .. } => {
                if series.truncation() < truncation {
                    return Err(Error::InsufficientTruncation {
                        available: series.truncation(),
                        required: truncation,
                    });
                }
                Ok(series.truncate(truncation))
            }
        }
    }
}

const ACCEPT_NOTE: &str = "semi-decision: coefficients verified for 1 <= n <= bound only";

fn cuspidal_certificate(d: &Decomposition) -> Option<Certificate> {
    d.first_cusp_coordinate().map(|(t, i, c)| Certificate::Cuspidal {
        grade: t.weight + 2 * t.order,
        order: t.order,
        weight: t.weight,
        basis_index: i,
        coordinate: c.clone(),
    })
}

/// Run the prime-detecting checker up to coefficient `bound`.
pub fn omega_check(input: &OmegaInput, bound: usize) -> Result<OmegaVerdict> {
    let weight_bound = input.weight_bound();
    let cutoff = weight_bound + 4;
    let verdict = |status, certificate, note: &str| OmegaVerdict {
        status,
        bound,
        weight_bound,
        cutoff,
        certificate,
        note: note.to_string(),
    };

    let poly = match input {
        OmegaInput::Poly(p) => p.clone(),
        OmegaInput::Series { series, .. } => {
            if series.truncation() < bound {
                return Err(Error::InsufficientTruncation {
                    available: series.truncation(),
                    required: bound,
                });
            }
            match recognize(series, weight_bound)? {
                Recognition::Form(p) => p,
                Recognition::Residual(residual) => {
                    return Ok(verdict(
                        Status::RejectNotInSpan,
                        Certificate::NotInSpan { stage: SpanStage::Recognition, residual },
                        "series is not quasimodular of mixed weight <= weight_bound",
                    ))
                }
            }
        }
    };

    let decomposition = decompose(&poly);
    if let Some(cert) = cuspidal_certificate(&decomposition) {
        return Ok(verdict(
            Status::RejectCuspidal,
            cert,
            "nonzero cuspidal component; prime-detecting forms have none",
        ));
    }

    // No cusp part, so the Eisenstein part is the whole form.
    let scan_series = match input {
        OmegaInput::Series { series, .. } => series.truncate(bound),
        OmegaInput::Poly(_) => decomposition.eisenstein_expansion(bound),
    };
    if let Some((index, value, reason)) = scan_coefficients(&scan_series, bound) {
        return Ok(verdict(
            Status::RejectCoefficient,
            Certificate::Coefficient { index, value, reason },
            "coefficient violates the prime-detecting conditions",
        ));
    }

    let mut truncation = dh_required_truncation(weight_bound);
    loop {
        let target = decomposition.eisenstein_expansion(truncation);
        match dh_span_solve(&target, weight_bound)? {
            SpanResult::Residual(residual) => {
                return Ok(verdict(
                    Status::RejectNotInSpan,
                    Certificate::NotInSpan { stage: SpanStage::DhSpan, residual },
                    "not in the span of D^n H_k within the recorded cutoff",
                ))
            }
            SpanResult::InSpan(combination) => {
                if combination.poly() == poly {
                    return Ok(verdict(
                        Status::AcceptUpTo,
                        Certificate::Accept { combination, verified_up_to: bound },
                        ACCEPT_NOTE,
                    ));
                }
                // agreement on too few rows; widen and refit
                truncation *= 2;
            }
        }
    }
}

/// Re-derive a verdict's certificate from the raw input alone.
pub fn verify_certificate(input: &OmegaInput, verdict: &OmegaVerdict) -> std::result::Result<(), String> {
    let fail = |msg: String| Err(msg);
    match &verdict.certificate {
        Certificate::Coefficient { index, value, reason } => {
            let s = input.raw_expansion(*index).map_err(|e| e.to_string())?;
            match scan_coefficients(&s, *index) {
                Some((i, v, r)) if i == *index && &v == value && r == *reason => Ok(()),
                other => fail(format!("rescan found {other:?}")),
            }
        }
        Certificate::Cuspidal { grade, order, weight, basis_index, coordinate } => {
            let poly = match input {
                OmegaInput::Poly(p) => p.clone(),
                OmegaInput::Series { series, weight_bound } => {
                    match recognize(series, *weight_bound).map_err(|e| e.to_string())? {
                        Recognition::Form(p) => p,
                        Recognition::Residual(r) => return fail(format!("not recognized: {r:?}")),
                    }
                }
            };
            let expected = Certificate::Cuspidal {
                grade: *grade,
                order: *order,
                weight: *weight,
                basis_index: *basis_index,
                coordinate: coordinate.clone(),
            };
            // the cuspidal piece must also be visible in the raw expansion
            let d = decompose(&poly);
            let t = d.cusp_part.iter().map(|c| c.series.truncation()).max().unwrap_or(0);
            let raw = input.raw_expansion(t.min(input_limit(input))).map_err(|e| e.to_string())?;
            if !d.expand(raw.truncation()).agrees_with(&raw) {
                return fail("decomposition does not reproduce the input".into());
            }
            match cuspidal_certificate(&d) {
                Some(c) if c == expected => Ok(()),
                other => fail(format!("recomputed cuspidal witness {other:?}")),
            }
        }
        Certificate::NotInSpan { stage, residual } => {
            let raw = input.raw_expansion(residual.truncation).map_err(|e| e.to_string())?;
            let recomputed = match stage {
                SpanStage::Recognition => match recognize(&raw, verdict.weight_bound) {
                    Ok(Recognition::Residual(r)) => r,
                    other => return fail(format!("recognition now gives {other:?}")),
                },
                SpanStage::DhSpan => match dh_span_solve(&raw, verdict.weight_bound) {
                    Ok(SpanResult::Residual(r)) => r,
                    other => return fail(format!("span solve now gives {other:?}")),
                },
            };
            if &recomputed == residual {
                Ok(())
            } else {
                fail(format!("residual differs: {recomputed:?}"))
            }
        }
        Certificate::Accept { combination, verified_up_to } => {
            match input {
                OmegaInput::Poly(p) => {
                    if &combination.poly() != p {
                        return fail("combination is not symbolically equal to the input".into());
                    }
                }
                OmegaInput::Series { series, .. } => {
                    if !combination.series(series.truncation()).agrees_with(series) {
                        return fail("combination does not reproduce the input series".into());
                    }
                }
            }
            for n in 1..=*verified_up_to as u64 {
                let v = combination.coefficient_at(n);
                if let Some(r) = coefficient_violation(n, &v) {
                    return fail(format!("coefficient {n} = {v} violates {r:?}"));
                }
            }
            Ok(())
        }
    }
}

fn input_limit(input: &OmegaInput) -> usize {
    match input {
        OmegaInput::Poly(_) => usize::MAX,
        OmegaInput::Series { series, .. } => series.truncation(),
    }
}
