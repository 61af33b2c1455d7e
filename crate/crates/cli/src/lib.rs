//! `qforms` command-line front end.
//!
//! [`run`] parses arguments, runs one subcommand and writes JSON (default)
//! or a plain-text table. Exit codes: 0 success, 1 invalid input, 2 when a
//! series is too short for the requested computation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;

use qforms::macmahon::{
    detect_primes, macmahon_table, search, DetectionReport, SearchOptions, SearchReport, U_vec_series,
};
use qforms::omega::{h_series, omega_check, Certificate, DhCombination};
use qforms::quasimodular::{decompose, eisenstein_series, recognize, Recognition, ResidualReport};
use qforms::series::format_rational;
use qforms::{
    Decomposition, Error, HFormId, MMExpression, OmegaInput, OmegaVerdict, PartVector, QMPoly, QSeries,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_TRUNCATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qforms", version, about = "Exact quasimodular forms and MacMahon partition functions")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expansion of the Eisenstein series G_w.
    Eisenstein {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        order: usize,
    },
    /// Expansion of D^deriv H_k.
    Hform {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        deriv: u32,
        #[arg(long)]
        order: usize,
    },
    /// Values M_v(n) for n = 0..=n-max.
    Macmahon {
        #[arg(long)]
        vec: PartVector,
        #[arg(long)]
        n_max: usize,
    },
    /// Generating series sum M_v(n) q^n.
    Useries {
        #[arg(long)]
        vec: PartVector,
        #[arg(long)]
        order: usize,
    },
    /// Run the prime-detecting checker on a polynomial or series file.
    CheckOmega {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        bound: usize,
        /// Mixed-weight bound; required for series input.
        #[arg(long)]
        weight: Option<u32>,
    },
    /// Identify a series file as a polynomial in G2, G4, G6.
    Recognize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        weight: u32,
    },
    /// Split a polynomial file into Eisenstein and cuspidal parts.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Scan an expression over [2, n-max] for prime detection.
    DetectPrimes {
        /// `builtin:1`, `builtin:2`, `builtin:3` or an expression JSON file.
        #[arg(long)]
        expr: String,
        #[arg(long)]
        n_max: usize,
    },
    /// Search for prime-detecting combinations of M_v with |v| <= d.
    Search {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        primes: usize,
        #[arg(long)]
        bound: usize,
        /// Recognize each hit and run the checker on it.
        #[arg(long)]
        cross_certify: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Truncation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InsufficientTruncation { .. } => Failure::Truncation(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type Outcome = Result<Output, Failure>;

/// Serialized JSON plus its text rendering.
struct Output {
    json: String,
    text: String,
}

impl Output {
    fn new<T: Serialize>(value: &T, text: String) -> Result<Self, Failure> {
        let json = serde_json::to_string(value).map_err(|e| Failure::Invalid(e.to_string()))?;
        Ok(Output { json, text })
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Invalid(msg.into()))
}

/// Parse `args` (without the program name) and execute.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("qforms")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INVALID
                }
            };
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_INVALID;
    }
    match execute(cli.command) {
        Ok(output) => {
            let written = match cli.format {
                Format::Json => writeln!(out, "{}", output.json),
                Format::Text => write!(out, "{}", output.text),
            };
            if written.is_err() {
                return EXIT_INVALID;
            }
            EXIT_OK
        }
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Truncation(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_TRUNCATION
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("QFORMS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("QFORMS_THREADS must be a positive integer, got {raw:?}"))?;
    // a pool may already exist when run() is called repeatedly in-process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Eisenstein { weight, order } => {
            if weight < 2 || weight % 2 != 0 {
                return invalid(format!("--weight must be even and >= 2, got {weight}"));
            }
            series_output(&eisenstein_series(weight, order))
        }
        Command::Hform { k, deriv, order } => {
            let id = HFormId::new(k, deriv)?;
            series_output(&h_series(id, order))
        }
        Command::Macmahon { vec, n_max } => {
            let values = macmahon_table(&vec, n_max);
            let rows: Vec<Vec<String>> =
                values.iter().enumerate().map(|(n, v)| vec![n.to_string(), v.to_string()]).collect();
            let text = table(&["n", &format!("M{vec}(n)")], &rows);
            let values: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            Output::new(&MacMahonValues { vec, values }, text)
        }
        Command::Useries { vec, order } => series_output(&U_vec_series(&vec, order)),
        Command::CheckOmega { input, bound, weight } => {
            let input = match read_form(&input)? {
                Form::Poly(p) => {
                    if let Some(w) = weight {
                        if p.max_weight().unwrap_or(0) > w {
                            return invalid(format!("polynomial has weight above --weight {w}"));
                        }
                    }
                    OmegaInput::Poly(p)
                }
                Form::Series(series) => {
                    let Some(weight_bound) = weight else {
                        return invalid("--weight is required for series input");
                    };
                    OmegaInput::Series { series, weight_bound }
                }
            };
            let verdict = omega_check(&input, bound)?;
            Output::new(&verdict, verdict_text(&verdict))
        }
        Command::Recognize { input, weight } => {
            let Form::Series(s) = read_form(&input)? else {
                return invalid("recognize expects a series file");
            };
            match recognize(&s, weight)? {
                Recognition::Form(p) => Output::new(&p, poly_text(&p)),
                Recognition::Residual(r) => {
                    let text = table(
                        &["residual", "value"],
                        &[vec![r.index.to_string(), format_rational(&r.value)]],
                    );
                    Output::new(&ResidualOutput { residual: r }, text)
                }
            }
        }
        Command::Decompose { input } => {
            let Form::Poly(p) = read_form(&input)? else {
                return invalid("decompose expects a polynomial file");
            };
            let d = decompose(&p);
            Output::new(&d, decomposition_text(&d))
        }
        Command::DetectPrimes { expr, n_max } => {
            let e = if expr.starts_with("builtin:") {
                MMExpression::parse(&expr)?
            } else {
                MMExpression::parse(&read_file(Path::new(&expr))?)?
            };
            let report = detect_primes(&e, n_max);
            Output::new(&report, detection_text(&report))
        }
        Command::Search { d, primes, bound, cross_certify } => {
            let report = search(SearchOptions {
                weight_bound: d,
                verification_bound: bound,
                prime_bound: primes,
                cross_certify,
            })?;
            Output::new(&report, search_text(&report))
        }
    }
}

#[derive(Serialize)]
struct MacMahonValues {
    vec: PartVector,
    values: Vec<String>,
}

#[derive(Serialize)]
struct ResidualOutput {
    residual: ResidualReport,
}

enum Form {
    Poly(QMPoly),
    Series(QSeries),
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// A polynomial (`terms`) or series (`coeffs`) JSON file.
fn read_form(path: &Path) -> Result<Form, Failure> {
    let text = read_file(path)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| Failure::Invalid(format!("{}: {e}", path.display()));
    if value.get("terms").is_some() {
        Ok(Form::Poly(serde_json::from_value(value).map_err(bad)?))
    } else if value.get("coeffs").is_some() {
        Ok(Form::Series(serde_json::from_value(value).map_err(bad)?))
    } else {
        invalid(format!("{}: expected a polynomial or series object", path.display()))
    }
}

fn series_output(s: &QSeries) -> Outcome {
    let rows: Vec<Vec<String>> =
        s.coeffs().iter().enumerate().map(|(n, c)| vec![n.to_string(), format_rational(c)]).collect();
    Output::new(s, table(&["n", "coeff"], &rows))
}

/// Columns padded to their widest cell, numbers right-aligned.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[&str]| {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}", w = *w)).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&mut out, header);
    for row in rows {
        let cells: Vec<&str> = row.iter().map(String::as_str).collect();
        line(&mut out, &cells);
    }
    out
}

fn poly_text(p: &QMPoly) -> String {
    let rows: Vec<Vec<String>> =
        p.terms().map(|(m, c)| vec![m.weight().to_string(), m.to_string(), format_rational(c)]).collect();
    table(&["weight", "monomial", "coeff"], &rows)
}

fn decomposition_text(d: &Decomposition) -> String {
    let mut rows: Vec<Vec<String>> = d
        .eisenstein_part
        .iter()
        .map(|t| {
            let name = if t.weight == 0 { "1".to_string() } else { format!("G{}", t.weight) };
            vec!["eisenstein".into(), t.order.to_string(), name, format_rational(&t.coeff)]
        })
        .collect();
    for t in &d.cusp_part {
        let coords: Vec<String> = t.coords.iter().map(format_rational).collect();
        rows.push(vec![
            "cusp".into(),
            t.order.to_string(),
            format!("S{}", t.weight),
            format!("[{}]", coords.join(", ")),
        ]);
    }
    table(&["part", "order", "space", "coeff"], &rows)
}

fn combination_text(c: &DhCombination) -> String {
    let mut parts: Vec<String> = c
        .terms
        .iter()
        .map(|t| format!("{}*{}", format_rational(&t.coeff), HFormId { k: t.k, deriv: t.deriv }))
        .collect();
    if !c.constant.is_zero() {
        parts.push(format_rational(&c.constant));
    }
    parts.join(" + ")
}

fn verdict_text(v: &OmegaVerdict) -> String {
    let status = serde_json::to_value(v.status).ok().and_then(|s| s.as_str().map(String::from));
    let mut rows = vec![
        vec!["status".to_string(), status.unwrap_or_default()],
        vec!["bound".into(), v.bound.to_string()],
        vec!["weight_bound".into(), v.weight_bound.to_string()],
        vec!["cutoff".into(), v.cutoff.to_string()],
    ];
    match &v.certificate {
        Certificate::Accept { combination, .. } => {
            rows.push(vec!["combination".into(), combination_text(combination)]);
        }
        Certificate::Cuspidal { grade, order, weight, basis_index, coordinate } => {
            rows.push(vec!["grade".into(), grade.to_string()]);
            rows.push(vec!["cusp".into(), format!("D^{order} S{weight}[{basis_index}]")]);
            rows.push(vec!["coordinate".into(), format_rational(coordinate)]);
        }
        Certificate::NotInSpan { stage, residual } => {
            rows.push(vec!["stage".into(), format!("{stage:?}")]);
            rows.push(vec!["index".into(), residual.index.to_string()]);
            rows.push(vec!["value".into(), format_rational(&residual.value)]);
        }
        Certificate::Coefficient { index, value, reason } => {
            rows.push(vec!["index".into(), index.to_string()]);
            rows.push(vec!["value".into(), format_rational(value)]);
            rows.push(vec!["reason".into(), format!("{reason:?}")]);
        }
    }
    rows.push(vec!["note".into(), v.note.clone()]);
    key_values(&rows)
}

fn key_values(rows: &[Vec<String>]) -> String {
    let width = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
    rows.iter().map(|r| format!("{:<width$}  {}\n", r[0], r[1])).collect()
}

fn detection_text(r: &DetectionReport) -> String {
    let zeros: Vec<String> = r.zero_locus.iter().map(u64::to_string).collect();
    let mut rows = vec![
        vec!["n_max".to_string(), r.n_max.to_string()],
        vec!["detects_primes".into(), r.detects_primes.to_string()],
        vec!["zero_locus".into(), zeros.join(" ")],
    ];
    if let Some(f) = &r.first_failure {
        rows.push(vec!["first_failure".into(), format!("n={} value={} {:?}", f.n, f.value, f.reason)]);
    }
    key_values(&rows)
}

fn search_text(r: &SearchReport) -> String {
    let mut out = key_values(&[
        vec!["vectors".into(), r.vectors.len().to_string()],
        vec!["norm".into(), r.norm.clone()],
        vec!["nullspace_dim".into(), r.nullspace_dim.to_string()],
        vec!["refined_dim".into(), r.refined_dim.to_string()],
        vec!["candidates".into(), r.candidates_tested.to_string()],
        vec!["hits".into(), r.hits.len().to_string()],
    ]);
    for (i, hit) in r.hits.iter().enumerate() {
        let terms: Vec<String> = hit
            .coeffs
            .iter()
            .zip(&r.vectors)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| format!("{c}*M{v}"))
            .collect();
        let _ = writeln!(out, "hit {i}: {}", terms.join(" + "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_alignment() {
        let t = table(&["n", "coeff"], &[vec!["0".into(), "-1/24".into()], vec!["10".into(), "1".into()]]);
        assert_eq!(t, " n  coeff\n 0  -1/24\n10      1\n");
    }

    #[test]
    fn key_value_alignment() {
        let t = key_values(&[vec!["a".into(), "1".into()], vec!["bbb".into(), "2".into()]]);
        assert_eq!(t, "a    1\nbbb  2\n");
    }
}
