//! `charsum` command-line front end.
//!
//! Exit codes: 0 success, 1 certificate failure, 2 usage error, 3 budget.

use crate::construct::{build_chi_g, ChiGArtifact, Manifest};
use crate::error::Error;
use crate::sums::{
    certify_short_sum, certify_short_sum_steps, certify_pigeonhole, certify_truncation_for, chain_lower_bound, digest,
    gauss_sum_with_budget, headline_ratio_with, random_coefficients, Certificate, Grade, ScanConfig,
    DEFAULT_M_BUDGET,
};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERTIFICATE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const CERTIFICATES_SCHEMA: &str = "charsum-certificates/1";
pub const SCAN_SCHEMA: &str = "charsum-scan/1";
pub const DEFAULT_TRIALS: u64 = 100;
/// Support `1 ≤ |n| ≤ 50` for random pigeonhole coefficients.
pub const TRIAL_SUPPORT: i64 = 50;

pub const CSV_HEADER: &str = "g,N,Q,q,q_g,M,sqrt_qg,loglog_qg,ratio,eq33_lhs,eq33_rhs,status";

#[derive(Debug, Parser)]
#[command(name = "charsum", version, about = "Even-order characters with large partial sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build χ_g for (g, N) and write its manifest.
    Construct {
        #[arg(long)]
        g: u64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive a manifest and write every certificate.
    Certify {
        manifest: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "budget-q", value_parser = parse_count, default_value_t = DEFAULT_M_BUDGET)]
        budget_q: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the headline ratio over several N.
    Scan {
        #[arg(long)]
        g: u64,
        #[arg(long = "N", value_delimiter = ',', num_args = 0..)]
        n: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "budget-q", value_parser = parse_count, default_value_t = DEFAULT_M_BUDGET)]
        budget_q: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Accepts `100000000` as well as `1e8`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("not a non-negative integer: {s}")),
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Construct { g, n, format, out } => construct(g, n, format, out.as_deref()),
        Command::Certify {
            manifest,
            seed,
            budget_q,
            trials,
            out,
        } => certify(&manifest, seed, budget_q, trials, out.as_deref()),
        Command::Scan {
            g,
            n,
            seed: _,
            budget_q,
            format,
            out,
        } => scan(g, n, budget_q, format, out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            report(&e);
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::SearchExhausted { .. } | Error::RangeExceeded(_) => EXIT_BUDGET,
        Error::InvariantViolation(_) | Error::DegenerateProduct => EXIT_CERTIFICATE,
        _ => EXIT_USAGE,
    }
}

fn report(e: &Error) {
    let line = serde_json::json!({ "error": e.category(), "message": e.to_string() });
    eprintln!("{line}");
}

fn write_output(out: Option<&Path>, body: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| io_error(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::InvalidArgument(format!("stdout: {e}")))
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("{}: {e}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn construct(g: u64, n: u64, format: Format, out: Option<&Path>) -> Result<i32, Error> {
    if format != Format::Json {
        return Err(Error::InvalidArgument("construct writes JSON only".into()));
    }
    let manifest = Manifest::new(build_chi_g(g, n)?);
    write_output(out, &to_json(&manifest))?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateBundle {
    pub schema: String,
    /// sha256 of the manifest file as read
    pub manifest_digest: String,
    pub seed: u64,
    pub trials: u64,
    pub certificates: Vec<Certificate>,
    /// claim ids of theorem-grade certificates that failed
    pub failures: Vec<String>,
}

fn flag(claim_id: &str, inputs: &str, ok: bool) -> Certificate {
    Certificate::new(claim_id, Grade::Theorem, inputs, if ok { 1.0 } else { 0.0 }, 1.0, 0.0)
}

/// Paths (dot-separated) at which two JSON trees differ.
fn json_diff(a: &serde_json::Value, b: &serde_json::Value, path: &str, out: &mut Vec<String>) {
    use serde_json::Value;
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
            for k in keys {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => json_diff(u, v, &p, out),
                    _ => out.push(p),
                }
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                json_diff(u, v, &format!("{path}[{i}]"), out);
            }
        }
        _ if a != b => out.push(path.to_string()),
        _ => {}
    }
}

fn consistency(raw: &serde_json::Value, claimed: &Manifest) -> (Certificate, Option<ChiGArtifact>) {
    let inputs = raw.to_string();
    match build_chi_g(claimed.g, claimed.n_bound) {
        Ok(artifact) => {
            let rebuilt = Manifest::new(artifact.clone());
            let mut diff = Vec::new();
            json_diff(raw, &serde_json::to_value(&rebuilt).expect("serializes"), "", &mut diff);
            let cert = flag("manifest.consistency", &inputs, diff.is_empty() && rebuilt == *claimed);
            let cert = if diff.is_empty() {
                cert
            } else {
                cert.with_detail("mismatched", diff.join(","))
            };
            (cert, Some(artifact))
        }
        Err(e) => (
            flag("manifest.consistency", &inputs, false).with_detail("rebuild_error", e.category()),
            None,
        ),
    }
}

fn construction_checks(manifest: &Manifest) -> Vec<Certificate> {
    let c = &manifest.checks;
    let inputs = format!("g={};N={}", manifest.g, manifest.n_bound);
    [
        ("construction.psi_order_is_g", c.psi_order_is_g),
        ("construction.psi_is_odd", c.psi_is_odd),
        ("construction.psi_is_primitive", c.psi_is_primitive),
        ("construction.paley_is_odd_quadratic_primitive", c.paley_is_odd_quadratic_primitive),
        ("construction.paley_is_one_up_to_n", c.paley_is_one_up_to_n),
        ("construction.half_log_q_within_n", c.half_log_q_within_n),
        ("construction.chi_g_order_is_g", c.chi_g_order_is_g),
        ("construction.chi_g_is_even", c.chi_g_is_even),
        ("construction.conductor_ratio_in_range", c.conductor_ratio_in_range),
    ]
    .into_iter()
    .map(|(id, ok)| flag(id, &inputs, ok))
    .collect()
}

fn gauss_certificate(name: &str, chi: &crate::DirichletCharacter, budget: u64) -> Result<Certificate, Error> {
    let tau = gauss_sum_with_budget(chi, budget)?;
    let root = (chi.modulus() as f64).sqrt();
    let dev = (tau.norm() - root).abs();
    Ok(Certificate::new(
        &format!("gauss_sum.modulus_is_sqrt_q.{name}"),
        Grade::Theorem,
        &chi.to_string(),
        -dev,
        0.0,
        crate::sums::THEOREM_RTOL * root,
    )
    .with_hex_detail("abs_tau", tau.norm())
    .with_hex_detail("sqrt_q", root))
}

/// Worst-slack certificate over `trials` random coefficient vectors.
fn pigeonhole_trials(artifact: &ChiGArtifact, seed: u64, trials: u64) -> Result<Option<Certificate>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<Certificate> = None;
    let mut failures = 0u64;
    for _ in 0..trials {
        let c = certify_pigeonhole(&random_coefficients(&mut rng, TRIAL_SUPPORT), &artifact.psi.psi)?;
        failures += u64::from(!c.passed());
        if worst.as_ref().is_none_or(|w| c.slack + c.tolerance < w.slack + w.tolerance) {
            worst = Some(c);
        }
    }
    Ok(worst.map(|mut c| {
        c.claim_id = "theta_max.pigeonhole_bound.random_trials".into();
        c.with_detail("trials", trials)
            .with_detail("failures", failures)
            .with_detail("seed", seed)
    }))
}

fn certify(path: &Path, seed: u64, budget_q: u64, trials: u64, out: Option<&Path>) -> Result<i32, Error> {
    let bytes = std::fs::read(path).map_err(|e| io_error(path, e))?;
    let raw: serde_json::Value =
        serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let claimed: Manifest =
        serde_json::from_value(raw.clone()).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let q_g = claimed.artifact.q_g.max(claimed.artifact.chi_g.modulus());
    if q_g > budget_q {
        return Err(Error::budget("manifest q_g", q_g, budget_q));
    }

    let (head, rebuilt) = consistency(&raw, &claimed);
    let mut certificates = vec![head];
    certificates.extend(construction_checks(&claimed));
    if let Some(artifact) = &rebuilt {
        certificates.push(gauss_certificate("psi", &artifact.psi.psi, budget_q)?);
        certificates.push(gauss_certificate("chi", &artifact.paley.chi, budget_q)?);
        certificates.push(gauss_certificate("chi_g", &artifact.chi_g, budget_q)?);
        certificates.extend(pigeonhole_trials(artifact, seed, trials)?);
        certificates.push(certify_short_sum(artifact)?);
        certificates.extend(certify_short_sum_steps(artifact)?);
        certificates.push(certify_truncation_for(artifact)?);
        let config = ScanConfig {
            budget: budget_q,
            parallel: true,
            ..ScanConfig::default()
        };
        let (ratio, profile) = headline_ratio_with(artifact, &config)?;
        let inputs = artifact.chi_g.to_string();
        certificates.push(
            Certificate::new("partial_sum.max_at_least_one", Grade::Theorem, &inputs, profile.m_value, 1.0, 0.0)
                .with_detail("argmax_t", profile.argmax_t),
        );
        certificates.push(
            Certificate::new(
                "headline.ratio_vs_chain_main_term",
                Grade::Measured,
                &inputs,
                ratio,
                chain_lower_bound(artifact, 0.0),
                0.0,
            )
            .with_hex_detail("M", profile.m_value),
        );
    }

    let failures: Vec<String> = certificates
        .iter()
        .filter(|c| c.grade == Grade::Theorem && !c.passed())
        .map(|c| c.claim_id.clone())
        .collect();
    let bundle = CertificateBundle {
        schema: CERTIFICATES_SCHEMA.into(),
        manifest_digest: digest("manifest", &String::from_utf8_lossy(&bytes)),
        seed,
        trials,
        certificates,
        failures: failures.clone(),
    };
    write_output(out, &to_json(&bundle))?;
    if failures.is_empty() {
        Ok(EXIT_OK)
    } else {
        for id in &failures {
            eprintln!("FAIL {id}");
        }
        Ok(EXIT_CERTIFICATE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub g: u64,
    #[serde(rename = "N")]
    pub n_bound: u64,
    #[serde(flatten)]
    pub values: Option<ScanValues>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanValues {
    #[serde(rename = "Q")]
    pub crt_solution: u64,
    pub q: u64,
    pub q_g: u64,
    #[serde(rename = "M")]
    pub m_value: f64,
    pub sqrt_qg: f64,
    pub loglog_qg: f64,
    pub ratio: f64,
    pub eq33_lhs: f64,
    pub eq33_rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub schema: String,
    pub g: u64,
    pub rows: Vec<ScanRow>,
}

impl ScanRow {
    pub fn to_csv(&self) -> String {
        match &self.values {
            Some(v) => format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                self.g,
                self.n_bound,
                v.crt_solution,
                v.q,
                v.q_g,
                v.m_value,
                v.sqrt_qg,
                v.loglog_qg,
                v.ratio,
                v.eq33_lhs,
                v.eq33_rhs,
                self.status
            ),
            None => format!("{},{},,,,,,,,,,{}", self.g, self.n_bound, self.status),
        }
    }
}

fn scan_row(g: u64, n: u64, budget_q: u64) -> Result<ScanValues, Error> {
    let artifact = build_chi_g(g, n)?;
    let config = ScanConfig {
        budget: budget_q,
        parallel: true,
        ..ScanConfig::default()
    };
    let (ratio, profile) = headline_ratio_with(&artifact, &config)?;
    let short = certify_short_sum(&artifact)?;
    let q_g = artifact.q_g;
    Ok(ScanValues {
        crt_solution: artifact.paley.crt_solution,
        q: artifact.paley.q,
        q_g,
        m_value: profile.m_value,
        sqrt_qg: (q_g as f64).sqrt(),
        loglog_qg: (q_g as f64).ln().ln(),
        ratio,
        eq33_lhs: short.lhs,
        eq33_rhs: short.rhs,
    })
}

fn scan(g: u64, mut ns: Vec<u64>, budget_q: u64, format: Format, out: Option<&Path>) -> Result<i32, Error> {
    if ns.is_empty() {
        return Err(Error::InvalidArgument("--N needs at least one value".into()));
    }
    let given = ns.len();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() != given {
        eprintln!("warning: dropped {} duplicate N value(s)", given - ns.len());
    }
    let results: Vec<(u64, Result<ScanValues, Error>)> =
        ns.par_iter().map(|&n| (n, scan_row(g, n, budget_q))).collect();

    let mut first_error = None;
    let rows: Vec<ScanRow> = results
        .into_iter()
        .map(|(n, r)| match r {
            Ok(values) => ScanRow {
                g,
                n_bound: n,
                values: Some(values),
                status: "ok".into(),
            },
            Err(e) => {
                report(&e);
                let status = e.category().to_string();
                first_error.get_or_insert(e);
                ScanRow {
                    g,
                    n_bound: n,
                    values: None,
                    status,
                }
            }
        })
        .collect();

    let body = match format {
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for row in &rows {
                s.push_str(&row.to_csv());
                s.push('\n');
            }
            s
        }
        Format::Json => to_json(&ScanTable {
            schema: SCAN_SCHEMA.into(),
            g,
            rows: rows.clone(),
        }),
    };
    write_output(out, &body)?;
    match first_error {
        Some(e) if rows.iter().all(|r| r.values.is_none()) => Ok(exit_code(&e)),
        _ => Ok(EXIT_OK),
    }
}
