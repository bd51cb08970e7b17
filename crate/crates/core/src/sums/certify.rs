//! Certificates: each inequality is checked on a finite set of points and
//! recorded with both sides, the slack and the tolerance it was judged by.

use super::partial::{compute_m_with, ScanConfig, SumProfile};
use super::theta::{rational_theta_max, Coefficients};
use crate::character::DirichletCharacter;
use crate::construct::ChiGArtifact;
use crate::error::{Error, Result};
use crate::numeric::{e_fraction, harmonic, hex_f64, to_hex, ComplexSum};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// Relative tolerance for theorem-grade certificates.
pub const THEOREM_RTOL: f64 = 1e-9;
/// Slack allowed on `|a(n)| ≤ 1` before a coefficient is rejected.
pub const COEFFICIENT_SLACK: f64 = 1e-12;
/// Grid points per unit of cutoff for continuous-θ maxima.
pub const GRID_OVERSAMPLING: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    /// A proven inequality; failure is a bug.
    Theorem,
    /// A reported quantity; the verdict is informational.
    Measured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim_id: String,
    pub grade: Grade,
    /// sha256 of the claim id and a canonical rendering of the inputs
    pub inputs_digest: String,
    #[serde(with = "hex_f64")]
    pub lhs: f64,
    #[serde(with = "hex_f64")]
    pub rhs: f64,
    #[serde(with = "hex_f64")]
    pub slack: f64,
    #[serde(with = "hex_f64")]
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(default)]
    pub details: BTreeMap<String, String>,
}

impl Certificate {
    /// Judges `lhs ≥ rhs` with the given tolerance.
    pub fn new(claim_id: &str, grade: Grade, inputs: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            claim_id: claim_id.into(),
            grade,
            inputs_digest: digest(claim_id, inputs),
            lhs,
            rhs,
            slack,
            tolerance,
            verdict: if slack >= -tolerance {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            details: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn with_detail(mut self, key: &str, value: impl ToString) -> Self {
        self.details.insert(key.into(), value.to_string());
        self
    }

    pub fn with_hex_detail(self, key: &str, value: f64) -> Self {
        self.with_detail(key, to_hex(value))
    }
}

pub fn digest(claim_id: &str, inputs: &str) -> String {
    let mut h = Sha256::new();
    h.update(claim_id.as_bytes());
    h.update(b"\n");
    h.update(inputs.as_bytes());
    hex::encode(h.finalize())
}

fn theorem_tolerance(l1: f64) -> f64 {
    THEOREM_RTOL * (1.0 + l1)
}

/// `√m/φ(m)` for a character modulo `m`.
fn pigeonhole_factor(psi: &DirichletCharacter) -> f64 {
    let m = psi.modulus();
    (m as f64).sqrt() / psi.factorization().phi() as f64
}

/// `max_b |Σ a_n ψ(n) e(bn/m)| ≥ (√m/φ(m)) |Σ_{(n,m)=1} a_n|` over the `m` points `b/m`.
pub fn certify_pigeonhole(coeffs: &Coefficients, psi: &DirichletCharacter) -> Result<Certificate> {
    let max = rational_theta_max(coeffs, psi)?;
    let m = psi.modulus();
    let rhs = pigeonhole_factor(psi) * coeffs.coprime_sum(m).norm();
    let inputs = format!("psi={psi};coeffs={}", coeffs.describe());
    Ok(Certificate::new(
        "theta_max.pigeonhole_bound",
        Grade::Theorem,
        &inputs,
        max.max_value,
        rhs,
        theorem_tolerance(coeffs.l1_norm()),
    )
    .with_detail("argmax_b", max.argmax)
    .with_detail("m", m))
}

/// Coefficients with `|a_n| ≤ 1` on `1 ≤ |n| ≤ support`, uniform in the unit disc's polar box.
pub fn random_coefficients<R: Rng + ?Sized>(rng: &mut R, support: i64) -> Coefficients {
    Coefficients::new((-support..=support).filter(|&n| n != 0).map(|n| {
        let r: f64 = rng.gen_range(0.0..=1.0);
        let u: f64 = rng.gen_range(0.0..1.0);
        (n, Complex64::from_polar(r, TAU * u))
    }))
}

/// The three small primitive characters used for random pigeonhole trials:
/// the Legendre symbols mod 3 and 7 and an order-4 character mod 5.
pub fn pigeonhole_test_characters() -> Vec<DirichletCharacter> {
    vec![
        DirichletCharacter::jacobi_character(3).expect("3 is prime"),
        DirichletCharacter::from_exponents(5, &[vec![1]]).expect("valid exponent"),
        DirichletCharacter::jacobi_character(7).expect("7 is prime"),
    ]
}

/// `⌊½ log q⌋`
pub fn half_log_cutoff(q: u64) -> u64 {
    let x = 0.5 * (q as f64).ln();
    if x >= 1.0 {
        x.floor() as u64
    } else {
        0
    }
}

struct ShortSum {
    coeffs: Coefficients,
    cutoff: u64,
    m: u64,
    factor: f64,
    harmonic: f64,
    inputs: String,
}

fn short_sum(artifact: &ChiGArtifact) -> ShortSum {
    let chi = &artifact.paley.chi;
    let eval = chi.evaluator();
    let cutoff = half_log_cutoff(artifact.paley.q);
    let coeffs = Coefficients::symmetric(cutoff, |n| eval.value(n).to_complex() / n as f64);
    ShortSum {
        cutoff,
        m: artifact.psi.m,
        factor: pigeonhole_factor(&artifact.psi.psi),
        harmonic: harmonic(cutoff as f64),
        inputs: format!("chi={chi};psi={};cutoff={cutoff}", artifact.psi.psi),
        coeffs,
    }
}

/// `max_b |Σ_{1≤|n|≤½log q} χ(n)ψ_g(n)/n · e(bn/m)| ≥ (√m/φ(m)) H(½ log q)`.
pub fn certify_short_sum(artifact: &ChiGArtifact) -> Result<Certificate> {
    let s = short_sum(artifact);
    let max = rational_theta_max(&s.coeffs, &artifact.psi.psi)?;
    let rhs = s.factor * s.harmonic;
    Ok(Certificate::new(
        "short_sum.harmonic_bound",
        Grade::Theorem,
        &s.inputs,
        max.max_value,
        rhs,
        theorem_tolerance(s.coeffs.l1_norm()),
    )
    .with_detail("cutoff", s.cutoff)
    .with_detail("argmax_b", max.argmax)
    .with_hex_detail("harmonic", s.harmonic))
}

/// The four links of the chain behind [`certify_short_sum`], each as its own certificate.
pub fn certify_short_sum_steps(artifact: &ChiGArtifact) -> Result<Vec<Certificate>> {
    let s = short_sum(artifact);
    let tol = theorem_tolerance(s.coeffs.l1_norm());
    let lhs = rational_theta_max(&s.coeffs, &artifact.psi.psi)?.max_value;
    let coprime = s.factor * s.coeffs.coprime_sum(s.m).norm();
    let m_free: f64 = (1..=s.cutoff)
        .filter(|n| n % s.m != 0)
        .map(|n| 1.0 / n as f64)
        .collect::<crate::numeric::CompensatedSum>()
        .value();
    let identity = 2.0 * s.factor * m_free;
    let dropped = 2.0 * s.factor * (1.0 - 1.0 / s.m as f64) * s.harmonic;
    let halved = s.factor * s.harmonic;
    Ok(vec![
        Certificate::new("short_sum.step.pigeonhole", Grade::Theorem, &s.inputs, lhs, coprime, tol),
        Certificate::new(
            "short_sum.step.coprime_sum_identity",
            Grade::Theorem,
            &s.inputs,
            coprime,
            identity,
            tol,
        )
        .with_hex_detail("abs_difference", (coprime - identity).abs()),
        Certificate::new(
            "short_sum.step.drop_multiples_of_m",
            Grade::Theorem,
            &s.inputs,
            identity,
            dropped,
            tol,
        ),
        Certificate::new("short_sum.step.halve", Grade::Theorem, &s.inputs, dropped, halved, tol),
    ])
}

/// `max_θ max_{N≤x} |Σ_{1≤|n|≤N} a(n)/n e(nθ)| ≥ max_θ |Σ_{1≤|n|≤x} a(n)/n e(nθ)|`
/// on `θ = j/(64⌊x⌋)`. The difference is the measured constant.
pub fn certify_truncation_onesided(a: impl Fn(i64) -> Complex64, x: f64) -> Result<Certificate> {
    let top = if x >= 1.0 { x.floor() as u64 } else { 0 };
    let mut coeffs = Vec::with_capacity(2 * top as usize);
    for n in 1..=top as i64 {
        for s in [n, -n] {
            let v = a(s);
            if v.norm() > 1.0 + COEFFICIENT_SLACK {
                return Err(Error::CoefficientTooLarge { n: s, modulus: v.norm() });
            }
            coeffs.push((s, v));
        }
    }
    let points = (GRID_OVERSAMPLING * top).max(1);
    let (mut lhs, mut rhs) = (0.0f64, 0.0f64);
    for j in 0..points {
        let mut sum = ComplexSum::new();
        let mut best = 0.0f64;
        for n in 1..=top {
            let r = (n as u128 * j as u128 % points as u128) as i128;
            let (pos, neg) = (coeffs[2 * (n as usize - 1)].1, coeffs[2 * (n as usize - 1) + 1].1);
            let w = 1.0 / n as f64;
            sum.add(pos * w * e_fraction(r, points as u128));
            sum.add(neg * -w * e_fraction(-r, points as u128));
            best = best.max(sum.value().norm());
        }
        lhs = lhs.max(best);
        rhs = rhs.max(sum.value().norm());
    }
    let inputs = format!("x={};coeffs={}", to_hex(x), Coefficients::new(coeffs).describe());
    Ok(
        Certificate::new("truncation.max_over_lengths", Grade::Theorem, &inputs, lhs, rhs, 0.0)
            .with_detail("grid_points", points)
            .with_hex_detail("measured_constant", lhs - rhs),
    )
}

/// `a(n) = χ(n)ψ_g(n)` on `1 ≤ |n| ≤ ½ log q`, fed to [`certify_truncation_onesided`].
pub fn certify_truncation_for(artifact: &ChiGArtifact) -> Result<Certificate> {
    let chi = artifact.paley.chi.evaluator();
    let psi = artifact.psi.psi.evaluator();
    let x = half_log_cutoff(artifact.paley.q) as f64;
    certify_truncation_onesided(|n| (chi.value(n) * psi.value(n)).to_complex(), x)
}

/// Smallest `q_g` for which `log log q_g > 0` comfortably.
pub const MIN_HEADLINE_MODULUS: u64 = 16;

/// `M(χ_g) / (√q_g · log log q_g)`
pub fn headline_ratio(artifact: &ChiGArtifact) -> Result<f64> {
    Ok(headline_ratio_with(artifact, &ScanConfig::default())?.0)
}

pub fn headline_ratio_with(artifact: &ChiGArtifact, config: &ScanConfig) -> Result<(f64, SumProfile)> {
    let q_g = artifact.q_g;
    if q_g < MIN_HEADLINE_MODULUS {
        return Err(Error::InvalidArgument(format!(
            "q_g = {q_g} is below {MIN_HEADLINE_MODULUS}"
        )));
    }
    let profile = compute_m_with(&artifact.chi_g, config)?;
    Ok((profile.m_value / normalizer(q_g), profile))
}

/// `√q · log log q`
pub fn normalizer(q: u64) -> f64 {
    let q = q as f64;
    q.sqrt() * q.ln().ln()
}

/// `D = K·log q_g / log log q_g`: the partial-sum expansion error `K·log q_g`
/// expressed in the units of the ratio's `1/√q_g` correction.
pub fn chain_error_term(polya_constant: f64, q_g: u64) -> f64 {
    let l = (q_g as f64).ln();
    polya_constant * l / l.ln()
}

/// `(1/2π)(√m/φ(m)) H(½ log q) / log log q_g − D/√q_g`
pub fn chain_lower_bound(artifact: &ChiGArtifact, d: f64) -> f64 {
    let s = short_sum(artifact);
    let q_g = artifact.q_g as f64;
    s.factor * s.harmonic / (TAU * q_g.ln().ln()) - d / q_g.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_chi_g;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn verdict_matches_slack() {
        let c = Certificate::new("x", Grade::Theorem, "", 1.0, 1.0 + 1e-10, 1e-9);
        assert!(c.passed());
        let c = Certificate::new("x", Grade::Theorem, "", 1.0, 1.1, 1e-9);
        assert!(!c.passed());
        assert_eq!(c.inputs_digest.len(), 64);
    }

    #[test]
    fn pigeonhole_random_trials() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for psi in pigeonhole_test_characters() {
            for _ in 0..100 {
                let c = certify_pigeonhole(&random_coefficients(&mut rng, 50), &psi).unwrap();
                assert!(c.passed(), "{c:?}");
            }
        }
    }

    #[test]
    fn pigeonhole_multiples_of_m() {
        let psi = DirichletCharacter::jacobi_character(7).unwrap();
        let coeffs = Coefficients::new((1..=6).map(|k| (7 * k, Complex64::new(1.0, 0.0))));
        let c = certify_pigeonhole(&coeffs, &psi).unwrap();
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
        assert!(c.passed());
    }

    #[test]
    fn short_sum_chain() {
        for (g, n) in [(2, 7), (4, 7), (6, 11)] {
            let art = build_chi_g(g, n).unwrap();
            let c = certify_short_sum(&art).unwrap();
            assert!(c.passed() && c.rhs > 0.0, "{c:?}");
            for step in certify_short_sum_steps(&art).unwrap() {
                assert!(step.passed(), "{step:?}");
            }
        }
    }

    #[test]
    fn truncation_one_sided() {
        let zero = certify_truncation_onesided(|_| Complex64::new(0.0, 0.0), 5.0).unwrap();
        assert_eq!((zero.lhs, zero.rhs), (0.0, 0.0));
        let art = build_chi_g(2, 11).unwrap();
        let c = certify_truncation_for(&art).unwrap();
        assert!(c.passed() && c.lhs >= c.rhs);
        assert_eq!(
            certify_truncation_onesided(|n| Complex64::new(if n == 3 { 2.0 } else { 0.0 }, 0.0), 4.0),
            Err(Error::CoefficientTooLarge { n: 3, modulus: 2.0 })
        );
    }

    #[test]
    fn headline_positive() {
        let art = build_chi_g(2, 7).unwrap();
        assert_eq!(art.q_g, 933);
        let r = headline_ratio(&art).unwrap();
        assert!(r > 0.0);
    }

    #[test]
    fn json_round_trip() {
        let art = build_chi_g(2, 7).unwrap();
        let c = certify_short_sum(&art).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<Certificate>(&s).unwrap(), c);
    }
}
