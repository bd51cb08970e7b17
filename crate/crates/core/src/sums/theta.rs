//! Finite exponential sums `Σ_n a_n e(nθ)` and their maxima over finite θ-sets.

use crate::arith::{gcd, reduce};
use crate::character::{DirichletCharacter, Evaluator};
use crate::error::{Error, Result};
use crate::numeric::{e_fraction, e_real, hex_f64, ComplexSum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Finitely supported coefficients `n ↦ a_n`, sorted by `n` with no repeats.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Coefficients {
    terms: Vec<(i64, Complex64)>,
}

impl Coefficients {
    /// Collects `(n, a_n)` pairs; repeated `n` are summed.
    pub fn new(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut terms: Vec<(i64, Complex64)> = terms.into_iter().collect();
        terms.sort_by_key(|&(n, _)| n);
        let mut merged: Vec<(i64, Complex64)> = Vec::with_capacity(terms.len());
        for (n, a) in terms {
            match merged.last_mut() {
                Some((m, b)) if *m == n => *b += a,
                _ => merged.push((n, a)),
            }
        }
        Self { terms: merged }
    }

    /// `a_n = f(n)` for `1 ≤ |n| ≤ cutoff`.
    pub fn symmetric(cutoff: u64, f: impl Fn(i64) -> Complex64) -> Self {
        let c = cutoff as i64;
        Self::new((-c..=c).filter(|&n| n != 0).map(|n| (n, f(n))))
    }

    pub fn terms(&self) -> &[(i64, Complex64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ |a_n|`
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|&(_, a)| a.norm()).collect::<crate::numeric::CompensatedSum>().value()
    }

    /// `Σ_{gcd(n, m) = 1} a_n`
    pub fn coprime_sum(&self, m: u64) -> Complex64 {
        self.terms
            .iter()
            .filter(|&&(n, _)| gcd(n, m as i64) == 1)
            .map(|&(_, a)| a)
            .collect::<ComplexSum>()
            .value()
    }

    /// Stable textual digest input.
    pub(crate) fn describe(&self) -> String {
        self.terms
            .iter()
            .map(|(n, a)| format!("{n}:{}:{}", crate::numeric::to_hex(a.re), crate::numeric::to_hex(a.im)))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `Σ_n a_n e(nθ)` at a real `θ`.
pub fn theta_sum_at(coeffs: &Coefficients, theta: f64) -> Complex64 {
    coeffs
        .terms
        .iter()
        .map(|&(n, a)| a * e_real(n as f64 * theta))
        .collect::<ComplexSum>()
        .value()
}

/// `Σ_n a_n e(n·b/m)` with the phase reduced exactly.
pub fn theta_sum_rational(coeffs: &Coefficients, b: i64, m: u64) -> Complex64 {
    coeffs
        .terms
        .iter()
        .map(|&(n, a)| {
            let r = (reduce(n, m) as u128 * reduce(b, m) as u128) % m as u128;
            a * e_fraction(r as i128, m as u128)
        })
        .collect::<ComplexSum>()
        .value()
}

/// The finite θ-set a maximum was taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaGrid {
    /// `θ = b/den`, `b = 0..den`
    Rational { den: u64 },
    /// `θ = j/points`, `j = 0..points`
    Uniform { points: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaSum {
    pub grid: ThetaGrid,
    #[serde(with = "hex_f64")]
    pub max_value: f64,
    /// index into the grid; smallest on ties
    pub argmax: u64,
}

impl ThetaSum {
    pub fn argmax_theta(&self) -> f64 {
        match self.grid {
            ThetaGrid::Rational { den } => self.argmax as f64 / den as f64,
            ThetaGrid::Uniform { points } => self.argmax as f64 / points as f64,
        }
    }
}

fn argmax(values: impl Iterator<Item = f64>) -> (f64, u64) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, v) in values.enumerate() {
        if v > best.0 {
            best = (v, i as u64);
        }
    }
    if best.0 == f64::NEG_INFINITY {
        (0.0, 0)
    } else {
        best
    }
}

/// `max_{b mod m} |Σ_n a_n ψ(n) e(bn/m)|` for a primitive `ψ` mod `m`.
pub fn rational_theta_max(coeffs: &Coefficients, psi: &DirichletCharacter) -> Result<ThetaSum> {
    let m = psi.modulus();
    if !psi.profile().is_primitive {
        return Err(Error::NonPrimitive(m));
    }
    let twisted = twist(coeffs, &psi.evaluator());
    let (max_value, b) = argmax((0..m).map(|b| twisted.sum_at(b).norm()));
    Ok(ThetaSum {
        grid: ThetaGrid::Rational { den: m },
        max_value,
        argmax: b,
    })
}

/// `a_n ψ(n)` kept as exact phase offsets `k/L` over the character's order.
struct Twisted {
    m: u64,
    order: u64,
    terms: Vec<(u64, u64, Complex64)>,
}

fn twist(coeffs: &Coefficients, psi: &Evaluator) -> Twisted {
    let m = psi.modulus();
    Twisted {
        m,
        order: psi.order(),
        terms: coeffs
            .terms
            .iter()
            .filter_map(|&(n, a)| psi.raw(n).map(|k| (reduce(n, m), k, a)))
            .collect(),
    }
}

impl Twisted {
    /// `Σ a_n ψ(n) e(bn/m)` with phase `(k·m + (bn mod m)·L)/(L·m)`.
    fn sum_at(&self, b: u64) -> Complex64 {
        let (m, l) = (self.m as u128, self.order as u128);
        self.terms
            .iter()
            .map(|&(n, k, a)| {
                let r = (n as u128 * b as u128) % m;
                a * e_fraction((k as u128 * m + r * l) as i128, l * m)
            })
            .collect::<ComplexSum>()
            .value()
    }
}

/// Maximum of `|Σ a_n e(nθ)|` over `θ = j/points`.
pub fn grid_theta_max(coeffs: &Coefficients, points: u64) -> ThetaSum {
    let points = points.max(1);
    let (max_value, j) = argmax((0..points).map(|j| theta_sum_rational(coeffs, j as i64, points).norm()));
    ThetaSum {
        grid: ThetaGrid::Uniform { points },
        max_value,
        argmax: j,
    }
}
