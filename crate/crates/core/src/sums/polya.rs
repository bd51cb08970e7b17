//! Truncated Fourier expansion of partial sums of an even primitive character,
//!
//! `Σ_{n≤t} χ(n) ≈ −(τ(χ)/2πi) Σ_{1≤|n|≤H} (χ̄(n)/n) e(−nt/q)`,
//!
//! and the size of what it leaves over.

use super::gauss::gauss_sum_with_budget;
use crate::character::{linear_sieve_raw, DirichletCharacter, Parity, NON_UNIT};
use crate::error::{Error, Result};
use crate::numeric::{e_fraction, ComplexSum};
use num_complex::Complex64;
use std::f64::consts::TAU;

pub const DEFAULT_POLYA_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct PolyaExpansion {
    modulus: u64,
    order: u64,
    cutoff: u64,
    tau: Complex64,
    /// raw exponent of `χ(n)` for `n = 1..=q`
    raw: Vec<u64>,
    /// `Σ_{n≤t} χ(n)` for `t = 0..=q`
    prefix: Vec<Complex64>,
}

impl PolyaExpansion {
    pub fn new(chi: &DirichletCharacter, cutoff: u64) -> Result<Self> {
        Self::with_budget(chi, cutoff, DEFAULT_POLYA_BUDGET)
    }

    pub fn with_budget(chi: &DirichletCharacter, cutoff: u64, budget: u64) -> Result<Self> {
        let q = chi.modulus();
        if chi.parity() != Parity::Even {
            return Err(Error::OddCharacter(q));
        }
        if !chi.profile().is_primitive {
            return Err(Error::NonPrimitive(q));
        }
        if cutoff > q {
            return Err(Error::InvalidArgument(format!("cutoff {cutoff} exceeds modulus {q}")));
        }
        let tau = gauss_sum_with_budget(chi, budget)?;
        let eval = chi.evaluator();
        let order = eval.order();
        let raw = linear_sieve_raw(&eval, q);
        let roots: Vec<Complex64> = (0..order).map(|k| e_fraction(k as i128, order as u128)).collect();
        let mut acc = ComplexSum::new();
        let mut prefix = Vec::with_capacity(q as usize + 1);
        prefix.push(acc.value());
        for &k in &raw {
            if k != NON_UNIT {
                acc.add(roots[k as usize]);
            }
            prefix.push(acc.value());
        }
        Ok(Self {
            modulus: q,
            order,
            cutoff,
            tau,
            raw,
            prefix,
        })
    }

    pub fn gauss_sum(&self) -> Complex64 {
        self.tau
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    /// `Σ_{n≤t} χ(n)`, using periodicity for `t > q`.
    pub fn partial_sum(&self, t: u64) -> Complex64 {
        self.prefix[(t % self.modulus) as usize]
    }

    /// `−(τ/2πi) Σ_{1≤|n|≤H} (χ̄(n)/n) e(−nt/q)`, both signs of `n` summed separately.
    pub fn expansion(&self, t: u64) -> Complex64 {
        let (q, l) = (self.modulus as u128, self.order as u128);
        let t = t as u128 % q;
        let mut sum = ComplexSum::new();
        for n in 1..=self.cutoff {
            let k = self.raw[n as usize - 1];
            if k == NON_UNIT {
                continue;
            }
            // χ̄(±n) = e(−k/L) for even χ; phases (−k·q ∓ (nt mod q)·L)/(L·q)
            let r = (n as u128 * t) % q;
            let base = -((k as u128 * q) as i128);
            let w = 1.0 / n as f64;
            sum.add(e_fraction(base - (r * l) as i128, l * q) * w);
            sum.add(e_fraction(base + (r * l) as i128, l * q) * -w);
        }
        let scale = -self.tau / Complex64::new(0.0, TAU);
        scale * sum.value()
    }

    /// `|Σ_{n≤t} χ(n) − expansion(t)|`
    pub fn residual(&self, t: u64) -> f64 {
        (self.partial_sum(t) - self.expansion(t)).norm()
    }
}

/// One-shot residual; see [`PolyaExpansion`].
pub fn polya_residual(chi: &DirichletCharacter, t: u64, cutoff: u64) -> Result<f64> {
    Ok(PolyaExpansion::new(chi, cutoff)?.residual(t))
}
