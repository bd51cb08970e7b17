use crate::character::{linear_sieve_raw, DirichletCharacter, Evaluator, NON_UNIT};
use crate::error::{Error, Result};
use crate::numeric::{e_fraction, ComplexSum};
use num_complex::Complex64;

pub const DEFAULT_GAUSS_BUDGET: u64 = 1_000_000;

/// `τ(χ) = Σ_{n ≤ q} χ(n) e(n/q)`, summed directly.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<Complex64> {
    gauss_sum_with_budget(chi, DEFAULT_GAUSS_BUDGET)
}

pub fn gauss_sum_with_budget(chi: &DirichletCharacter, budget: u64) -> Result<Complex64> {
    let q = chi.modulus();
    if q > budget {
        return Err(Error::budget("modulus for Gauss sum", q, budget));
    }
    let eval = Evaluator::with_queries(chi, q);
    let order = eval.order() as u128;
    let q128 = q as u128;
    let raw = linear_sieve_raw(&eval, q);
    let mut sum = ComplexSum::new();
    for (i, &k) in raw.iter().enumerate() {
        if k == NON_UNIT {
            continue;
        }
        let n = i as u128 + 1;
        // χ(n)e(n/q) = e((k·q + n·L)/(L·q))
        let num = k as u128 * q128 + n * order;
        sum.add(e_fraction((num % (order * q128)) as i128, order * q128));
    }
    Ok(sum.value())
}
