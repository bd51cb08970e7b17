//! Range evaluation by complete multiplicativity: the character is evaluated
//! only at primes, every composite value is a sum of exponents.

use super::{CharacterValue, DirichletCharacter, Evaluator};
use crate::error::{Error, Result};

pub const DEFAULT_SIEVE_BUDGET: u64 = 100_000_000;

/// Marks `gcd(n, q) > 1` in raw exponent arrays.
pub const ZERO: u64 = u64::MAX;

#[inline]
fn add(a: u64, b: u64, order: u64) -> u64 {
    if a == ZERO || b == ZERO {
        ZERO
    } else {
        let s = a as u128 + b as u128;
        (s % order as u128) as u64
    }
}

/// `χ(1), …, χ(limit)` by a linear sieve.
pub fn evaluate_range_sieve(chi: &DirichletCharacter, limit: u64) -> Result<Vec<CharacterValue>> {
    evaluate_range_sieve_with_budget(chi, limit, DEFAULT_SIEVE_BUDGET)
}

pub fn evaluate_range_sieve_with_budget(
    chi: &DirichletCharacter,
    limit: u64,
    budget: u64,
) -> Result<Vec<CharacterValue>> {
    if limit > budget {
        return Err(Error::budget("sieve limit", limit, budget));
    }
    let eval = Evaluator::with_queries(chi, prime_count_estimate(limit));
    let order = eval.order();
    Ok(linear_sieve_raw(&eval, limit)
        .into_iter()
        .map(|k| {
            if k == ZERO {
                CharacterValue::Zero
            } else {
                CharacterValue::root(k, order)
            }
        })
        .collect())
}

/// Raw exponents for `n = 1..=limit` (index `n − 1`).
pub(crate) fn linear_sieve_raw(eval: &Evaluator, limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let order = eval.order();
    let mut vals = vec![0u64; limit + 1];
    let mut composite = vec![false; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i);
            vals[i] = eval.raw_u64(i as u64).unwrap_or(ZERO);
        }
        for &p in &primes {
            let Some(pi) = p.checked_mul(i).filter(|&x| x <= limit) else {
                break;
            };
            composite[pi] = true;
            vals[pi] = add(vals[p], vals[i], order);
            if i % p == 0 {
                break;
            }
        }
    }
    if limit >= 1 {
        // χ(1) = 1 except for the degenerate modulus-1 case, which is also 1
        vals[1] = 0;
    }
    vals.remove(0);
    vals
}

fn prime_count_estimate(limit: u64) -> u64 {
    if limit < 3 {
        return 1;
    }
    let x = limit as f64;
    (1.3 * x / x.ln()).ceil() as u64
}

/// Block-wise sieve over `[1, limit]` with `O(√limit + block)` memory.
#[derive(Debug, Clone)]
pub struct SegmentedSieve {
    eval: Evaluator,
    modulus: u64,
    limit: u64,
    /// primes up to √limit with their raw values
    small: Vec<(u64, u64)>,
}

impl SegmentedSieve {
    pub fn new(chi: &DirichletCharacter, limit: u64) -> Self {
        let eval = Evaluator::with_queries(chi, prime_count_estimate(limit));
        let root = limit.isqrt();
        let small = small_primes(root)
            .into_iter()
            .map(|p| (p, eval.raw_u64(p).unwrap_or(ZERO)))
            .collect();
        Self {
            modulus: chi.modulus(),
            eval,
            limit,
            small,
        }
    }

    pub fn order(&self) -> u64 {
        self.eval.order()
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Raw exponents for `n ∈ [lo, hi)` into `out` (cleared first); `ZERO` marks non-units.
    pub fn fill(&self, lo: u64, hi: u64, out: &mut Vec<u64>) {
        assert!(lo >= 1 && lo <= hi && hi <= self.limit + 1);
        let len = (hi - lo) as usize;
        let order = self.eval.order();
        out.clear();
        out.resize(len, 0);
        let mut rem: Vec<u64> = (lo..hi).collect();
        for &(p, v) in &self.small {
            if p * p >= hi {
                break;
            }
            let first = lo.div_ceil(p) * p;
            if v == ZERO {
                let mut n = first;
                while n < hi {
                    out[(n - lo) as usize] = ZERO;
                    n += p;
                }
                continue;
            }
            let mut pk = p;
            loop {
                let mut n = lo.div_ceil(pk) * pk;
                while n < hi {
                    let i = (n - lo) as usize;
                    rem[i] /= p;
                    out[i] = add(out[i], v, order);
                    n += pk;
                }
                match pk.checked_mul(p) {
                    Some(next) if next < hi => pk = next,
                    _ => break,
                }
            }
        }
        for (i, r) in rem.into_iter().enumerate() {
            if r > 1 && out[i] != ZERO {
                // r is a prime above √hi
                out[i] = if self.modulus.is_multiple_of(r) {
                    ZERO
                } else {
                    add(out[i], self.eval.raw_unit(r % self.modulus), order)
                };
            }
        }
    }
}

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}
