//! Exact integer and modular arithmetic on 64-bit values.
//!
//! Every modulus fits in a `u64`; products are accumulated in `u128`.

mod dlog;
mod prime;

pub use dlog::{discrete_log, primitive_root, BabyGiant};
pub use prime::{factorize, is_prime, Factorization};

use crate::error::{Error, Result};

pub fn gcd(a: i64, b: i64) -> u64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs())
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple, or `None` if it overflows `u64`.
pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd_u64(a, b)).checked_mul(b)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// p-adic valuation of a nonzero `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Solve `x ≡ rᵢ (mod mᵢ)` for pairwise coprime moduli.
///
/// Returns the unique solution in `[0, ∏ mᵢ)` together with `∏ mᵢ`.
/// Residues may be negative.
pub fn crt_solve(congruences: &[(i64, u64)]) -> Result<(u64, u64)> {
    for (i, &(_, mi)) in congruences.iter().enumerate() {
        if mi == 0 {
            return Err(Error::InvalidArgument("modulus must be at least 1".into()));
        }
        for &(_, mj) in &congruences[..i] {
            if gcd_u64(mi, mj) != 1 {
                return Err(Error::NonCoprimeModuli(mj, mi));
            }
        }
    }
    let mut x: u128 = 0;
    let mut modulus: u128 = 1;
    for &(r, m) in congruences {
        let r = reduce(r, m) as u128;
        let m128 = m as u128;
        let new_modulus = modulus
            .checked_mul(m128)
            .filter(|&v| v <= u64::MAX as u128)
            .ok_or(Error::RangeExceeded(modulus.saturating_mul(m128)))?;
        // x + modulus·k ≡ r (mod m)
        let inv = inv_mod((modulus % m128) as u64, m).expect("coprime moduli") as u128;
        let diff = (r + m128 - x % m128) % m128;
        let k = diff * inv % m128;
        x += modulus * k;
        modulus = new_modulus;
    }
    Ok((x as u64, modulus as u64))
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenModulus(n));
    }
    let mut a = reduce(a, n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        // second supplement: (2/n) = -1 iff n ≡ ±3 (mod 8)
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        // reciprocity for odd a, n
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// The nonprincipal character modulo 4.
pub fn chi_minus_four(n: i64) -> i8 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}
