//! Floating-point helpers: compensated summation, exact-fraction exponentials
//! and lossless hexadecimal float encoding.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Neumaier (improved Kahan–Babuška) running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Componentwise compensated sum of complex numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = Self::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// `e(num/den) = exp(2πi·num/den)`, with the fraction reduced to `[0, 1)`
/// in exact integer arithmetic before the angle is formed.
pub fn e_fraction(num: i128, den: u128) -> Complex64 {
    debug_assert!(den > 0);
    let r = num.rem_euclid(den as i128) as u128;
    // Fold into [-1/2, 1/2) so the angle stays small.
    let (sign, r) = if 2 * r >= den { (-1.0, den - r) } else { (1.0, r) };
    let (s, c) = (TAU * (r as f64 / den as f64)).sin_cos();
    Complex64::new(c, sign * s)
}

/// `e(x)` for a real `x`.
pub fn e_real(x: f64) -> Complex64 {
    let f = x - x.floor();
    let (s, c) = (TAU * f).sin_cos();
    Complex64::new(c, s)
}

/// Harmonic sum `H(x) = Σ_{1 ≤ n ≤ x} 1/n`, summed in increasing `n`.
pub fn harmonic(x: f64) -> f64 {
    // also catches NaN
    if x.is_nan() || x < 1.0 {
        return 0.0;
    }
    let top = x.floor() as u64;
    (1..=top).map(|n| 1.0 / n as f64).collect::<CompensatedSum>().value()
}

/// Upper bound on `ln(x)` for `x ≥ 1`, rounded outward.
pub fn ln_upper(x: u64) -> f64 {
    let l = (x as f64).ln();
    // ln is correctly rounded to within one ulp on every supported libm;
    // x as f64 itself may round up or down by a relative 2^-53.
    l + (l.abs() + 1.0) * 4.0 * f64::EPSILON
}

/// Lower bound on `ln(x)` for `x ≥ 1`, rounded outward.
pub fn ln_lower(x: u64) -> f64 {
    let l = (x as f64).ln();
    (l - (l.abs() + 1.0) * 4.0 * f64::EPSILON).max(0.0)
}

/// Format an `f64` as a C99-style hexadecimal float, e.g. `0x1.8p+1`.
pub fn to_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 && mantissa == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_bits == 0 {
        (0, -1022)
    } else {
        (1, exp_bits - 1023)
    };
    let mut frac = format!("{mantissa:013x}");
    while frac.ends_with('0') {
        frac.pop();
    }
    if frac.is_empty() {
        format!("{sign}0x{lead}p{exp:+}")
    } else {
        format!("{sign}0x{lead}.{frac}p{exp:+}")
    }
}

/// Parse the output of [`to_hex`] back into the identical `f64`.
pub fn from_hex(s: &str) -> Option<f64> {
    match s {
        "nan" => return Some(f64::NAN),
        "inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    let (negative, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let rest = rest.strip_prefix("0x")?;
    let (mant, exp) = rest.split_once('p')?;
    let exp: i64 = exp.parse().ok()?;
    let (lead, frac) = match mant.split_once('.') {
        Some((l, f)) => (l, f),
        None => (mant, ""),
    };
    if frac.len() > 13 {
        return None;
    }
    let lead: u64 = lead.parse().ok()?;
    let frac_bits = if frac.is_empty() {
        0
    } else {
        u64::from_str_radix(frac, 16).ok()? << (4 * (13 - frac.len()))
    };
    let bits = match (lead, exp) {
        (0, 0) if frac_bits == 0 => 0,
        (0, -1022) => frac_bits,
        (1, e) if (-1022..=1023).contains(&e) => (((e + 1023) as u64) << 52) | frac_bits,
        _ => return None,
    };
    let v = f64::from_bits(bits);
    Some(if negative { -v } else { v })
}

/// Serde adapter storing an `f64` as a hexadecimal float string.
pub mod hex_f64 {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_hex(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        super::from_hex(&s).ok_or_else(|| D::Error::custom(format!("bad hex float {s:?}")))
    }
}
