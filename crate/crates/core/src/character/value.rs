use crate::arith::gcd_u64;
use crate::numeric::e_fraction;
use num_complex::Complex64;
use std::fmt;
use std::ops::Mul;

/// Exact value of a Dirichlet character: zero, or `e(num/den)` with the
/// fraction reduced and `0 ≤ num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharacterValue {
    Zero,
    Root { num: u64, den: u64 },
}

impl CharacterValue {
    pub const ONE: Self = CharacterValue::Root { num: 0, den: 1 };
    pub const MINUS_ONE: Self = CharacterValue::Root { num: 1, den: 2 };

    /// `e(num/den)`, reduced.
    pub fn root(num: u64, den: u64) -> Self {
        assert!(den > 0, "root of unity needs a positive denominator");
        let num = num % den;
        if num == 0 {
            return Self::ONE;
        }
        let g = gcd_u64(num, den);
        CharacterValue::Root {
            num: num / g,
            den: den / g,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CharacterValue::Zero)
    }

    pub fn conj(self) -> Self {
        match self {
            CharacterValue::Zero => CharacterValue::Zero,
            CharacterValue::Root { num, den } => Self::root(den - num, den),
        }
    }

    pub fn pow(self, k: u64) -> Self {
        match self {
            CharacterValue::Zero if k == 0 => Self::ONE,
            CharacterValue::Zero => CharacterValue::Zero,
            CharacterValue::Root { num, den } => {
                Self::root(((num as u128 * k as u128) % den as u128) as u64, den)
            }
        }
    }

    /// ±1 or 0 for real values; `None` for non-real roots of unity.
    pub fn as_sign(&self) -> Option<i8> {
        match *self {
            CharacterValue::Zero => Some(0),
            CharacterValue::Root { den: 1, .. } => Some(1),
            CharacterValue::Root { den: 2, .. } => Some(-1),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match *self {
            CharacterValue::Zero => Complex64::new(0.0, 0.0),
            CharacterValue::Root { num, den } => e_fraction(num as i128, den as u128),
        }
    }
}

impl Mul for CharacterValue {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (CharacterValue::Root { num: a, den: b }, CharacterValue::Root { num: c, den: d }) => {
                let g = gcd_u64(b, d);
                let den = (b / g) as u128 * d as u128;
                let num = a as u128 * (d / g) as u128 + c as u128 * (b / g) as u128;
                let den64 = u64::try_from(den).expect("root of unity denominator overflow");
                Self::root((num % den) as u64, den64)
            }
            _ => CharacterValue::Zero,
        }
    }
}

impl fmt::Display for CharacterValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharacterValue::Zero => write!(f, "0"),
            CharacterValue::Root { num, den } => write!(f, "e({num}/{den})"),
        }
    }
}
