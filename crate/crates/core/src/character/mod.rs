//! Dirichlet characters stored by exponents on canonical unit-group generators.
//!
//! For an odd prime power `p^k` (and for 2 and 4) the unit group is cyclic
//! and the generator is the smallest primitive root; a character is fixed by
//! one exponent `e` with `χ(g) = e(e/φ(p^k))`. For `2^k`, `k ≥ 3`, the group is
//! `⟨−1⟩ × ⟨5⟩` and a character is fixed by the pair `(s, f)` with
//! `χ(−1) = e(s/2)` and `χ(5) = e(f/2^{k−2})`.

mod eval;
mod sieve;
mod value;

pub use eval::Evaluator;
pub use sieve::{
    evaluate_range_sieve, evaluate_range_sieve_with_budget, SegmentedSieve, DEFAULT_SIEVE_BUDGET,
    ZERO as NON_UNIT,
};
pub(crate) use sieve::linear_sieve_raw;
pub use value::CharacterValue;

use crate::arith::{self, crt_solve, factorize, jacobi, lcm, primitive_root, valuation, Factorization};
use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// The character restricted to one prime-power component of the modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LocalCharacter {
    /// Cyclic unit group: odd `p^k`, or `2`, `4`.
    Cyclic {
        prime: u64,
        power: u32,
        generator: u64,
        exponent: u64,
    },
    /// `(Z/2^k)^×` for `k ≥ 3`, on the generators −1 and 5.
    TwoAdic { power: u32, sign: u64, five: u64 },
}

impl LocalCharacter {
    fn new(prime: u64, power: u32, exponents: &[u64]) -> Result<Self> {
        let local = if prime == 2 && power >= 3 {
            let [sign, five] = exponents else {
                return Err(Error::InvalidArgument(format!(
                    "2^{power} needs two exponents, got {}",
                    exponents.len()
                )));
            };
            LocalCharacter::TwoAdic {
                power,
                sign: *sign,
                five: *five,
            }
        } else {
            let [exponent] = exponents else {
                return Err(Error::InvalidArgument(format!(
                    "{prime}^{power} needs one exponent, got {}",
                    exponents.len()
                )));
            };
            LocalCharacter::Cyclic {
                prime,
                power,
                generator: primitive_root(prime.pow(power))?,
                exponent: *exponent,
            }
        };
        for (e, bound) in local.exponents().into_iter().zip(local.part_orders()) {
            if e >= bound {
                return Err(Error::InvalidArgument(format!(
                    "exponent {e} out of range [0, {bound}) for {prime}^{power}"
                )));
            }
        }
        Ok(local)
    }

    pub fn prime(&self) -> u64 {
        match self {
            LocalCharacter::Cyclic { prime, .. } => *prime,
            LocalCharacter::TwoAdic { .. } => 2,
        }
    }

    pub fn power(&self) -> u32 {
        match self {
            LocalCharacter::Cyclic { power, .. } | LocalCharacter::TwoAdic { power, .. } => *power,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.prime().pow(self.power())
    }

    pub fn exponents(&self) -> Vec<u64> {
        match self {
            LocalCharacter::Cyclic { exponent, .. } => vec![*exponent],
            LocalCharacter::TwoAdic { sign, five, .. } => vec![*sign, *five],
        }
    }

    /// Orders of the generators the exponents refer to.
    pub fn part_orders(&self) -> Vec<u64> {
        match *self {
            LocalCharacter::Cyclic { prime, power, .. } => vec![(prime - 1) * prime.pow(power - 1)],
            LocalCharacter::TwoAdic { power, .. } => vec![2, 1 << (power - 2)],
        }
    }

    /// The canonical generators, as residues (−1 written as `-1`).
    fn generators(&self) -> Vec<i64> {
        match self {
            LocalCharacter::Cyclic { generator, .. } => vec![*generator as i64],
            LocalCharacter::TwoAdic { .. } => vec![-1, 5],
        }
    }

    fn with_exponents(&self, exponents: Vec<u64>) -> Self {
        match *self {
            LocalCharacter::Cyclic {
                prime,
                power,
                generator,
                ..
            } => LocalCharacter::Cyclic {
                prime,
                power,
                generator,
                exponent: exponents[0],
            },
            LocalCharacter::TwoAdic { power, .. } => LocalCharacter::TwoAdic {
                power,
                sign: exponents[0],
                five: exponents[1],
            },
        }
    }

    pub fn order(&self) -> u64 {
        self.exponents()
            .iter()
            .zip(self.part_orders())
            .map(|(&e, n)| n / arith::gcd_u64(e, n))
            .fold(1, |a, b| lcm(a, b).expect("local order fits"))
    }

    /// Smallest `p^f` through which this local character factors.
    pub fn conductor(&self) -> u64 {
        match *self {
            LocalCharacter::Cyclic { exponent: 0, .. } => 1,
            LocalCharacter::Cyclic {
                prime: 2, power, ..
            } => {
                // power 1 has a trivial group, so a nonzero exponent means power 2
                debug_assert_eq!(power, 2);
                4
            }
            LocalCharacter::Cyclic {
                prime,
                power,
                exponent,
                ..
            } => {
                // trivial on units ≡ 1 (mod p^f) iff p^{k−f} | e
                let v = valuation(exponent, prime).min(power - 1);
                prime.pow(power - v)
            }
            LocalCharacter::TwoAdic { five: 0, sign: 0, .. } => 1,
            LocalCharacter::TwoAdic { five: 0, .. } => 4,
            LocalCharacter::TwoAdic { power, five, .. } => 1 << (power - valuation(five, 2)),
        }
    }
}

/// A Dirichlet character modulo `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    modulus: u64,
    factorization: Factorization,
    components: Vec<LocalCharacter>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterProfile {
    pub order: u64,
    pub parity: Parity,
    pub conductor: u64,
    pub is_primitive: bool,
}

impl DirichletCharacter {
    /// Character from one exponent list per prime-power component, in prime order.
    pub fn from_exponents(modulus: u64, exponents: &[Vec<u64>]) -> Result<Self> {
        let factorization = factorize(modulus as u128)?;
        if factorization.factors().len() != exponents.len() {
            return Err(Error::InvalidArgument(format!(
                "modulus {modulus} has {} prime-power components, got {} exponent lists",
                factorization.factors().len(),
                exponents.len()
            )));
        }
        let components = factorization
            .factors()
            .iter()
            .zip(exponents)
            .map(|(&(p, k), e)| LocalCharacter::new(p, k, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            modulus,
            factorization,
            components,
        })
    }

    pub fn principal(modulus: u64) -> Result<Self> {
        let factorization = factorize(modulus as u128)?;
        let exps: Vec<Vec<u64>> = factorization
            .factors()
            .iter()
            .map(|&(p, k)| if p == 2 && k >= 3 { vec![0, 0] } else { vec![0] })
            .collect();
        Self::from_exponents(modulus, &exps)
    }

    /// The character `n ↦ (n/Q)` for odd `Q`.
    pub fn jacobi_character(q: u64) -> Result<Self> {
        if q.is_multiple_of(2) {
            return Err(Error::EvenModulus(q));
        }
        let factorization = factorize(q as u128)?;
        // a primitive root is a nonresidue, so (g/p)^k = (−1)^k
        let exps: Vec<Vec<u64>> = factorization
            .factors()
            .iter()
            .map(|&(p, k)| {
                let phi = (p - 1) * p.pow(k - 1);
                vec![if k % 2 == 1 { phi / 2 } else { 0 }]
            })
            .collect();
        Self::from_exponents(q, &exps)
    }

    /// The nonprincipal character modulo 4.
    pub fn chi_minus_four() -> Self {
        Self::from_exponents(4, &[vec![1]]).expect("valid")
    }

    /// Every character modulo `q`, in mixed-radix exponent order.
    pub fn all(modulus: u64) -> Result<impl Iterator<Item = DirichletCharacter>> {
        let principal = Self::principal(modulus)?;
        let radices: Vec<u64> = principal
            .components
            .iter()
            .flat_map(|c| c.part_orders())
            .collect();
        let total: u64 = radices.iter().product();
        Ok((0..total).map(move |mut idx| {
            let mut flat = Vec::with_capacity(radices.len());
            for &r in &radices {
                flat.push(idx % r);
                idx /= r;
            }
            let mut it = flat.into_iter();
            let components = principal
                .components
                .iter()
                .map(|c| {
                    let k = c.part_orders().len();
                    c.with_exponents(it.by_ref().take(k).collect())
                })
                .collect();
            DirichletCharacter {
                modulus: principal.modulus,
                factorization: principal.factorization.clone(),
                components,
            }
        }))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn components(&self) -> &[LocalCharacter] {
        &self.components
    }

    pub fn is_principal(&self) -> bool {
        self.components.iter().all(|c| c.exponents().iter().all(|&e| e == 0))
    }

    pub fn order(&self) -> u64 {
        self.components
            .iter()
            .map(LocalCharacter::order)
            .fold(1, |a, b| lcm(a, b).expect("order divides phi"))
    }

    pub fn conductor(&self) -> u64 {
        self.components.iter().map(LocalCharacter::conductor).product()
    }

    pub fn evaluator(&self) -> Evaluator {
        Evaluator::new(self)
    }

    pub fn evaluate(&self, n: i64) -> CharacterValue {
        self.evaluator().value(n)
    }

    pub fn parity(&self) -> Parity {
        if self.evaluate(-1) == CharacterValue::ONE {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn profile(&self) -> CharacterProfile {
        let conductor = self.conductor();
        CharacterProfile {
            order: self.order(),
            parity: self.parity(),
            conductor,
            is_primitive: conductor == self.modulus,
        }
    }

    /// `χ^k`.
    pub fn pow(&self, k: u64) -> Self {
        let components = self
            .components
            .iter()
            .map(|c| {
                let e = c
                    .exponents()
                    .iter()
                    .zip(c.part_orders())
                    .map(|(&e, n)| ((e as u128 * k as u128) % n as u128) as u64)
                    .collect();
                c.with_exponents(e)
            })
            .collect();
        Self {
            components,
            ..self.clone()
        }
    }

    pub fn conj(&self) -> Self {
        let components = self
            .components
            .iter()
            .map(|c| {
                let e = c
                    .exponents()
                    .iter()
                    .zip(c.part_orders())
                    .map(|(&e, n)| (n - e) % n)
                    .collect();
                c.with_exponents(e)
            })
            .collect();
        Self {
            components,
            ..self.clone()
        }
    }

    /// Pointwise product, as a character modulo `lcm(q₁, q₂)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let target = lcm(self.modulus, other.modulus)
            .ok_or(Error::RangeExceeded(self.modulus as u128 * other.modulus as u128))?;
        let (ea, eb) = (self.evaluator(), other.evaluator());
        from_unit_values(target, target, |x| ea.value_u64(x) * eb.value_u64(x))
    }

    /// The primitive character modulo the conductor that induces `self`.
    pub fn primitive_inducing(&self) -> Result<Self> {
        let conductor = self.conductor();
        if conductor == self.modulus {
            return Ok(self.clone());
        }
        let eval = self.evaluator();
        from_unit_values(conductor, self.modulus, |x| eval.value_u64(x))
    }
}

/// Rebuild a character modulo `target` from its values on units, evaluating
/// `f` at integers mod `lift` (a multiple of `target`) that reduce to each
/// canonical generator of `target` and are ≡ 1 at every other prime of `lift`.
fn from_unit_values(
    target: u64,
    lift: u64,
    f: impl Fn(u64) -> CharacterValue,
) -> Result<DirichletCharacter> {
    debug_assert_eq!(lift % target, 0);
    let shell = DirichletCharacter::principal(target)?;
    let lift_f = factorize(lift as u128)?;
    let components = shell
        .components
        .iter()
        .map(|c| {
            let exps = c
                .generators()
                .into_iter()
                .zip(c.part_orders())
                .map(|(gen, order)| {
                    let congruences: Vec<(i64, u64)> = lift_f
                        .factors()
                        .iter()
                        .map(|&(p, k)| (if p == c.prime() { gen } else { 1 }, p.pow(k)))
                        .collect();
                    let (x, _) = crt_solve(&congruences)?;
                    match f(x) {
                        CharacterValue::Root { num, den } if order % den == 0 => Ok(num * (order / den)),
                        v => Err(Error::InvariantViolation(format!(
                            "value {v} at generator lift {x} is not a {order}-th root of unity"
                        ))),
                    }
                })
                .collect::<Result<Vec<u64>>>()?;
            Ok(c.with_exponents(exps))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DirichletCharacter {
        components,
        ..shell
    })
}

/// Canonical text form: `q:p^k[e];2^k[s,f];...`, components in prime order.
impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.modulus)?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            let e: Vec<String> = c.exponents().iter().map(u64::to_string).collect();
            write!(f, "{}^{}[{}]", c.prime(), c.power(), e.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for DirichletCharacter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("{why} in character {s:?}"));
        let (modulus, rest) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let modulus: u64 = modulus.trim().parse().map_err(|_| bad("bad modulus"))?;
        let mut factors = Vec::new();
        let mut exps = Vec::new();
        for part in rest.split(';').filter(|p| !p.trim().is_empty()) {
            let (pk, e) = part
                .trim()
                .strip_suffix(']')
                .and_then(|p| p.split_once('['))
                .ok_or_else(|| bad("bad component"))?;
            let (p, k) = pk.split_once('^').ok_or_else(|| bad("bad prime power"))?;
            let p: u64 = p.parse().map_err(|_| bad("bad prime"))?;
            let k: u32 = k.parse().map_err(|_| bad("bad exponent"))?;
            let e = e
                .split(',')
                .map(|x| x.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad("bad character exponent"))?;
            factors.push((p, k));
            exps.push(e);
        }
        let chi = Self::from_exponents(modulus, &exps)?;
        if chi.factorization.factors() != factors.as_slice() {
            return Err(bad("factorization does not match modulus"));
        }
        Ok(chi)
    }
}

impl Serialize for DirichletCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Checks `evaluate(χ, n) = jacobi(n, Q)` on `1..=limit`; used by tests and certificates.
pub fn agrees_with_jacobi(chi: &DirichletCharacter, q: u64, limit: u64) -> Result<bool> {
    let eval = chi.evaluator();
    for n in 1..=limit {
        let expected = jacobi(n as i64, q)?;
        if eval.value_u64(n).as_sign() != Some(expected) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd;

    fn legendre(p: u64) -> DirichletCharacter {
        DirichletCharacter::jacobi_character(p).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let chi3 = legendre(3);
        assert_eq!(chi3.evaluate(2), CharacterValue::MINUS_ONE);
        assert_eq!(chi3.evaluate(3), CharacterValue::Zero);
        assert_eq!(chi3.evaluate(1), CharacterValue::ONE);
        let chi = DirichletCharacter::from_exponents(5, &[vec![1]]).unwrap();
        assert_eq!(chi.evaluate(2), CharacterValue::root(1, 4));
        assert_eq!(chi.evaluate(5), CharacterValue::Zero);
    }

    #[test]
    fn profile_examples() {
        let p7 = legendre(7).profile();
        assert_eq!(
            p7,
            CharacterProfile {
                order: 2,
                parity: Parity::Odd,
                conductor: 7,
                is_primitive: true
            }
        );
        let chi12 = DirichletCharacter::chi_minus_four()
            .multiply(&DirichletCharacter::principal(3).unwrap())
            .unwrap();
        assert_eq!(chi12.modulus(), 12);
        let p12 = chi12.profile();
        assert_eq!(p12.conductor, 4);
        assert!(!p12.is_primitive);
        let p = DirichletCharacter::principal(11).unwrap().profile();
        assert_eq!((p.order, p.parity, p.conductor), (1, Parity::Even, 1));
    }

    #[test]
    fn inducing_examples() {
        let chi4 = DirichletCharacter::chi_minus_four();
        let chi12 = chi4.multiply(&DirichletCharacter::principal(3).unwrap()).unwrap();
        assert_eq!(chi12.primitive_inducing().unwrap(), chi4);
        assert_eq!(legendre(7).primitive_inducing().unwrap(), legendre(7));
        let pr = DirichletCharacter::principal(30).unwrap().primitive_inducing().unwrap();
        assert_eq!(pr.modulus(), 1);
    }

    #[test]
    fn multiply_examples() {
        let chi = DirichletCharacter::from_exponents(7, &[vec![1]]).unwrap();
        assert!(chi.multiply(&chi.conj()).unwrap().is_principal());
        let prod = legendre(3).multiply(&legendre(5)).unwrap();
        assert_eq!(prod.modulus(), 15);
        assert_eq!(prod.evaluate(2), CharacterValue::ONE);
        assert_eq!(prod.order(), 2);
        let one = DirichletCharacter::principal(1).unwrap();
        assert_eq!(chi.multiply(&one).unwrap(), chi);
    }

    #[test]
    fn jacobi_character_examples() {
        assert_eq!(legendre(15).evaluate(2), CharacterValue::ONE);
        assert_eq!(legendre(9).evaluate(2), CharacterValue::ONE);
        assert!(!legendre(9).profile().is_primitive);
        assert_eq!(
            DirichletCharacter::jacobi_character(12),
            Err(Error::EvenModulus(12))
        );
        for q in (1..400u64).step_by(2) {
            assert!(agrees_with_jacobi(&legendre(q), q, 2 * q).unwrap(), "Q = {q}");
        }
    }

    #[test]
    fn two_adic_components() {
        // mod 8: (1,0) is χ_{−4}-like, (0,1) is the character with χ(5) = −1
        let a = DirichletCharacter::from_exponents(8, &[vec![1, 0]]).unwrap();
        assert_eq!(a.conductor(), 4);
        let b = DirichletCharacter::from_exponents(8, &[vec![0, 1]]).unwrap();
        assert_eq!(b.conductor(), 8);
        assert_eq!(b.evaluate(3), CharacterValue::MINUS_ONE);
        assert_eq!(b.evaluate(7), CharacterValue::ONE);
        let c = DirichletCharacter::from_exponents(32, &[vec![1, 2]]).unwrap();
        assert_eq!(c.conductor(), 16);
        assert_eq!(c.order(), 4);
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(DirichletCharacter::from_exponents(7, &[vec![6]]).is_err());
        assert!(DirichletCharacter::from_exponents(8, &[vec![1]]).is_err());
        assert!(DirichletCharacter::from_exponents(15, &[vec![1]]).is_err());
    }

    #[test]
    fn counts_characters() {
        for q in 1..60u64 {
            let phi = factorize(q as u128).unwrap().phi();
            assert_eq!(DirichletCharacter::all(q).unwrap().count() as u64, phi);
        }
    }

    #[test]
    fn canonical_text_round_trip() {
        for q in [1u64, 8, 12, 40, 311, 933, 720] {
            for chi in DirichletCharacter::all(q).unwrap().take(50) {
                let s = chi.to_string();
                assert_eq!(s.parse::<DirichletCharacter>().unwrap(), chi, "{s}");
            }
        }
        assert_eq!(legendre(3).multiply(&legendre(311)).unwrap().to_string(), "933:3^1[1];311^1[155]");
        assert!("12:2^2[1]".parse::<DirichletCharacter>().is_err());
        assert!("8:2^3[1]".parse::<DirichletCharacter>().is_err());
    }

    /// Smallest d | q such that χ is 1 on every unit n ≡ 1 (mod d), by scanning residues.
    fn conductor_by_scan(chi: &DirichletCharacter) -> u64 {
        let q = chi.modulus();
        let vals: Vec<_> = (0..q as i64).map(|n| chi.evaluate(n)).collect();
        (1..=q)
            .filter(|d| q.is_multiple_of(*d))
            .find(|&d| {
                (0..q)
                    .filter(|&n| gcd(n as i64, q as i64) == 1 && n % d == 1 % d)
                    .all(|n| vals[n as usize] == CharacterValue::ONE)
            })
            .unwrap()
    }

    #[test]
    fn conductor_matches_scan() {
        for q in 1..=64u64 {
            for chi in DirichletCharacter::all(q).unwrap() {
                assert_eq!(chi.conductor(), conductor_by_scan(&chi), "{chi}");
            }
        }
    }
}
