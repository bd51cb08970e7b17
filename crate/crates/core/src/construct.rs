//! The three constructions: an odd order-`g` character `ψ_g` of prime
//! conductor, an odd quadratic character that is 1 on every `n ≤ N`, and the
//! primitive character `χ_g` inducing their product.

use crate::arith::{chi_minus_four, crt_solve, is_prime, jacobi};
use crate::character::{CharacterProfile, CharacterValue, DirichletCharacter, Parity};
use crate::error::{Error, Result};
use crate::numeric::ln_upper;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_G: u64 = 100;
pub const DEFAULT_MAX_N: u64 = 19;
/// Largest `N` for which `4·∏_{p≤N} p` still fits in 64 bits.
pub const EXTENDED_MAX_N: u64 = 43;
pub const DEFAULT_PRIME_SEARCH_CEILING: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructConfig {
    pub max_g: u64,
    pub max_n: u64,
    pub prime_search_ceiling: u64,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        Self {
            max_g: DEFAULT_MAX_G,
            max_n: DEFAULT_MAX_N,
            prime_search_ceiling: DEFAULT_PRIME_SEARCH_CEILING,
        }
    }
}

impl ConstructConfig {
    pub fn extended() -> Self {
        Self {
            max_n: EXTENDED_MAX_N,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiArtifact {
    pub g: u64,
    pub m: u64,
    pub alpha: u64,
    pub psi: DirichletCharacter,
    pub profile: CharacterProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaleyArtifact {
    #[serde(rename = "N")]
    pub n_bound: u64,
    /// `(p, Q_p)` for each odd prime `p ≤ N`.
    pub residues: Vec<(u64, u64)>,
    #[serde(rename = "Q")]
    pub crt_solution: u64,
    pub chi: DirichletCharacter,
    pub q: u64,
    pub profile: CharacterProfile,
    #[serde(rename = "log_Q_over_N")]
    pub log_crt_over_n: f64,
    /// Whether `log Q ≤ 2N` at this `N`; an asymptotic statement, recorded only.
    #[serde(rename = "log_Q_le_2N")]
    pub log_crt_le_2n: bool,
}

impl PaleyArtifact {
    /// `½ log q ≤ N`, using an outward-rounded logarithm.
    pub fn half_log_q_within_n(&self) -> bool {
        self.q <= self.crt_solution && ln_upper(self.crt_solution) <= 2.0 * self.n_bound as f64
    }

    /// The cutoff `½ log q`.
    pub fn half_log_q(&self) -> f64 {
        0.5 * (self.q as f64).ln()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiGArtifact {
    pub g: u64,
    pub psi: PsiArtifact,
    pub paley: PaleyArtifact,
    pub chi_g: DirichletCharacter,
    pub q_g: u64,
    pub profile: CharacterProfile,
    pub q_g_over_q: f64,
    /// `q_g/q ∈ [1/m, m]`.
    pub conductor_ratio_in_range: bool,
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvariantViolation(what()))
    }
}

pub fn build_psi(g: u64) -> Result<PsiArtifact> {
    build_psi_with(g, &ConstructConfig::default())
}

/// Odd primitive character of order `g` with prime conductor `m ≡ g+1 (mod 2g)`,
/// with `ψ(α) = e(1/g)` on the smallest primitive root `α`.
pub fn build_psi_with(g: u64, config: &ConstructConfig) -> Result<PsiArtifact> {
    if g < 2 || g % 2 == 1 {
        return Err(Error::InvalidArgument(format!("g must be even and at least 2, got {g}")));
    }
    if g > config.max_g {
        return Err(Error::budget("character order g", g, config.max_g));
    }
    let step = 2 * g;
    let m = (0..)
        .map(|k: u64| k * step + g + 1)
        .take_while(|&m| m <= config.prime_search_ceiling)
        .find(|&m| is_prime(m))
        .ok_or(Error::SearchExhausted {
            residue: g + 1,
            modulus: step,
            ceiling: config.prime_search_ceiling,
        })?;
    let cofactor = (m - 1) / g;
    check(cofactor % 2 == 1, || format!("(m−1)/g = {cofactor} is even"))?;
    let psi = DirichletCharacter::from_exponents(m, &[vec![cofactor]])?;
    let alpha = match &psi.components()[0] {
        crate::character::LocalCharacter::Cyclic { generator, .. } => *generator,
        _ => unreachable!("odd prime modulus"),
    };
    check(psi.evaluate(alpha as i64) == CharacterValue::root(1, g), || {
        format!("ψ({alpha}) ≠ e(1/{g})")
    })?;
    // ψ(−1) = ψ(α)^((m−1)/2) = e((m−1)/(2g))
    let minus_one = psi.evaluate(-1);
    check(
        minus_one == CharacterValue::root(cofactor, 2) && minus_one == CharacterValue::MINUS_ONE,
        || format!("ψ(−1) = {minus_one}"),
    )?;
    let profile = psi.profile();
    check(
        profile.order == g && profile.parity == Parity::Odd && profile.is_primitive && profile.conductor == m,
        || format!("ψ profile {profile:?}"),
    )?;
    Ok(PsiArtifact {
        g,
        m,
        alpha,
        psi,
        profile,
    })
}

pub fn build_paley(n: u64) -> Result<PaleyArtifact> {
    build_paley_with(n, &ConstructConfig::default())
}

/// Odd primitive quadratic character with `χ(n) = 1` for `1 ≤ n ≤ N`, from the
/// system `x ≡ −1 (mod 8)`, `x ≡ Q_p (mod p)` with `(Q_p/p) = χ₋₄(p)`.
pub fn build_paley_with(n: u64, config: &ConstructConfig) -> Result<PaleyArtifact> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("N must be at least 3, got {n}")));
    }
    if n > config.max_n {
        return Err(Error::budget("prime bound N", n, config.max_n));
    }
    let odd_primes: Vec<u64> = (3..=n).filter(|&p| is_prime(p)).collect();
    let bound = odd_primes
        .iter()
        .try_fold(8u128, |acc, &p| acc.checked_mul(p as u128))
        .filter(|&b| b <= u64::MAX as u128)
        .ok_or(Error::budget("CRT modulus 4·∏p", u128::MAX, u64::MAX))?;

    let mut residues = Vec::with_capacity(odd_primes.len());
    let mut congruences = vec![(-1i64, 8u64)];
    for &p in &odd_primes {
        let target = chi_minus_four(p as i64);
        let qp = (1..p)
            .find(|&x| jacobi(x as i64, p) == Ok(target))
            .expect("residues and nonresidues exist mod an odd prime");
        residues.push((p, qp));
        congruences.push((qp as i64, p));
    }
    let (crt_solution, modulus) = crt_solve(&congruences)?;
    debug_assert_eq!(modulus as u128, bound);
    check(crt_solution % 8 == 7, || format!("Q = {crt_solution} is not ≡ −1 mod 8"))?;
    check(crt_solution as u128 <= bound, || "Q exceeds 4·∏p".into())?;

    // reciprocity consequences
    for &p in &odd_primes {
        check(jacobi(p as i64, crt_solution)? == 1, || format!("({p}/Q) ≠ 1"))?;
    }
    check(jacobi(2, crt_solution)? == 1, || "(2/Q) ≠ 1".into())?;
    check(jacobi(-1, crt_solution)? == -1, || "(−1/Q) ≠ −1".into())?;

    let chi = DirichletCharacter::jacobi_character(crt_solution)?.primitive_inducing()?;
    let q = chi.modulus();
    let profile = chi.profile();
    check(
        profile.order == 2 && profile.parity == Parity::Odd && profile.is_primitive,
        || format!("Paley character profile {profile:?}"),
    )?;
    let eval = chi.evaluator();
    for k in 1..=n {
        check(eval.value_u64(k) == CharacterValue::ONE, || format!("χ({k}) ≠ 1"))?;
    }
    check(q >= n, || format!("q = {q} < N = {n}"))?;

    let log_q = (crt_solution as f64).ln();
    Ok(PaleyArtifact {
        n_bound: n,
        residues,
        crt_solution,
        chi,
        q,
        profile,
        log_crt_over_n: log_q / n as f64,
        log_crt_le_2n: log_q <= 2.0 * n as f64,
    })
}

pub fn build_chi_g(g: u64, n: u64) -> Result<ChiGArtifact> {
    build_chi_g_with(g, n, &ConstructConfig::default())
}

/// `χ_g`: the primitive character inducing `χ·ψ_g`.
pub fn build_chi_g_with(g: u64, n: u64, config: &ConstructConfig) -> Result<ChiGArtifact> {
    let psi = build_psi_with(g, config)?;
    let paley = build_paley_with(n, config)?;
    let product = paley.chi.multiply(&psi.psi)?;
    if product.is_principal() {
        return Err(Error::DegenerateProduct);
    }
    let chi_g = product.primitive_inducing()?;
    let profile = chi_g.profile();
    check(profile.order == g, || format!("χ_g has order {} ≠ {g}", profile.order))?;
    check(profile.parity == Parity::Even, || "χ_g is odd".into())?;
    let q_g = chi_g.modulus();
    let ratio = q_g as f64 / paley.q as f64;
    let m = psi.m as f64;
    Ok(ChiGArtifact {
        g,
        q_g,
        profile,
        q_g_over_q: ratio,
        conductor_ratio_in_range: ratio >= 1.0 / m && ratio <= m,
        chi_g,
        psi,
        paley,
    })
}

/// Construction record written by `charsum construct` and read by `charsum certify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub g: u64,
    #[serde(rename = "N")]
    pub n_bound: u64,
    pub artifact: ChiGArtifact,
    pub checks: ManifestChecks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestChecks {
    pub psi_order_is_g: bool,
    pub psi_is_odd: bool,
    pub psi_is_primitive: bool,
    pub paley_is_odd_quadratic_primitive: bool,
    pub paley_is_one_up_to_n: bool,
    pub half_log_q_within_n: bool,
    pub chi_g_order_is_g: bool,
    pub chi_g_is_even: bool,
    pub conductor_ratio_in_range: bool,
}

pub const MANIFEST_SCHEMA: &str = "charsum-manifest/1";

impl Manifest {
    pub fn new(artifact: ChiGArtifact) -> Self {
        let p = &artifact.psi.profile;
        let c = &artifact.paley.profile;
        let eval = artifact.paley.chi.evaluator();
        let checks = ManifestChecks {
            psi_order_is_g: p.order == artifact.g,
            psi_is_odd: p.parity == Parity::Odd,
            psi_is_primitive: p.is_primitive,
            paley_is_odd_quadratic_primitive: c.order == 2 && c.parity == Parity::Odd && c.is_primitive,
            paley_is_one_up_to_n: (1..=artifact.paley.n_bound).all(|k| eval.value_u64(k) == CharacterValue::ONE),
            half_log_q_within_n: artifact.paley.half_log_q_within_n(),
            chi_g_order_is_g: artifact.profile.order == artifact.g,
            chi_g_is_even: artifact.profile.parity == Parity::Even,
            conductor_ratio_in_range: artifact.conductor_ratio_in_range,
        };
        Self {
            schema: MANIFEST_SCHEMA.into(),
            g: artifact.g,
            n_bound: artifact.paley.n_bound,
            artifact,
            checks,
        }
    }
}
