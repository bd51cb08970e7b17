//! Streaming scan of the partial sums `Σ_{n≤t} χ(n)` for `t ≤ q`.
//!
//! `[1, q]` is cut into fixed blocks. Each block is summed from zero with
//! compensation; the running offset is the compensated sum of the block
//! totals. The sequential and parallel paths use the same decomposition, so
//! they return bit-identical results.

use crate::character::{DirichletCharacter, SegmentedSieve, NON_UNIT};
use crate::error::{Error, Result};
use crate::numeric::{e_fraction, hex_f64, ComplexSum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_M_BUDGET: u64 = 100_000_000;
pub const DEFAULT_BLOCK_SIZE: u64 = 1 << 16;
pub const MAX_TRACE_POINTS: u64 = 4096;

/// Moduli are compared after rounding to this many fractional bits, so that
/// values equal up to floating-point noise tie and the smallest `t` wins.
const KEY_SCALE: f64 = (1u64 << 24) as f64;

const ROOT_TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    pub budget: u64,
    pub block_size: u64,
    pub parallel: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_M_BUDGET,
            block_size: DEFAULT_BLOCK_SIZE,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub t: u64,
    #[serde(with = "hex_f64")]
    pub re: f64,
    #[serde(with = "hex_f64")]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumProfile {
    pub character: DirichletCharacter,
    pub modulus: u64,
    /// `M(χ) = max_{t ≤ q} |Σ_{n≤t} χ(n)|`
    #[serde(with = "hex_f64")]
    pub m_value: f64,
    pub argmax_t: u64,
    /// Prefix sums at every `stride`-th `t`, at most 4096 points.
    pub trace_stride: u64,
    pub trace: Vec<TracePoint>,
}

/// Quantized comparison key for a modulus.
#[inline]
pub fn modulus_key(modulus: f64) -> u64 {
    (modulus * KEY_SCALE).round() as u64
}

struct Roots {
    order: u64,
    table: Vec<Complex64>,
}

impl Roots {
    fn new(order: u64) -> Self {
        let table = if order <= ROOT_TABLE_LIMIT {
            (0..order).map(|k| e_fraction(k as i128, order as u128)).collect()
        } else {
            Vec::new()
        };
        Self { order, table }
    }

    #[inline]
    fn get(&self, raw: u64) -> Complex64 {
        if raw == NON_UNIT {
            Complex64::new(0.0, 0.0)
        } else if self.table.is_empty() {
            e_fraction(raw as i128, self.order as u128)
        } else {
            self.table[raw as usize]
        }
    }
}

#[derive(Debug, Clone)]
struct BlockScan {
    best_key: u64,
    best_t: u64,
    best_modulus: f64,
    trace: Vec<TracePoint>,
}

fn block_total(raw: &[u64], roots: &Roots) -> Complex64 {
    raw.iter().map(|&k| roots.get(k)).collect::<ComplexSum>().value()
}

fn scan_block(raw: &[u64], lo: u64, offset: Complex64, roots: &Roots, stride: u64) -> BlockScan {
    let mut local = ComplexSum::new();
    let mut scan = BlockScan {
        best_key: 0,
        best_t: 0,
        best_modulus: -1.0,
        trace: Vec::new(),
    };
    for (i, &k) in raw.iter().enumerate() {
        local.add(roots.get(k));
        let t = lo + i as u64;
        let cur = offset + local.value();
        let modulus = cur.norm();
        let key = modulus_key(modulus);
        if scan.best_modulus < 0.0 || key > scan.best_key {
            scan.best_key = key;
            scan.best_t = t;
            scan.best_modulus = modulus;
        }
        if t.is_multiple_of(stride) {
            scan.trace.push(TracePoint {
                t,
                re: cur.re,
                im: cur.im,
            });
        }
    }
    scan
}

pub fn compute_m(chi: &DirichletCharacter) -> Result<SumProfile> {
    compute_m_with(chi, &ScanConfig::default())
}

pub fn compute_m_with(chi: &DirichletCharacter, config: &ScanConfig) -> Result<SumProfile> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let q = chi.modulus();
    if q > config.budget {
        return Err(Error::budget("modulus for M(χ)", q, config.budget));
    }
    let block = config.block_size.max(1);
    let sieve = SegmentedSieve::new(chi, q);
    let roots = Roots::new(sieve.order());
    let stride = q.div_ceil(MAX_TRACE_POINTS).max(1);
    let bounds: Vec<(u64, u64)> = (0..q.div_ceil(block))
        .map(|b| (1 + b * block, (1 + (b + 1) * block).min(q + 1)))
        .collect();

    let scans: Vec<BlockScan> = if config.parallel {
        let totals: Vec<Complex64> = bounds
            .par_iter()
            .map_init(Vec::new, |buf, &(lo, hi)| {
                sieve.fill(lo, hi, buf);
                block_total(buf, &roots)
            })
            .collect();
        let offsets = prefix_offsets(&totals);
        bounds
            .par_iter()
            .zip(offsets.par_iter())
            .map_init(Vec::new, |buf, (&(lo, hi), &offset)| {
                sieve.fill(lo, hi, buf);
                scan_block(buf, lo, offset, &roots, stride)
            })
            .collect()
    } else {
        let mut buf = Vec::new();
        let mut offset = ComplexSum::new();
        let mut scans = Vec::with_capacity(bounds.len());
        for &(lo, hi) in &bounds {
            sieve.fill(lo, hi, &mut buf);
            scans.push(scan_block(&buf, lo, offset.value(), &roots, stride));
            offset.add(block_total(&buf, &roots));
        }
        scans
    };

    let mut best: Option<&BlockScan> = None;
    for s in &scans {
        if best.is_none_or(|b| s.best_key > b.best_key) {
            best = Some(s);
        }
    }
    let best = best.expect("q ≥ 1 gives at least one block");
    Ok(SumProfile {
        character: chi.clone(),
        modulus: q,
        m_value: best.best_modulus,
        argmax_t: best.best_t,
        trace_stride: stride,
        trace: scans.iter().flat_map(|s| s.trace.iter().copied()).collect(),
    })
}

/// Offsets before each block: the compensated running sum of block totals.
fn prefix_offsets(totals: &[Complex64]) -> Vec<Complex64> {
    let mut acc = ComplexSum::new();
    totals
        .iter()
        .map(|&t| {
            let before = acc.value();
            acc.add(t);
            before
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre(p: u64) -> DirichletCharacter {
        DirichletCharacter::jacobi_character(p).unwrap()
    }

    #[test]
    fn examples() {
        let p = compute_m(&legendre(7)).unwrap();
        assert_eq!((p.m_value, p.argmax_t), (2.0, 2));
        let p = compute_m(&legendre(3)).unwrap();
        assert_eq!((p.m_value, p.argmax_t), (1.0, 1));
        let p = compute_m(&DirichletCharacter::chi_minus_four()).unwrap();
        assert_eq!((p.m_value, p.argmax_t), (1.0, 1));
    }

    #[test]
    fn rejects_principal_and_budget() {
        let one = DirichletCharacter::principal(7).unwrap();
        assert_eq!(compute_m(&one), Err(Error::PrincipalCharacter));
        let cfg = ScanConfig {
            budget: 5,
            ..ScanConfig::default()
        };
        assert!(matches!(compute_m_with(&legendre(7), &cfg), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn trace_is_bounded_and_exact_at_full_period() {
        let chi = legendre(100_003);
        let p = compute_m(&chi).unwrap();
        assert!(p.trace.len() as u64 <= MAX_TRACE_POINTS);
        let last = p.trace.last().unwrap();
        if last.t == chi.modulus() {
            assert_eq!((last.re, last.im), (0.0, 0.0));
        }
    }

    #[test]
    fn parallel_and_block_size_independence() {
        let chi = DirichletCharacter::from_exponents(1_000_003, &[vec![3]]).unwrap();
        for block in [1u64 << 10, 1 << 16] {
            let seq = ScanConfig {
                block_size: block,
                ..ScanConfig::default()
            };
            let par = ScanConfig { parallel: true, ..seq };
            let a = compute_m_with(&chi, &seq).unwrap();
            let b = compute_m_with(&chi, &par).unwrap();
            assert_eq!(a.m_value.to_bits(), b.m_value.to_bits());
            assert_eq!(a.argmax_t, b.argmax_t);
            assert_eq!(a.trace, b.trace);
        }
    }

    #[test]
    fn matches_naive_scan() {
        for q in [5u64, 12, 13, 16, 21, 45, 64, 97] {
            for chi in DirichletCharacter::all(q).unwrap().filter(|c| !c.is_principal()) {
                let e = chi.evaluator();
                let mut s = Complex64::new(0.0, 0.0);
                let (mut best, mut best_t) = (0u64, 0u64);
                for t in 1..=q {
                    s += e.value_u64(t).to_complex();
                    let k = modulus_key(s.norm());
                    if t == 1 || k > best {
                        best = k;
                        best_t = t;
                    }
                }
                let p = compute_m_with(
                    &chi,
                    &ScanConfig {
                        block_size: 7,
                        ..ScanConfig::default()
                    },
                )
                .unwrap();
                assert_eq!(p.argmax_t, best_t, "{chi}");
                assert_eq!(modulus_key(p.m_value), best);
            }
        }
    }
}
