use super::{factorize, gcd, gcd_u64, inv_mod, mul_mod, pow_mod, reduce};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Smallest positive generator of `(Z/mZ)^×`.
///
/// Defined for m = 1, 2, 4, p^k and 2p^k with p an odd prime.
pub fn primitive_root(m: u64) -> Result<u64> {
    match m {
        0 => return Err(Error::InvalidArgument("modulus must be positive".into())),
        1 | 2 => return Ok(1),
        4 => return Ok(3),
        _ => {}
    }
    let f = factorize(m as u128)?;
    let cyclic = match f.factors() {
        [(p, _)] => *p != 2,
        [(2, 1), (_, _)] => true,
        _ => false,
    };
    if !cyclic {
        return Err(Error::NonCyclicGroup(m));
    }
    let phi = f.phi();
    let cofactors: Vec<u64> = factorize(phi as u128)?
        .factors()
        .iter()
        .map(|&(r, _)| phi / r)
        .collect();
    (2..m)
        .find(|&g| gcd_u64(g, m) == 1 && cofactors.iter().all(|&c| pow_mod(g, c, m) != 1))
        .ok_or(Error::InvariantViolation(format!("no primitive root mod {m}")))
}

/// Baby-step giant-step table for logarithms to a fixed base.
///
/// `order` must be the multiplicative order of `generator`. The table holds
/// `stride` baby steps; each lookup costs at most `⌈order/stride⌉` giant steps.
#[derive(Debug, Clone)]
pub struct BabyGiant {
    modulus: u64,
    order: u64,
    stride: u64,
    giant: u64,
    baby: HashMap<u64, u64>,
}

impl BabyGiant {
    pub fn new(generator: u64, order: u64, modulus: u64) -> Self {
        let stride = (order as f64).sqrt().ceil() as u64;
        Self::with_stride(generator, order, modulus, stride)
    }

    pub fn with_stride(generator: u64, order: u64, modulus: u64, stride: u64) -> Self {
        let stride = stride.clamp(1, order.max(1));
        let generator = generator % modulus;
        let mut baby = HashMap::with_capacity(stride as usize);
        let mut cur = 1 % modulus;
        for j in 0..stride {
            baby.entry(cur).or_insert(j);
            cur = mul_mod(cur, generator, modulus);
        }
        // cur = generator^stride
        let giant = inv_mod(cur, modulus).unwrap_or(0);
        Self {
            modulus,
            order,
            stride,
            giant,
            baby,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Smallest `j ≥ 0` with `generator^j ≡ x`, if any.
    pub fn log(&self, x: u64) -> Option<u64> {
        let mut y = x % self.modulus;
        let rounds = self.order.div_ceil(self.stride);
        for i in 0..rounds {
            if let Some(&j) = self.baby.get(&y) {
                let e = i * self.stride + j;
                return (e < self.order).then_some(e);
            }
            y = mul_mod(y, self.giant, self.modulus);
        }
        None
    }
}

/// Smallest `j ≥ 0` with `generator^j ≡ x (mod modulus)`, where `generator`
/// generates the unit group. Runs in `O(√φ(modulus))`.
pub fn discrete_log(x: i64, generator: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    if gcd(x, modulus as i64) != 1 && modulus != 1 {
        return Err(Error::NotAUnit(x, modulus));
    }
    let phi = factorize(modulus as u128)?.phi();
    let xr = reduce(x, modulus);
    BabyGiant::new(generator, phi, modulus)
        .log(xr)
        .ok_or(Error::NotInSubgroup {
            x: xr,
            generator,
            modulus,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime;

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(4).unwrap(), 3);
        assert_eq!(primitive_root(2).unwrap(), 1);
        assert_eq!(primitive_root(1).unwrap(), 1);
        assert_eq!(primitive_root(18).unwrap(), 5);
        assert_eq!(primitive_root(8), Err(Error::NonCyclicGroup(8)));
        assert_eq!(primitive_root(15), Err(Error::NonCyclicGroup(15)));
    }

    #[test]
    fn primitive_root_enumerates_units() {
        for m in 1..=10_000u64 {
            let Ok(g) = primitive_root(m) else { continue };
            let f = factorize(m as u128).unwrap();
            let phi = f.phi();
            let mut seen = vec![false; m as usize];
            let mut cur = 1 % m;
            for _ in 0..phi {
                assert!(!seen[cur as usize], "m = {m}");
                seen[cur as usize] = true;
                cur = mul_mod(cur, g, m);
            }
            let units = (0..m).filter(|&u| gcd_u64(u, m) == 1).count() as u64;
            assert_eq!(units, phi);
            // smallest: no smaller unit generates
            for h in 1..g {
                if gcd_u64(h, m) != 1 {
                    continue;
                }
                let mut order = 1;
                let mut c = h % m;
                while c != 1 % m {
                    c = mul_mod(c, h, m);
                    order += 1;
                }
                assert!(order < phi, "m = {m}, h = {h}");
            }
        }
    }

    #[test]
    fn discrete_log_examples() {
        assert_eq!(discrete_log(1, 3, 7).unwrap(), 0);
        assert_eq!(discrete_log(4, 2, 5).unwrap(), 2);
        assert_eq!(discrete_log(3, 2, 5).unwrap(), 3);
        assert_eq!(discrete_log(-1, 2, 5).unwrap(), 2);
        assert_eq!(discrete_log(10, 2, 5), Err(Error::NotAUnit(10, 5)));
    }

    #[test]
    fn discrete_log_round_trip() {
        for p in [101u64, 7919, 104_729, 1_000_003] {
            assert!(is_prime(p));
            let g = primitive_root(p).unwrap();
            let table = BabyGiant::new(g, p - 1, p);
            for j in (0..p - 1).step_by(((p - 1) / 97).max(1) as usize) {
                assert_eq!(table.log(pow_mod(g, j, p)), Some(j));
            }
        }
    }

    #[test]
    fn bsgs_any_stride() {
        let p = 7919;
        let g = primitive_root(p).unwrap();
        for stride in [1, 2, 50, 89, 7918, 100_000] {
            let t = BabyGiant::with_stride(g, p - 1, p, stride);
            for j in [0, 1, 2, 777, 7917] {
                assert_eq!(t.log(pow_mod(g, j, p)), Some(j));
            }
        }
    }
}
