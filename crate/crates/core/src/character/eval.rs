use super::{CharacterValue, DirichletCharacter, LocalCharacter};
use crate::arith::{gcd_u64, lcm, pow_mod, reduce, BabyGiant};

/// One generator-part of a local character, prepared for repeated evaluation.
///
/// The local value at a unit `x` with `log x = j` is `e(unit·(j mod order)/order)`.
/// `j mod order` is recovered by raising `x` to `projection = n/order` (n the
/// generator's order), landing in the cyclic subgroup of size `order` where a
/// small baby-step giant-step table finishes the job.
#[derive(Debug, Clone)]
struct Part {
    modulus: u64,
    kind: PartKind,
    order: u64,
    unit: u64,
    weight: u64,
    projection: u64,
    table: Option<BabyGiant>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PartKind {
    Cyclic,
    Sign,
    Five,
}

impl Part {
    #[inline]
    fn local_log(&self, r: u64) -> u64 {
        match self.kind {
            PartKind::Sign => u64::from(r % 4 == 3),
            PartKind::Cyclic | PartKind::Five => {
                let r = if self.kind == PartKind::Five && r % 4 == 3 {
                    self.modulus - r
                } else {
                    r
                };
                let h = pow_mod(r, self.projection, self.modulus);
                self.table
                    .as_ref()
                    .expect("table present for nontrivial part")
                    .log(h)
                    .expect("projected unit lies in the subgroup")
            }
        }
    }
}

/// Prepared evaluation of a character; cheap per call after construction.
#[derive(Debug, Clone)]
pub struct Evaluator {
    modulus: u64,
    order: u64,
    parts: Vec<Part>,
}

impl Evaluator {
    pub fn new(chi: &DirichletCharacter) -> Self {
        Self::with_queries(chi, 1)
    }

    /// Sizes the lookup tables for roughly `queries` evaluations.
    pub fn with_queries(chi: &DirichletCharacter, queries: u64) -> Self {
        let mut raw = Vec::new();
        for c in chi.components() {
            let modulus = c.modulus();
            match *c {
                LocalCharacter::Cyclic {
                    generator, exponent, ..
                } => {
                    let n = c.part_orders()[0];
                    raw.push((modulus, PartKind::Cyclic, generator, n, exponent));
                }
                LocalCharacter::TwoAdic { power, sign, five } => {
                    raw.push((modulus, PartKind::Sign, modulus - 1, 2, sign));
                    raw.push((modulus, PartKind::Five, 5, 1 << (power - 2), five));
                }
            }
        }
        let order = raw
            .iter()
            .map(|&(_, _, _, n, e)| n / gcd_u64(e, n))
            .fold(1, |a, b| lcm(a, b).expect("order fits"));
        let parts = raw
            .into_iter()
            .filter(|&(_, _, _, _, e)| e != 0)
            .map(|(modulus, kind, generator, n, e)| {
                let g = gcd_u64(e, n);
                let part_order = n / g;
                let projection = g;
                let table = (kind != PartKind::Sign).then(|| {
                    let base = pow_mod(generator, projection, modulus);
                    let stride = ((part_order as f64 * queries.max(1) as f64).sqrt().ceil() as u64)
                        .clamp(1, part_order.min(1 << 22));
                    BabyGiant::with_stride(base, part_order, modulus, stride)
                });
                Part {
                    modulus,
                    kind,
                    order: part_order,
                    unit: e / g,
                    weight: order / part_order,
                    projection,
                    table,
                }
            })
            .collect();
        Self {
            modulus: chi.modulus(),
            order,
            parts,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order of the character: every value is an `order`-th root of unity.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `k` with `χ(n) = e(k/order)`, or `None` when `gcd(n, q) > 1`.
    #[inline]
    pub fn raw_u64(&self, n: u64) -> Option<u64> {
        let r = n % self.modulus;
        if gcd_u64(r, self.modulus) != 1 && self.modulus != 1 {
            return None;
        }
        Some(self.raw_unit(r))
    }

    /// As [`raw_u64`](Self::raw_u64), for `n` already known to be a unit.
    #[inline]
    pub(crate) fn raw_unit(&self, n: u64) -> u64 {
        let mut k: u128 = 0;
        for part in &self.parts {
            let j = part.local_log(n % part.modulus);
            let local = (part.unit as u128 * j as u128) % part.order as u128;
            k += local * part.weight as u128;
        }
        (k % self.order as u128) as u64
    }

    pub fn raw(&self, n: i64) -> Option<u64> {
        self.raw_u64(reduce(n, self.modulus))
    }

    pub fn value(&self, n: i64) -> CharacterValue {
        self.raw(n)
            .map_or(CharacterValue::Zero, |k| CharacterValue::root(k, self.order))
    }

    pub fn value_u64(&self, n: u64) -> CharacterValue {
        self.raw_u64(n)
            .map_or(CharacterValue::Zero, |k| CharacterValue::root(k, self.order))
    }
}
