//! Quadratic and biquadratic residues of `G*_n` and closed-form square roots.
//!
//! When `G*_n` is cyclic of order `m` and `m / 2^(k-1)` is odd for the level
//! `k` in `1..=3`, the `2^(k-1)`-th powers form a cyclic subgroup of odd
//! order `h = m / 2^(k-1)` and `x = b^((h + 1) / 2)` is a square root of any
//! `b` in it:
//!
//! | level | modulus shape                        | `h`          |
//! |-------|--------------------------------------|--------------|
//! | 1     | odd prime power                      | `phi(n)/2`   |
//! | 2     | odd prime power or cyclic semiprime  | `phi(n)/4`   |
//! | 3     | odd prime power or cyclic semiprime  | `phi(n)/8`   |

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{factorize, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::modstar::{self, fold, is_plus_minus_one, ModStarResidue};

/// Largest modulus handled by exhaustive searches.
pub const BRUTE_FORCE_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResiduePartition {
    pub n: u64,
    pub level: u8,
    /// Level 1: all elements. Level 2: residues, non-residues. Level 3:
    /// biquadratic residues, pure quadratic residues, non-residues.
    pub classes: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SqrtResult {
    pub x: u64,
    pub level: u8,
    pub verified: bool,
}

/// Shape information shared by the level checks.
struct Shape {
    order: u64,
    prime_power: bool,
    cyclic_semiprime: bool,
}

fn shape(n: u64) -> Option<Shape> {
    if n < 3 || n % 2 == 0 {
        return None;
    }
    let s = modstar::classify(n).ok()?;
    Some(Shape {
        order: s.order,
        prime_power: factorize(n).len() == 1,
        cyclic_semiprime: s.cyclic_semiprime,
    })
}

/// Whether the closed-form root of the given level applies to `n`.
pub fn level_applies(n: u64, level: u8) -> bool {
    let Some(s) = shape(n) else { return false };
    let phi = 2 * s.order;
    let structural = match level {
        1 => s.prime_power,
        2 | 3 => s.prime_power || s.cyclic_semiprime,
        _ => return false,
    };
    let div = 1u64 << level;
    structural && phi % div == 0 && (phi / div) % 2 == 1
}

/// The unique level `1..=3` whose closed form applies to `n`, if any.
pub fn applicable_level(n: u64) -> Option<u8> {
    (1..=3).find(|&l| level_applies(n, l))
}

fn squares_brute(n: u64) -> Result<Vec<bool>> {
    if n > BRUTE_FORCE_BOUND {
        return Err(Error::LimitExceeded {
            limit: n,
            bound: BRUTE_FORCE_BOUND,
        });
    }
    let mut hit = vec![false; n as usize];
    for x in modstar::group_elements(n)? {
        hit[fold(mul_mod(x.repr(), x.repr(), n), n) as usize] = true;
    }
    Ok(hit)
}

/// Whether `b = x^2` for some `x` in `G*_n`.
pub fn is_qr_star(b: ModStarResidue) -> Result<bool> {
    let n = b.modulus();
    match modstar::classify(n) {
        Ok(s) if s.cyclic => Ok(is_power_in_cyclic(b.repr(), n, s.order, 2)),
        _ => Ok(squares_brute(n)?[b.repr() as usize]),
    }
}

/// In a cyclic group of order `m`, `b` is a `k`-th power iff
/// `b^(m / gcd(k, m)) = 1`.
fn is_power_in_cyclic(b: u64, n: u64, m: u64, k: u64) -> bool {
    is_plus_minus_one(pow_mod(b, m / k.gcd(&m), n), n)
}

/// Whether `b` is a fourth power in the cyclic group `G*_n`.
pub fn is_biquadratic_star(b: ModStarResidue) -> Result<bool> {
    let n = b.modulus();
    let s = modstar::classify(n)?;
    if !s.cyclic {
        return Err(Error::NotCyclic(n));
    }
    Ok(is_power_in_cyclic(b.repr(), n, s.order, 4))
}

fn closed_form(b: ModStarResidue, level: u8) -> ModStarResidue {
    let n = b.modulus();
    let h = modstar::group_order(n).expect("validated modulus") >> (level - 1);
    b.pow(h.div_ceil(2))
}

fn require_level(b: ModStarResidue, level: u8) -> Result<()> {
    if level_applies(b.modulus(), level) {
        Ok(())
    } else {
        Err(Error::LevelInapplicable {
            n: b.modulus(),
            level,
        })
    }
}

/// `x = b^((phi(n)/2 + 1)/2)` for odd prime powers with `phi(n)/2` odd.
pub fn sqrt_level1(b: ModStarResidue) -> Result<ModStarResidue> {
    require_level(b, 1)?;
    Ok(closed_form(b, 1))
}

/// `x = b^((phi(n)/4 + 1)/2)` for quadratic residues `b`.
pub fn sqrt_level2(b: ModStarResidue) -> Result<ModStarResidue> {
    require_level(b, 2)?;
    if !is_qr_star(b)? {
        return Err(Error::NonResidue {
            b: b.repr(),
            n: b.modulus(),
        });
    }
    Ok(closed_form(b, 2))
}

/// `x = b^((phi(n)/8 + 1)/2)` for biquadratic residues `b`.
pub fn sqrt_level3(b: ModStarResidue) -> Result<ModStarResidue> {
    require_level(b, 3)?;
    if !is_biquadratic_star(b)? {
        return Err(Error::NotBiquadratic {
            b: b.repr(),
            n: b.modulus(),
        });
    }
    Ok(closed_form(b, 3))
}

/// Closed-form root at the requested level, or at the applicable one when
/// `level` is `None`. The root is checked by squaring.
pub fn sqrt_star(b: ModStarResidue, level: Option<u8>) -> Result<SqrtResult> {
    let n = b.modulus();
    let level = match level {
        Some(l) => l,
        None => applicable_level(n).ok_or(Error::LevelInapplicable { n, level: 0 })?,
    };
    let x = match level {
        1 => sqrt_level1(b)?,
        2 => sqrt_level2(b)?,
        3 => sqrt_level3(b)?,
        _ => return Err(Error::LevelInapplicable { n, level }),
    };
    Ok(SqrtResult {
        x: x.repr(),
        level,
        verified: x.mul(&x) == b,
    })
}

pub fn partition(n: u64, level: u8) -> Result<ResiduePartition> {
    if !level_applies(n, level) {
        return Err(Error::LevelInapplicable { n, level });
    }
    let order = modstar::group_order(n)?;
    let elements = modstar::group_elements(n)?;
    let classes = match level {
        1 => vec![elements.iter().map(|e| e.repr()).collect()],
        2 => {
            let (qr, non): (Vec<_>, Vec<_>) = elements
                .iter()
                .map(|e| e.repr())
                .partition(|&r| is_power_in_cyclic(r, n, order, 2));
            vec![qr, non]
        }
        _ => {
            let mut out = vec![Vec::new(), Vec::new(), Vec::new()];
            for r in elements.iter().map(|e| e.repr()) {
                let idx = if is_power_in_cyclic(r, n, order, 4) {
                    0
                } else if is_power_in_cyclic(r, n, order, 2) {
                    1
                } else {
                    2
                };
                out[idx].push(r);
            }
            out
        }
    };
    Ok(ResiduePartition { n, level, classes })
}

/// Every `x` in `G*_n` with `x^2 = b`, by exhaustive search.
pub fn brute_sqrt_oracle(b: ModStarResidue) -> Result<Vec<ModStarResidue>> {
    let n = b.modulus();
    if n > BRUTE_FORCE_BOUND {
        return Err(Error::LimitExceeded {
            limit: n,
            bound: BRUTE_FORCE_BOUND,
        });
    }
    Ok(modstar::group_elements(n)?
        .into_iter()
        .filter(|x| x.mul(x) == b)
        .collect())
}
