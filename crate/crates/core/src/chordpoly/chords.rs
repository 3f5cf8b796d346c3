use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

use super::check_odd_modulus;

/// Which representative set of chord indices is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Numbering {
    /// `j in {1, 3, ..., n - 2}`, plus `n` for the diameter.
    Odd,
    /// `j in {0, 2, ..., n - 1}`.
    Even,
    /// `j in {0, 1, ..., (n - 1) / 2}`.
    Mixed,
}

/// Index `j` of the chord `sigma_j` of the regular `2n`-gon, odd `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub struct ChordIndex {
    n: u64,
    j: u64,
    numbering: Numbering,
}

impl ChordIndex {
    pub fn new(n: u64, j: u64, numbering: Numbering) -> Result<Self> {
        check_odd_modulus(n)?;
        let ok = match numbering {
            Numbering::Odd => j % 2 == 1 && j <= n,
            Numbering::Even => j % 2 == 0 && j < n,
            Numbering::Mixed => j <= (n - 1) / 2,
        };
        if !ok {
            return Err(Error::OutOfRange(format!(
                "chord index {j} is not in the {numbering:?} set for n = {n}"
            )));
        }
        Ok(ChordIndex { n, j, numbering })
    }

    /// Reduces an arbitrary integer index to the representative of its
    /// mod-star class in the given numbering. Multiples of `n` map to the
    /// diameter (`0`, or `n` in the odd numbering).
    pub fn reduce(n: u64, j: i128, numbering: Numbering) -> Result<Self> {
        check_odd_modulus(n)?;
        let r = j.rem_euclid(n as i128) as u64;
        let j = if r == 0 {
            match numbering {
                Numbering::Odd => n,
                _ => 0,
            }
        } else {
            let (lo, hi) = (r.min(n - r), r.max(n - r));
            match numbering {
                // n odd, so exactly one of r, n - r is odd
                Numbering::Odd => {
                    if lo % 2 == 1 {
                        lo
                    } else {
                        hi
                    }
                }
                Numbering::Even => {
                    if lo % 2 == 0 {
                        lo
                    } else {
                        hi
                    }
                }
                Numbering::Mixed => lo,
            }
        };
        Ok(ChordIndex { n, j, numbering })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn numbering(&self) -> Numbering {
        self.numbering
    }

    pub fn is_diameter(&self) -> bool {
        self.j % self.n == 0
    }

    pub fn value(&self) -> f64 {
        chord_value(*self)
    }
}

/// Signed chord length: `(-1)^((n-j)/2) 2 sin(pi j / 2n)` for odd `j`,
/// `(-1)^(j/2) 2 cos(pi j / 2n)` for even `j`.
pub fn chord_value(c: ChordIndex) -> f64 {
    let (n, j) = (c.n, c.j);
    let angle = PI * j as f64 / (2 * n) as f64;
    if j % 2 == 1 {
        let sign = if ((n - j) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sign * 2.0 * angle.sin()
    } else {
        let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sign * 2.0 * angle.cos()
    }
}

/// Chord index of `2cos(2 pi k / n)`: `j = |n - 4k|` (odd numbering) or
/// `n - |n - 4k|` (even numbering), reduced into the chosen set.
pub fn chord_index_from_k(k: u64, n: u64, numbering: Numbering) -> Result<ChordIndex> {
    check_odd_modulus(n)?;
    if k == 0 || k >= n {
        return Err(Error::OutOfRange(format!(
            "k = {k} must satisfy 1 <= k < {n}"
        )));
    }
    let odd = (n as i128 - 4 * k as i128).abs();
    let raw = match numbering {
        Numbering::Even => n as i128 - odd,
        _ => odd,
    };
    ChordIndex::reduce(n, raw, numbering)
}

/// The `(n - 1) / 2` chords making up a complete representative set.
pub fn representative_set(n: u64, numbering: Numbering) -> Result<Vec<ChordIndex>> {
    check_odd_modulus(n)?;
    let js: Vec<u64> = match numbering {
        Numbering::Odd => (1..n).step_by(2).collect(),
        Numbering::Even => (2..n).step_by(2).collect(),
        Numbering::Mixed => (1..=(n - 1) / 2).collect(),
    };
    Ok(js
        .into_iter()
        .map(|j| ChordIndex { n, j, numbering })
        .collect())
}

/// `sigma_i sigma_j = sigma_(i+j) + sigma_(i-j)`, indices reduced mod-star;
/// returns the two summands.
pub fn chord_product(i: ChordIndex, j: ChordIndex) -> Result<(ChordIndex, ChordIndex)> {
    if i.n != j.n {
        return Err(Error::ModulusMismatch(i.n, j.n));
    }
    let (a, b) = (i.j as i128, j.j as i128);
    Ok((
        ChordIndex::reduce(i.n, a + b, i.numbering)?,
        ChordIndex::reduce(i.n, a - b, i.numbering)?,
    ))
}

/// Largest number of factors accepted by [`chord_multi_product`].
pub const MULTI_PRODUCT_MAX: usize = 24;

/// `prod sigma_(j_k) = sum over the 2^(m-1) indices j_1 +- j_2 +- ... +- j_m`,
/// each reduced mod-star. The summands come back sorted.
pub fn chord_multi_product(indices: &[ChordIndex]) -> Result<Vec<ChordIndex>> {
    let Some(first) = indices.first() else {
        return Err(Error::OutOfRange("empty chord product".into()));
    };
    if indices.len() > MULTI_PRODUCT_MAX {
        return Err(Error::OutOfRange(format!(
            "at most {MULTI_PRODUCT_MAX} chords per product"
        )));
    }
    if let Some(bad) = indices.iter().find(|c| c.n != first.n) {
        return Err(Error::ModulusMismatch(first.n, bad.n));
    }
    let rest = &indices[1..];
    let mut out = Vec::with_capacity(1 << rest.len());
    for mask in 0u32..(1 << rest.len()) {
        let total = rest
            .iter()
            .enumerate()
            .fold(first.j as i128, |acc, (b, c)| {
                if mask >> b & 1 == 1 {
                    acc - c.j as i128
                } else {
                    acc + c.j as i128
                }
            });
        out.push(ChordIndex::reduce(first.n, total, first.numbering)?);
    }
    out.sort();
    Ok(out)
}

/// Sum of a full representative set of chords, rounded to the nearest
/// integer. Always `-1` for odd `n`.
pub fn gauss_sum_check(n: u64) -> Result<i64> {
    let total: f64 = representative_set(n, Numbering::Odd)?
        .into_iter()
        .map(chord_value)
        .sum();
    let rounded = total.round();
    if (total - rounded).abs() > 1e-9 {
        return Err(Error::Consistency(format!(
            "chord sum for n = {n} is {total}, not an integer"
        )));
    }
    Ok(rounded as i64)
}
