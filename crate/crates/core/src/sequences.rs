//! Schick's cyclic sequences and their generalization to an arbitrary base.
//!
//! The absolute sequence `q_1 = 1, q_i = |n - 2 q_(i-1)|` runs through the
//! canonical representatives of the powers of 2 in `G*_n`, so its period is
//! the order of 2 there (`pes(n)`). For a base `g` the same holds with the
//! absolute-value fold applied `g - 1` times per step.

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::modstar::{self, fold};

/// Which power of the base the first emitted term corresponds to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum StartIndex {
    /// First term is `g^0 = 1`, as in Schick's `q_1 = 1`.
    #[default]
    Zero,
    /// First term is `g^1`.
    One,
}

impl StartIndex {
    pub fn exponent(self) -> u64 {
        match self {
            StartIndex::Zero => 0,
            StartIndex::One => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchickSequence {
    pub n: u64,
    pub g: u64,
    pub start_index: StartIndex,
    /// Signed terms; only defined for base 2.
    pub signed_terms: Option<Vec<i64>>,
    pub absolute_terms: Vec<u64>,
    pub period: u64,
}

impl SchickSequence {
    /// Both of Schick's base-2 sequences, `count` terms each.
    pub fn schick(n: u64, count: usize) -> Result<Self> {
        Ok(SchickSequence {
            n,
            g: 2,
            start_index: StartIndex::Zero,
            signed_terms: Some(schick_signed(n, count)?),
            absolute_terms: schick_absolute(n, count)?,
            period: pes(n)?,
        })
    }

    pub fn generalized(n: u64, g: u64, count: usize, start: StartIndex) -> Result<Self> {
        let absolute_terms = generalized_sequence(n, g, count, start)?;
        let period = modstar::canonical_repr(g as i128, n)?.order();
        let signed_terms = if g == 2 && start == StartIndex::Zero {
            Some(schick_signed(n, count)?)
        } else {
            None
        };
        Ok(SchickSequence {
            n,
            g,
            start_index: start,
            signed_terms,
            absolute_terms,
            period,
        })
    }
}

fn check_odd(n: u64) -> Result<()> {
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    if n < 3 {
        return Err(Error::ModulusTooSmall(n));
    }
    Ok(())
}

fn check_base(n: u64, g: u64) -> Result<()> {
    check_odd(n)?;
    if g == 0 || g >= n {
        return Err(Error::OutOfRange(format!(
            "base {g} must satisfy 0 < g < {n}"
        )));
    }
    if g.gcd(&n) != 1 {
        return Err(Error::NotCoprime {
            value: g as i128,
            modulus: n,
        });
    }
    Ok(())
}

/// `q_1 = (-1)^((n+1)/2)`, `q_i = n - 2|q_(i-1)|`.
pub fn schick_signed(n: u64, count: usize) -> Result<Vec<i64>> {
    check_odd(n)?;
    let n = n as i64;
    let first = if ((n + 1) / 2) % 2 == 0 { 1 } else { -1 };
    Ok(
        std::iter::successors(Some(first), |q: &i64| Some(n - 2 * q.abs()))
            .take(count)
            .collect(),
    )
}

/// `q_1 = 1`, `q_i = |n - 2 q_(i-1)|`.
pub fn schick_absolute(n: u64, count: usize) -> Result<Vec<u64>> {
    check_odd(n)?;
    Ok(
        std::iter::successors(Some(1u64), |&q| Some(n.abs_diff(2 * q)))
            .take(count)
            .collect(),
    )
}

/// The `i`-th power of `g` in `G*_n`, as a canonical representative.
pub fn generalized_term(n: u64, g: u64, i: u64) -> Result<u64> {
    check_base(n, g)?;
    Ok(fold(pow_mod(g, i, n), n))
}

/// Terms `R(g^i)` for `count` consecutive exponents starting at `start`.
pub fn generalized_sequence(n: u64, g: u64, count: usize, start: StartIndex) -> Result<Vec<u64>> {
    check_base(n, g)?;
    let first = fold(pow_mod(g, start.exponent(), n), n);
    Ok(
        std::iter::successors(Some(first), |&q| Some(fold(mul_mod(q, g, n), n)))
            .take(count)
            .collect(),
    )
}

/// The same sequence by the literal recurrence
/// `q_(i+1) = |n - |n - ... |n - g q_i| ... ||` with `g - 1` absolute values.
pub fn nested_absolute_sequence(
    n: u64,
    g: u64,
    count: usize,
    start: StartIndex,
) -> Result<Vec<u64>> {
    check_base(n, g)?;
    let step = |q: u64| {
        let mut x = g as u128 * q as u128;
        for _ in 0..g - 1 {
            x = (n as u128).abs_diff(x);
        }
        x as u64
    };
    let mut q = 1u64;
    if start == StartIndex::One {
        q = step(q);
    }
    Ok(std::iter::successors(Some(q), |&q| Some(step(q)))
        .take(count)
        .collect())
}

/// Period of Schick's sequences: the order of 2 in `G*_n`.
pub fn pes(n: u64) -> Result<u64> {
    check_odd(n)?;
    Ok(modstar::canonical_repr(2, n)?.order())
}
