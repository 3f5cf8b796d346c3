//! Arithmetic functions and prime machinery.
//!
//! Everything here works on `u64` values. Modular products go through `u128`
//! so that moduli up to `2^64 - 1` are safe, which matters for the
//! Sophie Germain products formed by the density surveys (~10^14).
//!
//! Primality is decided by Miller-Rabin with the first twelve primes as
//! witnesses, which is deterministic for every 64-bit input.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default upper bound for [`primes_up_to`], in sieve positions.
pub const DEFAULT_SIEVE_BOUND: u64 = 100_000_000;

const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduce a signed value into `[0, m)`.
#[inline]
pub fn rem_euclid_u64(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from arbitrary prime powers, merging repeats.
    pub fn from_pairs(mut pairs: Vec<(u64, u32)>) -> Self {
        pairs.sort_unstable();
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            if e == 0 {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => merged.push((p, e)),
            }
        }
        Factorization { pairs: merged }
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The factored value, or `None` on overflow.
    pub fn value(&self) -> Option<u64> {
        self.pairs
            .iter()
            .try_fold(1u64, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }

    /// The prime powers `p^e`, in prime order.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, e)| p.pow(e))
    }

    pub fn euler_phi(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn carmichael_lambda(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, e)| prime_power_lambda(p, e))
            .fold(1, |acc, l| acc.lcm(&l))
    }

    pub fn moebius(&self) -> i8 {
        if self.pairs.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.pairs.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.pairs {
            let current = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..current {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

fn prime_power_lambda(p: u64, e: u32) -> u64 {
    let phi = (p - 1) * p.pow(e - 1);
    if p == 2 && e >= 3 {
        phi / 2
    } else {
        phi
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).euler_phi()
}

pub fn carmichael_lambda(n: u64) -> u64 {
    factorize(n).carmichael_lambda()
}

pub fn moebius(n: u64) -> i8 {
    factorize(n).moebius()
}

/// Complete prime factorization. `factorize(1)` is the empty factorization.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize: n must be positive");
    let mut pairs = Vec::new();
    let mut rest = n;
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    }
    // wheel 30 trial division up to a small bound, rho for what is left
    const TRIAL_BOUND: u64 = 1 << 12;
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut w = 0;
    while d <= TRIAL_BOUND && d * d <= rest {
        if rest % d == 0 {
            let mut e = 0;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            pairs.push((d, e));
        }
        d += WHEEL[w];
        w = (w + 1) % 8;
    }
    if rest > 1 {
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime(m) {
                pairs.push((m, 1));
                continue;
            }
            let f = pollard_brent(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    Factorization::from_pairs(pairs)
}

/// Finds a nontrivial factor of the odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let r = isqrt(n);
    if r * r == n {
        return r;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys, mut g);
        const BATCH: u64 = 128;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n && g != 1 {
            return g;
        }
        c += 1;
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Odd-only bitset of the primes in `[2, limit]`. Immutable once built.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    limit: u64,
    // bit i set iff 2i + 1 is prime
    bits: Vec<u64>,
}

/// Sieve all primes `<= x`, refusing limits above [`DEFAULT_SIEVE_BOUND`].
pub fn primes_up_to(x: u64) -> Result<PrimeSieve> {
    PrimeSieve::with_bound(x, DEFAULT_SIEVE_BOUND)
}

impl PrimeSieve {
    pub fn with_bound(limit: u64, bound: u64) -> Result<Self> {
        if limit > bound {
            return Err(Error::LimitExceeded { limit, bound });
        }
        if limit < 2 {
            return Err(Error::OutOfRange(format!("sieve limit {limit} < 2")));
        }
        let slots = limit / 2 + 1;
        let mut bits = vec![!0u64; slots.div_ceil(64) as usize];
        // 1 is not prime
        bits[0] &= !1;
        let mut i = 1u64;
        loop {
            let p = 2 * i + 1;
            if p * p > limit {
                break;
            }
            if bits[(i / 64) as usize] >> (i % 64) & 1 == 1 {
                let mut j = p * p / 2;
                while j < slots {
                    bits[(j / 64) as usize] &= !(1 << (j % 64));
                    j += p;
                }
            }
            i += 1;
        }
        // clear the tail beyond limit
        for j in slots..(bits.len() as u64 * 64) {
            bits[(j / 64) as usize] &= !(1 << (j % 64));
        }
        if limit % 2 == 0 && slots > 0 {
            // slot limit/2 stands for limit + 1, which is outside the range
            let j = limit / 2;
            bits[(j / 64) as usize] &= !(1 << (j % 64));
        }
        Ok(PrimeSieve { limit, bits })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Constant-time membership; values past the limit are reported as not prime.
    pub fn is_prime(&self, n: u64) -> bool {
        if n == 2 {
            return true;
        }
        if n < 2 || n % 2 == 0 || n > self.limit {
            return false;
        }
        let i = n / 2;
        self.bits[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let two = (self.limit >= 2).then_some(2);
        two.into_iter()
            .chain(self.bits.iter().enumerate().flat_map(|(w, &word)| {
                let mut word = word;
                std::iter::from_fn(move || {
                    if word == 0 {
                        return None;
                    }
                    let b = word.trailing_zeros() as u64;
                    word &= word - 1;
                    Some(2 * (w as u64 * 64 + b) + 1)
                })
            }))
    }

    pub fn count(&self) -> usize {
        self.bits
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
            + usize::from(self.limit >= 2)
    }
}
