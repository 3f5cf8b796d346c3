//! Chord polynomials and their relation to cyclotomic polynomials.
//!
//! With `s = x + 1/x`:
//!
//! * `S_k(s) = x^k + x^-k`, so `S_0 = 2`, `S_1 = s`, `S_k = s S_(k-1) - S_(k-2)`;
//! * `P_m(s) = 1 + S_1 + ... + S_m`, whose roots are `2cos(2 pi k / (2m+1))`;
//! * `Psi_n(s)`, the minimal polynomial of `2cos(2 pi / n)` for odd `n`,
//!   obtained from the `P_m` by Moebius inversion over the divisors of `n`.
//!
//! `Phi_n(x) = x^(phi(n)/2) Psi_n(x + 1/x)` links the last one to the
//! cyclotomic polynomials.

mod chords;
mod diagram;

pub use chords::{
    chord_index_from_k, chord_multi_product, chord_product, chord_value, gauss_sum_check,
    representative_set, ChordIndex, Numbering,
};
pub use diagram::{emit_chord_diagram, render_chord_diagram};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// `S_k`, by the three-term recurrence.
pub fn s_poly(k: usize) -> IntPolynomial {
    let s = IntPolynomial::x();
    let mut prev = IntPolynomial::constant(2);
    if k == 0 {
        return prev;
    }
    let mut cur = s.clone();
    for _ in 1..k {
        let next = &(&s * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_m`, by the recurrence `P_m = s P_(m-1) - P_(m-2)`.
pub fn p_poly(m: usize) -> IntPolynomial {
    let s = IntPolynomial::x();
    let mut prev = IntPolynomial::one();
    if m == 0 {
        return prev;
    }
    let mut cur = IntPolynomial::from_i64(&[1, 1]);
    for _ in 1..m {
        let next = &(&s * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_m = 1 + S_1 + ... + S_m`, summed directly.
pub fn p_poly_sum(m: usize) -> IntPolynomial {
    (1..=m).fold(IntPolynomial::one(), |acc, k| &acc + &s_poly(k))
}

/// `P_m` coefficient-wise: the coefficient of `s^k` is
/// `(-1)^i C(i + k, k)` with `i = floor((m - k) / 2)`.
pub fn p_poly_explicit(m: usize) -> IntPolynomial {
    let coeffs = (0..=m)
        .map(|k| {
            let i = (m - k) / 2;
            let c = binomial(i + k, k);
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    IntPolynomial::from_coeffs(coeffs)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn check_odd_modulus(n: u64) -> Result<()> {
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    if n < 3 {
        return Err(Error::ModulusTooSmall(n));
    }
    Ok(())
}

/// Product of the `mu(n/d) = +1` factors and of the `mu(n/d) = -1` factors.
fn moebius_split<F>(n: u64, factor: F) -> (IntPolynomial, IntPolynomial)
where
    F: Fn(u64) -> IntPolynomial,
{
    let mut num = IntPolynomial::one();
    let mut den = IntPolynomial::one();
    for d in factorize(n).divisors() {
        match factorize(n / d).moebius() {
            1 => num = &num * &factor(d),
            -1 => den = &den * &factor(d),
            _ => {}
        }
    }
    (num, den)
}

/// `Psi_n = prod_(d | n) P_((d-1)/2)^mu(n/d)` by exact division.
pub fn psi_poly(n: u64) -> Result<IntPolynomial> {
    check_odd_modulus(n)?;
    let (num, den) = moebius_split(n, |d| p_poly(((d - 1) / 2) as usize));
    let psi = num
        .exact_div(&den)
        .ok_or_else(|| Error::Consistency(format!("Psi_{n}: division left a remainder")))?;
    let expected = factorize(n).euler_phi() / 2;
    if psi.degree() != Some(expected as usize) {
        return Err(Error::Consistency(format!(
            "Psi_{n}: degree {:?}, expected {expected}",
            psi.degree()
        )));
    }
    Ok(psi)
}

/// `Phi_n = prod_(d | n) (x^d - 1)^mu(n/d)` by exact division.
pub fn cyclotomic_poly(n: u64) -> IntPolynomial {
    assert!(n >= 1, "cyclotomic_poly: n must be positive");
    let (num, den) = moebius_split(n, |d| {
        &IntPolynomial::monomial(1, d as usize) - &IntPolynomial::one()
    });
    num.exact_div(&den)
        .expect("x^n - 1 is divisible by the Moebius denominator")
}

/// `x^deg(Psi_n) * Psi_n(x + 1/x)` expanded as a polynomial in `x`.
pub fn psi_to_cyclotomic(n: u64) -> Result<IntPolynomial> {
    let psi = psi_poly(n)?;
    let deg = psi.degree().unwrap_or(0);
    // x^deg (x + 1/x)^k = (x^2 + 1)^k x^(deg - k)
    let x2_plus_1 = IntPolynomial::from_i64(&[1, 0, 1]);
    let mut power = IntPolynomial::one();
    let mut out = IntPolynomial::zero();
    for (k, c) in psi.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out = &out + &power.scale(c).shift(deg - k);
        }
        power = &power * &x2_plus_1;
    }
    Ok(out)
}

/// `S_k(s)` in double precision via the recurrence; stable on `[-2, 2]`.
pub fn s_value(k: usize, s: f64) -> f64 {
    let (mut prev, mut cur) = (2.0, s);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = s * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `S_k(s) = ((s + sqrt(s^2 - 4))^k + (s - sqrt(s^2 - 4))^k) / 2^k`.
pub fn s_value_surd(k: usize, s: f64) -> f64 {
    let root = Complex64::new(s * s - 4.0, 0.0).sqrt();
    let a = (Complex64::new(s, 0.0) + root).powi(k as i32);
    let b = (Complex64::new(s, 0.0) - root).powi(k as i32);
    ((a + b) / 2f64.powi(k as i32)).re
}

/// Largest index accepted by [`orthogonality_check`].
pub const ORTHOGONALITY_MAX_INDEX: usize = 50;

/// `int_(-2)^2 S_k(s) S_l(s) / sqrt(4 - s^2) ds` by Gauss-Chebyshev
/// quadrature, exact for the polynomial degrees allowed here.
pub fn orthogonality_check(k: usize, l: usize) -> Result<f64> {
    if k > ORTHOGONALITY_MAX_INDEX || l > ORTHOGONALITY_MAX_INDEX {
        return Err(Error::OutOfRange(format!(
            "orthogonality indices must be <= {ORTHOGONALITY_MAX_INDEX}"
        )));
    }
    // nodes 2cos((2i-1) pi / 2N); exact up to degree 2N - 1
    const NODES: usize = ORTHOGONALITY_MAX_INDEX + 1;
    let h = std::f64::consts::PI / NODES as f64;
    let sum: f64 = (1..=NODES)
        .map(|i| {
            let s = 2.0 * ((2 * i - 1) as f64 * h / 2.0).cos();
            s_value(k, s) * s_value(l, s)
        })
        .sum();
    Ok(sum * h)
}

/// `a + b sqrt(13)` with rational parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Surd13 {
    a: Ratio<i64>,
    b: Ratio<i64>,
}

impl Surd13 {
    fn rational(a: i64) -> Self {
        Surd13 {
            a: Ratio::from_integer(a),
            b: Ratio::zero(),
        }
    }

    fn add(self, o: Self) -> Self {
        Surd13 {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }

    fn mul(self, o: Self) -> Self {
        Surd13 {
            a: self.a * o.a + self.b * o.b * 13,
            b: self.a * o.b + self.b * o.a,
        }
    }

    fn value(self) -> f64 {
        let f = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
        f(self.a) + f(self.b) * 13f64.sqrt()
    }
}

/// Verifies the splitting of `P_6` over `Q(sqrt 13)`:
/// `P_6 = (s^3 + c1 s^2 - s - 1 - c1)(s^3 + c2 s^2 - s - 1 - c2)` with
/// `c1,2 = (1 -+ sqrt 13) / 2`, exactly in the surd arithmetic and
/// numerically on the chords of `n = 13`.
pub fn p6_factorization_check() -> bool {
    let half = Ratio::new(1, 2);
    let c1 = Surd13 { a: half, b: -half };
    let c2 = Surd13 { a: half, b: half };
    let cubic = |c: Surd13| {
        vec![
            Surd13::rational(-1).add(Surd13 { a: -c.a, b: -c.b }),
            Surd13::rational(-1),
            c,
            Surd13::rational(1),
        ]
    };
    let (f1, f2) = (cubic(c1), cubic(c2));
    let mut prod = vec![Surd13::rational(0); 7];
    for (i, a) in f1.iter().enumerate() {
        for (j, b) in f2.iter().enumerate() {
            prod[i + j] = prod[i + j].add(a.mul(*b));
        }
    }
    let p6 = p_poly(6);
    let exact = prod.iter().enumerate().all(|(k, c)| {
        c.b.is_zero() && c.a.is_integer() && BigInt::from(c.a.to_integer()) == p6.coeff(k)
    });
    let vieta = c1.add(c2) == Surd13::rational(1) && c1.mul(c2) == Surd13::rational(-3);

    // numeric side: the roots of each cubic are the chords sigma_1, sigma_3,
    // sigma_9 and sigma_5, sigma_7, sigma_11 of n = 13
    let eval = |f: &[Surd13], s: f64| f.iter().rev().fold(0.0, |acc, c| acc * s + c.value());
    let sigma = |j: u64| chord_value(ChordIndex::new(13, j, Numbering::Odd).unwrap());
    let roots_ok = [1, 3, 9].iter().all(|&j| eval(&f1, sigma(j)).abs() < 1e-10)
        && [5, 7, 11]
            .iter()
            .all(|&j| eval(&f2, sigma(j)).abs() < 1e-10);
    let samples_ok = (0..=40).all(|i| {
        let s = -2.5 + 0.125 * i as f64;
        (eval(&f1, s) * eval(&f2, s) - p6.eval_f64(s)).abs() < 1e-10 * (1.0 + p6.eval_f64(s).abs())
    });
    exact && vieta && roots_ok && samples_ok
}
