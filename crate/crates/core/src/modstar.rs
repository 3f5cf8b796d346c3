//! The mod-star congruence and its unit group `G*_n`.
//!
//! Two integers coprime to `n` are congruent mod-star when `n | a - b` or
//! `n | a + b`, so every class of `(Z/nZ)^x` is merged with its negative and
//! `|G*_n| = phi(n) / 2`. Classes are represented by the odd member of
//! `{a mod n, n - a mod n}` when `n` is odd and by the member below `n / 2`
//! when `n` is even.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::arith::{self, factorize, mul_mod, pow_mod, Factorization};
use crate::error::{Error, Result};

/// Upper bound on `n` for the exhaustive primitive-root ratio count.
pub const RATIO_SEARCH_BOUND: u64 = 100_000;

/// A canonical representative of a mod-star class together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModStarResidue {
    n: u64,
    repr: u64,
}

impl ModStarResidue {
    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn repr(&self) -> u64 {
        self.repr
    }

    pub fn one(n: u64) -> Result<Self> {
        check_modulus(n)?;
        Ok(ModStarResidue { n, repr: 1 })
    }

    /// `self^e`, reduced to the canonical representative.
    pub fn pow(&self, e: u64) -> Self {
        ModStarResidue {
            n: self.n,
            repr: fold(pow_mod(self.repr, e, self.n), self.n),
        }
    }

    /// Product of two classes; panics on mismatched moduli (see [`mul_star`]).
    pub fn mul(&self, other: &Self) -> Self {
        mul_star(*self, *other).expect("mod-star product of different moduli")
    }

    pub fn order(&self) -> u64 {
        element_order(*self)
    }
}

impl fmt::Display for ModStarResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod* {})", self.repr, self.n)
    }
}

fn check_modulus(n: u64) -> Result<()> {
    if n < 3 {
        Err(Error::ModulusTooSmall(n))
    } else {
        Ok(())
    }
}

/// Canonical member of `{r, n - r}` for a residue `r` in `[1, n)`.
#[inline]
pub(crate) fn fold(r: u64, n: u64) -> u64 {
    let keep = if n % 2 == 1 { r % 2 == 1 } else { 2 * r < n };
    if keep {
        r
    } else {
        n - r
    }
}

/// True when `x` (already reduced mod `n`) is `1` or `n - 1`.
#[inline]
pub(crate) fn is_plus_minus_one(x: u64, n: u64) -> bool {
    x == 1 || x == n - 1
}

pub fn canonical_repr(a: i128, n: u64) -> Result<ModStarResidue> {
    check_modulus(n)?;
    let r = arith::rem_euclid_u64(a, n);
    if r.gcd(&n) != 1 {
        return Err(Error::NotCoprime {
            value: a,
            modulus: n,
        });
    }
    Ok(ModStarResidue {
        n,
        repr: fold(r, n),
    })
}

pub fn congruent_star(a: i128, b: i128, n: u64) -> Result<bool> {
    let ra = canonical_repr(a, n)?;
    let rb = canonical_repr(b, n)?;
    Ok(ra == rb)
}

pub fn mul_star(a: ModStarResidue, b: ModStarResidue) -> Result<ModStarResidue> {
    if a.n != b.n {
        return Err(Error::ModulusMismatch(a.n, b.n));
    }
    Ok(ModStarResidue {
        n: a.n,
        repr: fold(mul_mod(a.repr, b.repr, a.n), a.n),
    })
}

/// `|G*_n| = phi(n) / 2`.
pub fn group_order(n: u64) -> Result<u64> {
    check_modulus(n)?;
    Ok(arith::euler_phi(n) / 2)
}

/// All canonical representatives of `G*_n`, ascending.
pub fn group_elements(n: u64) -> Result<Vec<ModStarResidue>> {
    check_modulus(n)?;
    let coprime = |r: &u64| r.gcd(&n) == 1;
    let elements = if n % 2 == 1 {
        (1..n).step_by(2).filter(coprime).collect::<Vec<_>>()
    } else {
        (1..n.div_ceil(2)).filter(coprime).collect::<Vec<_>>()
    };
    Ok(elements
        .into_iter()
        .map(|repr| ModStarResidue { n, repr })
        .collect())
}

/// Order of `a` in `G*_n`: the least `t` with `a^t = +-1 (mod n)`.
///
/// Descends from `lambda(n)` one prime factor at a time; `{t : a^t = +-1}` is
/// the set of multiples of the order, so the descent ends exactly there.
pub fn element_order(a: ModStarResidue) -> u64 {
    let f = factorize(a.n);
    let lambda = f.carmichael_lambda();
    order_star_with(a.repr, a.n, lambda, &factorize(lambda))
}

/// Order of `a` in `G*_n` given an exponent `e` with `a^e = +-1` and the
/// factorization of `e`.
pub fn order_star_with(a: u64, n: u64, exponent: u64, exponent_factors: &Factorization) -> u64 {
    let mut t = exponent;
    for &(q, _) in exponent_factors.pairs() {
        while t % q == 0 && is_plus_minus_one(pow_mod(a, t / q, n), n) {
            t /= q;
        }
    }
    t
}

/// Multiplicative order of `a` modulo `n` in the ordinary unit group.
pub fn order_mod_with(a: u64, n: u64, exponent: u64, exponent_factors: &Factorization) -> u64 {
    let mut t = exponent;
    for &(q, _) in exponent_factors.pairs() {
        while t % q == 0 && pow_mod(a, t / q, n) == 1 {
            t /= q;
        }
    }
    t
}

/// `j(n) = phi(n) / lambda(n)`, for odd `n >= 3`.
pub fn j_invariant(n: u64) -> Result<u64> {
    check_modulus(n)?;
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    let f = factorize(n);
    Ok(f.euler_phi() / f.carmichael_lambda())
}

/// Structural summary of `G*_n` for odd `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupStarSummary {
    pub n: u64,
    pub order: u64,
    pub j: u64,
    pub lambda: u64,
    pub cyclic: bool,
    pub cyclic_semiprime: bool,
    pub primitive_root_count: u64,
    pub smallest_primitive_root: Option<u64>,
}

/// For `n = 2m` with `m` odd, `G*_n` is isomorphic to `G*_m`; returns `m`.
pub fn odd_reduction(n: u64) -> Option<u64> {
    (n % 4 == 2 && n / 2 >= 3).then_some(n / 2)
}

fn cyclic_semiprime_shape(f: &Factorization) -> bool {
    if f.len() != 2 || f.primes().any(|p| p == 2) {
        return false;
    }
    let mut pp = f.pairs().iter().map(|&(p, e)| (p - 1) * p.pow(e - 1));
    let (a, b) = (pp.next().unwrap(), pp.next().unwrap());
    a.gcd(&b) == 2
}

/// Classifies `G*_n` for odd `n >= 3`.
///
/// `G*_n` is cyclic exactly when `n = p^a`, or `n = p^a q^b` with
/// `gcd(phi(p^a), phi(q^b)) = 2`. Even moduli are rejected with
/// [`Error::NotClassified`]; see [`odd_reduction`].
pub fn classify(n: u64) -> Result<GroupStarSummary> {
    check_modulus(n)?;
    if n % 2 == 0 {
        return Err(Error::NotClassified(n));
    }
    let f = factorize(n);
    let phi = f.euler_phi();
    let lambda = f.carmichael_lambda();
    let order = phi / 2;
    let cyclic_semiprime = cyclic_semiprime_shape(&f);
    let cyclic = f.len() == 1 || cyclic_semiprime;
    let (primitive_root_count, smallest_primitive_root) = if cyclic {
        let lambda_factors = factorize(lambda);
        let smallest = (1..n)
            .step_by(2)
            .filter(|r| r.gcd(&n) == 1)
            .find(|&r| order_star_with(r, n, lambda, &lambda_factors) == order);
        (arith::euler_phi(order), smallest)
    } else {
        (0, None)
    };
    Ok(GroupStarSummary {
        n,
        order,
        j: phi / lambda,
        lambda,
        cyclic,
        cyclic_semiprime,
        primitive_root_count,
        smallest_primitive_root,
    })
}

/// Read-mostly memo table in front of [`classify`].
#[derive(Debug, Default)]
pub struct ClassifyCache {
    table: RwLock<HashMap<u64, GroupStarSummary>>,
}

impl ClassifyCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn classify(&self, n: u64) -> Result<GroupStarSummary> {
        if let Some(hit) = self.table.read().unwrap().get(&n) {
            return Ok(hit.clone());
        }
        let summary = classify(n)?;
        self.table
            .write()
            .unwrap()
            .entry(n)
            .or_insert_with(|| summary.clone());
        Ok(summary)
    }

    pub fn len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// All generators of `G*_n`, ascending. Fails for non-cyclic `n`.
pub fn primitive_roots_star(n: u64) -> Result<Vec<ModStarResidue>> {
    let summary = classify(n)?;
    if !summary.cyclic {
        return Err(Error::NotCyclic(n));
    }
    let lambda_factors = factorize(summary.lambda);
    let roots: Vec<_> = group_elements(n)?
        .into_iter()
        .filter(|g| order_star_with(g.repr, n, summary.lambda, &lambda_factors) == summary.order)
        .collect();
    if roots.len() as u64 != summary.primitive_root_count {
        return Err(Error::Consistency(format!(
            "n = {n}: found {} primitive roots, expected {}",
            roots.len(),
            summary.primitive_root_count
        )));
    }
    Ok(roots)
}

/// `(j(n), lambda(n))` with `G_n = C_j x C_lambda`, for odd `n = p^a q^b`.
pub fn decomposition_two_factors(n: u64) -> Result<(u64, u64)> {
    let f = factorize(n.max(1));
    if n % 2 == 0 || f.len() != 2 {
        return Err(Error::WrongShape {
            n,
            expected: "odd n with exactly two distinct prime factors",
        });
    }
    let lambda = f.carmichael_lambda();
    Ok((f.euler_phi() / lambda, lambda))
}

/// For `n = p1^a1 p2^a2` (`p1 < p2`) with `p1^k || p2 - 1`, `1 <= k < a1`
/// and `j(n) = 2 p1^k`, the modulus `m = p1^(a1-k) p2^a2`, provided `G*_m`
/// is cyclic of order `lambda(n)`.
pub fn unique_cyclic_submodulus(n: u64) -> Option<u64> {
    if n % 2 == 0 || n < 3 {
        return None;
    }
    let f = factorize(n);
    if f.len() != 2 {
        return None;
    }
    let [(p1, a1), (p2, a2)] = [f.pairs()[0], f.pairs()[1]];
    let mut k = 0u32;
    let mut rest = p2 - 1;
    while rest % p1 == 0 {
        rest /= p1;
        k += 1;
    }
    if k < 1 || k >= a1 {
        return None;
    }
    let j = f.euler_phi() / f.carmichael_lambda();
    if j != 2 * p1.pow(k) {
        return None;
    }
    let m = p1.pow(a1 - k) * p2.pow(a2);
    let sub = classify(m).ok()?;
    (sub.cyclic && sub.order == f.carmichael_lambda()).then_some(m)
}

/// Ratio of generalized primitive roots (elements of order `lambda(n)`)
/// mod `n` to those mod-star `n`, by exhaustive counting.
///
/// Returns `Ok(None)` when no class of `G*_n` reaches order `lambda(n)`.
pub fn generalized_pr_ratio(n: u64) -> Result<Option<Ratio<u64>>> {
    check_modulus(n)?;
    if n > RATIO_SEARCH_BOUND {
        return Err(Error::LimitExceeded {
            limit: n,
            bound: RATIO_SEARCH_BOUND,
        });
    }
    if arith::is_prime(n) {
        return Err(Error::WrongShape {
            n,
            expected: "a composite modulus",
        });
    }
    let lambda = arith::carmichael_lambda(n);
    if lambda < 2 {
        return Err(Error::WrongShape {
            n,
            expected: "lambda(n) >= 2",
        });
    }
    let lf = factorize(lambda);
    let standard = (1..n)
        .filter(|a| a.gcd(&n) == 1)
        .filter(|&a| order_mod_with(a, n, lambda, &lf) == lambda)
        .count() as u64;
    let star = group_elements(n)?
        .into_iter()
        .filter(|g| order_star_with(g.repr, n, lambda, &lf) == lambda)
        .count() as u64;
    Ok((star > 0).then(|| Ratio::new(standard, star)))
}

/// The closed form for the same ratio, reading the second case as the mixed
/// number `2 + 1/(2^(l-1) - 1)` where `l` is the number of distinct primes.
pub fn generalized_pr_ratio_closed_form(n: u64) -> Option<Ratio<u64>> {
    let f = factorize(n.max(1));
    let lambda = f.carmichael_lambda();
    if lambda < 2 {
        return None;
    }
    if (lambda / 2) % 2 == 0 {
        return Some(Ratio::from_integer(2));
    }
    let l = f.len() as u32;
    if l < 2 {
        return None;
    }
    let d = (1u64 << (l - 1)) - 1;
    Some(Ratio::from_integer(2) + Ratio::new(1, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reprs(v: &[ModStarResidue]) -> Vec<u64> {
        v.iter().map(|r| r.repr()).collect()
    }

    fn brute_order(a: ModStarResidue) -> u64 {
        let n = a.modulus();
        let mut x = a.repr() % n;
        let mut t = 1;
        while !is_plus_minus_one(x, n) {
            x = mul_mod(x, a.repr(), n);
            t += 1;
        }
        t
    }

    #[test]
    fn canonical_repr_examples() {
        assert_eq!(canonical_repr(2, 9).unwrap().repr(), 7);
        assert_eq!(canonical_repr(-1, 9).unwrap().repr(), 1);
        assert_eq!(canonical_repr(11, 9).unwrap().repr(), 7);
        assert_eq!(canonical_repr(7, 10).unwrap().repr(), 3);
        assert_eq!(canonical_repr(1, 4).unwrap().repr(), 1);
        assert_eq!(canonical_repr(3, 4).unwrap().repr(), 1);
    }

    #[test]
    fn canonical_repr_errors() {
        assert!(matches!(
            canonical_repr(3, 9),
            Err(Error::NotCoprime { .. })
        ));
        assert!(matches!(
            canonical_repr(1, 2),
            Err(Error::ModulusTooSmall(2))
        ));
        assert!(matches!(
            canonical_repr(1, 1),
            Err(Error::ModulusTooSmall(1))
        ));
    }

    #[test]
    fn congruence_examples() {
        assert!(congruent_star(2, 7, 9).unwrap());
        assert!(congruent_star(4, 4, 9).unwrap());
        assert!(!congruent_star(1, 5, 9).unwrap());
        assert!(congruent_star(2, 3, 9).is_err());
    }

    #[test]
    fn mul_examples() {
        let r = |a| canonical_repr(a, 9).unwrap();
        assert_eq!(mul_star(r(5), r(7)).unwrap().repr(), 1);
        assert_eq!(mul_star(r(1), r(7)).unwrap().repr(), 7);
        assert_eq!(mul_star(r(5), r(5)).unwrap().repr(), 7);
        let other = canonical_repr(1, 7).unwrap();
        assert!(matches!(
            mul_star(r(5), other),
            Err(Error::ModulusMismatch(9, 7))
        ));
    }

    #[test]
    fn elements_examples() {
        assert_eq!(reprs(&group_elements(9).unwrap()), vec![1, 5, 7]);
        assert_eq!(reprs(&group_elements(3).unwrap()), vec![1]);
        assert_eq!(reprs(&group_elements(7).unwrap()), vec![1, 3, 5]);
        assert_eq!(reprs(&group_elements(10).unwrap()), vec![1, 3]);
    }

    #[test]
    fn order_examples() {
        assert_eq!(element_order(canonical_repr(2, 7).unwrap()), 3);
        assert_eq!(element_order(canonical_repr(1, 101).unwrap()), 1);
        assert_eq!(element_order(canonical_repr(2, 9).unwrap()), 3);
    }

    #[test]
    fn order_matches_iteration() {
        for n in 3..400u64 {
            for a in group_elements(n).unwrap() {
                assert_eq!(element_order(a), brute_order(a), "{a}");
            }
        }
    }

    #[test]
    fn j_examples() {
        assert_eq!(j_invariant(63).unwrap(), 6);
        assert_eq!(j_invariant(3u64.pow(5)).unwrap(), 1);
        assert_eq!(j_invariant(13).unwrap(), 1);
        assert_eq!(j_invariant(15).unwrap(), 2);
        assert!(j_invariant(12).is_err());
    }

    #[test]
    fn classify_examples() {
        let s = classify(15).unwrap();
        assert!(s.cyclic && s.cyclic_semiprime);
        let s = classify(9).unwrap();
        assert!(s.cyclic && !s.cyclic_semiprime);
        assert_eq!((s.j, s.order), (1, 3));
        let s = classify(63).unwrap();
        assert!(!s.cyclic);
        assert_eq!(s.j, 6);
        assert_eq!(s.primitive_root_count, 0);
        assert_eq!(s.smallest_primitive_root, None);
        let s = classify(3).unwrap();
        assert_eq!(
            (s.order, s.primitive_root_count, s.smallest_primitive_root),
            (1, 1, Some(1))
        );
        assert!(matches!(classify(12), Err(Error::NotClassified(12))));
    }

    #[test]
    fn classify_json_keys() {
        let v = serde_json::to_value(classify(9).unwrap()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        for k in [
            "n",
            "order",
            "j",
            "lambda",
            "cyclic",
            "cyclic_semiprime",
            "primitive_root_count",
            "smallest_primitive_root",
        ] {
            assert!(keys.iter().any(|x| x == k), "missing {k}");
        }
        assert_eq!(keys.len(), 8);
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(reprs(&primitive_roots_star(7).unwrap()), vec![3, 5]);
        assert_eq!(reprs(&primitive_roots_star(9).unwrap()), vec![5, 7]);
        assert_eq!(primitive_roots_star(13).unwrap().len(), 2);
        assert!(matches!(
            primitive_roots_star(63),
            Err(Error::NotCyclic(63))
        ));
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(decomposition_two_factors(15).unwrap(), (2, 4));
        assert_eq!(decomposition_two_factors(63).unwrap(), (6, 6));
        assert_eq!(decomposition_two_factors(35).unwrap(), (2, 12));
        assert!(decomposition_two_factors(105).is_err());
        assert!(decomposition_two_factors(9).is_err());
        assert!(decomposition_two_factors(30).is_err());
    }

    #[test]
    fn submodulus_examples() {
        assert_eq!(unique_cyclic_submodulus(63), Some(21));
        assert_eq!(unique_cyclic_submodulus(275), Some(55));
        assert_eq!(unique_cyclic_submodulus(15), None);
        // 189 = 3^3 * 7 gives m = 63, whose G* is not cyclic
        assert_eq!(unique_cyclic_submodulus(189), None);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(
            generalized_pr_ratio(15).unwrap(),
            Some(Ratio::from_integer(2))
        );
        assert_eq!(generalized_pr_ratio(84).unwrap(), Some(Ratio::new(7, 3)));
        assert_eq!(generalized_pr_ratio(231).unwrap(), Some(Ratio::new(7, 3)));
        assert_eq!(generalized_pr_ratio_closed_form(84), Some(Ratio::new(7, 3)));
        assert_eq!(
            generalized_pr_ratio_closed_form(231),
            Some(Ratio::new(7, 3))
        );
        assert_eq!(
            generalized_pr_ratio_closed_form(15),
            Some(Ratio::from_integer(2))
        );
        assert!(generalized_pr_ratio(13).is_err());
        assert!(generalized_pr_ratio(RATIO_SEARCH_BOUND + 1).is_err());
    }

    #[test]
    fn odd_reduction_isomorphism() {
        for m in (3..200u64).step_by(2) {
            let n = 2 * m;
            assert_eq!(odd_reduction(n), Some(m));
            assert_eq!(group_order(n).unwrap(), group_order(m).unwrap());
            let mut orders_n: Vec<_> = group_elements(n)
                .unwrap()
                .into_iter()
                .map(element_order)
                .collect();
            let mut orders_m: Vec<_> = group_elements(m)
                .unwrap()
                .into_iter()
                .map(element_order)
                .collect();
            orders_n.sort();
            orders_m.sort();
            assert_eq!(orders_n, orders_m, "n = {n}");
        }
        assert_eq!(odd_reduction(12), None);
    }

    #[test]
    fn cache_is_consistent() {
        let cache = ClassifyCache::new();
        for n in (3..100).step_by(2) {
            assert_eq!(cache.classify(n).unwrap(), classify(n).unwrap());
            assert_eq!(cache.classify(n).unwrap(), classify(n).unwrap());
        }
        assert_eq!(cache.len(), 49);
    }
}
