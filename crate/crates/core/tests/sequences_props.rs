use modstar::arith::euler_phi;
use modstar::modstar::canonical_repr;
use modstar::sequences::{
    generalized_sequence, nested_absolute_sequence, pes, schick_absolute, schick_signed, StartIndex,
};
use rand::{rngs::StdRng, Rng, SeedableRng};

#[test]
fn absolute_terms_are_powers_of_two() {
    for n in (3..=5000u64).step_by(2) {
        let period = pes(n).unwrap() as usize;
        let terms = schick_absolute(n, period + 1).unwrap();
        let mut p = 1i128;
        for (i, t) in terms.iter().enumerate() {
            assert_eq!(*t, canonical_repr(p, n).unwrap().repr(), "n = {n}, i = {i}");
            p = p * 2 % n as i128;
        }
        assert_eq!(terms[period], terms[0]);
        assert!(terms[1..period].iter().all(|&t| t != 1));
    }
}

#[test]
fn period_divides_group_order() {
    for n in (3..=5000u64).step_by(2) {
        assert_eq!((euler_phi(n) / 2) % pes(n).unwrap(), 0, "n = {n}");
    }
}

#[test]
fn signed_terms_have_absolute_magnitudes() {
    for n in (3..=1001u64).step_by(2) {
        let count = 2 * pes(n).unwrap() as usize;
        let s = schick_signed(n, count).unwrap();
        let a = schick_absolute(n, count).unwrap();
        for (x, y) in s.iter().zip(&a) {
            assert_eq!(x.unsigned_abs(), *y);
        }
    }
}

#[test]
fn nested_absolute_values_match_power_formula() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in (3..=5000u64).step_by(2) {
        let mut tried = 0;
        let mut attempts = 0;
        while tried < 20 && attempts < 200 {
            attempts += 1;
            let g = rng.gen_range(2..n.max(3));
            if num_integer::gcd(g, n) != 1 || g >= n {
                continue;
            }
            tried += 1;
            let start = if rng.gen_bool(0.5) {
                StartIndex::Zero
            } else {
                StartIndex::One
            };
            let period = canonical_repr(g as i128, n).unwrap().order() as usize;
            assert_eq!(
                nested_absolute_sequence(n, g, period + 1, start).unwrap(),
                generalized_sequence(n, g, period + 1, start).unwrap(),
                "n = {n}, g = {g}"
            );
        }
    }
}
