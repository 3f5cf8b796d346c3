use std::collections::BTreeSet;

use modstar::arith::{euler_phi, mul_mod};
use modstar::modstar::{canonical_repr, element_order, group_elements, primitive_roots_star};
use modstar::quadratic::{
    brute_sqrt_oracle, is_biquadratic_star, is_qr_star, level_applies, partition, sqrt_level1,
    sqrt_level2, sqrt_level3, sqrt_star,
};
use modstar::Error;

/// For each element, the list of its square roots, from one pass over the group.
fn root_table(n: u64) -> Vec<Vec<u64>> {
    let mut roots = vec![Vec::new(); n as usize];
    for x in group_elements(n).unwrap() {
        let sq = x.mul(&x).repr();
        roots[sq as usize].push(x.repr());
    }
    roots
}

fn star(a: u64, n: u64) -> u64 {
    canonical_repr(a as i128, n).unwrap().repr()
}

#[test]
fn level_one_squaring_is_a_bijection() {
    for n in (3..=2000u64).step_by(2).filter(|&n| level_applies(n, 1)) {
        let roots = root_table(n);
        for b in group_elements(n).unwrap() {
            assert_eq!(roots[b.repr() as usize].len(), 1, "n = {n}");
            let x = sqrt_level1(b).unwrap();
            assert_eq!(x.mul(&x), b);
            assert_eq!(x.repr(), roots[b.repr() as usize][0]);
        }
    }
}

#[test]
fn level_two_residues_and_roots() {
    let mut checked = BTreeSet::new();
    for n in (3..=2000u64).step_by(2).filter(|&n| level_applies(n, 2)) {
        checked.insert(n);
        let roots = root_table(n);
        let part = partition(n, 2).unwrap();
        let (qr, non) = (&part.classes[0], &part.classes[1]);
        let order = euler_phi(n) / 4;
        assert_eq!(qr.len() as u64, order);
        // the residues form a cyclic group
        assert!(qr
            .iter()
            .any(|&q| element_order(canonical_repr(q as i128, n).unwrap()) == order));
        for b in group_elements(n).unwrap() {
            let rs = &roots[b.repr() as usize];
            assert_eq!(is_qr_star(b).unwrap(), !rs.is_empty());
            if rs.is_empty() {
                assert!(matches!(sqrt_level2(b), Err(Error::NonResidue { .. })));
                continue;
            }
            assert_eq!(rs.len(), 2, "n = {n}, b = {}", b.repr());
            assert_eq!(rs.iter().filter(|r| qr.contains(r)).count(), 1);
            assert_eq!(rs.iter().filter(|r| non.contains(r)).count(), 1);
            let x = sqrt_level2(b).unwrap();
            assert!(rs.contains(&x.repr()));
        }
        // every primitive root lies in the non-residue class
        for g in primitive_roots_star(n).unwrap() {
            assert!(non.contains(&g.repr()));
        }
    }
    assert!(checked.contains(&13) && checked.contains(&77));
}

#[test]
fn level_three_classes_and_cosets() {
    let mut checked = BTreeSet::new();
    for n in (3..=2000u64).step_by(2).filter(|&n| level_applies(n, 3)) {
        checked.insert(n);
        let part = partition(n, 3).unwrap();
        let sets: Vec<BTreeSet<u64>> = part
            .classes
            .iter()
            .map(|c| c.iter().copied().collect())
            .collect();
        let (bq, coset, cocoset) = (&sets[0], &sets[1], &sets[2]);
        let order = euler_phi(n) / 8;
        assert_eq!(bq.len() as u64, order);
        assert_eq!(coset.len() as u64, order);
        assert!(bq
            .iter()
            .any(|&q| element_order(canonical_repr(q as i128, n).unwrap()) == order));
        // the pure residues are one coset of the biquadratic subgroup
        for &h in coset {
            let shifted: BTreeSet<u64> = bq.iter().map(|&b| star(mul_mod(b, h, n), n)).collect();
            assert_eq!(&shifted, coset);
        }
        let residues: BTreeSet<u64> = bq.union(coset).copied().collect();
        for g in primitive_roots_star(n).unwrap() {
            let shifted: BTreeSet<u64> = residues
                .iter()
                .map(|&r| star(mul_mod(r, g.repr(), n), n))
                .collect();
            assert_eq!(&shifted, cocoset);
        }
        let roots = root_table(n);
        for b in group_elements(n).unwrap() {
            let quartic = bq.contains(&b.repr());
            assert_eq!(is_biquadratic_star(b).unwrap(), quartic);
            if quartic {
                let x = sqrt_level3(b).unwrap();
                assert_eq!(x.mul(&x), b);
                assert!(roots[b.repr() as usize].contains(&x.repr()));
            } else {
                assert!(matches!(sqrt_level3(b), Err(Error::NotBiquadratic { .. })));
            }
        }
    }
    assert!(checked.contains(&41) && checked.contains(&143) && checked.contains(&605));
}

#[test]
fn auto_level_roots_match_the_oracle() {
    for n in [13u64, 77, 605, 41, 143] {
        for b in group_elements(n).unwrap() {
            let oracle = brute_sqrt_oracle(b).unwrap();
            match sqrt_star(b, None) {
                Ok(r) => {
                    assert!(r.verified);
                    assert!(oracle.iter().any(|x| x.repr() == r.x));
                }
                Err(Error::NonResidue { .. }) => assert!(oracle.is_empty()),
                // level 3 roots are only defined on the biquadratic residues
                Err(Error::NotBiquadratic { .. }) => assert!(!is_biquadratic_star(b).unwrap()),
                Err(e) => panic!("n = {n}: {e}"),
            }
        }
    }
}
