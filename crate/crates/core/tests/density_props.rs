use std::fs;

use modstar::arith::{is_prime, mul_mod};
use modstar::density::{
    artin_density_star, asymptotic_sg_integral, asymptotic_sg_integral_with_panels, evaluate,
    run_survey, sg_density_star, sophie_germain_pairs, Subject, SurveyConfig, SurveyKind,
};
use modstar::Error;

fn brute_order_star(a: u64, p: u64) -> u64 {
    let a = a % p;
    let mut x = a;
    let mut t = 1;
    while x != 1 && x != p - 1 {
        x = mul_mod(x, a, p);
        t += 1;
    }
    t
}

#[test]
fn per_prime_orders_match_exhaustive_search() {
    for p in (3..=10_000u64).filter(|&p| is_prime(p)) {
        for a in [2u64, 3, 5, 6, 7, 10, 11, 12] {
            if a % p == 0 {
                continue;
            }
            let r = evaluate(Subject::Prime(p), a);
            let brute = brute_order_star(a, p);
            assert_eq!(r.element_order, brute, "a = {a}, p = {p}");
            assert_eq!(r.is_primitive_root, brute == (p - 1) / 2);
        }
    }
}

#[test]
fn base_two_decades_stay_in_band() {
    for x in [10_000u64, 100_000, 1_000_000] {
        let d = artin_density_star(2, x).unwrap().density.unwrap();
        assert!((0.53..=0.59).contains(&d), "x = {x}: {d}");
    }
}

#[test]
fn survey_equals_direct_density() {
    let mut c = SurveyConfig::new(SurveyKind::Prime, 2, 100_000);
    c.partitions = 3;
    let s = run_survey(&c).unwrap();
    let d = artin_density_star(2, 100_000).unwrap();
    assert_eq!((s.subjects_counted, s.hits), (d.subjects_counted, d.hits));
    assert_eq!(s.density_rational, d.density_rational);
}

#[test]
fn partition_counts_do_not_matter() {
    for kind in [SurveyKind::Prime, SurveyKind::Sg] {
        let mut c = SurveyConfig::new(kind, 3, 200_000);
        let runs: Vec<_> = [1usize, 2, 7, 8, 64]
            .into_iter()
            .map(|p| {
                c.partitions = p;
                let s = run_survey(&c).unwrap();
                (s.subjects_counted, s.hits)
            })
            .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]), "{kind}: {runs:?}");
    }
}

#[test]
fn resume_after_truncation_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for kind in [SurveyKind::Prime, SurveyKind::Sg] {
        let path = dir.path().join(format!("{kind}.csv"));
        let mut c = SurveyConfig::new(kind, 2, 300_000);
        c.checkpoint = Some(path.clone());
        let full = run_survey(&c).unwrap();
        let full_json = serde_json::to_string(&full).unwrap();
        let full_file = fs::read(&path).unwrap();

        // kill at 50%: keep half the bytes, usually mid-row
        let half = full_file.len() / 2;
        fs::write(&path, &full_file[..half]).unwrap();
        c.resume = true;
        c.partitions = 5;
        let resumed = run_survey(&c).unwrap();
        assert!(resumed.checkpoint.as_ref().unwrap().resumed_rows > 0);
        assert_eq!(serde_json::to_string(&resumed).unwrap(), full_json);
        assert_eq!(fs::read(&path).unwrap(), full_file);
    }
}

#[test]
fn corrupt_rows_are_reported_with_their_index() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let mut c = SurveyConfig::new(SurveyKind::Prime, 2, 1_000);
    c.checkpoint = Some(path.clone());
    run_survey(&c).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    // header is three lines; data row 5 is line index 7
    lines[7] = lines[7].replace(',', ";");
    lines.truncate(20);
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    c.resume = true;
    match run_survey(&c) {
        Err(Error::CheckpointCorrupt { row, .. }) => assert_eq!(row, 5),
        other => panic!("expected a corrupt-checkpoint error, got {other:?}"),
    }

    // a row whose flag disagrees with its orders
    run_survey(&SurveyConfig {
        checkpoint: Some(dir.path().join("d.csv")),
        ..c.clone()
    })
    .unwrap();
    let text = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let bad = text.replacen(",1,1,1\n", ",1,1,0\n", 1);
    fs::write(dir.path().join("d.csv"), bad).unwrap();
    let err = run_survey(&SurveyConfig {
        checkpoint: Some(dir.path().join("d.csv")),
        ..c
    })
    .unwrap_err();
    assert!(
        matches!(err, Error::CheckpointCorrupt { row: 1, .. }),
        "{err}"
    );
}

#[test]
fn checkpoint_for_another_survey_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let mut c = SurveyConfig::new(SurveyKind::Prime, 2, 1_000);
    c.checkpoint = Some(path.clone());
    run_survey(&c).unwrap();
    c.base = 3;
    c.resume = true;
    assert!(matches!(
        run_survey(&c),
        Err(Error::CheckpointCorrupt { row: 0, .. })
    ));
}

#[test]
fn sophie_germain_pairs_by_trial_division() {
    let naive: Vec<(u64, u64)> = (2..=5_000u64)
        .filter(|&p| is_prime(p) && is_prime(2 * p + 1))
        .map(|p| (p, 2 * p + 1))
        .collect();
    assert_eq!(sophie_germain_pairs(5_000, true).unwrap(), naive);
    assert_eq!(
        sophie_germain_pairs(5_000, false).unwrap(),
        naive[2..].to_vec()
    );
}

#[test]
fn integral_matches_independent_quadrature() {
    // values from adaptive high-precision quadrature
    for (x, want) in [
        (1e4, 147.3703788867),
        (1e5, 883.075746108255),
        (1e6, 5915.69994404219),
    ] {
        let got = asymptotic_sg_integral(x);
        assert!(((got - want) / want).abs() < 1e-6, "x = {x}: {got}");
    }
    let a = asymptotic_sg_integral_with_panels(1e4, 2048);
    let b = asymptotic_sg_integral_with_panels(1e4, 4096);
    assert!(((a - b) / b).abs() < 1e-6);
}

#[test]
fn pair_counts_follow_the_integral() {
    // Hardy-Littlewood: #pairs ~ 2 C_2 int_2^x dt / (ln t ln(2t + 1))
    const TWO_C2: f64 = 2.0 * 0.660_161_815_846_869_6;
    let x = 10_000_000u64;
    let s = sg_density_star(2, x).unwrap();
    let scale = s.subjects_counted as f64 / asymptotic_sg_integral(x as f64);
    assert!((scale - TWO_C2).abs() < 0.02, "{scale}");
    let hits_scale = s.hits as f64 / asymptotic_sg_integral(x as f64);
    assert!((hits_scale - s.density.unwrap() * scale).abs() < 1e-9);
}
