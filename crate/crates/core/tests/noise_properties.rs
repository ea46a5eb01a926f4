use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use udcp::noise::{
    dense_restriction, direct_joint_probability, exact_joint_probability, fat_layer_fraction, find_split,
    full_cube_fat_layer_fraction, monte_carlo_joint, rng_for, rsse_check, sample_correlated, sandwich, CorrelationSpec,
    SplitMode,
};
use udcp::search::{curated_battery, random_udcp};
use udcp::{BinaryCode, CodePair, CoordSet};

fn random_sets(rng: &mut ChaCha8Rng, n: usize) -> CodePair {
    let pick = |rng: &mut ChaCha8Rng| {
        let size = rng.random_range(1..=1usize << n);
        let words: Vec<u64> = (0..size).map(|_| rng.random_range(0..1u64 << n)).collect();
        BinaryCode::from_words_dedup(n, words).unwrap()
    };
    let a = pick(rng);
    let b = pick(rng);
    CodePair::new(a, b).unwrap()
}

#[test]
fn exact_matches_direct_plain_and_refined() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let pair = random_sets(&mut rng, n);
        let rho = rng.random_range(0.0..0.99);
        let l = CoordSet::from_mask(n, rng.random_range(0..1u64 << n)).unwrap();
        for spec in [CorrelationSpec::new(n, rho, None).unwrap(), CorrelationSpec::new(n, rho, Some(l)).unwrap()] {
            let exact = exact_joint_probability(&pair, &spec).unwrap();
            let direct = direct_joint_probability(&pair, &spec);
            let rel = ((exact.probability - direct) / direct).abs();
            assert!(rel <= 1e-12, "{rel:e} n={n} rho={rho} {:?} {:?}", spec.l_set, pair);
            assert!(exact.exact_log2 <= 0.0);
        }
    }
}

#[test]
fn refinement_extremes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let n = rng.random_range(1..=7);
        let pair = random_sets(&mut rng, n);
        let rho = rng.random_range(0.0..0.99);
        let plain = exact_joint_probability(&pair, &CorrelationSpec::new(n, rho, None).unwrap()).unwrap();
        let full =
            exact_joint_probability(&pair, &CorrelationSpec::new(n, rho, Some(CoordSet::full(n))).unwrap()).unwrap();
        assert_eq!(plain.exact_log2, full.exact_log2);
        let none =
            exact_joint_probability(&pair, &CorrelationSpec::new(n, rho, Some(CoordSet::empty(n))).unwrap()).unwrap();
        let indep = exact_joint_probability(&pair, &CorrelationSpec::new(n, 0.0, None).unwrap()).unwrap();
        assert!((none.exact_log2 - indep.exact_log2).abs() < 1e-12);
    }
}

#[test]
fn monotone_in_rho_for_equal_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let a = random_sets(&mut rng, n).a().clone();
        let pair = CodePair::new(a.clone(), a).unwrap();
        let l = CoordSet::from_mask(n, rng.random_range(0..1u64 << n)).unwrap();
        let mut last = f64::NEG_INFINITY;
        for r in 0..20 {
            let spec = CorrelationSpec::new(n, r as f64 / 20.0, Some(l)).unwrap();
            let p = exact_joint_probability(&pair, &spec).unwrap().exact_log2;
            assert!(p >= last - 1e-12);
            last = p;
        }
    }
}

#[test]
fn monte_carlo_within_four_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..8 {
        let n = rng.random_range(2..=6);
        let pair = random_sets(&mut rng, n);
        let rho = rng.random_range(0.0..0.9);
        let spec = CorrelationSpec::new(n, rho, None).unwrap();
        let exact = exact_joint_probability(&pair, &spec).unwrap().probability;
        let mc = monte_carlo_joint(&pair, &spec, 100_000, trial).unwrap();
        let sigma = (exact * (1.0 - exact) / mc.samples as f64).sqrt();
        assert!((mc.estimate - exact).abs() <= 4.0 * sigma + 1e-12, "{mc:?} vs {exact}");
    }
}

#[test]
fn monte_carlo_independent_of_thread_count() {
    let pair = CodePair::kasami_lin();
    let spec = CorrelationSpec::new(2, 0.4, None).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| monte_carlo_joint(&pair, &spec, 300_000, 9).unwrap());
    let b = four.install(|| monte_carlo_joint(&pair, &spec, 300_000, 9).unwrap());
    assert_eq!(a.hits, b.hits);
}

#[test]
fn sampler_agreement_rate() {
    let spec = CorrelationSpec::for_sampling(1, 0.5, None).unwrap();
    let mut rng = rng_for(17, 0);
    let samples = 1_000_000u64;
    let agree = (0..samples).filter(|_| sample_correlated(1, &spec, &mut rng).unwrap() == 1).count() as f64;
    let rate = agree / samples as f64;
    let radius = 3.0 * (0.75f64 * 0.25 / samples as f64).sqrt();
    assert!((rate - 0.75).abs() <= radius, "{rate}");
}

#[test]
fn rsse_dominance_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let n = rng.random_range(1..=10);
        let pair = random_sets(&mut rng, n);
        for r in 0..10 {
            let c = rsse_check(&pair, r as f64 / 10.0).unwrap();
            assert!(c.holds, "{c:?}");
        }
    }
}

#[test]
fn split_guarantee_on_battery() {
    for pair in curated_battery(10, 4, 21).unwrap() {
        let Ok(r) = find_split(&pair, SplitMode::Exhaustive, None) else { continue };
        assert!(r.lambda >= r.window.0 - 1e-12 && r.lambda <= r.window.1 + 1e-12);
        assert!(r.pi <= r.lambda + 1e-12);
        assert!(r.pi >= r.pigeonhole_floor - 1e-12);
        if r.fat_premise && r.density_precondition {
            assert!(r.guarantee_met, "{r:?}");
        }
        let greedy = find_split(&pair, SplitMode::Greedy, None).unwrap();
        assert!(greedy.b_projection <= r.b_projection);
    }
}

#[test]
fn sandwich_on_dense_battery() {
    for pair in curated_battery(10, 3, 22).unwrap() {
        let n = pair.word_length();
        if n < 2 {
            continue;
        }
        let l = CoordSet::from_indices(n, 0..n / 2).unwrap();
        let (dense, eps) = dense_restriction(&pair, &l, None).unwrap();
        assert!(dense.is_udcp());
        for rho in [0.2, 0.5, 0.8] {
            let s = sandwich(&dense, &l, eps, rho).unwrap();
            assert!(s.density.is_dense());
            assert!(s.upper_holds && s.lower_holds, "{s:?}");
        }
    }
}

#[test]
fn fat_layer_large_n() {
    let eps = 0.01;
    let gamma = (std::f64::consts::LN_2 * eps / 2.0).sqrt();
    assert!(full_cube_fat_layer_fraction(100, gamma).unwrap() >= 0.5);
    let cube = BinaryCode::full_cube(12).unwrap();
    let r = fat_layer_fraction(&cube, 0b1010_1010_1010, 0.25, None).unwrap();
    assert!((r.fraction - full_cube_fat_layer_fraction(12, 0.25).unwrap()).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_probability_of_udcps_is_consistent(seed in any::<u64>(), rho in 0.0f64..0.95) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=8);
        let pair = random_udcp(n, 8, &mut rng).unwrap();
        let spec = CorrelationSpec::new(n, rho, None).unwrap();
        let r = exact_joint_probability(&pair, &spec).unwrap();
        prop_assert!(r.exact_log2 <= 0.0);
        let d = r.direct.unwrap();
        prop_assert!(d.relative_error <= 1e-12);
    }
}
