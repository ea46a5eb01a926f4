use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use udcp::code::{
    check_density, diffset, distance_census, encode_eta, eta_collisions, extract_dense_subcode, product_compose,
    sumset, van_tilborg_bound, van_tilborg_check,
};
use udcp::math::parse_rational;
use udcp::search::random_udcp;
use udcp::{BinaryCode, CodePair, CoordSet};

fn code(n: usize, words: Vec<u64>) -> BinaryCode {
    BinaryCode::from_words_dedup(n, words).unwrap()
}

fn arb_pair(max_n: usize) -> impl Strategy<Value = CodePair> {
    (1..=max_n).prop_flat_map(|n| {
        let word = 0u64..(1u64 << n);
        (Just(n), proptest::collection::vec(word.clone(), 1..8), proptest::collection::vec(word, 1..8))
            .prop_map(|(n, a, b)| CodePair::new(code(n, a), code(n, b)).unwrap())
    })
}

fn arb_udcp(max_n: usize) -> impl Strategy<Value = CodePair> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_udcp(n, 1 << (n / 2 + 1), &mut rng).unwrap()
    })
}

proptest! {
    #[test]
    fn sumset_size_decides(pair in arb_pair(6)) {
        let full = sumset(&pair).len() as u64 == pair.product_size();
        prop_assert_eq!(full, pair.is_udcp());
        prop_assert_eq!(diffset(&pair).len() as u64 == pair.product_size(), pair.is_udcp());
        prop_assert_eq!(pair.find_collision().is_none(), pair.is_udcp());
    }

    #[test]
    fn collisions_are_real(pair in arb_pair(6)) {
        if let Some(c) = pair.find_collision() {
            prop_assert!(c.first != c.second);
            let n = pair.word_length();
            let s1 = udcp::TernaryWord::sum(n, c.first.0, c.first.1);
            let s2 = udcp::TernaryWord::sum(n, c.second.0, c.second.1);
            prop_assert_eq!(s1, s2);
        }
    }

    #[test]
    fn swapping_preserves_status(pair in arb_pair(6)) {
        prop_assert_eq!(pair.swapped().is_udcp(), pair.is_udcp());
    }

    #[test]
    fn products_stay_udcp(p in arb_udcp(4), q in arb_udcp(4)) {
        let r = product_compose(&p, &q).unwrap();
        prop_assert!(r.recheck());
        prop_assert_eq!(r.product_size(), p.product_size() * q.product_size());
    }

    #[test]
    fn census_totals_and_van_tilborg(p in arb_udcp(8)) {
        let c = distance_census(&p, None).unwrap();
        prop_assert_eq!(c.total, p.product_size());
        let report = van_tilborg_check(&p).unwrap();
        prop_assert!(report.min_slack >= 0);
        let n = p.word_length();
        for (d, &w) in c.counts.iter().enumerate() {
            prop_assert!(w as u128 <= van_tilborg_bound(n, d));
        }
    }

    #[test]
    fn restricted_census_sums_to_product(p in arb_pair(7), mask in any::<u64>()) {
        let n = p.word_length();
        let l = CoordSet::from_mask(n, mask & ((1u64 << n) - 1)).unwrap();
        let c = distance_census(&p, Some(&l)).unwrap();
        prop_assert_eq!(c.counts.iter().sum::<u64>(), p.product_size());
        prop_assert_eq!(c.counts.len(), l.len() + 1);
    }

    #[test]
    fn eta_is_injective_on_udcps(p in arb_udcp(7), mask in any::<u64>()) {
        prop_assert_eq!(eta_collisions(&p, None).unwrap(), 0);
        let n = p.word_length();
        let l = CoordSet::from_mask(n, mask & ((1u64 << n) - 1)).unwrap();
        prop_assert_eq!(eta_collisions(&p, Some(&l)).unwrap(), 0);
    }

    #[test]
    fn eta_recovers_difference(n in 1usize..10, a in any::<u64>(), b in any::<u64>()) {
        let m = (1u64 << n) - 1;
        let (a, b) = (a & m, b & m);
        let e = encode_eta(n, a, b, None).unwrap();
        prop_assert_eq!(e.difference(), udcp::TernaryWord::difference(n, b, a));
        prop_assert_eq!(e.residue & !e.sym_diff, 0);
    }

    #[test]
    fn projections_never_grow(p in arb_pair(8), mask in any::<u64>()) {
        let n = p.word_length();
        let l = CoordSet::from_mask(n, mask & ((1u64 << n) - 1)).unwrap();
        let size = p.b().projection_size(&l);
        prop_assert!(size <= p.b().len());
        prop_assert!(size as u128 <= 1u128 << l.len());
        prop_assert_eq!(p.b().project(&l).unwrap().len(), size);
    }
}

#[test]
fn dense_extraction_passes_both_clauses() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for trial in 0..60u64 {
        use rand::Rng;
        let n = rng.random_range(4..=12);
        let eps = parse_rational(["1/4", "0.3", "1/2"][trial as usize % 3]).unwrap();
        // |A| >= 2^((1-ε)n): keep each word with probability 0.9.
        let words: Vec<u64> = (0..1u64 << n).filter(|_| rng.random_bool(0.9)).collect();
        let a = code(n, words);
        let l = CoordSet::from_mask(n, rng.random_range(0..1u64 << n)).unwrap();
        let Ok(report) = extract_dense_subcode(&a, &l, eps) else { continue };
        checked += 1;
        let sub = &report.subset;
        assert!(sub.words().iter().all(|w| a.contains(*w)));
        let again = check_density(sub, &l, eps).unwrap();
        assert!(again.is_dense(), "trial {trial}: {again:?}");
        // Direct count of the projection classes.
        let e = udcp::math::rational_to_f64(&eps);
        let mut classes = std::collections::BTreeMap::new();
        for &w in sub.words() {
            *classes.entry(l.project(w)).or_insert(0u64) += 1;
        }
        let (nf, lf) = (n as f64, l.len() as f64);
        assert!(classes.len() as f64 >= (lf - e * nf - 1.0).exp2() * (1.0 - 1e-12));
        let smallest = *classes.values().min().unwrap() as f64;
        assert!(smallest >= (nf - lf - e * nf - 1.0).exp2() * (1.0 - 1e-12));
    }
    assert!(checked > 40);
}
