use std::collections::BTreeMap;

use mapcycles::exact_enum::enumerate_all;
use mapcycles::mapping_sim::{
    analyze, count_components_union_find, interplay_estimate, sample_mapping, simulate, Constraint, Mapping,
    SimOptions, Stat,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// cycle lengths and component sizes found by iterating the map from every point
fn brute_force(image: &[u32]) -> (Vec<usize>, Vec<usize>) {
    let n = image.len();
    let f = |x: usize| image[x] as usize;
    let mut cycle_of = vec![0usize; n];
    let mut cycles: BTreeMap<usize, usize> = BTreeMap::new();
    for (x, slot) in cycle_of.iter_mut().enumerate() {
        let mut y = x;
        for _ in 0..n {
            y = f(y);
        }
        // y is on the cycle; name it by its smallest point
        let (mut z, mut min, mut len) = (f(y), y, 1);
        while z != y {
            min = min.min(z);
            z = f(z);
            len += 1;
        }
        *slot = min;
        cycles.insert(min, len);
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for c in cycle_of {
        *sizes.entry(c).or_default() += 1;
    }
    let mut lens: Vec<usize> = cycles.values().copied().collect();
    let mut sz: Vec<usize> = sizes.values().copied().collect();
    lens.sort_unstable_by(|a, b| b.cmp(a));
    sz.sort_unstable_by(|a, b| b.cmp(a));
    (lens, sz)
}

fn mapping_strategy() -> impl Strategy<Value = Vec<u32>> {
    (1usize..60).prop_flat_map(|n| prop::collection::vec(0..n as u32, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn summary_matches_brute_force(image in mapping_strategy()) {
        let m = Mapping::new(image.clone()).unwrap();
        let s = analyze(&m);
        let (lens, sizes) = brute_force(&image);
        prop_assert_eq!(&s.cycle_lengths, &lens);
        prop_assert_eq!(&s.component_sizes, &sizes);
        prop_assert_eq!(s.components, count_components_union_find(&m));
    }

    #[test]
    fn graph_invariants(image in mapping_strategy()) {
        let n = image.len();
        let s = analyze(&Mapping::new(image).unwrap());
        prop_assert!(s.components <= s.cyclic_points && s.cyclic_points <= n);
        prop_assert_eq!(s.cycle_lengths.iter().sum::<usize>(), s.cyclic_points);
        prop_assert_eq!(s.component_sizes.iter().sum::<usize>(), n);
        prop_assert!(s.cycle_lengths.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.deepest_cycle <= s.cycle(1));
        prop_assert!(s.richest_component <= s.component_sizes[0]);
        if s.largest_component_contains_longest_cycle {
            prop_assert_eq!(s.deepest_cycle, s.cycle(1));
        }
    }
}

#[test]
fn sampled_images_are_uniform() {
    let n = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut counts = [0u64; 10];
    let draws = 20_000;
    for _ in 0..draws {
        for &v in sample_mapping(n, &mut rng).unwrap().image() {
            counts[v as usize] += 1;
        }
    }
    let expect = (draws * n) as f64 / n as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    // 0.999 quantile with 9 degrees of freedom
    assert!(chi2 < 27.88, "chi-square {chi2}");
}

#[test]
fn fixed_seed_and_workers_reproduce() {
    let opts = SimOptions::new(500, 3000, 5).with_workers(3);
    let a = simulate(&opts).unwrap();
    let b = simulate(&opts).unwrap();
    for s in Stat::ALL {
        assert_eq!(a.mean(s), b.mean(s));
        assert_eq!(a.variance(s), b.variance(s));
    }
    let c = simulate(&SimOptions::new(500, 3000, 6).with_workers(3)).unwrap();
    assert_ne!(a.mean(Stat::Cycle(1)), c.mean(Stat::Cycle(1)));
}

#[test]
fn rejection_reproduces_too() {
    let opts = SimOptions::new(300, 200, 11)
        .with_constraint(Constraint::Connected)
        .with_workers(2);
    let a = simulate(&opts).unwrap();
    let b = simulate(&opts).unwrap();
    assert_eq!(a.attempts, b.attempts);
    assert_eq!(a.mean(Stat::Cycle(1)), b.mean(Stat::Cycle(1)));
    assert_eq!(a.mean(Stat::Components), 1.0);
}

#[test]
fn interplay_small_sizes() {
    let p = interplay_estimate(2, 2000, 3, 2).unwrap();
    assert_eq!(p.p, 1.0);

    let exact = enumerate_all(6).unwrap();
    let q = exact.largest_holds_longest as f64 / exact.total() as f64;
    let est = interplay_estimate(6, 40_000, 4, 2).unwrap();
    let se = (q * (1.0 - q) / est.samples as f64).sqrt();
    assert!((est.p - q).abs() < 3.0 * se, "{} vs exact {q}", est.p);

    let big = interplay_estimate(10_000, 400, 5, 1).unwrap();
    assert!(big.p > 0.5 && big.p < 1.0);
}
