// Exact finite-n values against enumeration, generating functions and
// simulation.

use mapcycles::exact_enum::enumerate_all;
use mapcycles::gfseries::{a_count, count_table, weighted_sum_trend};
use mapcycles::mapping_sim::{simulate, Constraint, SimOptions, Stat};
use num_bigint::BigInt;

#[test]
fn generating_function_counts_match_enumeration() {
    for n in 2..=6 {
        let exact = enumerate_all(n).unwrap();
        assert_eq!(count_table(n).unwrap(), exact.counts, "n={n}");
        let total: BigInt = (1..=n)
            .flat_map(|m| (m..=n).map(move |l| (m, l)))
            .map(|(m, l)| a_count(n, m, l).unwrap())
            .sum();
        assert_eq!(total, BigInt::from(n).pow(n as u32));
    }
}

#[test]
fn connected_fraction_approaches_asymptote() {
    let mut last = f64::INFINITY;
    for n in 3..=7 {
        let t = enumerate_all(n).unwrap();
        let target = (std::f64::consts::PI / (2.0 * n as f64)).sqrt();
        let gap = (t.connected_fraction() / target - 1.0).abs();
        assert!(gap < last, "n={n}");
        last = gap;
    }
}

#[test]
fn weighted_sums_are_finite_and_positive() {
    for row in weighted_sum_trend(8, &[1, 2]).unwrap() {
        assert!(row.weighted > 0.0 && row.asymptotic > 0.0 && row.ratio.is_finite());
    }
}

#[test]
fn simulated_longest_cycle_matches_enumeration() {
    let n = 7;
    let exact = enumerate_all(n).unwrap().mean_longest_cycle();
    let stats = simulate(&SimOptions::new(n, 1_000_000, 17).with_workers(4)).unwrap();
    let root = (n as f64).sqrt();
    let mean = stats.mean(Stat::Cycle(1)) * root;
    let se = stats.std_error(Stat::Cycle(1)) * root;
    assert!((mean - exact).abs() < 4.0 * se, "{mean} vs {exact} (se {se})");
}

// P{N = ℓ} = ℓ (n)_ℓ / n^{ℓ+1}, as a vector over ℓ = 1..=n
fn cyclic_point_law(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut p = Vec::with_capacity(n);
    let mut falling = 1.0; // (n)_ℓ / n^ℓ
    for l in 1..=n {
        falling *= (nf - (l - 1) as f64) / nf;
        p.push(l as f64 * falling / nf);
        if falling < 1e-300 {
            break;
        }
    }
    p
}

// exact E[N/√n | M = 2] and Var: cycles on N points form a uniform
// permutation, which has two cycles with probability H_{ℓ−1}/ℓ
fn two_component_moments(n: usize) -> (f64, f64, f64) {
    let (mut z, mut s1, mut s2) = (0.0, 0.0, 0.0);
    let mut harmonic = 0.0;
    for (i, p) in cyclic_point_law(n).into_iter().enumerate() {
        let l = (i + 1) as f64;
        let w = p * harmonic / l;
        harmonic += 1.0 / l;
        let x = l / (n as f64).sqrt();
        z += w;
        s1 += w * x;
        s2 += w * x * x;
    }
    let mean = s1 / z;
    (mean, s2 / z - mean * mean, z)
}

#[test]
fn two_component_regime_converges_slowly() {
    let limit = (2.0 / std::f64::consts::PI).sqrt();
    let mut prev = f64::INFINITY;
    for n in [100, 1_000, 10_000, 100_000, 1_000_000] {
        let (mean, _, _) = two_component_moments(n);
        let gap = mean - limit;
        assert!(gap > 0.0 && gap < prev, "n={n}: {mean}");
        prev = gap;
    }

    let n = 2500;
    let (mean, var, p) = two_component_moments(n);
    let stats = simulate(&SimOptions::new(n, 3000, 23).with_constraint(Constraint::Components(2))).unwrap();
    let m = stats.mean(Stat::CyclicPoints);
    assert!((m - mean).abs() < 4.0 * stats.std_error(Stat::CyclicPoints), "{m} vs {mean}");
    assert!((stats.variance(Stat::CyclicPoints) / var - 1.0).abs() < 0.15);
    let rate = stats.acceptance_rate();
    assert!((rate - p).abs() < 4.0 * stats.acceptance_std_error(), "{rate} vs {p}");
}

// E[M] = Σ_k (n)_k / (k n^k)
fn exact_mean_components(n: usize) -> f64 {
    let nf = n as f64;
    let mut falling = 1.0;
    let mut s = 0.0;
    for k in 1..=n {
        falling *= (nf - (k - 1) as f64) / nf;
        s += falling / k as f64;
    }
    s
}

#[test]
fn component_count_matches_exact_mean() {
    let exact = enumerate_all(6).unwrap();
    let enum_mean: f64 = exact
        .counts
        .iter()
        .map(|(&(m, _), &c)| m as f64 * c as f64)
        .sum::<f64>()
        / exact.total() as f64;
    assert!((enum_mean - exact_mean_components(6)).abs() < 1e-12);

    let n = 1000;
    let stats = simulate(&SimOptions::new(n, 20_000, 29)).unwrap();
    let want = exact_mean_components(n);
    let got = stats.mean(Stat::Components);
    assert!((got - want).abs() < 4.0 * stats.std_error(Stat::Components), "{got} vs {want}");
    // ½ ln n misses by about ½(ln 2 + γ)
    assert!(want - 0.5 * (n as f64).ln() > 0.6);
}
