//! Monte Carlo checks on the generators and the estimators built on them.

use proptest::prelude::*;
use volgame::data_io::{fgn_batch, generate, generate_batch, GeneratorKind, GeneratorSpec};
use volgame::pathstats::{variation_exponent_estimate, Regime};
use volgame::{run_game, GameInput, Protocol, StrategySpec};

#[test]
fn white_fgn_has_no_lag_one_correlation() {
    let seeds: Vec<u64> = (0..100).collect();
    let noise = fgn_batch(4096, 0.5, &seeds);
    let mean: f64 = noise
        .iter()
        .map(|x| {
            let c1: f64 = x.windows(2).map(|w| w[0] * w[1]).sum();
            let c0: f64 = x.iter().map(|v| v * v).sum();
            c1 / c0
        })
        .sum::<f64>()
        / seeds.len() as f64;
    assert!(mean.abs() < 0.02, "{mean}");
}

#[test]
fn persistent_fgn_is_positively_correlated() {
    let seeds: Vec<u64> = (0..20).collect();
    let noise = fgn_batch(2048, 0.7, &seeds);
    // 0.5 (2^1.4 - 2) ≈ 0.3195
    let rho: f64 = noise
        .iter()
        .map(|x| x.windows(2).map(|w| w[0] * w[1]).sum::<f64>() / (x.len() - 1) as f64)
        .sum::<f64>()
        / seeds.len() as f64;
    assert!((rho - 0.3195).abs() < 0.03, "{rho}");
}

#[test]
fn rough_fractional_paths_classify_super_diffusive() {
    let seeds: Vec<u64> = (0..100).collect();
    let paths = generate_batch(&GeneratorSpec::fractional(4096, 0.3, 1.0, 0), &seeds).unwrap();
    let hits = paths
        .iter()
        .filter(|p| variation_exponent_estimate(p).regime == Regime::SuperDiffusive)
        .count();
    assert!(hits >= 90, "{hits}/100");
}

#[test]
fn random_walks_classify_diffusive() {
    let seeds: Vec<u64> = (0..100).collect();
    let spec = GeneratorSpec::new(GeneratorKind::GaussianWalk, 4096, 1.0, 0);
    let paths = generate_batch(&spec, &seeds).unwrap();
    let hits = paths
        .iter()
        .filter(|p| variation_exponent_estimate(p).regime == Regime::Diffusive)
        .count();
    assert!(hits >= 90, "{hits}/100");
}

#[test]
fn generators_are_deterministic_and_shaped() {
    for kind in [
        GeneratorKind::GaussianWalk,
        GeneratorKind::GeometricWalk,
        GeneratorKind::Constant,
    ] {
        let spec = GeneratorSpec::new(kind, 1, 0.5, 42);
        let a = generate(&spec).unwrap();
        assert_eq!(a.values().len(), 2);
        assert_eq!(a, generate(&spec).unwrap());
    }
    let g = generate(&GeneratorSpec::new(GeneratorKind::GaussianWalk, 1, 0.5, 42)).unwrap();
    assert_eq!(g.first(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mixtures_survive_bounded_adversaries(
        n in 200usize..3000,
        eps_exp in -3.5..-1.5f64,
        cap in 0.01..2.0f64,
        levels in 1u32..=20,
        seed in any::<u64>(),
    ) {
        let epsilon = 10f64.powf(eps_exp);
        let path = generate(&GeneratorSpec::bounded_adversary(n, epsilon, cap, seed)).unwrap();
        prop_assert!(path.increments().all(|d| d.abs() <= epsilon));
        for spec in [
            StrategySpec::DyadicMixtureLow { epsilon, levels },
            StrategySpec::DyadicMixtureHigh { epsilon, levels },
        ] {
            let t = run_game(GameInput::Path(&path), &spec, Protocol::Absolute, 1.0).unwrap();
            prop_assert!(t.min_capital() >= -1e-9, "{spec:?}: {}", t.min_capital());
        }
    }
}
