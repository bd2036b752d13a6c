use proptest::prelude::*;
use volgame::pathstats::{
    abs_factor, beta, hurst_rs, log_sums, p_variation, rel_factor, rs_absolute, rs_relative,
    variation_exponent_estimate, Regime, RsMode, StatsReport,
};
use volgame::{run_game, GameInput, PricePath, Protocol, StrategySpec};

fn walk(start: f64, steps: &[f64]) -> Vec<f64> {
    let mut v = vec![start];
    for s in steps {
        v.push(v.last().unwrap() + s);
    }
    v
}

fn positive(steps: &[f64], s0: f64) -> PricePath {
    PricePath::positive(walk(0.0, steps).iter().map(|l| s0 * l.exp()).collect()).unwrap()
}

proptest! {
    #[test]
    fn beta_is_non_negative(x in -0.999..100.0f64) {
        prop_assert!(beta(x).unwrap() >= 0.0);
    }

    #[test]
    fn beta_is_continuous_across_the_series_branch(x in 1e-4..3e-3f64) {
        let direct = 2.0 * (x - x.ln_1p());
        prop_assert!((beta(x).unwrap() - direct).abs() <= 1e-9 * direct);
    }

    #[test]
    fn log_quadratic_variation_is_p_variation_of_log_path(
        steps in prop::collection::vec(-0.3..0.3f64, 1..100),
        s0 in 0.1..100.0f64,
    ) {
        let path = positive(&steps, s0);
        let sums = log_sums(&path).unwrap();
        let direct = p_variation(&path.log_path().unwrap(), 2.0);
        prop_assert!((sums.sum_sq_log_incr - direct).abs() <= 1e-12 * direct.max(1.0));
        prop_assert!(sums.sum_beta >= 0.0);
        prop_assert!(sums.min_log <= 0.0);
    }

    #[test]
    fn absolute_rs_is_shift_invariant_and_scale_equivariant(
        steps in prop::collection::vec(-2.0..2.0f64, 1..100),
        shift in -50.0..50.0f64,
        scale in 0.01..100.0f64,
    ) {
        let base = walk(0.0, &steps);
        let (r, s) = rs_absolute(&PricePath::absolute(base.clone()).unwrap());
        let shifted = PricePath::absolute(base.iter().map(|v| v + shift).collect()).unwrap();
        let scaled = PricePath::absolute(base.iter().map(|v| v * scale).collect()).unwrap();
        let (r1, s1) = rs_absolute(&shifted);
        let (r2, s2) = rs_absolute(&scaled);
        let tol = 1e-9 * (1.0 + r + s);
        prop_assert!((r1 - r).abs() <= tol * (1.0 + shift.abs()) && (s1 - s).abs() <= tol * (1.0 + shift.abs()));
        prop_assert!((r2 - scale * r).abs() <= tol * scale && (s2 - scale * s).abs() <= tol * scale);
    }

    #[test]
    fn relative_rs_is_scale_invariant(
        steps in prop::collection::vec(-0.3..0.3f64, 1..100),
        scale in 0.01..100.0f64,
    ) {
        let a = positive(&steps, 1.0);
        let b = PricePath::positive(a.values().iter().map(|v| v * scale).collect()).unwrap();
        let (r1, s1) = rs_relative(&a).unwrap();
        let (r2, s2) = rs_relative(&b).unwrap();
        prop_assert!((r1 - r2).abs() <= 1e-9 * (1.0 + r1));
        prop_assert!((s1 - s2).abs() <= 1e-9 * (1.0 + s1));
    }

    #[test]
    fn abs_factor_never_exceeds_n(steps in prop::collection::vec(-2.0..2.0f64, 1..100)) {
        // Cauchy-Schwarz: (Σ ΔS)^2 <= N Σ (ΔS)^2.
        let path = PricePath::absolute(walk(0.0, &steps)).unwrap();
        if let Some(f) = abs_factor(&path) {
            prop_assert!(f <= path.n_steps() as f64 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn report_scale_identity(steps in prop::collection::vec(-0.3..0.3f64, 1..100)) {
        let path = positive(&steps, 3.0);
        let r = StatsReport::compute("x", &path);
        let n = r.n_steps as f64;
        prop_assert!((r.s_abs * r.s_abs * n - r.sum_sq_incr).abs() <= 1e-9 * r.sum_sq_incr.max(1e-300));
        prop_assert_eq!(r.abs_factor.is_none(), r.sum_sq_incr == 0.0);
    }

    #[test]
    fn low_vol_with_reciprocal_variation_pays_the_abs_factor(
        steps in prop::collection::vec(-2.0..2.0f64, 1..100),
    ) {
        let path = PricePath::absolute(walk(1.0, &steps)).unwrap();
        let qv = p_variation(&path, 2.0);
        prop_assume!(qv > 1e-6);
        let t = run_game(GameInput::Path(&path), &StrategySpec::LowVol { c: 1.0 / qv, delta: None }, Protocol::Absolute, 1.0).unwrap();
        let f = abs_factor(&path).unwrap();
        prop_assert!((t.final_capital() - f).abs() <= 1e-9 * f.max(1.0));
    }
}

#[test]
fn relative_factor_of_one_to_e() {
    let path = PricePath::positive(vec![1.0, std::f64::consts::E]).unwrap();
    // 1 / max(1, β(e-1)) with β(e-1) = 2(e - 2).
    let oracle = 1.0 / (2.0 * (std::f64::consts::E - 2.0));
    let f = rel_factor(&path).unwrap().unwrap();
    assert!((f - oracle).abs() < 1e-12, "{f}");
    assert!((f - 0.6961).abs() < 1e-4);
}

#[test]
fn straight_line_statistics() {
    let path = PricePath::absolute((0..=64).map(f64::from).collect()).unwrap();
    assert_eq!(abs_factor(&path), Some(64.0));
    let h = hurst_rs(&path, RsMode::Absolute).unwrap().unwrap();
    assert!((h - 1.0).abs() < 1e-9, "{h}");
    assert_eq!(
        variation_exponent_estimate(&path).regime,
        Regime::SubDiffusive
    );
}

#[test]
fn hurst_undefined_below_minimum_window() {
    let path = PricePath::absolute(vec![0.0, 1.0]).unwrap();
    assert_eq!(hurst_rs(&path, RsMode::Absolute).unwrap(), None);
}
