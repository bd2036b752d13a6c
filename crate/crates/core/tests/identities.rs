//! Capital identities checked against oracles written out here, independently
//! of the library's closed-form helpers.

use proptest::prelude::*;
use volgame::protocol::{step_market, step_numeraire, to_numeraire};
use volgame::{
    run_game, DriftScenario, GameInput, NumerairePair, PricePath, Protocol, StrategySpec,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

fn walk(start: f64, steps: &[f64]) -> Vec<f64> {
    let mut v = vec![start];
    for s in steps {
        v.push(v.last().unwrap() + s);
    }
    v
}

proptest! {
    #[test]
    fn low_vol_telescopes(
        start in -5.0..5.0f64,
        steps in prop::collection::vec(-1.0..1.0f64, 1..80),
        c in 0.01..10.0f64,
    ) {
        let values = walk(start, &steps);
        let path = PricePath::absolute(values.clone()).unwrap();
        let t = run_game(GameInput::Path(&path), &StrategySpec::LowVol { c, delta: None }, Protocol::Absolute, 1.0).unwrap();
        let mut qv = 0.0;
        for n in 0..values.len() {
            if n > 0 {
                qv += (values[n] - values[n - 1]).powi(2);
            }
            let oracle = 1.0 + c * (values[n] - start).powi(2) - c * qv;
            prop_assert!(close(t.capitals()[n], oracle, 1e-9), "n={n}: {} vs {oracle}", t.capitals()[n]);
        }
    }

    #[test]
    fn high_vol_telescopes_inside_its_band(
        steps in prop::collection::vec(-0.05..0.05f64, 1..80),
        d in 5.0..20.0f64,
    ) {
        // |S_n - S_0| <= 4 < D, so the stop never fires.
        let values = walk(1.0, &steps);
        let path = PricePath::absolute(values.clone()).unwrap();
        let t = run_game(GameInput::Path(&path), &StrategySpec::HighVol { d }, Protocol::Absolute, 1.0).unwrap();
        prop_assert_eq!(t.stop_index(), None);
        let mut qv = 0.0;
        for n in 1..values.len() {
            qv += (values[n] - values[n - 1]).powi(2);
            let oracle = 1.0 + (qv - (values[n] - 1.0).powi(2)) / (d * d);
            prop_assert!(close(t.capitals()[n], oracle, 1e-9));
        }
    }

    #[test]
    fn relative_telescopes(
        s0 in 0.1..10.0f64,
        log_steps in prop::collection::vec(-0.2..0.2f64, 1..80),
        epsilon in 0.01..1.0f64,
        gamma in 0.0..2.0f64,
    ) {
        let values: Vec<f64> = walk(0.0, &log_steps).iter().map(|l| s0 * l.exp()).collect();
        let path = PricePath::positive(values.clone()).unwrap();
        let spec = StrategySpec::Relative { epsilon, gamma, delta: None };
        let t = run_game(GameInput::Path(&path), &spec, Protocol::Relative, 1.0).unwrap();
        let c = 1.0 / ((1.0 + gamma) * epsilon);
        let beta = |x: f64| 2.0 * (x - x.ln_1p());
        let (mut cross, mut qv) = (0.0, 0.0);
        for n in 1..values.len() {
            let r = values[n] / values[n - 1] - 1.0;
            cross += (values[n - 1] / s0).ln() * beta(r);
            qv += (values[n] / values[n - 1]).ln().powi(2);
            let oracle = 1.0 + c * (values[n] / s0).ln().powi(2) + c * cross - c * qv;
            prop_assert!(close(t.capitals()[n], oracle, 1e-9), "n={n}");
        }
    }

    #[test]
    fn numeraire_game_is_the_plain_game_on_the_ratio(
        stock_logs in prop::collection::vec(-0.1..0.1f64, 2..60),
        bond_logs in prop::collection::vec(-0.02..0.05f64, 60),
        moves in prop::collection::vec(-3.0..3.0f64, 60),
        s0 in 0.5..5.0f64,
        b0 in 0.5..5.0f64,
        initial in 0.1..10.0f64,
    ) {
        let n = stock_logs.len();
        let stock: Vec<f64> = walk(0.0, &stock_logs).iter().map(|l| s0 * l.exp()).collect();
        let bond: Vec<f64> = walk(0.0, &bond_logs[..n]).iter().map(|l| b0 * l.exp()).collect();
        let pair = NumerairePair::new(
            PricePath::positive(stock.clone()).unwrap(),
            PricePath::positive(bond.clone()).unwrap(),
        ).unwrap();
        let ratio = to_numeraire(&pair);
        let (mut nominal, mut plain) = (initial, initial / b0);
        for i in 1..=n {
            nominal = step_numeraire(nominal, moves[i - 1], stock[i - 1], stock[i], bond[i - 1], bond[i]).unwrap();
            plain = step_market(plain, moves[i - 1], stock[i - 1] / bond[i - 1], stock[i] / bond[i]).unwrap();
            prop_assert!(close(nominal / bond[i], plain, 1e-9));
            prop_assert!(close(ratio.values()[i], stock[i] / bond[i], 1e-15));
        }
    }

    #[test]
    fn stopped_strategies_stay_flat(
        steps in prop::collection::vec(-0.5..0.5f64, 5..80),
        delta in 0.2..1.0f64,
    ) {
        let path = PricePath::absolute(walk(0.0, &steps)).unwrap();
        for spec in [
            StrategySpec::LowVol { c: 1.0, delta: Some(delta) },
            StrategySpec::HighVol { d: delta },
            StrategySpec::DyadicMixtureLow { epsilon: 0.3, levels: 6 },
            StrategySpec::DyadicMixtureHigh { epsilon: 0.3, levels: 6 },
        ] {
            let t = run_game(GameInput::Path(&path), &spec, Protocol::Absolute, 1.0).unwrap();
            if let Some(k) = t.stop_index() {
                prop_assert!(t.moves()[k..].iter().all(|&m| m == 0.0), "{spec:?}");
                let last = t.capitals()[k];
                prop_assert!(t.capitals()[k..].iter().all(|&c| c == last));
            }
        }
    }

    #[test]
    fn low_vol_stop_is_the_first_excursion(
        steps in prop::collection::vec(-0.5..0.5f64, 5..80),
        delta in 0.2..1.0f64,
    ) {
        let values = walk(0.0, &steps);
        let path = PricePath::absolute(values.clone()).unwrap();
        let t = run_game(GameInput::Path(&path), &StrategySpec::LowVol { c: 1.0, delta: Some(delta) }, Protocol::Absolute, 1.0).unwrap();
        // The move chosen after observing S_k is the first zero one.
        let first = values[..values.len() - 1].iter().position(|v| v.abs() >= delta);
        prop_assert_eq!(t.stop_index(), first);
    }
}

#[test]
fn drift_game_matches_integer_oracle_exactly() {
    // Small integers keep every intermediate exactly representable.
    let m = [1.0, -2.0, 0.0, 3.0, 1.0, -1.0, 2.0];
    let x = [2.0, -1.0, -3.0, 4.0, 0.0, 1.0, -2.0];
    let s0 = 5.0;
    let c = 2.0;
    let scenario = DriftScenario::new(s0, m.to_vec(), x.to_vec()).unwrap();
    let t = run_game(
        GameInput::Drift(&scenario),
        &StrategySpec::DriftCombined { c, delta: None },
        Protocol::Drift,
        1.0,
    )
    .unwrap();
    let (mut s, mut trend, mut sx, mut sm) = (s0, s0, 0.0, 0.0);
    for n in 0..m.len() {
        s += x[n];
        trend += m[n];
        sx += x[n] * x[n];
        sm += m[n] * m[n];
        let oracle = 1.0 + c * (s - trend).powi(2) - c * sx + c * sm;
        assert_eq!(t.capitals()[n + 1], oracle, "n={}", n + 1);
    }
}

#[test]
fn drift_game_without_forecasts_is_low_vol() {
    let x = [0.3, -0.1, 0.25, -0.4, 0.05];
    let scenario = DriftScenario::new(0.5, vec![0.0; x.len()], x.to_vec()).unwrap();
    let drift = run_game(
        GameInput::Drift(&scenario),
        &StrategySpec::DriftCombined {
            c: 1.5,
            delta: Some(0.4),
        },
        Protocol::Drift,
        1.0,
    )
    .unwrap();
    let path = PricePath::absolute(walk(0.5, &x)).unwrap();
    let plain = run_game(
        GameInput::Path(&path),
        &StrategySpec::LowVol {
            c: 1.5,
            delta: Some(0.4),
        },
        Protocol::Absolute,
        1.0,
    )
    .unwrap();
    assert_eq!(drift.stop_index(), plain.stop_index());
    for (a, b) in drift.capitals().iter().zip(plain.capitals()) {
        assert!(close(*a, *b, 1e-12));
    }
}

#[test]
fn numeraire_run_game_matches_plain_run_on_ratio() {
    let stock = PricePath::positive(vec![2.0, 2.2, 1.9, 2.4, 2.5]).unwrap();
    let bond = PricePath::positive(vec![1.0, 1.01, 1.03, 1.02, 1.05]).unwrap();
    let pair = NumerairePair::new(stock, bond.clone()).unwrap();
    let spec = StrategySpec::LowVol {
        c: 0.7,
        delta: None,
    };
    let num = run_game(GameInput::Numeraire(&pair), &spec, Protocol::Numeraire, 3.0).unwrap();
    let ratio = to_numeraire(&pair);
    let plain = run_game(GameInput::Path(&ratio), &spec, Protocol::Absolute, 3.0).unwrap();
    for (n, (a, b)) in num.capitals().iter().zip(plain.capitals()).enumerate() {
        assert!(close(a / bond.values()[n], *b, 1e-12), "n={n}");
    }
}
