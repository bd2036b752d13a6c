//! Property suites for the capital identities and guarantees.
//!
//! Each suite generates its own paths from a base seed, plays the relevant
//! strategy through [`run_game`], and checks the result against closed-form
//! capital identities or guaranteed capital bounds computed directly from the
//! path. Suites never share state, and a suite with zero trials passes
//! vacuously with a warning.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data_io::{
    fgn_autocovariance, fgn_batch, generate, generate_batch, GeneratorKind, GeneratorSpec,
};
use crate::pathstats::{abs_factor, growth_factor, hurst_rs, log_sums, p_variation, RsMode};
use crate::protocol::{
    run_game, step_market, step_numeraire, to_numeraire, DriftScenario, GameInput, NumerairePair,
    PricePath, Protocol, BANKRUPTCY_TOLERANCE,
};
use crate::strategies::identity::{
    drift_capitals, identity_residual, low_vol_capitals, relative_residual,
};
use crate::strategies::StrategySpec;

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    /// Worst observed value of the suite's checked quantity (residual,
    /// shortfall, z-score, ...); see `detail`.
    pub worst: f64,
    /// Trials on which a conditional claim was exercised.
    pub events: usize,
    pub detail: String,
    pub warning: Option<String>,
}

impl SuiteReport {
    fn new(id: u8, name: &str, trials: usize) -> Self {
        Self {
            id,
            name: name.to_string(),
            passed: true,
            trials,
            worst: 0.0,
            events: 0,
            detail: String::new(),
            warning: (trials == 0).then(|| "no trials run; suite passes vacuously".to_string()),
        }
    }

    fn fail(&mut self, why: String) {
        if self.passed {
            self.detail = why;
        }
        self.passed = false;
    }

    fn summarize(mut self, what: String) -> Self {
        if self.passed {
            self.detail = what;
        }
        self
    }

    /// One line: `[PASS] 3 low-vol-guarantee: ...`.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("[{verdict}] {:>2} {}: {}", self.id, self.name, self.detail);
        if let Some(w) = &self.warning {
            s.push_str(&format!(" (warning: {w})"));
        }
        s
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn cumulative(start: f64, steps: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(steps.len() + 1);
    let mut acc = start;
    out.push(acc);
    for s in steps {
        acc += s;
        out.push(acc);
    }
    out
}

/// Random walk with a per-path drift drawn uniformly from `[-max_drift, max_drift]`
/// (in units of the step scale).
fn drifting_steps(rng: &mut ChaCha8Rng, n: usize, max_drift: f64) -> Vec<f64> {
    let mu = max_drift * (2.0 * rng.random::<f64>() - 1.0);
    normals(rng, n).into_iter().map(|z| z + mu).collect()
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCheck {
    pub n: u64,
    pub h: f64,
    pub expected: f64,
    pub tolerance: f64,
}

impl Default for GrowthCheck {
    fn default() -> Self {
        Self {
            n: 12_500,
            h: 0.59,
            expected: 5.46,
            tolerance: 0.01,
        }
    }
}

pub fn growth_factor_suite(p: &GrowthCheck) -> SuiteReport {
    let mut r = SuiteReport::new(1, "growth-factor", 1);
    let g = growth_factor(p.n, p.h);
    r.worst = (g - p.expected).abs();
    if r.worst > p.tolerance {
        r.fail(format!(
            "{}^(2*{}-1) = {g:.6}, expected {} ± {}",
            p.n, p.h, p.expected, p.tolerance
        ));
    }
    r.summarize(format!(
        "{}^(2*{}-1) = {g:.4} (expected {} ± {})",
        p.n, p.h, p.expected, p.tolerance
    ))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct LowVolIdentity {
    pub paths: usize,
    pub n_steps: usize,
    pub c: f64,
    pub delta: Option<f64>,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for LowVolIdentity {
    fn default() -> Self {
        Self {
            paths: 1000,
            n_steps: 256,
            c: 1.0,
            delta: Some(20.0),
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

pub fn low_vol_identity_suite(p: &LowVolIdentity) -> SuiteReport {
    let mut r = SuiteReport::new(2, "low-vol-identity", p.paths);
    let spec = StrategySpec::LowVol {
        c: p.c,
        delta: p.delta,
    };
    let gen = GeneratorSpec::new(GeneratorKind::GaussianWalk, p.n_steps, 1.0, 0);
    for i in 0..p.paths {
        let path = match generate(&gen.with_seed(p.seed.wrapping_add(i as u64))) {
            Ok(path) => path,
            Err(e) => return failed(r, format!("generator: {e}")),
        };
        let t = match run_game(GameInput::Path(&path), &spec, Protocol::Absolute, 1.0) {
            Ok(t) => t,
            Err(e) => return failed(r, format!("path {i}: {e}")),
        };
        let closed = low_vol_capitals(path.values(), p.c, 1.0);
        let last = t.stop_index().unwrap_or(p.n_steps);
        if t.stop_index().is_some() {
            r.events += 1;
        }
        for (a, b) in t.capitals().iter().zip(&closed).take(last + 1) {
            r.worst = r.worst.max(relative_residual(*a, *b));
        }
    }
    if r.worst > p.tolerance {
        r.fail(format!(
            "max relative residual {:.3e} > {:.1e}",
            r.worst, p.tolerance
        ));
    }
    let events = r.events;
    let worst = r.worst;
    r.summarize(format!(
        "max relative residual {worst:.3e} <= {:.1e} over {} paths ({events} stopped early)",
        p.tolerance, p.paths
    ))
}

fn failed(mut r: SuiteReport, why: String) -> SuiteReport {
    r.fail(why);
    r
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct LowVolGuarantee {
    pub paths: usize,
    pub n_steps: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Drift per step, in units of the step scale, drawn per path.
    pub max_drift: f64,
    pub bound_slack: f64,
    pub seed: u64,
}

impl Default for LowVolGuarantee {
    fn default() -> Self {
        Self {
            paths: 1000,
            n_steps: 256,
            epsilon: 0.01,
            delta: 0.3,
            max_drift: 0.3,
            bound_slack: 1e-9,
            seed: 0,
        }
    }
}

/// Paths rescaled so `Σ(ΔS)^2 = ε`; LowVol with `C = 1/ε` stopped at `δ`.
pub fn low_vol_guarantee_suite(p: &LowVolGuarantee) -> SuiteReport {
    let mut r = SuiteReport::new(3, "low-vol-guarantee", p.paths);
    let spec = StrategySpec::LowVol {
        c: 1.0 / p.epsilon,
        delta: Some(p.delta),
    };
    let target = p.delta * p.delta / p.epsilon;
    let mut min_capital = f64::INFINITY;
    let mut min_event_capital = f64::INFINITY;
    for i in 0..p.paths {
        let mut rng = rng_for(p.seed.wrapping_add(i as u64), 3);
        let steps = drifting_steps(&mut rng, p.n_steps, p.max_drift);
        let sum_sq: f64 = steps.iter().map(|d| d * d).sum();
        let scale = (p.epsilon / sum_sq).sqrt();
        let scaled: Vec<f64> = steps.iter().map(|d| d * scale).collect();
        let path = PricePath::absolute(cumulative(0.0, &scaled)).expect("finite path");
        let t =
            run_game(GameInput::Path(&path), &spec, Protocol::Absolute, 1.0).expect("valid game");
        min_capital = min_capital.min(t.min_capital());
        let s0 = path.first();
        let excursion = path
            .values()
            .iter()
            .map(|v| (v - s0).abs())
            .fold(0.0, f64::max);
        if excursion >= p.delta {
            r.events += 1;
            min_event_capital = min_event_capital.min(t.final_capital());
        }
    }
    if min_capital < -BANKRUPTCY_TOLERANCE {
        r.fail(format!("capital fell to {min_capital:.3e}"));
    }
    if min_event_capital < target - p.bound_slack {
        r.fail(format!(
            "final capital {min_event_capital:.6} below δ²/ε = {target} on an event path"
        ));
    }
    r.worst = (target - min_event_capital).max(0.0);
    let events = r.events;
    r.summarize(format!(
        "min capital {:.4}; {} event paths, min final capital {} >= δ²/ε = {target}",
        min_capital,
        events,
        fmt_min(min_event_capital)
    ))
}

fn fmt_min(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.4}")
    } else {
        "n/a".to_string()
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct HighVolGuarantee {
    pub paths: usize,
    pub n_steps: usize,
    pub d: f64,
    pub epsilon: f64,
    /// Step scales are drawn uniformly from this range.
    pub step_scale: (f64, f64),
    pub bound_slack: f64,
    pub seed: u64,
}

impl Default for HighVolGuarantee {
    fn default() -> Self {
        Self {
            paths: 1000,
            n_steps: 256,
            d: 1.0,
            epsilon: 0.1,
            step_scale: (0.1, 0.35),
            bound_slack: 1e-9,
            seed: 0,
        }
    }
}

/// Folds `x` into `[-bound, bound]` by reflection at the edges.
fn reflect(mut x: f64, bound: f64) -> f64 {
    loop {
        if x > bound {
            x = 2.0 * bound - x;
        } else if x < -bound {
            x = -2.0 * bound - x;
        } else {
            return x;
        }
    }
}

/// Gaussian walks reflected into `|S_n - S_0| <= D`; HighVol with that `D`.
pub fn high_vol_guarantee_suite(p: &HighVolGuarantee) -> SuiteReport {
    let mut r = SuiteReport::new(4, "high-vol-guarantee", p.paths);
    let spec = StrategySpec::HighVol { d: p.d };
    let target = 1.0 / p.epsilon;
    let threshold = p.d * p.d / p.epsilon;
    let mut min_capital = f64::INFINITY;
    let mut min_event_capital = f64::INFINITY;
    for i in 0..p.paths {
        let mut rng = rng_for(p.seed.wrapping_add(i as u64), 4);
        let sigma = p.step_scale.0 + (p.step_scale.1 - p.step_scale.0) * rng.random::<f64>();
        let mut values = Vec::with_capacity(p.n_steps + 1);
        let mut s = 0.0;
        values.push(s);
        for z in normals(&mut rng, p.n_steps) {
            s = reflect(s + sigma * z, p.d);
            values.push(s);
        }
        let path = PricePath::absolute(values).expect("finite path");
        let t =
            run_game(GameInput::Path(&path), &spec, Protocol::Absolute, 1.0).expect("valid game");
        min_capital = min_capital.min(t.min_capital());
        if p_variation(&path, 2.0) >= threshold {
            r.events += 1;
            min_event_capital = min_event_capital.min(t.final_capital());
        }
    }
    if min_capital < -BANKRUPTCY_TOLERANCE {
        r.fail(format!("capital fell to {min_capital:.3e}"));
    }
    if min_event_capital < target - p.bound_slack {
        r.fail(format!(
            "final capital {min_event_capital:.6} below 1/ε = {target} on an event path"
        ));
    }
    r.worst = (target - min_event_capital).max(0.0);
    let events = r.events;
    r.summarize(format!(
        "min capital {:.4}; {} event paths, min final capital {} >= 1/ε = {target}",
        min_capital,
        events,
        fmt_min(min_event_capital)
    ))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct RelativeGuarantee {
    pub paths: usize,
    pub n_steps: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub max_drift: f64,
    pub bound_slack: f64,
    pub seed: u64,
}

impl Default for RelativeGuarantee {
    fn default() -> Self {
        Self {
            paths: 1000,
            n_steps: 256,
            epsilon: 0.01,
            delta: 0.2,
            max_drift: 0.3,
            bound_slack: 1e-9,
            seed: 0,
        }
    }
}

/// Geometric path `S_0 exp(λ Σ l_i)` with `λ` as large as possible subject to
/// `Σ(d ln S)^2 ∨ Σ β(dS/S) <= ε`.
fn log_rescaled_path(s0: f64, log_steps: &[f64], epsilon: f64) -> PricePath {
    let build = |lambda: f64| {
        let scaled: Vec<f64> = log_steps.iter().map(|l| l * lambda).collect();
        let values = cumulative(0.0, &scaled)
            .into_iter()
            .map(|x| s0 * x.exp())
            .collect();
        PricePath::positive(values).expect("positive path")
    };
    let variation = |lambda: f64| log_sums(&build(lambda)).expect("positive").variation();
    let sum_sq: f64 = log_steps.iter().map(|l| l * l).sum();
    let mut lo = 0.0;
    let mut hi = 2.0 * (epsilon / sum_sq).sqrt();
    while variation(hi) <= epsilon {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if variation(mid) <= epsilon {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    build(lo)
}

/// Relative strategy with `C = 1/((1+γ)ε)`, `γ` the observed log drawdown.
pub fn relative_guarantee_suite(p: &RelativeGuarantee) -> SuiteReport {
    let mut r = SuiteReport::new(5, "relative-guarantee", p.paths);
    let mut min_capital = f64::INFINITY;
    let mut worst_shortfall = f64::NEG_INFINITY;
    for i in 0..p.paths {
        let mut rng = rng_for(p.seed.wrapping_add(i as u64), 5);
        let s0 = 0.5 + 1.5 * rng.random::<f64>();
        let steps = drifting_steps(&mut rng, p.n_steps, p.max_drift);
        let path = log_rescaled_path(s0, &steps, p.epsilon);
        let sums = log_sums(&path).expect("positive path");
        if sums.variation() > p.epsilon {
            return failed(r, format!("path {i} violates the variation constraint"));
        }
        let gamma = -sums.min_log;
        let spec = StrategySpec::Relative {
            epsilon: p.epsilon,
            gamma,
            delta: Some(p.delta),
        };
        let t =
            run_game(GameInput::Path(&path), &spec, Protocol::Relative, 1.0).expect("valid game");
        min_capital = min_capital.min(t.min_capital());
        if sums.max_abs_log >= p.delta {
            r.events += 1;
            let target = p.delta * p.delta / ((1.0 + gamma) * p.epsilon);
            worst_shortfall = worst_shortfall.max(target - t.final_capital());
        }
    }
    if min_capital < -BANKRUPTCY_TOLERANCE {
        r.fail(format!("capital fell to {min_capital:.3e}"));
    }
    if worst_shortfall > p.bound_slack {
        r.fail(format!(
            "final capital fell {worst_shortfall:.3e} short of δ²/((1+γ)ε) on an event path"
        ));
    }
    r.worst = worst_shortfall.max(0.0);
    let events = r.events;
    r.summarize(format!(
        "min capital {:.4}; {} event paths, worst margin over δ²/((1+γ)ε) {}",
        min_capital,
        events,
        if worst_shortfall.is_finite() {
            format!("{:.4}", -worst_shortfall)
        } else {
            "n/a".into()
        }
    ))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct NumeraireEquivalence {
    pub pairs: usize,
    pub n_steps: usize,
    pub move_bound: f64,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for NumeraireEquivalence {
    fn default() -> Self {
        Self {
            pairs: 500,
            n_steps: 256,
            move_bound: 2.0,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

fn positive_walk(rng: &mut ChaCha8Rng, n: usize, start: f64, drift: f64, vol: f64) -> Vec<f64> {
    let steps: Vec<f64> = normals(rng, n)
        .into_iter()
        .map(|z| drift + vol * z)
        .collect();
    cumulative(0.0, &steps)
        .into_iter()
        .map(|x| start * x.exp())
        .collect()
}

/// `I_n / B_n` under the numéraire protocol against the plain protocol on
/// `S/B` started from `I_0 / B_0`, for random moves and for a strategy.
pub fn numeraire_suite(p: &NumeraireEquivalence) -> SuiteReport {
    let mut r = SuiteReport::new(6, "numeraire-equivalence", p.pairs);
    for i in 0..p.pairs {
        let mut rng = rng_for(p.seed.wrapping_add(i as u64), 6);
        let s0 = 0.5 + 1.5 * rng.random::<f64>();
        let b0 = 0.5 + 1.5 * rng.random::<f64>();
        let rate = -0.001 + 0.003 * rng.random::<f64>();
        let stock = positive_walk(&mut rng, p.n_steps, s0, 0.0, 0.02);
        let bond = positive_walk(&mut rng, p.n_steps, b0, rate, 0.005);
        let moves: Vec<f64> = (0..p.n_steps)
            .map(|_| p.move_bound * (2.0 * rng.random::<f64>() - 1.0))
            .collect();
        let pair = NumerairePair::new(
            PricePath::positive(stock.clone()).expect("positive"),
            PricePath::positive(bond.clone()).expect("positive"),
        )
        .expect("same length");
        let dagger = to_numeraire(&pair);
        let dv = dagger.values();

        let initial = 1.0;
        let mut nominal = initial;
        let mut plain = initial / b0;
        for n in 1..=p.n_steps {
            let mv = moves[n - 1];
            nominal = step_numeraire(nominal, mv, stock[n - 1], stock[n], bond[n - 1], bond[n])
                .expect("finite");
            plain = step_market(plain, mv, dv[n - 1], dv[n]).expect("finite");
            r.worst = r.worst.max(relative_residual(nominal / bond[n], plain));
        }

        let spec = StrategySpec::LowVol {
            c: 1.0,
            delta: None,
        };
        let t_num = run_game(
            GameInput::Numeraire(&pair),
            &spec,
            Protocol::Numeraire,
            initial,
        )
        .expect("valid game");
        let t_plain = run_game(
            GameInput::Path(&dagger),
            &spec,
            Protocol::Absolute,
            initial / b0,
        )
        .expect("valid game");
        let nominal = t_num.capitals().iter().zip(&bond);
        for ((a, b), plain) in nominal.zip(t_plain.capitals()) {
            r.worst = r.worst.max(relative_residual(a / b, *plain));
        }
    }
    if r.worst > p.tolerance {
        r.fail(format!(
            "max relative residual {:.3e} > {:.1e}",
            r.worst, p.tolerance
        ));
    }
    let worst = r.worst;
    r.summarize(format!(
        "max relative residual {worst:.3e} <= {:.1e} over {} pairs",
        p.tolerance, p.pairs
    ))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct DriftIdentity {
    pub scenarios: usize,
    pub n_steps: usize,
    /// Upper bound on `Σ m_n^2`.
    pub forecast_budget: f64,
    pub c: f64,
    pub delta: f64,
    pub tolerance: f64,
    pub bound_slack: f64,
    pub seed: u64,
}

impl Default for DriftIdentity {
    fn default() -> Self {
        Self {
            scenarios: 500,
            n_steps: 256,
            forecast_budget: 1e-4,
            c: 100.0,
            delta: 0.1,
            tolerance: 1e-9,
            bound_slack: 1e-9,
            seed: 0,
        }
    }
}

fn drift_scenario(rng: &mut ChaCha8Rng, n: usize, budget: f64) -> DriftScenario {
    let level = 2.0 * rng.random::<f64>() - 1.0;
    let amp = rng.random::<f64>();
    let freq = 1.0 + 10.0 * rng.random::<f64>();
    let raw: Vec<f64> = (0..n)
        .map(|k| level + amp * (std::f64::consts::TAU * freq * k as f64 / n as f64).sin())
        .collect();
    let raw_sq: f64 = raw.iter().map(|m| m * m).sum();
    let share = rng.random::<f64>().max(1e-3);
    let scale = (share * budget / raw_sq).sqrt();
    let m: Vec<f64> = raw.iter().map(|v| v * scale).collect();
    let sigma = 0.003 + 0.007 * rng.random::<f64>();
    let bias = 0.002 * (2.0 * rng.random::<f64>() - 1.0);
    let x: Vec<f64> = m
        .iter()
        .zip(normals(rng, n))
        .map(|(mi, z)| mi + sigma * z + bias)
        .collect();
    let s0 = 2.0 * rng.random::<f64>() - 1.0;
    DriftScenario::new(s0, m, x).expect("finite scenario")
}

/// Drift-combined strategy: identity without stopping, capital floor with
/// the `δ`-stop.
pub fn drift_suite(p: &DriftIdentity) -> SuiteReport {
    let mut r = SuiteReport::new(7, "drift-identity", p.scenarios);
    let free = StrategySpec::DriftCombined {
        c: p.c,
        delta: None,
    };
    let stopped = StrategySpec::DriftCombined {
        c: p.c,
        delta: Some(p.delta),
    };
    let mut worst_shortfall = f64::NEG_INFINITY;
    for i in 0..p.scenarios {
        let mut rng = rng_for(p.seed.wrapping_add(i as u64), 7);
        let s = drift_scenario(&mut rng, p.n_steps, p.forecast_budget);
        let sum_m: f64 = s.forecaster_moves().iter().map(|m| m * m).sum();
        if sum_m > p.forecast_budget {
            return failed(r, format!("scenario {i} exceeds the forecast budget"));
        }
        let t = run_game(GameInput::Drift(&s), &free, Protocol::Drift, 1.0).expect("valid game");
        let closed = drift_capitals(&s, p.c, 1.0);
        for (a, b) in t.capitals().iter().zip(&closed) {
            r.worst = r.worst.max(relative_residual(*a, *b));
        }

        let t = run_game(GameInput::Drift(&s), &stopped, Protocol::Drift, 1.0).expect("valid game");
        if let Some(res) = identity_residual(&stopped, &GameInput::Drift(&s), &t) {
            r.worst = r.worst.max(res);
        }
        if t.stop_index().is_some() {
            r.events += 1;
            let sum_x: f64 = s.reality_increments().iter().map(|x| x * x).sum();
            let floor = 1.0 + p.c * p.delta * p.delta - p.c * sum_x;
            worst_shortfall = worst_shortfall.max(floor - t.final_capital());
        }
    }
    if r.worst > p.tolerance {
        r.fail(format!(
            "max relative residual {:.3e} > {:.1e}",
            r.worst, p.tolerance
        ));
    }
    if worst_shortfall > p.bound_slack {
        r.fail(format!(
            "stopped capital fell {worst_shortfall:.3e} short of 1 + Cδ² - CΣx²"
        ));
    }
    let worst = r.worst;
    let events = r.events;
    r.summarize(format!(
        "max relative residual {worst:.3e} <= {:.1e}; {} stopped scenarios above 1 + Cδ² - CΣx²",
        p.tolerance, events
    ))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSafety {
    pub paths: usize,
    pub epsilon: f64,
    pub levels: u32,
    /// Path lengths are drawn uniformly from this range.
    pub n_steps: (usize, usize),
    /// Range caps are drawn log-uniformly from this range.
    pub range_cap: (f64, f64),
    pub bankruptcy_slack: f64,
    pub seed: u64,
}

impl Default for MixtureSafety {
    fn default() -> Self {
        Self {
            paths: 500,
            epsilon: 1e-3,
            levels: 20,
            n_steps: (1_000, 12_000),
            range_cap: (0.01, 4.0),
            bankruptcy_slack: 1e-9,
            seed: 0,
        }
    }
}

/// Both truncated dyadic mixtures on bounded-step adversarial paths.
pub fn mixture_suite(p: &MixtureSafety) -> SuiteReport {
    let mut r = SuiteReport::new(8, "mixture-safety", p.paths);
    let low = StrategySpec::DyadicMixtureLow {
        epsilon: p.epsilon,
        levels: p.levels,
    };
    let high = StrategySpec::DyadicMixtureHigh {
        epsilon: p.epsilon,
        levels: p.levels,
    };
    let mut min_capital = f64::INFINITY;
    let mut max_final: f64 = 0.0;
    for i in 0..p.paths {
        let seed = p.seed.wrapping_add(i as u64);
        let mut rng = rng_for(seed, 8);
        let n = p.n_steps.0 + rng.random_range(0..=(p.n_steps.1 - p.n_steps.0));
        let cap = p.range_cap.0 * (p.range_cap.1 / p.range_cap.0).powf(rng.random::<f64>());
        let path = match generate(&GeneratorSpec::bounded_adversary(n, p.epsilon, cap, seed)) {
            Ok(path) => path,
            Err(e) => return failed(r, format!("generator: {e}")),
        };
        if path.increments().any(|d| d.abs() > p.epsilon) {
            return failed(r, format!("path {i} breaks the step bound"));
        }
        for spec in [&low, &high] {
            let t = run_game(GameInput::Path(&path), spec, Protocol::Absolute, 1.0)
                .expect("valid game");
            min_capital = min_capital.min(t.min_capital());
            max_final = max_final.max(t.final_capital());
            if t.stop_index().is_some() {
                r.events += 1;
            }
        }
    }
    r.worst = (-min_capital).max(0.0);
    if min_capital < -p.bankruptcy_slack {
        r.fail(format!("mixture capital fell to {min_capital:.3e}"));
    }
    r.summarize(format!(
        "min capital {} over {} paths x 2 mixtures (largest final capital {max_final:.3})",
        fmt_min(min_capital),
        p.paths
    ))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct HurstSanity {
    pub seeds: usize,
    pub n_steps: usize,
    pub band: (f64, f64),
    pub fractional_h: f64,
    pub min_gap: f64,
    pub seed: u64,
}

impl Default for HurstSanity {
    fn default() -> Self {
        Self {
            seeds: 100,
            n_steps: 1 << 14,
            band: (0.45, 0.58),
            fractional_h: 0.7,
            min_gap: 0.1,
            seed: 0,
        }
    }
}

fn mean_hurst(paths: &[PricePath]) -> (f64, usize) {
    let estimates: Vec<f64> = paths
        .iter()
        .filter_map(|p| hurst_rs(p, RsMode::Absolute).ok().flatten())
        .collect();
    let undefined = paths.len() - estimates.len();
    (
        estimates.iter().sum::<f64>() / estimates.len().max(1) as f64,
        undefined,
    )
}

/// Mean uncentered R/S slope for random walks, and its increase for a
/// persistent fractional walk.
pub fn hurst_suite(p: &HurstSanity) -> SuiteReport {
    let mut r = SuiteReport::new(9, "hurst-sanity", p.seeds);
    if p.seeds == 0 {
        return r.summarize("no seeds".into());
    }
    let seeds: Vec<u64> = (0..p.seeds as u64)
        .map(|i| p.seed.wrapping_add(i))
        .collect();
    let walk = GeneratorSpec::new(GeneratorKind::GaussianWalk, p.n_steps, 1.0, 0);
    let frac = GeneratorSpec::fractional(p.n_steps, p.fractional_h, 1.0, 0);
    let white = GeneratorSpec::fractional(p.n_steps, 0.5, 1.0, 0);
    let batches = (
        generate_batch(&walk, &seeds),
        generate_batch(&white, &seeds),
        generate_batch(&frac, &seeds),
    );
    let (Ok(walks), Ok(whites), Ok(fracs)) = batches else {
        return failed(r, "generator rejected the configuration".into());
    };
    let (walk_mean, u1) = mean_hurst(&walks);
    let (white_mean, u2) = mean_hurst(&whites);
    let (frac_mean, u3) = mean_hurst(&fracs);
    if u1 + u2 + u3 > 0 {
        r.warning = Some(format!("{} undefined estimates skipped", u1 + u2 + u3));
    }
    let gap = frac_mean - white_mean;
    if !(p.band.0..=p.band.1).contains(&walk_mean) {
        r.fail(format!(
            "random-walk mean {walk_mean:.4} outside [{}, {}]",
            p.band.0, p.band.1
        ));
    }
    if gap < p.min_gap {
        r.fail(format!(
            "h={} mean {frac_mean:.4} exceeds h=0.5 mean {white_mean:.4} by only {gap:.4}",
            p.fractional_h
        ));
    }
    r.worst = walk_mean;
    r.events = p.seeds;
    r.summarize(format!(
        "random-walk mean {walk_mean:.4} in [{}, {}]; h={} mean {frac_mean:.4} - h=0.5 mean {white_mean:.4} = {gap:.4} >= {}",
        p.band.0, p.band.1, p.fractional_h, p.min_gap
    ))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct FgnAutocovariance {
    pub seeds: usize,
    pub n_steps: usize,
    pub hs: Vec<f64>,
    pub max_lag: usize,
    pub max_z: f64,
    pub seed: u64,
}

impl Default for FgnAutocovariance {
    fn default() -> Self {
        Self {
            seeds: 200,
            n_steps: 4096,
            hs: vec![0.3, 0.5, 0.7],
            max_lag: 4,
            max_z: 3.0,
            seed: 0,
        }
    }
}

/// `(1/(n-k)) Σ x_i x_{i+k}` (the mean is known to be zero).
pub fn sample_autocovariance(x: &[f64], lag: usize) -> f64 {
    let n = x.len() - lag;
    x[..n]
        .iter()
        .zip(&x[lag..])
        .map(|(a, b)| a * b)
        .sum::<f64>()
        / n as f64
}

/// Sample autocovariance of generated increments against the analytic fGn
/// autocovariance, in standard errors of the across-seed mean.
pub fn fgn_suite(p: &FgnAutocovariance) -> SuiteReport {
    let mut r = SuiteReport::new(10, "fgn-autocovariance", p.seeds);
    if p.seeds < 2 {
        return r.summarize("fewer than two seeds".into());
    }
    let seeds: Vec<u64> = (0..p.seeds as u64)
        .map(|i| p.seed.wrapping_add(i))
        .collect();
    let mut cells = vec![];
    for &h in &p.hs {
        let noise = fgn_batch(p.n_steps, h, &seeds);
        for lag in 1..=p.max_lag {
            let samples: Vec<f64> = noise
                .iter()
                .map(|x| sample_autocovariance(x, lag))
                .collect();
            let k = samples.len() as f64;
            let mean = samples.iter().sum::<f64>() / k;
            let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (k - 1.0);
            let se = (var / k).sqrt();
            let expected = fgn_autocovariance(lag, h);
            let z = (mean - expected).abs() / se;
            r.worst = r.worst.max(z);
            cells.push(format!("h={h} lag {lag}: z={z:.2}"));
            if z > p.max_z {
                r.fail(format!(
                    "h={h} lag {lag}: mean {mean:.5} vs analytic {expected:.5} is {z:.2} standard errors"
                ));
            }
        }
    }
    let worst = r.worst;
    r.events = p.seeds;
    r.summarize(format!(
        "worst |z| = {worst:.2} <= {} ({})",
        p.max_z,
        cells.join(", ")
    ))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct FactorEquality {
    pub paths: usize,
    pub n_steps: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for FactorEquality {
    fn default() -> Self {
        Self {
            paths: 100,
            n_steps: 256,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

/// LowVol with `C = 1/Σ(ΔS)^2` and no stop ends at the abs factor.
pub fn factor_equality_suite(p: &FactorEquality) -> SuiteReport {
    let mut r = SuiteReport::new(11, "factor-equality", p.paths);
    let gen = GeneratorSpec::new(GeneratorKind::GaussianWalk, p.n_steps, 1.0, 0);
    for i in 0..p.paths {
        let path = generate(&gen.with_seed(p.seed.wrapping_add(i as u64))).expect("valid spec");
        let factor = abs_factor(&path).expect("non-constant path");
        let spec = StrategySpec::LowVol {
            c: 1.0 / p_variation(&path, 2.0),
            delta: None,
        };
        let t =
            run_game(GameInput::Path(&path), &spec, Protocol::Absolute, 1.0).expect("valid game");
        r.worst = r.worst.max(relative_residual(t.final_capital(), factor));
    }
    if r.worst > p.tolerance {
        r.fail(format!(
            "max relative residual {:.3e} > {:.1e}",
            r.worst, p.tolerance
        ));
    }
    let worst = r.worst;
    r.summarize(format!(
        "max |I_N - abs factor| (relative) {worst:.3e} <= {:.1e} over {} paths",
        p.tolerance, p.paths
    ))
}

// ---------------------------------------------------------------------------

/// Overrides applied to every suite by [`run_all`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyOptions {
    /// Replaces each suite's path/seed count.
    pub trials: Option<usize>,
    /// Replaces the relative tolerance of the identity suites (2, 6, 7, 11).
    pub tolerance: Option<f64>,
    pub seed: u64,
}

pub fn run_all(opts: &VerifyOptions) -> Vec<SuiteReport> {
    let trials = |default: usize| opts.trials.unwrap_or(default);
    let tol = |default: f64| opts.tolerance.unwrap_or(default);
    let seed = opts.seed;

    let low = LowVolIdentity::default();
    let t3 = LowVolGuarantee::default();
    let t4 = HighVolGuarantee::default();
    let t5 = RelativeGuarantee::default();
    let num = NumeraireEquivalence::default();
    let drift = DriftIdentity::default();
    let mix = MixtureSafety::default();
    let hurst = HurstSanity::default();
    let fgn = FgnAutocovariance::default();
    let fac = FactorEquality::default();

    vec![
        growth_factor_suite(&GrowthCheck::default()),
        low_vol_identity_suite(&LowVolIdentity {
            paths: trials(low.paths),
            tolerance: tol(low.tolerance),
            seed,
            ..low
        }),
        low_vol_guarantee_suite(&LowVolGuarantee {
            paths: trials(t3.paths),
            seed,
            ..t3
        }),
        high_vol_guarantee_suite(&HighVolGuarantee {
            paths: trials(t4.paths),
            seed,
            ..t4
        }),
        relative_guarantee_suite(&RelativeGuarantee {
            paths: trials(t5.paths),
            seed,
            ..t5
        }),
        numeraire_suite(&NumeraireEquivalence {
            pairs: trials(num.pairs),
            tolerance: tol(num.tolerance),
            seed,
            ..num
        }),
        drift_suite(&DriftIdentity {
            scenarios: trials(drift.scenarios),
            tolerance: tol(drift.tolerance),
            seed,
            ..drift
        }),
        mixture_suite(&MixtureSafety {
            paths: trials(mix.paths),
            seed,
            ..mix
        }),
        hurst_suite(&HurstSanity {
            seeds: trials(hurst.seeds),
            seed,
            ..hurst
        }),
        fgn_suite(&FgnAutocovariance {
            seeds: trials(fgn.seeds),
            seed,
            ..fgn
        }),
        factor_equality_suite(&FactorEquality {
            paths: trials(fac.paths),
            tolerance: tol(fac.tolerance),
            seed,
            ..fac
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_stays_inside() {
        assert_eq!(reflect(1.2, 1.0), 0.8);
        assert_eq!(reflect(-1.5, 1.0), -0.5);
        assert_eq!(reflect(3.5, 1.0), -0.5);
        assert_eq!(reflect(0.3, 1.0), 0.3);
    }

    #[test]
    fn log_rescaling_hits_the_budget() {
        let steps = [0.3, -0.1, 0.5, 0.2, -0.4];
        let path = log_rescaled_path(2.0, &steps, 0.01);
        let v = log_sums(&path).unwrap().variation();
        assert!(v <= 0.01);
        assert!(v > 0.01 * (1.0 - 1e-9));
        assert_eq!(path.first(), 2.0);
    }

    #[test]
    fn zero_trials_pass_with_warning() {
        let r = low_vol_identity_suite(&LowVolIdentity {
            paths: 0,
            ..Default::default()
        });
        assert!(r.passed);
        assert!(r.warning.is_some());
        let r = hurst_suite(&HurstSanity {
            seeds: 0,
            ..Default::default()
        });
        assert!(r.passed);
    }

    #[test]
    fn zero_tolerance_fails_identity_suite() {
        let r = low_vol_identity_suite(&LowVolIdentity {
            paths: 50,
            tolerance: 0.0,
            ..Default::default()
        });
        assert!(!r.passed, "{}", r.line());
    }

    #[test]
    fn small_suites_pass() {
        assert!(
            low_vol_guarantee_suite(&LowVolGuarantee {
                paths: 50,
                ..Default::default()
            })
            .passed
        );
        assert!(
            high_vol_guarantee_suite(&HighVolGuarantee {
                paths: 50,
                ..Default::default()
            })
            .passed
        );
        assert!(
            numeraire_suite(&NumeraireEquivalence {
                pairs: 20,
                ..Default::default()
            })
            .passed
        );
        assert!(
            drift_suite(&DriftIdentity {
                scenarios: 20,
                ..Default::default()
            })
            .passed
        );
    }

    #[test]
    fn sample_autocovariance_of_alternating_series() {
        let x = [1.0, -1.0, 1.0, -1.0, 1.0];
        assert_eq!(sample_autocovariance(&x, 1), -1.0);
        assert_eq!(sample_autocovariance(&x, 2), 1.0);
    }
}
