//! Investor/Skeptic strategies as functions of the observed price history.
//!
//! Every move function receives the prices announced so far, `S_0..S_{n-1}`,
//! and returns the move `M_n` that will be settled against
//! `ΔS_n = S_n - S_{n-1}`. A strategy written in continuous notation as
//! `M_n := f(S_n)` is therefore evaluated at the last observed price.
//!
//! All stopping thresholds are closed (`>=`). Once a strategy (or a mixture
//! component) stops it plays `0` for the rest of the game.

pub mod identity;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deepest dyadic level a mixture may use.
pub const MAX_DYADIC_LEVEL: u32 = 60;

/// Default truncation of the dyadic mixtures.
pub const DEFAULT_DYADIC_LEVEL: u32 = 20;

/// Declarative description of one strategy and its constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategySpec {
    /// `M_n = 2C(S_{n-1} - S_0)`, optionally stopped once `|S - S_0| >= delta`.
    LowVol {
        c: f64,
        #[serde(default)]
        delta: Option<f64>,
    },
    /// `M_n = -2D^{-2}(S_{n-1} - S_0)`, stopped once `|S - S_0| >= D`.
    HighVol {
        d: f64,
    },
    /// `M_n = 2C ln(S_{n-1}/S_0) / S_{n-1}` with `C = 1/((1+gamma) epsilon)`.
    Relative {
        epsilon: f64,
        gamma: f64,
        #[serde(default)]
        delta: Option<f64>,
    },
    BuyAndHold {
        units: f64,
    },
    /// Half high-volatility with `D = 2K`, half one share held throughout.
    FiftyFifty {
        k: f64,
    },
    /// `Σ_m 2^{-m}` low-volatility components with `C = 2^m`.
    DyadicMixtureLow {
        epsilon: f64,
        levels: u32,
    },
    /// `Σ_m 2^{-m}` high-volatility components with `D = 2^m`.
    DyadicMixtureHigh {
        epsilon: f64,
        levels: u32,
    },
    /// Low-volatility play on `S - T` minus `2C m_n`, for the drift protocol.
    DriftCombined {
        c: f64,
        #[serde(default)]
        delta: Option<f64>,
    },
}

/// What the strategy sees before choosing `M_n`.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    /// `S_0..S_{n-1}`.
    pub prices: &'a [f64],
    /// `T_0..T_{n-1}` (drift protocol only).
    pub trend: Option<&'a [f64]>,
    /// Forecaster's `m_n`, announced before Skeptic moves (drift protocol only).
    pub forecast: Option<f64>,
}

impl<'a> Observation<'a> {
    pub fn prices(prices: &'a [f64]) -> Self {
        Self {
            prices,
            trend: None,
            forecast: None,
        }
    }
}

/// Mutable bookkeeping carried between moves of one game.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyState {
    stopped: bool,
    observed: usize,
    sum_sq_incr: f64,
    min_log: f64,
    components_stopped: Vec<bool>,
}

impl StrategyState {
    pub fn new(spec: &StrategySpec) -> Self {
        let components = match spec {
            StrategySpec::DyadicMixtureLow { levels, .. }
            | StrategySpec::DyadicMixtureHigh { levels, .. } => *levels as usize,
            StrategySpec::FiftyFifty { .. } => 1,
            _ => 0,
        };
        Self {
            stopped: false,
            observed: 0,
            sum_sq_incr: 0.0,
            min_log: 0.0,
            components_stopped: vec![false; components],
        }
    }

    pub fn is_stopped(&self) -> bool {
        self.stopped
    }

    /// `Σ (ΔS_i)^2` over the history seen so far.
    pub fn sum_sq_incr(&self) -> f64 {
        self.sum_sq_incr
    }

    /// `min_n ln(S_n/S_0)` over the history seen so far (0 for non-positive paths).
    pub fn min_log(&self) -> f64 {
        self.min_log
    }

    pub fn components_stopped(&self) -> &[bool] {
        &self.components_stopped
    }

    fn absorb(&mut self, history: &[f64]) {
        debug_assert!(history.len() >= self.observed, "state reused across games");
        let s0 = history[0];
        for i in self.observed.max(1)..history.len() {
            let d = history[i] - history[i - 1];
            self.sum_sq_incr += d * d;
            if s0 > 0.0 && history[i] > 0.0 {
                self.min_log = self.min_log.min((history[i] / s0).ln());
            }
        }
        self.observed = history.len();
    }
}

impl StrategySpec {
    pub fn validate(&self) -> Result<()> {
        fn positive(name: &str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidStrategy(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        }
        fn delta_ok(delta: Option<f64>) -> Result<()> {
            delta.map_or(Ok(()), |d| positive("delta", d))
        }
        fn levels_ok(levels: u32) -> Result<()> {
            if (1..=MAX_DYADIC_LEVEL).contains(&levels) {
                Ok(())
            } else {
                Err(Error::InvalidStrategy(format!(
                    "levels must be in 1..={MAX_DYADIC_LEVEL}, got {levels}"
                )))
            }
        }
        match *self {
            StrategySpec::LowVol { c, delta } | StrategySpec::DriftCombined { c, delta } => {
                positive("C", c)?;
                delta_ok(delta)
            }
            StrategySpec::HighVol { d } => positive("D", d),
            StrategySpec::Relative {
                epsilon,
                gamma,
                delta,
            } => {
                positive("epsilon", epsilon)?;
                if !(gamma.is_finite() && gamma >= 0.0) {
                    return Err(Error::InvalidStrategy(format!(
                        "gamma must be non-negative, got {gamma}"
                    )));
                }
                delta_ok(delta)
            }
            StrategySpec::BuyAndHold { units } => {
                if units.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidStrategy("units must be finite".into()))
                }
            }
            StrategySpec::FiftyFifty { k } => positive("K", k),
            StrategySpec::DyadicMixtureLow { epsilon, levels }
            | StrategySpec::DyadicMixtureHigh { epsilon, levels } => {
                positive("epsilon", epsilon)?;
                levels_ok(levels)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StrategySpec::LowVol { .. } => "low_vol",
            StrategySpec::HighVol { .. } => "high_vol",
            StrategySpec::Relative { .. } => "relative",
            StrategySpec::BuyAndHold { .. } => "buy_and_hold",
            StrategySpec::FiftyFifty { .. } => "fifty_fifty",
            StrategySpec::DyadicMixtureLow { .. } => "dyadic_mixture_low",
            StrategySpec::DyadicMixtureHigh { .. } => "dyadic_mixture_high",
            StrategySpec::DriftCombined { .. } => "drift_combined",
        }
    }

    /// Capital weight left idle by truncating a dyadic mixture (`2^{-levels}`).
    pub fn tail_weight(&self) -> f64 {
        match *self {
            StrategySpec::DyadicMixtureLow { levels, .. }
            | StrategySpec::DyadicMixtureHigh { levels, .. } => 0.5f64.powi(levels as i32),
            _ => 0.0,
        }
    }

    /// Computes `M_n` from the observation and advances `state`.
    pub fn next_move(&self, obs: &Observation<'_>, state: &mut StrategyState) -> Result<f64> {
        if obs.prices.is_empty() {
            return Err(Error::InvalidPath("strategy needs at least S_0".into()));
        }
        let history = obs.prices;
        Ok(match *self {
            StrategySpec::LowVol { c, delta } => low_vol_move(history, c, delta, state),
            StrategySpec::HighVol { d } => high_vol_move(history, d, state),
            StrategySpec::Relative {
                epsilon,
                gamma,
                delta,
            } => relative_move(history, relative_coefficient(epsilon, gamma), delta, state)?,
            StrategySpec::BuyAndHold { units } => {
                state.absorb(history);
                buy_and_hold_move(history, units)
            }
            StrategySpec::FiftyFifty { k } => fifty_fifty_move(history, k, state),
            StrategySpec::DyadicMixtureLow { epsilon, levels } => {
                dyadic_mixture_low_move(history, epsilon, levels, state)
            }
            StrategySpec::DyadicMixtureHigh { epsilon, levels } => {
                dyadic_mixture_high_move(history, epsilon, levels, state)
            }
            StrategySpec::DriftCombined { c, delta } => {
                let (Some(trend), Some(forecast)) = (obs.trend, obs.forecast) else {
                    return Err(Error::Incompatible {
                        protocol: "drift_combined".into(),
                        detail: "an observation without forecaster moves".into(),
                    });
                };
                drift_combined_move(history, trend, forecast, c, delta, state)
            }
        })
    }
}

/// `C = 1/((1+γ)ε)`, the largest coefficient that cannot go bankrupt under
/// the relative-protocol constraints.
pub fn relative_coefficient(epsilon: f64, gamma: f64) -> f64 {
    1.0 / ((1.0 + gamma) * epsilon)
}

pub fn low_vol_move(history: &[f64], c: f64, delta: Option<f64>, state: &mut StrategyState) -> f64 {
    state.absorb(history);
    if state.stopped {
        return 0.0;
    }
    let x = history[history.len() - 1] - history[0];
    if delta.is_some_and(|d| x.abs() >= d) {
        state.stopped = true;
        return 0.0;
    }
    2.0 * c * x
}

pub fn high_vol_move(history: &[f64], d: f64, state: &mut StrategyState) -> f64 {
    state.absorb(history);
    if state.stopped {
        return 0.0;
    }
    let x = history[history.len() - 1] - history[0];
    if x.abs() >= d {
        state.stopped = true;
        return 0.0;
    }
    -2.0 * x / (d * d)
}

pub fn relative_move(
    history: &[f64],
    c: f64,
    delta: Option<f64>,
    state: &mut StrategyState,
) -> Result<f64> {
    let fresh = &history[state.observed.saturating_sub(1)..];
    if history[0] <= 0.0 || fresh.iter().any(|&s| s <= 0.0) {
        return Err(Error::Domain(
            "relative strategy needs strictly positive prices".into(),
        ));
    }
    state.absorb(history);
    if state.stopped {
        return Ok(0.0);
    }
    let last = history[history.len() - 1];
    let log_ratio = (last / history[0]).ln();
    if delta.is_some_and(|d| log_ratio.abs() >= d) {
        state.stopped = true;
        return Ok(0.0);
    }
    Ok(2.0 * c * log_ratio / last)
}

pub fn buy_and_hold_move(_history: &[f64], units: f64) -> f64 {
    units
}

pub fn fifty_fifty_move(history: &[f64], k: f64, state: &mut StrategyState) -> f64 {
    state.absorb(history);
    let d = 2.0 * k;
    let x = history[history.len() - 1] - history[0];
    if !state.components_stopped[0] && x.abs() >= d {
        state.components_stopped[0] = true;
    }
    let high = if state.components_stopped[0] {
        0.0
    } else {
        -2.0 * x / (d * d)
    };
    0.5 * high + 0.5 * buy_and_hold_move(history, 1.0)
}

/// Each component `C = 2^m` stops once `C Σ(ΔS)^2 >= 1 - Cε^2` or
/// `|S - S_0| >= C^{-1/2}`; it never plays when `Cε^2 >= 1`.
pub fn dyadic_mixture_low_move(
    history: &[f64],
    epsilon: f64,
    levels: u32,
    state: &mut StrategyState,
) -> f64 {
    state.absorb(history);
    let x = history[history.len() - 1] - history[0];
    let sum_sq = state.sum_sq_incr;
    let mut total = 0.0;
    for m in 1..=levels {
        let slot = (m - 1) as usize;
        if state.components_stopped[slot] {
            continue;
        }
        let c = 2f64.powi(m as i32);
        if c * sum_sq >= 1.0 - c * epsilon * epsilon || x.abs() >= c.sqrt().recip() {
            state.components_stopped[slot] = true;
            continue;
        }
        total += 0.5f64.powi(m as i32) * 2.0 * c * x;
    }
    state.stopped = state.components_stopped.iter().all(|&s| s);
    total
}

/// Each component `D = 2^m` stops once `D^{-2}S^2 >= 1 - D^{-2}(2|S|ε + ε^2)`,
/// i.e. once `(|S - S_0| + ε)^2 >= D^2`, so the next move cannot cross `D`.
pub fn dyadic_mixture_high_move(
    history: &[f64],
    epsilon: f64,
    levels: u32,
    state: &mut StrategyState,
) -> f64 {
    state.absorb(history);
    let x = history[history.len() - 1] - history[0];
    let mut total = 0.0;
    for m in 1..=levels {
        let slot = (m - 1) as usize;
        if state.components_stopped[slot] {
            continue;
        }
        let d = 2f64.powi(m as i32);
        let reach = x.abs() + epsilon;
        if reach * reach >= d * d {
            state.components_stopped[slot] = true;
            continue;
        }
        total += 0.5f64.powi(m as i32) * (-2.0 * x / (d * d));
    }
    state.stopped = state.components_stopped.iter().all(|&s| s);
    total
}

/// `M_n = 2C(S_{n-1} - T_{n-1}) - 2C m_n`, stopped once `|S - T| >= delta`.
pub fn drift_combined_move(
    prices: &[f64],
    trend: &[f64],
    forecast: f64,
    c: f64,
    delta: Option<f64>,
    state: &mut StrategyState,
) -> f64 {
    state.absorb(prices);
    if state.stopped {
        return 0.0;
    }
    let gap = prices[prices.len() - 1] - trend[trend.len() - 1];
    if delta.is_some_and(|d| gap.abs() >= d) {
        state.stopped = true;
        return 0.0;
    }
    2.0 * c * gap - 2.0 * c * forecast
}
