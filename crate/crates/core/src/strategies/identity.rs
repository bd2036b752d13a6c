//! Closed-form capital processes of the volatility strategies.
//!
//! Each function evaluates the telescoped identity for every prefix of the
//! path, without going through the step-by-step settlement, so the result can
//! be compared against a simulated [`CapitalTrajectory`].

use crate::error::Result;
use crate::pathstats::beta;
use crate::protocol::{CapitalTrajectory, DriftScenario, GameInput};
use crate::strategies::{relative_coefficient, StrategySpec};

/// `|a - b| / max(1, |a|, |b|)`.
pub fn relative_residual(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// `I_n = I_0 + C(S_n - S_0)^2 - C Σ_{i<=n} (ΔS_i)^2`.
pub fn low_vol_capitals(prices: &[f64], c: f64, initial: f64) -> Vec<f64> {
    let s0 = prices[0];
    let mut sum_sq = 0.0;
    let mut out = Vec::with_capacity(prices.len());
    out.push(initial);
    for w in prices.windows(2) {
        let d = w[1] - w[0];
        sum_sq += d * d;
        let x = w[1] - s0;
        out.push(initial + c * x * x - c * sum_sq);
    }
    out
}

/// `I_n = I_0 + D^{-2} Σ_{i<=n} (ΔS_i)^2 - D^{-2}(S_n - S_0)^2`.
pub fn high_vol_capitals(prices: &[f64], d: f64, initial: f64) -> Vec<f64> {
    let s0 = prices[0];
    let k = 1.0 / (d * d);
    let mut sum_sq = 0.0;
    let mut out = Vec::with_capacity(prices.len());
    out.push(initial);
    for w in prices.windows(2) {
        let inc = w[1] - w[0];
        sum_sq += inc * inc;
        let x = w[1] - s0;
        out.push(initial + k * sum_sq - k * x * x);
    }
    out
}

/// `I_n = I_0 + C ln^2(S_n/S_0) + C Σ_{i<n} ln(S_i/S_0) β(dS_i/S_i) - C Σ_{i<n} (d ln S_i)^2`.
pub fn relative_capitals(prices: &[f64], c: f64, initial: f64) -> Result<Vec<f64>> {
    let s0 = prices[0];
    let mut beta_term = 0.0;
    let mut log_sq = 0.0;
    let mut out = Vec::with_capacity(prices.len());
    out.push(initial);
    for w in prices.windows(2) {
        let rel = (w[1] - w[0]) / w[0];
        beta_term += (w[0] / s0).ln() * beta(rel)?;
        let dl = (w[1] / w[0]).ln();
        log_sq += dl * dl;
        let l = (w[1] / s0).ln();
        out.push(initial + c * l * l + c * beta_term - c * log_sq);
    }
    Ok(out)
}

/// `I_n = I_0 + C(S_n - T_n)^2 - C Σ x_i^2 + C Σ m_i^2`.
pub fn drift_capitals(scenario: &DriftScenario, c: f64, initial: f64) -> Vec<f64> {
    let prices = scenario.prices();
    let trend = scenario.trend();
    let mut sum_x = 0.0;
    let mut sum_m = 0.0;
    let mut out = Vec::with_capacity(prices.len());
    out.push(initial);
    for (n, (x, m)) in scenario
        .reality_increments()
        .iter()
        .zip(scenario.forecaster_moves())
        .enumerate()
    {
        sum_x += x * x;
        sum_m += m * m;
        let gap = prices[n + 1] - trend[n + 1];
        out.push(initial + c * gap * gap - c * sum_x + c * sum_m);
    }
    out
}

/// Closed-form capitals for strategies that have one, on the given input.
pub fn closed_form_capitals(
    spec: &StrategySpec,
    input: &GameInput<'_>,
    initial: f64,
) -> Option<Vec<f64>> {
    match (spec, input) {
        (StrategySpec::LowVol { c, .. }, GameInput::Path(p)) => {
            Some(low_vol_capitals(p.values(), *c, initial))
        }
        (StrategySpec::HighVol { d }, GameInput::Path(p)) => {
            Some(high_vol_capitals(p.values(), *d, initial))
        }
        (StrategySpec::Relative { epsilon, gamma, .. }, GameInput::Path(p)) => {
            relative_capitals(p.values(), relative_coefficient(*epsilon, *gamma), initial).ok()
        }
        (StrategySpec::DriftCombined { c, .. }, GameInput::Drift(s)) => {
            Some(drift_capitals(s, *c, initial))
        }
        _ => None,
    }
}

/// Largest relative residual between a simulated trajectory and its closed
/// form, over every step up to and including the stop index.
pub fn identity_residual(
    spec: &StrategySpec,
    input: &GameInput<'_>,
    trajectory: &CapitalTrajectory,
) -> Option<f64> {
    let initial = trajectory.capitals()[0];
    let closed = closed_form_capitals(spec, input, initial)?;
    let last = trajectory.stop_index().unwrap_or(closed.len() - 1);
    Some(
        trajectory.capitals()[..=last]
            .iter()
            .zip(&closed[..=last])
            .map(|(a, b)| relative_residual(*a, *b))
            .fold(0.0, f64::max),
    )
}
