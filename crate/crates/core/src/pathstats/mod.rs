//! Path statistics: p-variations, the β function, uncentered R/S quantities,
//! capital factors and scaling-exponent estimates.
//!
//! Statistics that have no value on a given path (zero denominators,
//! non-positive prices for log statistics, too few points for a fit) are
//! returned as `None` rather than NaN.

mod report;

pub use report::{format_sig3, render_aligned, render_table, StatsReport, TableRow};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::PricePath;

/// `β(x) = 2(x - ln(1 + x))`, defined for `x > -1`; behaves like `x^2` near 0.
pub fn beta(x: f64) -> Result<f64> {
    if x <= -1.0 || !x.is_finite() {
        return Err(Error::Domain(format!(
            "beta is defined for x > -1, got {x}"
        )));
    }
    if x.abs() < 1e-3 {
        // x - ln(1+x) = x^2/2 - x^3/3 + x^4/4 - ...
        let x2 = x * x;
        let series = x2 * (0.5 - x / 3.0 + x2 / 4.0 - x2 * x / 5.0 + x2 * x2 / 6.0);
        return Ok(2.0 * series);
    }
    Ok(2.0 * (x - x.ln_1p()))
}

/// `Σ_{i=1}^N |ΔS_i|^p`.
pub fn p_variation(path: &PricePath, p: f64) -> f64 {
    if p == 2.0 {
        return path.increments().map(|d| d * d).sum();
    }
    path.increments().map(|d| d.abs().powf(p)).sum()
}

/// `(R, S)` with `R = max_n |S_n - S_0|` and `S^2 = (1/N) Σ (ΔS_i)^2`.
pub fn rs_absolute(path: &PricePath) -> (f64, f64) {
    let v = path.values();
    let s0 = v[0];
    let r = v.iter().map(|x| (x - s0).abs()).fold(0.0, f64::max);
    let s = (p_variation(path, 2.0) / path.n_steps() as f64).sqrt();
    (r, s)
}

/// Log-scale sums of a positive path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSums {
    /// `Σ (d ln S_i)^2`.
    pub sum_sq_log_incr: f64,
    /// `Σ β(dS_i / S_i)`.
    pub sum_beta: f64,
    /// `min_n ln(S_n/S_0)` over `n = 0..N`, so never positive.
    pub min_log: f64,
    /// `max_n |ln(S_n/S_0)|`.
    pub max_abs_log: f64,
}

impl LogSums {
    /// `Σ(d ln S)^2 ∨ Σ β(dS/S)`.
    pub fn variation(&self) -> f64 {
        self.sum_sq_log_incr.max(self.sum_beta)
    }
}

pub fn log_sums(path: &PricePath) -> Result<LogSums> {
    require_positive(path)?;
    let v = path.values();
    let s0 = v[0];
    let mut sums = LogSums {
        sum_sq_log_incr: 0.0,
        sum_beta: 0.0,
        min_log: 0.0,
        max_abs_log: 0.0,
    };
    for w in v.windows(2) {
        let dl = (w[1] / w[0]).ln();
        sums.sum_sq_log_incr += dl * dl;
        sums.sum_beta += beta((w[1] - w[0]) / w[0])?;
        let l = (w[1] / s0).ln();
        sums.min_log = sums.min_log.min(l);
        sums.max_abs_log = sums.max_abs_log.max(l.abs());
    }
    Ok(sums)
}

fn require_positive(path: &PricePath) -> Result<()> {
    if path.all_positive() {
        Ok(())
    } else {
        Err(Error::Domain(
            "relative statistics need positive prices".into(),
        ))
    }
}

/// `(R, S)` with `R = max_n |ln(S_n/S_0)|` and
/// `S^2 = (1/N)(Σ β(dS_i/S_i) ∨ Σ (d ln S_i)^2)`.
pub fn rs_relative(path: &PricePath) -> Result<(f64, f64)> {
    let sums = log_sums(path)?;
    Ok((
        sums.max_abs_log,
        (sums.variation() / path.n_steps() as f64).sqrt(),
    ))
}

/// `(S_N - S_0)^2 / Σ (ΔS_i)^2`; `None` on a constant path.
pub fn abs_factor(path: &PricePath) -> Option<f64> {
    let var = p_variation(path, 2.0);
    if var == 0.0 {
        return None;
    }
    let x = path.last() - path.first();
    Some(x * x / var)
}

/// `ln^2(S_N/S_0) / ((1 - min) (Σ(d ln S)^2 ∨ Σ β(dS/S)))`; `None` when the
/// variation term vanishes.
pub fn rel_factor(path: &PricePath) -> Result<Option<f64>> {
    let sums = log_sums(path)?;
    let var = sums.variation();
    if var == 0.0 {
        return Ok(None);
    }
    let l = (path.last() / path.first()).ln();
    Ok(Some(l * l / ((1.0 - sums.min_log) * var)))
}

/// `n^(2h - 1)`: the capital multiple to hope for when `R/S ~ c n^h`.
pub fn growth_factor(n: u64, h: f64) -> f64 {
    (n as f64).powf(2.0 * h - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RsMode {
    Absolute,
    Relative,
}

/// Smallest window of the Hurst regression.
pub const HURST_MIN_WINDOW: usize = 8;

/// Slope of `ln(R_n/S_n)` against `ln n` over prefix windows
/// `n = 8, 16, 32, ... <= N`, using the uncentered R/S statistics.
///
/// Returns `Ok(None)` when fewer than two windows fit or a window has
/// `S_n = 0` or `R_n = 0`.
pub fn hurst_rs(path: &PricePath, mode: RsMode) -> Result<Option<f64>> {
    let v = path.values();
    let ladder = dyadic_windows(path.n_steps());
    let s0 = v[0];
    let steps: Vec<(f64, f64, f64)> = match mode {
        RsMode::Absolute => v
            .windows(2)
            .map(|w| {
                let d = w[1] - w[0];
                (d * d, 0.0, (w[1] - s0).abs())
            })
            .collect(),
        RsMode::Relative => {
            require_positive(path)?;
            v.windows(2)
                .map(|w| {
                    let dl = (w[1] / w[0]).ln();
                    Ok((dl * dl, beta((w[1] - w[0]) / w[0])?, (w[1] / s0).ln().abs()))
                })
                .collect::<Result<_>>()?
        }
    };
    let ratios = prefix_ratios(&steps, &ladder);
    let Some(ratios) = ratios else {
        return Ok(None);
    };
    if ratios.len() < 2 {
        return Ok(None);
    }
    let xs: Vec<f64> = ladder.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    Ok(ols_slope(&xs, &ys))
}

fn dyadic_windows(n_steps: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut n = HURST_MIN_WINDOW;
    while n <= n_steps {
        out.push(n);
        n *= 2;
    }
    out
}

/// `R_n / S_n` at each ladder window. Each step contributes two variation
/// terms (their running sums are combined with `max`) and its distance from
/// the start.
fn prefix_ratios(steps: &[(f64, f64, f64)], ladder: &[usize]) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(ladder.len());
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    let mut range: f64 = 0.0;
    let mut next = ladder.iter().peekable();
    for (i, &(a, b, dist)) in steps.iter().enumerate() {
        let n = i + 1;
        sum_a += a;
        sum_b += b;
        range = range.max(dist);
        if next.peek() == Some(&&n) {
            next.next();
            let scale = (sum_a.max(sum_b) / n as f64).sqrt();
            if scale == 0.0 || range == 0.0 {
                return None;
            }
            out.push(range / scale);
        }
    }
    Some(out)
}

/// Ordinary least-squares slope; `None` for fewer than two distinct x values.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    slope.is_finite().then_some(slope)
}

/// Smallest number of coarse increments a scale must keep.
pub const MIN_COARSE_INCREMENTS: usize = 16;

/// Slope band around 0 classified as diffusive.
pub const DIFFUSIVE_BAND: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// 2-variation shrinks under refinement (smoother than Brownian).
    SubDiffusive,
    Diffusive,
    /// 2-variation grows under refinement (rougher than Brownian).
    SuperDiffusive,
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationProfile {
    /// Coarsening factors `k = 1, 2, 4, ...`.
    pub scales: Vec<usize>,
    /// 2-variation of the subsample `S_0, S_k, S_2k, ...`.
    pub variations: Vec<f64>,
    /// Slope of `ln V(k)` against `ln k`.
    pub slope: Option<f64>,
    /// Heuristic variation exponent `2 / (1 + slope)`.
    pub fitted_exponent: Option<f64>,
    pub regime: Regime,
}

/// Heuristic variation-exponent estimate from coarsened 2-variations.
///
/// For a path with `|ΔS| ~ (Δt)^h` the coarse 2-variation scales like
/// `k^(2h-1)`, so the slope is 1 for smooth paths, 0 for Brownian-like paths
/// and negative for rough ones. Paths with `N < 16` get an empty profile.
pub fn variation_exponent_estimate(path: &PricePath) -> VariationProfile {
    let v = path.values();
    let n = path.n_steps();
    let mut scales = vec![];
    let mut variations = vec![];
    let mut k = 1;
    while n / k >= MIN_COARSE_INCREMENTS {
        let var: f64 = v
            .iter()
            .step_by(k)
            .collect::<Vec<_>>()
            .windows(2)
            .map(|w| (w[1] - w[0]) * (w[1] - w[0]))
            .sum();
        scales.push(k);
        variations.push(var);
        k *= 2;
    }
    let slope = if variations.iter().all(|&x| x > 0.0) {
        let xs: Vec<f64> = scales.iter().map(|&k| (k as f64).ln()).collect();
        let ys: Vec<f64> = variations.iter().map(|x| x.ln()).collect();
        ols_slope(&xs, &ys)
    } else {
        None
    };
    let fitted_exponent = slope.filter(|&s| s > -1.0).map(|s| 2.0 / (1.0 + s));
    let regime = match slope {
        None => Regime::Undefined,
        Some(s) if s > DIFFUSIVE_BAND => Regime::SubDiffusive,
        Some(s) if s < -DIFFUSIVE_BAND => Regime::SuperDiffusive,
        Some(_) => Regime::Diffusive,
    };
    VariationProfile {
        scales,
        variations,
        slope,
        fitted_exponent,
        regime,
    }
}
