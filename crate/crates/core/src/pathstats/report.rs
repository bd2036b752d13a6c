use serde::{Deserialize, Serialize};

use super::{abs_factor, hurst_rs, log_sums, p_variation, rel_factor, rs_absolute, RsMode};
use crate::protocol::PricePath;

/// Every path statistic for one series, flat so it serializes as one JSON
/// object. Undefined values are `None` (JSON `null`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub code: String,
    pub n_steps: usize,
    pub r_abs: f64,
    pub s_abs: f64,
    pub r_rel: Option<f64>,
    pub s_rel: Option<f64>,
    pub abs_factor: Option<f64>,
    pub rel_factor: Option<f64>,
    /// `min_n ln(S_n/S_0)`.
    pub min_log: Option<f64>,
    /// `S_N / S_0`.
    pub security: Option<f64>,
    pub sum_sq_incr: f64,
    pub sum_sq_log_incr: Option<f64>,
    pub sum_beta: Option<f64>,
    pub hurst_estimate: Option<f64>,
    pub hurst_mode: RsMode,
}

impl StatsReport {
    /// Log statistics are filled in only when every price is positive; the
    /// Hurst estimate then uses the relative R/S statistics.
    pub fn compute(code: impl Into<String>, path: &PricePath) -> Self {
        let (r_abs, s_abs) = rs_absolute(path);
        let n = path.n_steps();
        let sums = log_sums(path).ok();
        let hurst_mode = if sums.is_some() {
            RsMode::Relative
        } else {
            RsMode::Absolute
        };
        let rel_factor = rel_factor(path).ok().flatten();
        Self {
            code: code.into(),
            n_steps: n,
            r_abs,
            s_abs,
            r_rel: sums.map(|s| s.max_abs_log),
            s_rel: sums.map(|s| (s.variation() / n as f64).sqrt()),
            abs_factor: abs_factor(path),
            rel_factor,
            min_log: sums.map(|s| s.min_log),
            security: sums.map(|_| path.last() / path.first()),
            sum_sq_incr: p_variation(path, 2.0),
            sum_sq_log_incr: sums.map(|s| s.sum_sq_log_incr),
            sum_beta: sums.map(|s| s.sum_beta),
            hurst_estimate: hurst_rs(path, hurst_mode).ok().flatten(),
            hurst_mode,
        }
    }

    pub const TEXT_HEADERS: [&'static str; 10] = [
        "code",
        "N",
        "R_abs",
        "S_abs",
        "R_rel",
        "S_rel",
        "abs factor",
        "rel factor",
        "min",
        "H",
    ];

    pub fn text_cells(&self) -> Vec<String> {
        vec![
            self.code.clone(),
            self.n_steps.to_string(),
            format_sig3(Some(self.r_abs)),
            format_sig3(Some(self.s_abs)),
            format_sig3(self.r_rel),
            format_sig3(self.s_rel),
            format_sig3(self.abs_factor),
            format_sig3(self.rel_factor),
            format_sig3(self.min_log),
            format_sig3(self.hurst_estimate),
        ]
    }

    pub fn table_row(&self, index: Option<f64>) -> TableRow {
        TableRow {
            code: self.code.clone(),
            abs_factor: self.abs_factor,
            rel_factor: self.rel_factor,
            index,
            security: self.security,
            min: self.min_log,
        }
    }
}

/// One row of the factor table: code, abs factor, rel factor, index,
/// security, min.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub code: String,
    pub abs_factor: Option<f64>,
    pub rel_factor: Option<f64>,
    /// Growth factor of a reference index over the same rows.
    pub index: Option<f64>,
    pub security: Option<f64>,
    pub min: Option<f64>,
}

impl TableRow {
    pub const HEADERS: [&'static str; 6] = [
        "code",
        "abs factor",
        "rel factor",
        "index",
        "security",
        "min",
    ];

    pub fn cells(&self) -> Vec<String> {
        vec![
            self.code.clone(),
            format_sig3(self.abs_factor),
            format_sig3(self.rel_factor),
            format_sig3(self.index),
            format_sig3(self.security),
            format_sig3(self.min),
        ]
    }
}

pub fn render_table(rows: &[TableRow]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(TableRow::cells).collect();
    render_aligned(&TableRow::HEADERS, &cells)
}

/// Three significant digits; `—` for undefined values.
pub fn format_sig3(value: Option<f64>) -> String {
    let Some(x) = value else {
        return "—".to_string();
    };
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&mag) {
        return format!("{x:.2e}");
    }
    let unit = 10f64.powi(mag - 2);
    let rounded = (x / unit).round() * unit;
    // rounding can carry into the next decade (999.6 -> 1000)
    let mag = if rounded.abs() >= 10f64.powi(mag + 1) {
        mag + 1
    } else {
        mag
    };
    let decimals = (2 - mag).max(0) as usize;
    format!("{rounded:.decimals$}")
}

/// Left-aligned first column, right-aligned numeric columns.
pub fn render_aligned(headers: &[&str], rows: &[Vec<String>]) -> String {
    let width = |i: usize| {
        rows.iter()
            .map(|r| r[i].chars().count())
            .chain(std::iter::once(headers[i].chars().count()))
            .max()
            .unwrap_or(0)
    };
    let widths: Vec<usize> = (0..headers.len()).map(width).collect();
    let line = |cells: Vec<&str>| {
        let mut out = String::new();
        for (i, c) in cells.iter().enumerate() {
            let pad = widths[i] - c.chars().count();
            if i == 0 {
                out.push_str(c);
                out.push_str(&" ".repeat(pad));
            } else {
                out.push_str("  ");
                out.push_str(&" ".repeat(pad));
                out.push_str(c);
            }
        }
        out.push('\n');
        out
    };
    let mut out = line(headers.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
