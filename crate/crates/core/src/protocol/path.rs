use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a path may take any real value or must stay strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Absolute,
    Positive,
}

/// Prices `S_0..S_N` announced by Market, with `N >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PricePath {
    values: Vec<f64>,
    flavor: Flavor,
    labels: Option<Vec<String>>,
}

impl PricePath {
    pub fn new(values: Vec<f64>, flavor: Flavor) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidPath(format!(
                "need at least 2 prices, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidPath(format!("non-finite price at index {i}")));
        }
        if flavor == Flavor::Positive {
            if let Some(i) = values.iter().position(|&v| v <= 0.0) {
                return Err(Error::Domain(format!(
                    "price {} at index {i} is not positive",
                    values[i]
                )));
            }
        }
        Ok(Self {
            values,
            flavor,
            labels: None,
        })
    }

    pub fn absolute(values: Vec<f64>) -> Result<Self> {
        Self::new(values, Flavor::Absolute)
    }

    pub fn positive(values: Vec<f64>) -> Result<Self> {
        Self::new(values, Flavor::Positive)
    }

    /// Attaches opaque per-price labels (dates, sequence numbers).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.values.len() {
            return Err(Error::LengthMismatch(format!(
                "{} labels for {} prices",
                labels.len(),
                self.values.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of trading periods `N`.
    pub fn n_steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `ΔS_n = S_n - S_{n-1}` for `n = 1..=N`.
    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    pub fn all_positive(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }

    /// The path `ln S_n`, as an absolute-flavor path.
    pub fn log_path(&self) -> Result<PricePath> {
        if !self.all_positive() {
            return Err(Error::Domain("logarithm of a non-positive price".into()));
        }
        PricePath::absolute(self.values.iter().map(|v| v.ln()).collect())
    }
}

/// A stock `S` and a numéraire `B`, both positive and of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct NumerairePair {
    stock: PricePath,
    numeraire: PricePath,
}

impl NumerairePair {
    pub fn new(stock: PricePath, numeraire: PricePath) -> Result<Self> {
        if stock.values.len() != numeraire.values.len() {
            return Err(Error::LengthMismatch(format!(
                "stock has {} prices, numeraire has {}",
                stock.values.len(),
                numeraire.values.len()
            )));
        }
        if !stock.all_positive() || !numeraire.all_positive() {
            return Err(Error::Domain(
                "stock and numeraire prices must be positive".into(),
            ));
        }
        Ok(Self { stock, numeraire })
    }

    pub fn stock(&self) -> &PricePath {
        &self.stock
    }

    pub fn numeraire(&self) -> &PricePath {
        &self.numeraire
    }

    pub fn n_steps(&self) -> usize {
        self.stock.n_steps()
    }
}

/// Re-expresses the stock in units of the numéraire: `S_n / B_n`.
pub fn to_numeraire(pair: &NumerairePair) -> PricePath {
    let values = pair
        .stock
        .values
        .iter()
        .zip(&pair.numeraire.values)
        .map(|(s, b)| s / b)
        .collect();
    PricePath {
        values,
        flavor: Flavor::Positive,
        labels: pair.stock.labels.clone(),
    }
}

/// Drift-protocol data: the starting price, Forecaster's moves `m_n` and
/// Reality's increments `x_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftScenario {
    initial: f64,
    forecaster_moves: Vec<f64>,
    reality_increments: Vec<f64>,
}

impl DriftScenario {
    pub fn new(
        initial: f64,
        forecaster_moves: Vec<f64>,
        reality_increments: Vec<f64>,
    ) -> Result<Self> {
        if forecaster_moves.len() != reality_increments.len() {
            return Err(Error::LengthMismatch(format!(
                "{} forecaster moves, {} reality increments",
                forecaster_moves.len(),
                reality_increments.len()
            )));
        }
        if forecaster_moves.is_empty() {
            return Err(Error::InvalidPath("drift scenario needs N >= 1".into()));
        }
        let scenario = Self {
            initial,
            forecaster_moves,
            reality_increments,
        };
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !initial.is_finite() || !finite(&scenario.prices()) || !finite(&scenario.trend()) {
            return Err(Error::InvalidPath("drift scenario is not finite".into()));
        }
        Ok(scenario)
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn forecaster_moves(&self) -> &[f64] {
        &self.forecaster_moves
    }

    pub fn reality_increments(&self) -> &[f64] {
        &self.reality_increments
    }

    pub fn n_steps(&self) -> usize {
        self.forecaster_moves.len()
    }

    /// `S_n = S_0 + Σ_{i<=n} x_i`.
    pub fn prices(&self) -> Vec<f64> {
        cumulative(self.initial, &self.reality_increments)
    }

    /// `T_n = S_0 + Σ_{i<=n} m_i`.
    pub fn trend(&self) -> Vec<f64> {
        cumulative(self.initial, &self.forecaster_moves)
    }

    /// Path whose increments are the residuals `x_n - m_n`.
    pub fn compensated_path(&self) -> PricePath {
        let residuals: Vec<f64> = self
            .reality_increments
            .iter()
            .zip(&self.forecaster_moves)
            .map(|(x, m)| x - m)
            .collect();
        PricePath {
            values: cumulative(self.initial, &residuals),
            flavor: Flavor::Absolute,
            labels: None,
        }
    }
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_and_non_finite_paths() {
        assert!(PricePath::absolute(vec![1.0]).is_err());
        assert!(PricePath::absolute(vec![1.0, f64::NAN]).is_err());
        assert!(PricePath::absolute(vec![1.0, f64::INFINITY]).is_err());
        assert!(matches!(
            PricePath::positive(vec![1.0, 0.0]),
            Err(Error::Domain(_))
        ));
        assert!(PricePath::absolute(vec![-1.0, 0.0]).is_ok());
    }

    #[test]
    fn labels_must_match_length() {
        let p = PricePath::absolute(vec![1.0, 2.0]).unwrap();
        assert!(p.clone().with_labels(vec!["a".into()]).is_err());
        let p = p.with_labels(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(p.labels().unwrap()[1], "b");
    }

    #[test]
    fn numeraire_examples() {
        let pair = |s: Vec<f64>, b: Vec<f64>| {
            NumerairePair::new(
                PricePath::positive(s).unwrap(),
                PricePath::positive(b).unwrap(),
            )
            .unwrap()
        };
        assert_eq!(
            to_numeraire(&pair(vec![2.0, 4.0], vec![2.0, 4.0])).values(),
            &[1.0, 1.0]
        );
        assert_eq!(
            to_numeraire(&pair(vec![6.0, 8.0], vec![2.0, 4.0])).values(),
            &[3.0, 2.0]
        );
        assert_eq!(
            to_numeraire(&pair(vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 4.0])).values(),
            &[1.0, 0.5, 0.25]
        );
        assert_eq!(
            to_numeraire(&pair(vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 4.0])).flavor(),
            Flavor::Positive
        );
    }

    #[test]
    fn numeraire_pair_rejects_mismatch() {
        let s = PricePath::positive(vec![1.0, 2.0]).unwrap();
        let b = PricePath::positive(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            NumerairePair::new(s, b),
            Err(Error::LengthMismatch(_))
        ));
        let s = PricePath::absolute(vec![-1.0, 2.0]).unwrap();
        let b = PricePath::positive(vec![1.0, 2.0]).unwrap();
        assert!(matches!(NumerairePair::new(s, b), Err(Error::Domain(_))));
    }

    #[test]
    fn drift_scenario_paths() {
        let d = DriftScenario::new(1.0, vec![0.5, 0.5], vec![1.0, -2.0]).unwrap();
        assert_eq!(d.prices(), vec![1.0, 2.0, 0.0]);
        assert_eq!(d.trend(), vec![1.0, 1.5, 2.0]);
        assert_eq!(d.compensated_path().values(), &[1.0, 1.5, -1.0]);
        assert!(DriftScenario::new(0.0, vec![0.1], vec![]).is_err());
        assert!(DriftScenario::new(0.0, vec![], vec![]).is_err());
        assert!(DriftScenario::new(0.0, vec![f64::MAX], vec![f64::MAX]).is_ok());
        assert!(DriftScenario::new(0.0, vec![f64::MAX, f64::MAX], vec![0.0, 0.0]).is_err());
    }
}
