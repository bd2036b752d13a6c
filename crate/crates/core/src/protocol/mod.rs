//! Settlement rules of the four market protocols and the game driver.
//!
//! Investor announces `M_n` before Market reveals `S_n`; the move is settled
//! against `ΔS_n = S_n - S_{n-1}`.

mod path;

pub use path::{to_numeraire, DriftScenario, Flavor, NumerairePair, PricePath};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strategies::{Observation, StrategySpec, StrategyState};

/// Capital below `-BANKRUPTCY_TOLERANCE` counts as bankruptcy.
pub const BANKRUPTCY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Zero interest, real-valued prices.
    Absolute,
    /// Zero interest, strictly positive prices.
    Relative,
    /// Stock `S` against a positive numéraire `B`.
    Numeraire,
    /// Forecaster announces `m_n`, Reality announces `x_n`.
    Drift,
}

impl std::fmt::Display for Protocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Protocol::Absolute => "absolute",
            Protocol::Relative => "relative",
            Protocol::Numeraire => "numeraire",
            Protocol::Drift => "drift",
        };
        f.write_str(name)
    }
}

/// The data Market (and Forecaster) announce during one game.
#[derive(Debug, Clone, Copy)]
pub enum GameInput<'a> {
    Path(&'a PricePath),
    Numeraire(&'a NumerairePair),
    Drift(&'a DriftScenario),
}

impl GameInput<'_> {
    pub fn n_steps(&self) -> usize {
        match self {
            GameInput::Path(p) => p.n_steps(),
            GameInput::Numeraire(p) => p.n_steps(),
            GameInput::Drift(d) => d.n_steps(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapitalTrajectory {
    capitals: Vec<f64>,
    moves: Vec<f64>,
    stop_index: Option<usize>,
    went_bankrupt: bool,
    constraint_violated: bool,
}

impl CapitalTrajectory {
    /// `I_0..I_N`.
    pub fn capitals(&self) -> &[f64] {
        &self.capitals
    }

    /// `M_1..M_N`.
    pub fn moves(&self) -> &[f64] {
        &self.moves
    }

    /// Index `k` of the last price observed before the strategy stopped;
    /// every move after `I_k` is zero.
    pub fn stop_index(&self) -> Option<usize> {
        self.stop_index
    }

    pub fn went_bankrupt(&self) -> bool {
        self.went_bankrupt
    }

    /// Market broke a constraint the strategy relies on (the `γ` floor of the
    /// relative strategy).
    pub fn constraint_violated(&self) -> bool {
        self.constraint_violated
    }

    pub fn final_capital(&self) -> f64 {
        self.capitals[self.capitals.len() - 1]
    }

    pub fn min_capital(&self) -> f64 {
        self.capitals.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn finite(value: f64, step: usize) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow { step })
    }
}

/// `I_n = I_{n-1} + M_n (S_n - S_{n-1})`.
pub fn step_market(prev_capital: f64, mv: f64, prev_price: f64, new_price: f64) -> Result<f64> {
    finite(prev_capital + mv * (new_price - prev_price), 0)
}

/// `I_n = (I_{n-1} - M_n S_{n-1}) B_n / B_{n-1} + M_n S_n`.
pub fn step_numeraire(
    prev_capital: f64,
    mv: f64,
    prev_stock: f64,
    new_stock: f64,
    prev_num: f64,
    new_num: f64,
) -> Result<f64> {
    if !(prev_num > 0.0 && new_num > 0.0) {
        return Err(Error::Domain(format!(
            "numeraire prices must be positive, got {prev_num} and {new_num}"
        )));
    }
    finite(
        (prev_capital - mv * prev_stock) * (new_num / prev_num) + mv * new_stock,
        0,
    )
}

/// `I_n = I_{n-1} + M_n (x_n - m_n)`.
pub fn step_drift(
    prev_capital: f64,
    mv: f64,
    forecaster_move: f64,
    reality_increment: f64,
) -> Result<f64> {
    finite(prev_capital + mv * (reality_increment - forecaster_move), 0)
}

/// Plays `spec` against `input` under `protocol`, starting from `initial_capital`.
///
/// Under the numéraire protocol the strategy observes `S/B`; under the drift
/// protocol it observes `S`, the trend `T` and the current forecast `m_n`.
pub fn run_game(
    input: GameInput<'_>,
    spec: &StrategySpec,
    protocol: Protocol,
    initial_capital: f64,
) -> Result<CapitalTrajectory> {
    if !(initial_capital.is_finite() && initial_capital > 0.0) {
        return Err(Error::Domain(format!(
            "initial capital must be positive, got {initial_capital}"
        )));
    }
    spec.validate()?;
    let incompatible = |detail: &str| Error::Incompatible {
        protocol: protocol.to_string(),
        detail: detail.to_string(),
    };

    // prices observed by the strategy, plus drift-only data
    let observed: Vec<f64>;
    let mut trend: Option<Vec<f64>> = None;
    match (protocol, &input) {
        (Protocol::Absolute, GameInput::Path(p)) => observed = p.values().to_vec(),
        (Protocol::Relative, GameInput::Path(p)) => {
            if !p.all_positive() {
                return Err(incompatible("a path with non-positive prices"));
            }
            observed = p.values().to_vec();
        }
        (Protocol::Numeraire, GameInput::Numeraire(pair)) => {
            observed = to_numeraire(pair).values().to_vec();
        }
        (Protocol::Drift, GameInput::Drift(s)) => {
            observed = s.prices();
            trend = Some(s.trend());
        }
        (_, GameInput::Path(_)) => return Err(incompatible("a single price path")),
        (_, GameInput::Numeraire(_)) => return Err(incompatible("a stock/numeraire pair")),
        (_, GameInput::Drift(_)) => return Err(incompatible("a drift scenario")),
    }
    if matches!(spec, StrategySpec::DriftCombined { .. }) && protocol != Protocol::Drift {
        return Err(incompatible("the drift-combined strategy"));
    }

    let n_steps = observed.len() - 1;
    let mut state = StrategyState::new(spec);
    let mut capitals = Vec::with_capacity(n_steps + 1);
    let mut moves = Vec::with_capacity(n_steps);
    let mut stop_index = None;
    let mut capital = initial_capital;
    capitals.push(capital);

    for n in 1..=n_steps {
        let obs = Observation {
            prices: &observed[..n],
            trend: trend.as_deref().map(|t| &t[..n]),
            forecast: match &input {
                GameInput::Drift(s) => Some(s.forecaster_moves()[n - 1]),
                _ => None,
            },
        };
        let mv = spec.next_move(&obs, &mut state)?;
        if stop_index.is_none() && state.is_stopped() {
            stop_index = Some(n - 1);
        }
        capital = match &input {
            GameInput::Path(p) => step_market(capital, mv, p.values()[n - 1], p.values()[n]),
            GameInput::Numeraire(pair) => {
                let (s, b) = (pair.stock().values(), pair.numeraire().values());
                step_numeraire(capital, mv, s[n - 1], s[n], b[n - 1], b[n])
            }
            GameInput::Drift(d) => step_drift(
                capital,
                mv,
                d.forecaster_moves()[n - 1],
                d.reality_increments()[n - 1],
            ),
        }
        .map_err(|e| match e {
            Error::Overflow { .. } => Error::Overflow { step: n },
            other => other,
        })?;
        moves.push(mv);
        capitals.push(capital);
    }

    let went_bankrupt = capitals.iter().any(|&c| c < -BANKRUPTCY_TOLERANCE);
    let constraint_violated = match *spec {
        StrategySpec::Relative { gamma, .. } => {
            let s0 = observed[0];
            observed.iter().any(|&s| (s / s0).ln() < -gamma)
        }
        _ => false,
    };
    Ok(CapitalTrajectory {
        capitals,
        moves,
        stop_index,
        went_bankrupt,
        constraint_violated,
    })
}
