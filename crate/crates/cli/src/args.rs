use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use volgame::data_io::{GeneratorKind, GeneratorSpec};
use volgame::strategies::DEFAULT_DYADIC_LEVEL;
use volgame::StrategySpec;

#[derive(Debug, Parser)]
#[command(name = "volgame", version, about = "Volatility games on price paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play a strategy on a generated path.
    Simulate(SimulateArgs),
    /// Play a strategy on price series read from CSV files.
    Replay(ReplayArgs),
    /// Path statistics for each CSV file.
    Stats(StatsArgs),
    /// Factor table (code, abs factor, rel factor, index, security, min).
    Table(TableArgs),
    /// Run the property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum StrategyKind {
    LowVol,
    HighVol,
    Relative,
    BuyAndHold,
    FiftyFifty,
    DyadicMixtureLow,
    DyadicMixtureHigh,
    DriftCombined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum GenKind {
    GaussianWalk,
    GeometricWalk,
    FractionalWalk,
    BoundedAdversary,
    Constant,
}

/// `--C` takes a number or `auto` (`1 / Σ(ΔS)^2` of the path being played).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CValue {
    Fixed(f64),
    Auto,
}

fn parse_c(s: &str) -> Result<CValue, String> {
    if s == "auto" {
        return Ok(CValue::Auto);
    }
    s.parse::<f64>()
        .map(CValue::Fixed)
        .map_err(|_| format!("expected a number or `auto`, got `{s}`"))
}

#[derive(Debug, Clone, Args)]
pub struct StrategyArgs {
    #[arg(long, value_enum)]
    pub strategy: StrategyKind,
    #[arg(long = "C", value_parser = parse_c)]
    pub c: Option<CValue>,
    #[arg(long = "D")]
    pub d: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "K")]
    pub k: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DYADIC_LEVEL)]
    pub levels: u32,
    /// Shares held by buy_and_hold.
    #[arg(long, default_value_t = 1.0)]
    pub units: f64,
    #[arg(long, default_value_t = 1.0)]
    pub capital: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub strategy: StrategyArgs,
    #[arg(long = "gen", value_enum, default_value_t = GenKind::GaussianWalk)]
    pub generator: GenKind,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Hurst parameter of fractional_walk.
    #[arg(long)]
    pub h: Option<f64>,
    /// Step scale; the range cap for bounded_adversary.
    #[arg(long, default_value_t = 1.0)]
    pub step_scale: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    #[command(flatten)]
    pub strategy: StrategyArgs,
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Reference index series, aligned with each file by row position.
    #[arg(long)]
    pub index_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub trials: Option<usize>,
    /// Relative tolerance for the identity suites.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn need(v: Option<f64>, flag: &str, kind: StrategyKind) -> Result<f64, String> {
    v.ok_or_else(|| format!("--{flag} is required for {}", kind_name(kind)))
}

fn kind_name(kind: StrategyKind) -> String {
    kind.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

impl StrategyArgs {
    /// Builds the spec; `realized_sum_sq` resolves `--C auto`.
    pub fn spec(&self, realized_sum_sq: f64) -> Result<StrategySpec, String> {
        let kind = self.strategy;
        let c = || -> Result<f64, String> {
            match self.c {
                Some(CValue::Fixed(c)) => Ok(c),
                Some(CValue::Auto) if realized_sum_sq > 0.0 => Ok(1.0 / realized_sum_sq),
                Some(CValue::Auto) => Err("--C auto needs a path with non-zero variation".into()),
                None => Err(format!("--C is required for {}", kind_name(kind))),
            }
        };
        let spec = match kind {
            StrategyKind::LowVol => StrategySpec::LowVol {
                c: c()?,
                delta: self.delta,
            },
            StrategyKind::HighVol => StrategySpec::HighVol {
                d: need(self.d, "D", kind)?,
            },
            StrategyKind::Relative => StrategySpec::Relative {
                epsilon: need(self.epsilon, "epsilon", kind)?,
                gamma: need(self.gamma, "gamma", kind)?,
                delta: self.delta,
            },
            StrategyKind::BuyAndHold => StrategySpec::BuyAndHold { units: self.units },
            StrategyKind::FiftyFifty => StrategySpec::FiftyFifty {
                k: need(self.k, "K", kind)?,
            },
            StrategyKind::DyadicMixtureLow => StrategySpec::DyadicMixtureLow {
                epsilon: need(self.epsilon, "epsilon", kind)?,
                levels: self.levels,
            },
            StrategyKind::DyadicMixtureHigh => StrategySpec::DyadicMixtureHigh {
                epsilon: need(self.epsilon, "epsilon", kind)?,
                levels: self.levels,
            },
            StrategyKind::DriftCombined => {
                return Err("drift_combined needs a drift scenario, which neither generated paths nor CSV series provide".into())
            }
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

impl SimulateArgs {
    pub fn generator(&self) -> Result<GeneratorSpec, String> {
        let kind = match self.generator {
            GenKind::GaussianWalk => GeneratorKind::GaussianWalk,
            GenKind::GeometricWalk => GeneratorKind::GeometricWalk,
            GenKind::FractionalWalk => GeneratorKind::FractionalWalk,
            GenKind::BoundedAdversary => GeneratorKind::BoundedAdversary,
            GenKind::Constant => GeneratorKind::Constant,
        };
        let mut spec = GeneratorSpec::new(kind, self.n, self.step_scale, self.seed);
        match kind {
            GeneratorKind::FractionalWalk => {
                spec.h = Some(self.h.ok_or("--h is required for fractional_walk")?);
            }
            // The step bound is the same ε the strategies are configured with.
            GeneratorKind::BoundedAdversary => {
                spec.epsilon_bound = Some(
                    self.strategy
                        .epsilon
                        .ok_or("--epsilon is required for bounded_adversary")?,
                );
            }
            _ => {}
        }
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}
