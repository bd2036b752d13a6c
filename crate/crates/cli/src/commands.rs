use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use volgame::data_io::{generate, GeneratorSpec, SeriesFile};
use volgame::pathstats::{abs_factor, p_variation, render_aligned, render_table, StatsReport};
use volgame::strategies::identity::identity_residual;
use volgame::verify::{run_all, SuiteReport, VerifyOptions};
use volgame::{run_game, Flavor, GameInput, PricePath, Protocol, StrategySpec};

use crate::args::{
    Format, ReplayArgs, SimulateArgs, StatsArgs, StrategyArgs, StrategyKind, TableArgs, VerifyArgs,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// What a command prints and how it exits.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Self {
            stderr: format!("error: {msg}\n"),
            code: EXIT_USAGE,
            ..Self::default()
        }
    }

    fn error(&mut self, source: &str, msg: impl std::fmt::Display) {
        let _ = writeln!(self.stderr, "error: {source}: {msg}");
        self.code = EXIT_FAILURE;
    }
}

/// Summary of one game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub source: String,
    pub strategy: StrategySpec,
    pub protocol: String,
    pub n_steps: usize,
    pub initial_capital: f64,
    pub final_capital: f64,
    pub min_capital: f64,
    pub stop_index: Option<usize>,
    pub went_bankrupt: bool,
    pub constraint_violated: bool,
    /// Largest relative gap to the closed-form capital, where one exists.
    pub identity_residual: Option<f64>,
    pub sum_sq_incr: f64,
    pub abs_factor: Option<f64>,
    pub tail_weight: f64,
}

impl RunReport {
    fn text(&self) -> String {
        // Debug formatting keeps full precision and switches to exponent
        // notation for tiny residuals.
        let num = |x: f64| format!("{x:?}");
        let opt = |v: Option<f64>| v.map_or("none".to_string(), num);
        let fields = [
            ("source", self.source.clone()),
            ("strategy", self.strategy.name().to_string()),
            ("protocol", self.protocol.clone()),
            ("n_steps", self.n_steps.to_string()),
            ("initial_capital", num(self.initial_capital)),
            ("final_capital", num(self.final_capital)),
            ("min_capital", num(self.min_capital)),
            (
                "stop_index",
                self.stop_index.map_or("none".into(), |i| i.to_string()),
            ),
            ("went_bankrupt", self.went_bankrupt.to_string()),
            ("constraint_violated", self.constraint_violated.to_string()),
            ("identity_residual", opt(self.identity_residual)),
            ("sum_sq_incr", num(self.sum_sq_incr)),
            ("abs_factor", opt(self.abs_factor)),
            ("tail_weight", num(self.tail_weight)),
        ];
        fields
            .iter()
            .map(|(k, v)| format!("{k:<20} {v}\n"))
            .collect()
    }
}

fn protocol_for(spec: &StrategySpec) -> Protocol {
    match spec {
        StrategySpec::Relative { .. } => Protocol::Relative,
        _ => Protocol::Absolute,
    }
}

enum PlayError {
    Usage(String),
    Data(String),
}

fn play(source: String, path: &PricePath, args: &StrategyArgs) -> Result<RunReport, PlayError> {
    let sum_sq = p_variation(path, 2.0);
    let spec = args.spec(sum_sq).map_err(PlayError::Usage)?;
    let protocol = protocol_for(&spec);
    let input = GameInput::Path(path);
    let t = run_game(input, &spec, protocol, args.capital).map_err(|e| match e {
        volgame::Error::InvalidStrategy(_) => PlayError::Usage(e.to_string()),
        _ => PlayError::Data(e.to_string()),
    })?;
    Ok(RunReport {
        source,
        protocol: protocol.to_string(),
        n_steps: path.n_steps(),
        initial_capital: args.capital,
        final_capital: t.final_capital(),
        min_capital: t.min_capital(),
        stop_index: t.stop_index(),
        went_bankrupt: t.went_bankrupt(),
        constraint_violated: t.constraint_violated(),
        identity_residual: identity_residual(&spec, &input, &t),
        sum_sq_incr: sum_sq,
        abs_factor: abs_factor(path),
        tail_weight: spec.tail_weight(),
        strategy: spec,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn describe(spec: &GeneratorSpec) -> String {
    let kind = serde_json::to_value(spec.kind).expect("serializes");
    format!(
        "{}(n={}, seed={})",
        kind.as_str().unwrap_or("generator"),
        spec.n_steps,
        spec.seed
    )
}

pub fn simulate(args: &SimulateArgs) -> Outcome {
    let gen = match args.generator() {
        Ok(g) => g,
        Err(e) => return Outcome::usage(e),
    };
    // Check the strategy flags before generating anything.
    if let Err(e) = args.strategy.spec(1.0) {
        return Outcome::usage(e);
    }
    let path = match generate(&gen) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    match play(describe(&gen), &path, &args.strategy) {
        Ok(report) => Outcome {
            stdout: match args.format {
                Format::Json => to_json(&report),
                Format::Text => report.text(),
            },
            ..Outcome::default()
        },
        Err(PlayError::Usage(e)) | Err(PlayError::Data(e)) => Outcome::usage(e),
    }
}

fn read(file: &Path, flavor: Flavor) -> Result<(SeriesFile, PricePath), String> {
    let series = SeriesFile::read(file).map_err(|e| e.to_string())?;
    let path = series.to_path(flavor).map_err(|e| e.to_string())?;
    Ok((series, path))
}

fn code_of(file: &Path) -> String {
    file.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| file.display().to_string())
}

pub fn replay(args: &ReplayArgs) -> Outcome {
    if let Err(e) = args.strategy.spec(1.0) {
        return Outcome::usage(e);
    }
    let flavor = if args.strategy.strategy == StrategyKind::Relative {
        Flavor::Positive
    } else {
        Flavor::Absolute
    };
    let mut out = Outcome::default();
    let mut reports = vec![];
    for file in &args.files {
        let source = file.display().to_string();
        let played = read(file, flavor).and_then(|(_, path)| {
            play(source.clone(), &path, &args.strategy).map_err(|e| match e {
                PlayError::Usage(m) | PlayError::Data(m) => m,
            })
        });
        match played {
            Ok(r) => reports.push(r),
            Err(e) => out.error(&source, e),
        }
    }
    out.stdout = match args.format {
        Format::Json => to_json(&reports),
        Format::Text => reports
            .iter()
            .map(RunReport::text)
            .collect::<Vec<_>>()
            .join("\n"),
    };
    out
}

pub fn stats(args: &StatsArgs) -> Outcome {
    let mut out = Outcome::default();
    let mut reports = vec![];
    for file in &args.files {
        match read(file, Flavor::Absolute) {
            Ok((_, path)) => reports.push(StatsReport::compute(code_of(file), &path)),
            Err(e) => out.error(&file.display().to_string(), e),
        }
    }
    out.stdout = match args.format {
        Format::Json => to_json(&reports),
        Format::Text => {
            let rows: Vec<Vec<String>> = reports.iter().map(StatsReport::text_cells).collect();
            render_aligned(&StatsReport::TEXT_HEADERS, &rows)
        }
    };
    out
}

pub fn table(args: &TableArgs) -> Outcome {
    let mut out = Outcome::default();
    let index = match &args.index_file {
        Some(f) => match read(f, Flavor::Positive) {
            Ok((_, p)) => Some(p),
            Err(e) => {
                out.error(&f.display().to_string(), e);
                return out;
            }
        },
        None => None,
    };
    let mut rows = vec![];
    for file in &args.files {
        let source = file.display().to_string();
        let row = read(file, Flavor::Absolute).and_then(|(_, path)| {
            let factor = match &index {
                None => None,
                Some(idx) if idx.values().len() < path.values().len() => {
                    return Err(format!(
                        "index file has {} rows but the series has {}",
                        idx.values().len(),
                        path.values().len()
                    ))
                }
                Some(idx) => Some(idx.values()[path.values().len() - 1] / idx.first()),
            };
            Ok(StatsReport::compute(code_of(file), &path).table_row(factor))
        });
        match row {
            Ok(r) => rows.push(r),
            Err(e) => out.error(&source, e),
        }
    }
    out.stdout = match args.format {
        Format::Json => to_json(&rows),
        Format::Text => render_table(&rows),
    };
    out
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    if let Some(t) = args.tolerance {
        if t.is_nan() || t < 0.0 {
            return Outcome::usage(format!("--tolerance must be non-negative, got {t}"));
        }
    }
    let reports: Vec<SuiteReport> = run_all(&VerifyOptions {
        trials: args.trials,
        tolerance: args.tolerance,
        seed: args.seed,
    });
    let all_passed = reports.iter().all(|r| r.passed);
    Outcome {
        stdout: match args.format {
            Format::Json => to_json(&reports),
            Format::Text => reports.iter().map(|r| r.line() + "\n").collect(),
        },
        stderr: String::new(),
        code: if all_passed { EXIT_OK } else { EXIT_FAILURE },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Cli;
    use clap::Parser;

    fn run(argv: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(argv).expect("parses");
        crate::dispatch(&cli.command)
    }

    #[test]
    fn auto_c_matches_abs_factor() {
        let out = run(&[
            "volgame",
            "simulate",
            "--strategy",
            "low_vol",
            "--C",
            "auto",
            "--format",
            "json",
        ]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let r: RunReport = serde_json::from_str(&out.stdout).unwrap();
        let gap = (r.final_capital - r.abs_factor.unwrap()).abs();
        assert!(gap <= 1e-9 * r.final_capital.max(1.0), "{gap}");
    }

    #[test]
    fn relative_on_gaussian_walk_is_usage_error() {
        let out = run(&[
            "volgame",
            "simulate",
            "--strategy",
            "relative",
            "--epsilon",
            "0.1",
            "--gamma",
            "0",
        ]);
        assert_eq!(out.code, EXIT_USAGE);
    }

    #[test]
    fn drift_combined_is_rejected() {
        let out = run(&[
            "volgame",
            "simulate",
            "--strategy",
            "drift_combined",
            "--C",
            "1",
        ]);
        assert_eq!(out.code, EXIT_USAGE);
        assert!(out.stderr.contains("drift scenario"));
    }
}
