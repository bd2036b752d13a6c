//! Price-series input and synthetic path generation.

mod fgn;
mod series;

pub use fgn::{fgn_autocovariance, fgn_batch};
pub use series::{parse_series, read_series, SeriesFile, SeriesRecord};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{Flavor, PricePath};

/// Longest fractional walk the quadratic-cost sampler accepts.
pub const MAX_FRACTIONAL_STEPS: usize = 32_768;

/// Probability that the bounded adversary keeps its current direction.
const ADVERSARY_PERSISTENCE: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Cumulative sum of `N(0, step_scale^2)` steps from 0.
    GaussianWalk,
    /// `exp` of a gaussian walk, starting at 1.
    GeometricWalk,
    /// Cumulative sum of fGn with Hurst parameter `h`, scaled by `step_scale`.
    FractionalWalk,
    /// Zig-zag of steps of size exactly `epsilon_bound` inside `[-step_scale, step_scale]`.
    BoundedAdversary,
    /// All prices equal to 1.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n_steps: usize,
    pub step_scale: f64,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub epsilon_bound: Option<f64>,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n_steps: usize, step_scale: f64, seed: u64) -> Self {
        Self {
            kind,
            n_steps,
            step_scale,
            h: None,
            epsilon_bound: None,
            seed,
        }
    }

    pub fn fractional(n_steps: usize, h: f64, step_scale: f64, seed: u64) -> Self {
        Self {
            h: Some(h),
            ..Self::new(GeneratorKind::FractionalWalk, n_steps, step_scale, seed)
        }
    }

    pub fn bounded_adversary(n_steps: usize, epsilon: f64, range_cap: f64, seed: u64) -> Self {
        Self {
            epsilon_bound: Some(epsilon),
            ..Self::new(GeneratorKind::BoundedAdversary, n_steps, range_cap, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGenerator(msg));
        if self.n_steps == 0 {
            return bad("n_steps must be at least 1".into());
        }
        if !(self.step_scale.is_finite() && self.step_scale > 0.0) {
            return bad(format!(
                "step_scale must be positive, got {}",
                self.step_scale
            ));
        }
        match self.kind {
            GeneratorKind::FractionalWalk => {
                match self.h {
                    Some(h) if h > 0.0 && h < 1.0 => {}
                    other => return bad(format!("h must be in (0, 1), got {other:?}")),
                }
                if self.n_steps > MAX_FRACTIONAL_STEPS {
                    return Err(Error::TooLong {
                        n: self.n_steps,
                        max: MAX_FRACTIONAL_STEPS,
                    });
                }
            }
            GeneratorKind::BoundedAdversary => match self.epsilon_bound {
                Some(e) if e.is_finite() && e > 0.0 => {}
                other => return bad(format!("epsilon_bound must be positive, got {other:?}")),
            },
            _ => {}
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

/// Deterministic path for `spec`; the same spec always yields the same path.
pub fn generate(spec: &GeneratorSpec) -> Result<PricePath> {
    Ok(generate_batch(spec, &[spec.seed])?.remove(0))
}

/// One path per seed, each identical to `generate(&spec.with_seed(seed))`.
/// Fractional walks share the recursion across seeds.
pub fn generate_batch(spec: &GeneratorSpec, seeds: &[u64]) -> Result<Vec<PricePath>> {
    spec.validate()?;
    let n = spec.n_steps;
    if spec.kind == GeneratorKind::FractionalWalk {
        let h = spec.h.expect("validated");
        return fgn_batch(n, h, seeds)
            .into_iter()
            .map(|noise| {
                let steps: Vec<f64> = noise.iter().map(|z| z * spec.step_scale).collect();
                PricePath::absolute(cumulative(0.0, &steps))
            })
            .collect();
    }
    seeds
        .iter()
        .map(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match spec.kind {
                GeneratorKind::GaussianWalk => PricePath::absolute(cumulative(
                    0.0,
                    &normal_steps(&mut rng, n, spec.step_scale),
                )),
                GeneratorKind::GeometricWalk => {
                    let logs = cumulative(0.0, &normal_steps(&mut rng, n, spec.step_scale));
                    PricePath::positive(logs.into_iter().map(f64::exp).collect())
                }
                GeneratorKind::BoundedAdversary => PricePath::absolute(adversary(
                    &mut rng,
                    n,
                    spec.epsilon_bound.expect("validated"),
                    spec.step_scale,
                )),
                GeneratorKind::Constant => PricePath::new(vec![1.0; n + 1], Flavor::Positive),
                GeneratorKind::FractionalWalk => unreachable!(),
            }
        })
        .collect()
}

fn normal_steps(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            scale * z
        })
        .collect()
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

/// Full-size steps, direction persistent with random flips, reflected at the
/// cap. Each computed increment is nudged so `|ΔS| <= epsilon` holds in
/// floating point.
fn adversary(rng: &mut ChaCha8Rng, n: usize, epsilon: f64, cap: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut s = 0.0f64;
    let mut dir = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    out.push(s);
    for _ in 0..n {
        if !rng.random_bool(ADVERSARY_PERSISTENCE) {
            dir = -dir;
        }
        if (s + dir * epsilon).abs() > cap {
            dir = -dir;
        }
        let mut next = s + dir * epsilon;
        while (next - s).abs() > epsilon {
            next = if dir > 0.0 {
                next.next_down()
            } else {
                next.next_up()
            };
        }
        s = next;
        out.push(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_determinism() {
        let spec = GeneratorSpec::new(GeneratorKind::GaussianWalk, 1, 1.0, 7);
        let p = generate(&spec).unwrap();
        assert_eq!(p.values().len(), 2);
        assert_eq!(p.first(), 0.0);
        assert_eq!(generate(&spec).unwrap(), p);
        assert_ne!(generate(&spec.with_seed(8)).unwrap(), p);

        let g = generate(&GeneratorSpec::new(
            GeneratorKind::GeometricWalk,
            50,
            0.1,
            1,
        ))
        .unwrap();
        assert_eq!(g.first(), 1.0);
        assert_eq!(g.flavor(), Flavor::Positive);

        let c = generate(&GeneratorSpec::new(GeneratorKind::Constant, 5, 1.0, 1)).unwrap();
        assert_eq!(c.values(), &[1.0; 6]);
    }

    #[test]
    fn batch_equals_individual_generation() {
        let spec = GeneratorSpec::fractional(200, 0.3, 0.5, 0);
        let batch = generate_batch(&spec, &[4, 5]).unwrap();
        assert_eq!(batch[1], generate(&spec.with_seed(5)).unwrap());
        let spec = GeneratorSpec::new(GeneratorKind::GaussianWalk, 20, 1.0, 0);
        let batch = generate_batch(&spec, &[4, 5]).unwrap();
        assert_eq!(batch[0], generate(&spec.with_seed(4)).unwrap());
    }

    #[test]
    fn validation_errors() {
        let mut spec = GeneratorSpec::fractional(MAX_FRACTIONAL_STEPS + 1, 0.7, 1.0, 0);
        assert!(matches!(generate(&spec), Err(Error::TooLong { .. })));
        spec.n_steps = 10;
        spec.h = Some(1.0);
        assert!(matches!(generate(&spec), Err(Error::InvalidGenerator(_))));
        spec.h = None;
        assert!(generate(&spec).is_err());
        let spec = GeneratorSpec::new(GeneratorKind::GaussianWalk, 0, 1.0, 0);
        assert!(generate(&spec).is_err());
        let spec = GeneratorSpec::new(GeneratorKind::GaussianWalk, 3, -1.0, 0);
        assert!(generate(&spec).is_err());
        let spec = GeneratorSpec::new(GeneratorKind::BoundedAdversary, 3, 1.0, 0);
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn adversary_respects_step_bound_and_cap() {
        for seed in 0..20 {
            let eps = 1e-3 * (1.0 + seed as f64 / 7.0);
            let spec = GeneratorSpec::bounded_adversary(5_000, eps, 0.05, seed);
            let p = generate(&spec).unwrap();
            assert!(p.increments().all(|d| d.abs() <= eps));
            assert!(p.values().iter().all(|v| v.abs() <= 0.05 + eps));
            let full = p
                .increments()
                .filter(|d| d.abs() >= eps * (1.0 - 1e-12))
                .count();
            assert_eq!(full, 5_000);
        }
    }

    #[test]
    fn generator_spec_serde() {
        let spec: GeneratorSpec = serde_json::from_str(
            r#"{"kind":"fractional_walk","n_steps":10,"step_scale":1.0,"h":0.7,"seed":3}"#,
        )
        .unwrap();
        assert_eq!(spec, GeneratorSpec::fractional(10, 0.7, 1.0, 3));
    }
}
