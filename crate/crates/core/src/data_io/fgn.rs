//! Exact fractional Gaussian noise by sequential conditional sampling
//! (Durbin–Levinson recursion on the fGn autocovariance).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Autocovariance of unit-variance fGn at lag `k`:
/// `½(|k+1|^{2h} - 2|k|^{2h} + |k-1|^{2h})`.
pub fn fgn_autocovariance(k: usize, h: f64) -> f64 {
    let two_h = 2.0 * h;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
}

/// Unit-variance fGn samples of length `n`, one series per seed.
///
/// The recursion coefficients do not depend on the seed, so all series are
/// advanced together; each series sees exactly the arithmetic it would see if
/// it were generated alone.
pub fn fgn_batch(n: usize, h: f64, seeds: &[u64]) -> Vec<Vec<f64>> {
    let p = seeds.len();
    let mut rngs: Vec<ChaCha8Rng> = seeds
        .iter()
        .map(|&s| ChaCha8Rng::seed_from_u64(s))
        .collect();
    if p == 0 || n == 0 {
        return vec![Vec::new(); p];
    }
    let draw = |rngs: &mut [ChaCha8Rng]| -> Vec<f64> {
        rngs.iter_mut().map(|r| StandardNormal.sample(r)).collect()
    };

    // time-major: x[t * p + j] is sample t of series j
    let mut x = vec![0.0; n * p];
    if h == 0.5 {
        // white noise: every partial autocorrelation is exactly zero
        for t in 0..n {
            x[t * p..(t + 1) * p].copy_from_slice(&draw(&mut rngs));
        }
        return unstack(&x, n, p);
    }

    let gamma: Vec<f64> = (0..n).map(|k| fgn_autocovariance(k, h)).collect();
    // phi[i] holds φ_{t,i} for i = 1..=t
    let mut phi = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut variance = gamma[0];
    let mut acc = vec![0.0; p];
    x[..p].copy_from_slice(&draw(&mut rngs));
    for t in 1..n {
        let mut num = gamma[t];
        for i in 1..t {
            num -= phi[i] * gamma[t - i];
        }
        let reflection = num / variance;
        scratch[1..t].copy_from_slice(&phi[1..t]);
        for i in 1..t {
            phi[i] = scratch[i] - reflection * scratch[t - i];
        }
        phi[t] = reflection;
        variance *= 1.0 - reflection * reflection;

        acc.fill(0.0);
        for i in 1..=t {
            let f = phi[i];
            let row = &x[(t - i) * p..(t - i + 1) * p];
            for (a, r) in acc.iter_mut().zip(row) {
                *a += f * r;
            }
        }
        let sd = variance.sqrt();
        let z = draw(&mut rngs);
        let out = &mut x[t * p..(t + 1) * p];
        for j in 0..p {
            out[j] = acc[j] + sd * z[j];
        }
    }
    unstack(&x, n, p)
}

fn unstack(x: &[f64], n: usize, p: usize) -> Vec<Vec<f64>> {
    (0..p)
        .map(|j| (0..n).map(|t| x[t * p + j]).collect())
        .collect()
}
