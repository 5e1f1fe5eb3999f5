//! Seeded synthetic key generation. The generator algorithm is pinned
//! (SplitMix64 + Box-Muller), so a (distribution, n, seed) triple names the
//! same dataset everywhere.

use crate::rng::SplitMix64;
use crate::types::{Key, KeyError};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// Uniform over `[lo, hi)`.
    Uniform { lo: f64, hi: f64 },
    Normal { mean: f64, std_dev: f64 },
    /// exp(N(mu, sigma^2)); strictly positive.
    LogNormal { mu: f64, sigma: f64 },
}

impl Distribution {
    pub fn uniform01() -> Self {
        Distribution::Uniform { lo: 0.0, hi: 1.0 }
    }
    pub fn standard_normal() -> Self {
        Distribution::Normal { mean: 0.0, std_dev: 1.0 }
    }
    pub fn standard_lognormal() -> Self {
        Distribution::LogNormal { mu: 0.0, sigma: 1.0 }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DatagenError {
    #[error("uniform bounds require lo < hi, got lo={lo}, hi={hi}")]
    BadUniformBounds { lo: f64, hi: f64 },
    #[error("scale parameter must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("location parameter must be finite, got {0}")]
    BadLocation(f64),
    #[error("noise fraction must lie in [0, 1], got {0}")]
    BadNoiseFraction(f64),
    #[error("generated a non-finite key: {0}")]
    NonFinite(#[from] KeyError),
}

/// Draws `n` keys from the distribution, deterministically for
/// (distribution, n, seed).
pub fn generate(dist: Distribution, n: usize, seed: u64) -> Result<Vec<Key>, DatagenError> {
    validate_dist(&dist)?;
    let mut rng = SplitMix64::new(seed);
    let mut keys = Vec::with_capacity(n);
    for _ in 0..n {
        keys.push(draw(&dist, &mut rng)?);
    }
    Ok(keys)
}

fn validate_dist(dist: &Distribution) -> Result<(), DatagenError> {
    match *dist {
        Distribution::Uniform { lo, hi } => {
            if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
                return Err(DatagenError::BadUniformBounds { lo, hi });
            }
        }
        Distribution::Normal { mean, std_dev } => {
            if !mean.is_finite() {
                return Err(DatagenError::BadLocation(mean));
            }
            if !(std_dev > 0.0) || !std_dev.is_finite() {
                return Err(DatagenError::BadScale(std_dev));
            }
        }
        Distribution::LogNormal { mu, sigma } => {
            if !mu.is_finite() {
                return Err(DatagenError::BadLocation(mu));
            }
            if !(sigma > 0.0) || !sigma.is_finite() {
                return Err(DatagenError::BadScale(sigma));
            }
        }
    }
    Ok(())
}

fn draw(dist: &Distribution, rng: &mut SplitMix64) -> Result<Key, DatagenError> {
    let value = match *dist {
        Distribution::Uniform { lo, hi } => lo + rng.next_f64() * (hi - lo),
        Distribution::Normal { mean, std_dev } => mean + std_dev * standard_normal(rng),
        Distribution::LogNormal { mu, sigma } => (mu + sigma * standard_normal(rng)).exp(),
    };
    Ok(Key::new(value)?)
}

// Box-Muller on pinned uniforms; u1 is shifted into (0, 1] so ln stays finite.
fn standard_normal(rng: &mut SplitMix64) -> f64 {
    let u1 = 1.0 - rng.next_f64();
    let u2 = rng.next_f64();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Split of a noisy-mix dataset: `floor((1 - f) * n)` uniform keys, the rest
/// normal.
pub fn mix_split(n: usize, noise_fraction: f64) -> (usize, usize) {
    let uniform = ((1.0 - noise_fraction) * n as f64).floor() as usize;
    (uniform, n - uniform)
}

/// Uniform keys with a `noise_fraction` share of standard-normal "noise"
/// keys, deterministically shuffled together.
pub fn noisy_mix(n: usize, noise_fraction: f64, seed: u64) -> Result<Vec<Key>, DatagenError> {
    if !(0.0..=1.0).contains(&noise_fraction) {
        return Err(DatagenError::BadNoiseFraction(noise_fraction));
    }
    let (n_uniform, n_normal) = mix_split(n, noise_fraction);
    let mut keys = generate(Distribution::uniform01(), n_uniform, seed)?;
    keys.extend(generate(Distribution::standard_normal(), n_normal, seed.wrapping_add(1))?);
    let mut rng = SplitMix64::new(seed.wrapping_add(2));
    rng.shuffle(&mut keys);
    Ok(keys)
}
