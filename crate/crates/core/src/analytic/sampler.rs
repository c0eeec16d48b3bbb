use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::Execution;

pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9)";

/// Samples per independent RNG stream. Chunk `c` draws from
/// `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(c)`, so the output does
/// not depend on the thread count.
pub const CHUNK_LEN: usize = 4096;

const SEED_DERIVATION: &str = "chunk c of 4096 samples: ChaCha8Rng::seed_from_u64(seed), set_stream(c)";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub lambda: f64,
    pub depth: u32,
    pub seed: u64,
    pub count: usize,
}

impl SamplerConfig {
    /// Depth that pushes the truncation tail below `1e-12`.
    pub fn recommended_depth(lambda: f64) -> u32 {
        let mut d = 1;
        while lambda.powi(-(d as i32)) / (lambda - 1.0) >= 1e-12 {
            d += 1;
        }
        d
    }

    /// `|S - S_depth| <= λ^(-depth)/(λ - 1)` surely.
    pub fn truncation_tail(&self) -> f64 {
        self.lambda.powi(-(self.depth as i32)) / (self.lambda - 1.0)
    }

    /// Every truncated sample lies in `[-r, r]` with `r` = support radius plus tail.
    pub fn support_radius(&self) -> f64 {
        1.0 / (self.lambda - 1.0) + self.truncation_tail()
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda > 1.0 && self.lambda.is_finite()) {
            return Err(Error::LambdaNotAboveOne(self.lambda));
        }
        if self.depth == 0 {
            return Err(Error::TooSmall { name: "depth", min: 1, got: 0 });
        }
        if self.count == 0 {
            return Err(Error::TooSmall { name: "count", min: 1, got: 0 });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats {
    pub count: usize,
    pub mean: f64,
    pub mean_sq: f64,
    pub mean_fourth: f64,
    /// Standard error of `mean_sq`.
    pub se_mean_sq: f64,
    /// Standard error of `mean_fourth`.
    pub se_mean_fourth: f64,
    pub min: f64,
    pub max: f64,
}

impl SampleStats {
    fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let mean_sq = xs.iter().map(|x| x * x).sum::<f64>() / n;
        let mean_fourth = xs.iter().map(|x| x.powi(4)).sum::<f64>() / n;
        let se = |f: &dyn Fn(f64) -> f64, m: f64| {
            if xs.len() < 2 {
                return f64::INFINITY;
            }
            let var = xs.iter().map(|&x| (f(x) - m).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        };
        SampleStats {
            count: xs.len(),
            mean,
            mean_sq,
            mean_fourth,
            se_mean_sq: se(&|x| x * x, mean_sq),
            se_mean_fourth: se(&|x| x.powi(4), mean_fourth),
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRun {
    pub config: SamplerConfig,
    pub rng: &'static str,
    pub seed_derivation: &'static str,
    pub stats: SampleStats,
    #[serde(skip)]
    pub samples: Vec<f64>,
}

fn draw_chunk(cfg: &SamplerConfig, coeffs: &[f64], chunk: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk as u64);
    let len = CHUNK_LEN.min(cfg.count - chunk * CHUNK_LEN);
    (0..len)
        .map(|_| {
            coeffs
                .iter()
                .map(|&c| if rng.random::<bool>() { c } else { -c })
                .sum()
        })
        .collect()
}

/// Draws `count` samples of `S_depth = Σ_{n=1}^{depth} λ^(-n) X_n`, one sign
/// bit per term. The stream is a pure function of the config.
pub fn sample_s(config: &SamplerConfig, exec: Execution) -> Result<SampleRun> {
    config.validate()?;
    let coeffs: Vec<f64> = (1..=config.depth).map(|n| config.lambda.powi(-(n as i32))).collect();
    let chunks = config.count.div_ceil(CHUNK_LEN);
    let samples: Vec<f64> = exec
        .map_range(chunks, |c| draw_chunk(config, &coeffs, c))
        .into_iter()
        .flatten()
        .collect();
    Ok(SampleRun {
        config: *config,
        rng: RNG_ALGORITHM,
        seed_derivation: SEED_DERIVATION,
        stats: SampleStats::from_samples(&samples),
        samples,
    })
}
