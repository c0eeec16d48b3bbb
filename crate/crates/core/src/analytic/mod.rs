//! Floating-point oracles: the characteristic function as a truncated cosine
//! product, the explicit density of `S(√2)`, and a seeded Monte Carlo sampler.

mod charfn;
mod density;
mod sampler;

pub use charfn::{charfn, charfn_at_depth, charfn_functional_eq_check, depth_for, tail_bound, CharFnEval};
pub use density::{silver_density, silver_density_exact_moment, silver_density_mass, silver_density_moment_quad};
pub use sampler::{sample_s, SampleRun, SampleStats, SamplerConfig, CHUNK_LEN, RNG_ALGORITHM};
