//! Exact moment sequences of the symmetric infinite Bernoulli convolution
//!
//! `S(λ) = Σ_{n≥1} λ^(-n) X_n`, with `X_n` i.i.d. fair signs.
//!
//! Every moment recursion touches `λ` only through even powers, so the whole
//! engine is parameterised by `q = λ²` and runs in exact rational arithmetic
//! even for irrational `λ` such as `√2` or `√5`. On top of the moment engine
//! sit exact verifiers for the self-similarity, Euler-number and Pell/Lucas
//! identities, and floating-point oracles (characteristic function, explicit
//! density of `S(√2)`, seeded Monte Carlo sampler).
//!
//! Data-parallel loops go through [`par::Execution`]; with the `parallel`
//! feature disabled they fall back to plain sequential iteration.

pub mod analytic;
pub mod error;
pub mod exactnum;
pub mod moments;
pub mod par;
pub mod report;
pub mod selfsim;
pub mod sequences;
pub mod weights;

pub use error::{Error, Result};
pub use exactnum::{binomial, BigInt, ExactRational, QuadRational};
pub use moments::{Method, MomentTable};
pub use par::Execution;
pub use report::VerificationReport;
pub use weights::WeightTable;
