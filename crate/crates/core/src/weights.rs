//! Weights `W^(k)_{2n}`: the `(2n)`-th derivative at zero of
//! `Π_{j=0}^{k-1} cosh(λ^j t)`, as exact rationals in `q = λ²`.
//!
//! Table index `n` always refers to the `(2n)`-th derivative; odd derivatives
//! vanish and are not stored.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{even_binomials, factorial, ExactRational};
use crate::report::VerificationReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightTable {
    pub q: ExactRational,
    pub k: u32,
    /// `values[n] = W^(k)_{2n}` for `n = 0..=N`.
    pub values: Vec<ExactRational>,
}

impl WeightTable {
    pub fn n_max(&self) -> u64 {
        self.values.len() as u64 - 1
    }
}

fn check_args(q: &ExactRational, k: u32) -> Result<()> {
    if !q.is_positive() {
        return Err(Error::QNotPositive(q.to_string()));
    }
    if k == 0 {
        return Err(Error::TooSmall { name: "k", min: 1, got: 0 });
    }
    Ok(())
}

fn q_powers(q: &ExactRational, n_max: u64) -> Vec<ExactRational> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut p = ExactRational::one();
    for _ in 0..=n_max {
        out.push(p.clone());
        p = &p * q;
    }
    out
}

/// One step of `W^(k)_{2n} = Σ_{j=0}^{n} C(2n,2j) q^j W^(k-1)_{2j}`.
fn lift(prev: &[ExactRational], q_pow: &[ExactRational]) -> Vec<ExactRational> {
    (0..prev.len())
        .map(|n| {
            even_binomials(n as u64)
                .iter()
                .enumerate()
                .map(|(j, c)| &(&q_pow[j] * &prev[j]) * c)
                .sum()
        })
        .collect()
}

/// Weights by the recursion in `k`, starting from `W^(1) ≡ 1`.
pub fn weights_recursive(q: &ExactRational, k: u32, n_max: u64) -> Result<WeightTable> {
    check_args(q, k)?;
    let q_pow = q_powers(q, n_max);
    let mut w = vec![ExactRational::one(); n_max as usize + 1];
    for _ in 1..k {
        w = lift(&w, &q_pow);
    }
    Ok(WeightTable { q: q.clone(), k, values: w })
}

/// Truncated even power series `Σ c_n t^(2n)`, coefficients indexed by `n`.
fn series_mul(a: &[ExactRational], b: &[ExactRational]) -> Vec<ExactRational> {
    let len = a.len().min(b.len());
    (0..len)
        .map(|n| (0..=n).map(|i| &a[i] * &b[n - i]).sum())
        .collect()
}

/// `cosh(s t)` with `s² = scale_sq`, to order `t^(2 n_max)`.
fn cosh_series(scale_sq: &ExactRational, n_max: u64) -> Vec<ExactRational> {
    q_powers(scale_sq, n_max)
        .into_iter()
        .enumerate()
        .map(|(n, p)| &p / &ExactRational::from(factorial(2 * n as u64)))
        .collect()
}

fn product_series(q: &ExactRational, k: u32, n_max: u64) -> Vec<ExactRational> {
    let mut acc = cosh_series(&ExactRational::one(), n_max);
    let mut scale = ExactRational::one();
    for _ in 1..k {
        scale = &scale * q;
        acc = series_mul(&acc, &cosh_series(&scale, n_max));
    }
    acc
}

/// Weights read off the exact truncated product of the `k` cosh series.
pub fn weights_series_oracle(q: &ExactRational, k: u32, n_max: u64) -> Result<WeightTable> {
    check_args(q, k)?;
    let values = product_series(q, k, n_max)
        .into_iter()
        .enumerate()
        .map(|(n, c)| &c * &factorial(2 * n as u64))
        .collect();
    Ok(WeightTable { q: q.clone(), k, values })
}

/// Checks `Θ_k(t) = Θ_{k-1}(λt) cosh t` coefficientwise up to `t^(2N)`, where
/// `Θ_k(t) = Σ W^(k)_{2n} t^(2n)/(2n)!`. Both sides come from the series
/// product, so this checks the generating-function relation independently
/// of [`weights_recursive`].
pub fn theta_genfun_check(q: &ExactRational, k: u32, n_max: u64) -> Result<VerificationReport> {
    check_args(q, k)?;
    if k < 2 {
        return Err(Error::TooSmall { name: "k", min: 2, got: k as u64 });
    }
    let lhs = product_series(q, k, n_max);
    let prev = product_series(q, k - 1, n_max);
    let q_pow = q_powers(q, n_max);
    let scaled: Vec<ExactRational> = prev.iter().zip(&q_pow).map(|(c, p)| c * p).collect();
    let rhs = series_mul(&scaled, &cosh_series(&ExactRational::one(), n_max));

    let mut b = VerificationReport::builder(format!("theta-genfun(q={q},k={k})"), 0, n_max);
    for n in 0..=n_max as usize {
        b.exact(n as u64, &lhs[n], &rhs[n]);
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn base_cases() {
        let w = weights_recursive(&r("7/3"), 1, 6).unwrap();
        assert!(w.values.iter().all(|v| *v == 1));
        let o = weights_series_oracle(&r("7/3"), 1, 6).unwrap();
        assert_eq!(w, o);
        assert_eq!(w.n_max(), 6);
    }

    #[test]
    fn k2_closed_forms() {
        for qs in ["2", "9", "3/2", "1/5"] {
            let q = r(qs);
            let w = weights_recursive(&q, 2, 2).unwrap();
            assert_eq!(w.values[0], 1);
            assert_eq!(w.values[1], &ExactRational::one() + &q);
            assert_eq!(w.values[2], &(&ExactRational::one() + &(&q * &r("6"))) + &q.pow(2));
        }
        assert_eq!(weights_series_oracle(&r("1"), 2, 1).unwrap().values[1], 2);
    }

    #[test]
    fn recursion_matches_series_oracle_q9_k3() {
        assert_eq!(
            weights_recursive(&r("9"), 3, 10).unwrap(),
            weights_series_oracle(&r("9"), 3, 10).unwrap()
        );
    }

    #[test]
    fn theta_examples_pass() {
        let a = theta_genfun_check(&r("2"), 2, 10).unwrap();
        let b = theta_genfun_check(&r("9"), 3, 10).unwrap();
        assert!(a.passed && b.passed);
        assert_eq!(a.checked, 11);
        let c = theta_genfun_check(&r("5"), 2, 0).unwrap();
        assert!(c.passed && c.checked == 1);
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(weights_recursive(&r("0"), 2, 3), Err(Error::QNotPositive(_))));
        assert!(matches!(weights_series_oracle(&r("-1"), 2, 3), Err(Error::QNotPositive(_))));
        assert!(weights_recursive(&r("2"), 0, 3).is_err());
        assert!(theta_genfun_check(&r("2"), 1, 3).is_err());
    }

    #[test]
    fn monotone_in_k_for_q_at_least_one() {
        for qs in ["1", "3/2", "4"] {
            let q = r(qs);
            let tables: Vec<_> = (1..=5).map(|k| weights_recursive(&q, k, 8).unwrap()).collect();
            for w in tables.windows(2) {
                for n in 1..=8 {
                    assert!(w[1].values[n] >= w[0].values[n]);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn recursion_equals_oracle(num in 1i64..40, den in 1i64..8, k in 1u32..5, n in 0u64..7) {
            let q = ExactRational::new(num, den).unwrap();
            let w = weights_recursive(&q, k, n).unwrap();
            prop_assert_eq!(&w, &weights_series_oracle(&q, k, n).unwrap());
            prop_assert!(w.values.iter().all(|v| v.is_positive()));
        }
    }
}
