use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// `φ_λ(t) = Π_{n≥1} cos(t λ^(-n))`, truncated after `depth` factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharFnEval {
    pub lambda: f64,
    pub t: f64,
    pub depth: u32,
    pub value: f64,
    /// Bound on `|value - φ_λ(t)|`.
    pub tail_bound: f64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 1.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::LambdaNotAboveOne(lambda))
    }
}

/// `t² λ^(-2 depth) / (2(λ² - 1))`, which dominates `Σ_{n>depth} (t λ^(-n))²/2`.
///
/// Factors lie in `[-1, 1]`, so `|Π a_n - Π b_n| <= Σ |a_n - b_n|`, and
/// `|cos x - 1| <= x²/2`.
pub fn tail_bound(lambda: f64, t: f64, depth: u32) -> f64 {
    t * t * lambda.powi(-2 * depth as i32) / (2.0 * (lambda * lambda - 1.0))
}

/// Smallest `depth >= 1` with `tail_bound(lambda, t, depth) <= tol`.
pub fn depth_for(lambda: f64, t: f64, tol: f64) -> u32 {
    let t = t.abs();
    if t == 0.0 {
        return 1;
    }
    let need = (t * t / (2.0 * (lambda * lambda - 1.0) * tol)).ln() / (2.0 * lambda.ln());
    let mut depth = need.ceil().max(1.0) as u32;
    // guard against rounding in the closed form
    while tail_bound(lambda, t, depth) > tol {
        depth += 1;
    }
    depth
}

/// Truncated product at a given depth. Evaluates at `|t|`, so the result is
/// exactly even in `t`.
pub fn charfn_at_depth(lambda: f64, t: f64, depth: u32) -> Result<CharFnEval> {
    check_lambda(lambda)?;
    let ta = t.abs();
    let mut value = 1.0;
    let mut scale = 1.0;
    for _ in 0..depth {
        scale /= lambda;
        value *= (ta * scale).cos();
    }
    Ok(CharFnEval { lambda, t, depth, value, tail_bound: tail_bound(lambda, ta, depth) })
}

/// `φ_λ(t)` to within `tol`, with the depth chosen from the tail bound.
pub fn charfn(lambda: f64, t: f64, tol: f64) -> Result<CharFnEval> {
    check_lambda(lambda)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::BadTolerance(tol));
    }
    charfn_at_depth(lambda, t, depth_for(lambda, t, tol))
}

/// Checks `φ_λ(λ^k t) = φ_λ(t) Π_{j=0}^{k-1} cos(λ^j t)` at each sample,
/// evaluating both sides to within `tol / 4` so that truncation cannot
/// account for more than half the budget.
pub fn charfn_functional_eq_check(
    lambda: f64,
    k: u32,
    t_samples: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    check_lambda(lambda)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::BadTolerance(tol));
    }
    let mut b = VerificationReport::builder(
        format!("charfn-functional-eq(lambda={lambda},k={k})"),
        0,
        t_samples.len().saturating_sub(1) as u64,
    );
    b.tolerance(tol);
    for (i, &t) in t_samples.iter().enumerate() {
        let lhs = charfn(lambda, lambda.powi(k as i32) * t, tol / 4.0)?.value;
        let cosines: f64 = (0..k).map(|j| (lambda.powi(j as i32) * t).cos()).product();
        let rhs = charfn(lambda, t, tol / 4.0)?.value * cosines;
        b.close(i as u64, lhs, rhs, tol);
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sinc(t: f64) -> f64 {
        if t == 0.0 { 1.0 } else { t.sin() / t }
    }

    #[test]
    fn uniform_case_is_sinc() {
        for t in [0.1, 1.0, PI, 10.0, -3.5] {
            let e = charfn(2.0, t, 1e-12).unwrap();
            assert!((e.value - sinc(t)).abs() <= 1e-10, "t = {t}");
            assert!(e.tail_bound <= 1e-12);
        }
        assert!((charfn(2.0, 1.0, 1e-12).unwrap().value - 0.841_470_984_8).abs() < 1e-10);
        assert!(charfn(2.0, PI, 1e-12).unwrap().value.abs() < 1e-10);
    }

    #[test]
    fn zero_and_evenness() {
        for lambda in [1.1, 2.0, 3.0] {
            let z = charfn(lambda, 0.0, 1e-12).unwrap();
            assert_eq!(z.value, 1.0);
            assert_eq!(z.tail_bound, 0.0);
            for t in [0.3, 7.0, 123.0] {
                let a = charfn(lambda, t, 1e-12).unwrap();
                let b = charfn(lambda, -t, 1e-12).unwrap();
                assert_eq!(a.value.to_bits(), b.value.to_bits());
                assert!(a.value.abs() <= 1.0 + a.tail_bound);
            }
        }
    }

    #[test]
    fn depth_meets_tolerance_minimally() {
        for (lambda, t, tol) in [(1.5, 10.0, 1e-12), (2.0, 1.0, 1e-6), (3.0, 500.0, 1e-10)] {
            let d = depth_for(lambda, t, tol);
            assert!(tail_bound(lambda, t, d) <= tol);
            assert!(d == 1 || tail_bound(lambda, t, d - 1) > tol);
        }
    }

    #[test]
    fn tail_bound_dominates_actual_error() {
        let exact = charfn(1.5, 4.0, 1e-15).unwrap().value;
        for depth in [5, 10, 20] {
            let e = charfn_at_depth(1.5, 4.0, depth).unwrap();
            assert!((e.value - exact).abs() <= e.tail_bound + 1e-15);
        }
    }

    #[test]
    fn functional_equation_examples() {
        let r = charfn_functional_eq_check(2.0, 1, &[0.5, 1.0, 2.0], 1e-10).unwrap();
        assert!(r.passed);
        assert_eq!(r.tolerance, Some(1e-10));
        assert!(charfn_functional_eq_check(1.5, 2, &[0.1, 1.0], 1e-9).unwrap().passed);
        assert!(charfn_functional_eq_check(2.5, 3, &[0.0], 1e-12).unwrap().passed);
    }

    #[test]
    fn residual_shrinks_with_tolerance() {
        let grid: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64).collect();
        let max_resid = |tol: f64| {
            grid.iter()
                .map(|&t| {
                    let lhs = charfn(1.5, 1.5f64.powi(2) * t, tol).unwrap().value;
                    let rhs = charfn(1.5, t, tol).unwrap().value * t.cos() * (1.5 * t).cos();
                    (lhs - rhs).abs()
                })
                .fold(0.0, f64::max)
        };
        // depths chosen from the tail bound differ by exactly k between the
        // two sides, and truncated products then obey the identity exactly
        for tol in [1e-2, 1e-4, 1e-8, 1e-12] {
            assert!(max_resid(tol) <= tol);
        }
        // equal depths on both sides leave a genuine truncation residual
        let equal_depth = |depth: u32| {
            grid.iter()
                .map(|&t| {
                    let lhs = charfn_at_depth(1.5, 1.5f64.powi(2) * t, depth).unwrap().value;
                    let rhs = charfn_at_depth(1.5, t, depth).unwrap().value * t.cos() * (1.5 * t).cos();
                    (lhs - rhs).abs()
                })
                .fold(0.0, f64::max)
        };
        let resid: Vec<f64> = [4, 8, 16, 32, 64].iter().map(|&d| equal_depth(d)).collect();
        assert!(resid.windows(2).all(|w| w[1] <= w[0]), "{resid:?}");
        assert!(resid[0] > 1e-3 && resid[4] < 1e-9, "{resid:?}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(charfn(1.0, 1.0, 1e-12), Err(Error::LambdaNotAboveOne(_))));
        assert!(charfn(0.5, 1.0, 1e-12).is_err());
        assert!(charfn(f64::NAN, 1.0, 1e-12).is_err());
        assert!(matches!(charfn(2.0, 1.0, 0.0), Err(Error::BadTolerance(_))));
        assert!(charfn_functional_eq_check(1.0, 1, &[1.0], 1e-9).is_err());
    }
}
