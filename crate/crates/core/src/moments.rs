//! The moment engine: even moments `m_2n = E S(λ)^(2n)` as exact rationals
//! in `q = λ²`, by several independent recursions plus the closed forms for
//! `λ = 2` (uniform on `[-1, 1]`) and `λ = √2` (Pell numbers).
//!
//! Odd moments vanish and are never stored.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{even_binomials, ExactRational};
use crate::report::VerificationReport;
use crate::sequences::{euler_even_table, pell_table, tau};
use crate::weights::weights_recursive;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Bezp,
    L4,
    GeneralK(u32),
    EulerInverse,
    ClosedFormUniform,
    ClosedFormSilver,
    SilverTau,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Bezp => f.write_str("bezp"),
            Method::L4 => f.write_str("l4"),
            Method::GeneralK(k) => write!(f, "general-k{k}"),
            Method::EulerInverse => f.write_str("euler"),
            Method::ClosedFormUniform => f.write_str("uniform"),
            Method::ClosedFormSilver => f.write_str("silver"),
            Method::SilverTau => f.write_str("silver-tau"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Parses the names produced by `Display`; bare `general` means `k = 1`.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bezp" => Method::Bezp,
            "l4" => Method::L4,
            "general" => Method::GeneralK(1),
            "euler" => Method::EulerInverse,
            "uniform" => Method::ClosedFormUniform,
            "silver" => Method::ClosedFormSilver,
            "silver-tau" => Method::SilverTau,
            _ => {
                let k = s
                    .strip_prefix("general-k")
                    .and_then(|k| k.parse().ok())
                    .filter(|k| *k >= 1)
                    .ok_or_else(|| Error::Parse { kind: "moment method", input: s.to_string() })?;
                Method::GeneralK(k)
            }
        })
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentTable {
    pub q: ExactRational,
    pub method: Method,
    /// `m[n] = m_2n` for `n = 0..=n_max`; `m[0] = 1`.
    pub m: Vec<ExactRational>,
}

impl MomentTable {
    pub fn n_max(&self) -> u64 {
        self.m.len() as u64 - 1
    }

    /// `m_2n`.
    pub fn get(&self, n: u64) -> &ExactRational {
        &self.m[n as usize]
    }

    /// Entrywise equality of the moment values, ignoring the method tag.
    pub fn same_values(&self, other: &Self) -> bool {
        self.q == other.q && self.m == other.m
    }
}

fn check_q(q: &ExactRational) -> Result<()> {
    if *q > 1 {
        Ok(())
    } else {
        Err(Error::QNotAboveOne(q.to_string()))
    }
}

/// Bottom-up driver: `m_0 = 1`, then `m_2n = next(n, &m[..n])`.
fn build(
    q: &ExactRational,
    n_max: u64,
    method: Method,
    next: impl Fn(u64, &[ExactRational]) -> ExactRational,
) -> MomentTable {
    let mut m = Vec::with_capacity(n_max as usize + 1);
    m.push(ExactRational::one());
    for n in 1..=n_max {
        let v = next(n, &m);
        m.push(v);
    }
    MomentTable { q: q.clone(), method, m }
}

/// `Σ_{j<n} C(2n,2j) m_2j w[n-j]`.
fn weighted_sum(n: u64, m: &[ExactRational], w: impl Fn(usize) -> ExactRational) -> ExactRational {
    let c = even_binomials(n);
    (0..n as usize).map(|j| &(&m[j] * &w(n as usize - j)) * &c[j]).sum()
}

/// `m_2n = (q^n - 1)^(-1) Σ_{j<n} C(2n,2j) m_2j`.
pub fn moments_bezp(q: &ExactRational, n_max: u64) -> Result<MomentTable> {
    check_q(q)?;
    Ok(build(q, n_max, Method::Bezp, |n, m| {
        let s = weighted_sum(n, m, |_| ExactRational::one());
        &s / &(q.pow(n as u32) - ExactRational::one())
    }))
}

/// The `λ⁴` recursion: `m_2n = (q^(2n) - 1)^(-1) Σ_{j<n} C(2n,2j) m_2j Σ_l C(2(n-j),2l) q^l`.
///
/// The inner sum runs to `l = n - j`; larger `l` only contribute zero binomials.
pub fn moments_l4(q: &ExactRational, n_max: u64) -> Result<MomentTable> {
    check_q(q)?;
    let inner: Vec<ExactRational> = (0..=n_max)
        .map(|r| {
            let c = even_binomials(r);
            let mut qp = ExactRational::one();
            let mut acc = ExactRational::zero();
            for cl in &c {
                acc += &(&qp * cl);
                qp = &qp * q;
            }
            acc
        })
        .collect();
    Ok(build(q, n_max, Method::L4, |n, m| {
        let s = weighted_sum(n, m, |r| inner[r].clone());
        &s / &(q.pow(2 * n as u32) - ExactRational::one())
    }))
}

/// `m_2n = (q^(kn) - 1)^(-1) Σ_{j<n} C(2n,2j) m_2j W^(k)_{2(n-j)}`.
pub fn moments_general_k(q: &ExactRational, k: u32, n_max: u64) -> Result<MomentTable> {
    check_q(q)?;
    let w = weights_recursive(q, k, n_max)?;
    let qk = q.pow(k);
    Ok(build(q, n_max, Method::GeneralK(k), |n, m| {
        let s = weighted_sum(n, m, |r| w.values[r].clone());
        &s / &(qk.pow(n as u32) - ExactRational::one())
    }))
}

/// Inverse recursion through the even Euler numbers:
/// `m_2n = -(q^n - 1)^(-1) Σ_{j<n} C(2n,2j) q^j E_{2(n-j)} m_2j`.
pub fn moments_euler_inverse(q: &ExactRational, n_max: u64) -> Result<MomentTable> {
    check_q(q)?;
    let e: Vec<ExactRational> = euler_even_table(n_max).into_iter().map(Into::into).collect();
    Ok(build(q, n_max, Method::EulerInverse, |n, m| {
        let c = even_binomials(n);
        let mut qj = ExactRational::one();
        let mut s = ExactRational::zero();
        for j in 0..n as usize {
            s += &(&(&(&qj * &e[n as usize - j]) * &m[j]) * &c[j]);
            qj = &qj * q;
        }
        -(&s / &(q.pow(n as u32) - ExactRational::one()))
    }))
}

/// `λ = 2`: `S` is uniform on `[-1, 1]`, so `m_2n = 1/(2n+1)`.
pub fn moments_uniform_closed(n_max: u64) -> MomentTable {
    let m = (0..=n_max).map(|n| ExactRational::new(1, 2 * n + 1).expect("nonzero")).collect();
    MomentTable { q: ExactRational::from(4), method: Method::ClosedFormUniform, m }
}

/// `λ = √2`: `m_2n = P_{2n+2} / ((2n+2)(2n+1))`.
pub fn moments_silver_closed(n_max: u64) -> MomentTable {
    let p = pell_table(2 * n_max + 2);
    let m = (0..=n_max)
        .map(|n| {
            ExactRational::new(p[2 * n as usize + 2].clone(), (2 * n + 2) * (2 * n + 1))
                .expect("nonzero")
        })
        .collect();
    MomentTable { q: ExactRational::from(2), method: Method::ClosedFormSilver, m }
}

/// `λ = √2` through `τ`: `m_2n = (4^n - 1)^(-1) Σ_{j<n} C(2n,2j) m_2j τ_{2(n-j)}`.
pub fn moments_silver_tau(n_max: u64) -> MomentTable {
    let taus: Vec<ExactRational> = (0..=n_max).map(|r| tau(2 * r)).collect();
    let four = ExactRational::from(4);
    build(&ExactRational::from(2), n_max, Method::SilverTau, |n, m| {
        let s = weighted_sum(n, m, |r| taus[r].clone());
        &s / &(four.pow(n as u32) - ExactRational::one())
    })
}

/// `m_2n(√2) = Σ_{j=0}^{n} C(2n,2j) 2^j / ((2n-2j+1)(2j+1))`, from `S(√2) ~ S(2) + √2 S(2)`.
pub fn silver_binomial_sum(n: u64) -> ExactRational {
    let c = even_binomials(n);
    (0..=n)
        .map(|j| {
            let den = (2 * n - 2 * j + 1) * (2 * j + 1);
            &(&ExactRational::from(2).pow(j as u32) * &c[j as usize])
                / &ExactRational::from(den)
        })
        .sum()
}

/// Compares the `√2` binomial-sum display with the `τ` recursion for `1 <= n <= N`.
pub fn verify_silver_binomial_sum(n_max: u64) -> VerificationReport {
    let t = moments_silver_tau(n_max);
    let mut b = VerificationReport::builder("silver-binomial-sum", 1, n_max);
    for n in 1..=n_max {
        b.exact(n, t.get(n), &silver_binomial_sum(n));
    }
    b.finish()
}

/// Dispatches on `method`. Closed forms reject any `q` other than their own.
pub fn moments(q: &ExactRational, n_max: u64, method: Method) -> Result<MomentTable> {
    let pinned = |want: i64, t: MomentTable| {
        check_q(q)?;
        if *q == want {
            Ok(t)
        } else {
            Err(Error::Parse { kind: "closed form (q must be fixed)", input: q.to_string() })
        }
    };
    match method {
        Method::Bezp => moments_bezp(q, n_max),
        Method::L4 => moments_l4(q, n_max),
        Method::GeneralK(k) => moments_general_k(q, k, n_max),
        Method::EulerInverse => moments_euler_inverse(q, n_max),
        Method::ClosedFormUniform => pinned(4, moments_uniform_closed(n_max)),
        Method::ClosedFormSilver => pinned(2, moments_silver_closed(n_max)),
        Method::SilverTau => pinned(2, moments_silver_tau(n_max)),
    }
}

/// `m_2(n+1) m_2(n-1) >= m_2n²` for every interior index.
pub fn log_convex(t: &MomentTable) -> bool {
    t.m.windows(3).all(|w| &w[2] * &w[0] >= &w[1] * &w[1])
}

/// Support bound `|S| <= 1/(λ - 1)` seen through the moments:
/// `m_2n (√q - 1)^(2n) <= 1`. Exact when `√q` is rational; otherwise in
/// floating point with a relative slack of `1e-12`.
pub fn support_bound_holds(t: &MomentTable) -> bool {
    match t.q.sqrt_exact() {
        Some(lambda) => {
            let gap = (&lambda - &ExactRational::one()).pow(2);
            let mut g = ExactRational::one();
            t.m.iter().all(|m| {
                let ok = m * &g <= ExactRational::one();
                g = &g * &gap;
                ok
            })
        }
        None => {
            let gap = (t.q.to_f64().sqrt() - 1.0).powi(2);
            t.m.iter().enumerate().all(|(n, m)| {
                // log-space keeps large n from overflowing
                let lhs = m.to_f64().ln() + n as f64 * gap.ln();
                lhs <= 1e-12
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn vals(t: &MomentTable) -> Vec<String> {
        t.m.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn bezp_examples() {
        assert_eq!(vals(&moments_bezp(&r("9"), 2).unwrap()), ["1/1", "1/8", "7/320"]);
        assert_eq!(vals(&moments_bezp(&r("4"), 3).unwrap()), ["1/1", "1/3", "1/5", "1/7"]);
        assert_eq!(vals(&moments_bezp(&r("2"), 3).unwrap()), ["1/1", "1/1", "7/3", "51/7"]);
    }

    // Exact enumeration of all 2^12 sign patterns of Σ_{n≤12} 3^(-n) X_n.
    // E S_12^4 <= E S^4, and the gap is bounded by the tail.
    #[test]
    fn bezp_q9_fourth_moment_bracketed_by_enumeration() {
        let depth = 12u32;
        let c: Vec<ExactRational> =
            (1..=depth).map(|n| ExactRational::new(1, 3i64.pow(n)).unwrap()).collect();
        let mut m2 = ExactRational::zero();
        let mut m4 = ExactRational::zero();
        for mask in 0u32..(1 << depth) {
            let s: ExactRational = c
                .iter()
                .enumerate()
                .map(|(i, ci)| if mask >> i & 1 == 1 { ci.clone() } else { -ci })
                .sum();
            let s2 = &s * &s;
            m4 += &(&s2 * &s2);
            m2 += &s2;
        }
        let total = ExactRational::from(1u64 << depth);
        let m2 = &m2 / &total;
        let m4 = &m4 / &total;
        let exact = moments_bezp(&r("9"), 2).unwrap();
        // variance of the tail: Σ_{n>12} 9^-n = 9^-12/8
        let tail_var = &ExactRational::new(1, 9i64.pow(12)).unwrap() / &r("8");
        assert_eq!(&m2 + &tail_var, *exact.get(1));
        assert!(m4 < *exact.get(2));
        // E(A+B)^4 - E A^4 = 6 E A² E B² + E B⁴ <= 6 m2 v + 3 v² for the independent tail B
        let slack = &(&r("6") * &(&exact.m[1] * &tail_var)) + &(&r("3") * &tail_var.pow(2));
        assert!(&exact.m[2] - &m4 <= slack);
    }

    #[test]
    fn l4_examples() {
        assert_eq!(moments_l4(&r("9"), 1).unwrap().m[1], r("1/8"));
        assert_eq!(moments_l4(&r("2"), 1).unwrap().m[1], 1);
        assert!(moments_l4(&r("4"), 5).unwrap().same_values(&moments_bezp(&r("4"), 5).unwrap()));
    }

    #[test]
    fn general_k_specialisations() {
        for q in ["2", "4", "9"] {
            let q = r(q);
            let b = moments_bezp(&q, 10).unwrap();
            assert!(moments_general_k(&q, 1, 10).unwrap().same_values(&b));
            let l = moments_l4(&q, 10).unwrap();
            assert!(moments_general_k(&q, 2, 10).unwrap().same_values(&l));
        }
        let g = moments_general_k(&r("9"), 3, 5).unwrap();
        assert!(g.same_values(&moments_bezp(&r("9"), 5).unwrap()));
        assert_eq!(g.method, Method::GeneralK(3));
    }

    #[test]
    fn euler_inverse_examples() {
        assert_eq!(moments_euler_inverse(&r("9"), 1).unwrap().m[1], r("1/8"));
        assert!(moments_euler_inverse(&r("4"), 10)
            .unwrap()
            .same_values(&moments_uniform_closed(10)));
        assert!(moments_euler_inverse(&r("2"), 10)
            .unwrap()
            .same_values(&moments_bezp(&r("2"), 10).unwrap()));
    }

    #[test]
    fn silver_forms() {
        let c = moments_silver_closed(30);
        assert_eq!(vals(&moments_silver_closed(2)), ["1/1", "1/1", "7/3"]);
        assert!(c.same_values(&moments_silver_tau(30)));
        assert!(c.same_values(&moments_bezp(&r("2"), 30).unwrap()));
        assert_eq!(moments_silver_tau(1).m[1], 1);
        assert_eq!(silver_binomial_sum(1), 1);
        assert!(verify_silver_binomial_sum(20).passed);
    }

    #[test]
    fn q_must_exceed_one() {
        for bad in ["1", "1/2", "0", "-3"] {
            assert!(matches!(moments_bezp(&r(bad), 3), Err(Error::QNotAboveOne(_))));
            assert!(moments_l4(&r(bad), 3).is_err());
            assert!(moments_general_k(&r(bad), 2, 3).is_err());
            assert!(moments_euler_inverse(&r(bad), 3).is_err());
        }
        assert_eq!(
            moments_bezp(&r("1"), 5).unwrap_err().to_string(),
            "q must exceed 1 (got 1/1)"
        );
        assert!(moments(&r("3"), 3, Method::ClosedFormSilver).is_err());
        assert!(moments(&r("2"), 3, Method::ClosedFormSilver).is_ok());
    }

    #[test]
    fn invariants_across_q() {
        for q in ["3/2", "2", "4", "5", "9", "16", "1000"] {
            let q = r(q);
            let t = moments_bezp(&q, 20).unwrap();
            assert_eq!(t.m[0], 1);
            assert_eq!(t.m[1], (&q - &ExactRational::one()).recip().unwrap());
            assert!(t.m.iter().all(ExactRational::is_positive));
            assert!(log_convex(&t), "q = {q}");
            assert!(support_bound_holds(&t), "q = {q}");
        }
    }

    #[test]
    fn support_bound_is_tight_for_uniform() {
        // λ = 2: support is exactly [-1, 1], so m_2n (2-1)^(2n) = 1/(2n+1) <= 1
        assert!(support_bound_holds(&moments_uniform_closed(30)));
        let mut fake = moments_uniform_closed(3);
        fake.m[3] = r("2");
        assert!(!support_bound_holds(&fake));
    }

    #[test]
    fn method_names_roundtrip() {
        for m in [
            Method::Bezp,
            Method::L4,
            Method::GeneralK(4),
            Method::EulerInverse,
            Method::ClosedFormUniform,
            Method::ClosedFormSilver,
            Method::SilverTau,
        ] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert_eq!("general".parse::<Method>().unwrap(), Method::GeneralK(1));
        assert!("general-k0".parse::<Method>().is_err());
    }
}
