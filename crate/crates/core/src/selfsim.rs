//! Self-similarity identities relating the moments at `q` to those at `q^k`,
//! and the exact verification engine for the Euler-number, Lucas and Pell
//! identities.
//!
//! Every `verify_*` returns [`VerificationReport`]s instead of asserting, so
//! callers (the CLI, CI) can serialize and diff them.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, even_binomials, factorial, pascal_row, BigInt, ExactRational, QuadRational};
use crate::moments::{moments_bezp, verify_silver_binomial_sum};
use crate::par::Execution;
use crate::report::VerificationReport;
use crate::sequences::{
    closed_form, delta_power, euler_even_table, lucas_table, pell_lucas_table, pell_table, tau,
};

pub use crate::report::Failure;

/// Odometer over all `(i_1, ..., i_k)` of nonnegative integers summing to `n`,
/// in lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    n: u64,
    parts: Vec<u64>,
    prefix: u64,
    done: bool,
}

impl Compositions {
    /// `k >= 1`.
    pub fn new(n: u64, k: usize) -> Self {
        assert!(k >= 1, "compositions need at least one part");
        let mut parts = vec![0; k];
        parts[k - 1] = n;
        Compositions { n, parts, prefix: 0, done: false }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let k = self.parts.len();
        self.parts[k - 1] = self.n - self.prefix;
        let out = self.parts.clone();

        // advance the free digits parts[0..k-1], last one fastest
        let mut p = k - 1;
        loop {
            if p == 0 {
                self.done = true;
                break;
            }
            p -= 1;
            if self.prefix < self.n {
                self.parts[p] += 1;
                self.prefix += 1;
                break;
            }
            self.prefix -= self.parts[p];
            self.parts[p] = 0;
        }
        Some(out)
    }
}

fn check_q(q: &ExactRational) -> Result<()> {
    if *q > 1 {
        Ok(())
    } else {
        Err(Error::QNotAboveOne(q.to_string()))
    }
}

/// Right-hand side of the `k`-fold self-similarity identity for `n = 0..=N`:
/// `Σ_{i_1+…+i_k = n} (2n)!/Π(2i_j)! · q^(Σ_j (j-1) i_j) · Π m_{2 i_j}(q^k)`.
pub fn selfsim_rhs(q: &ExactRational, k: u32, n_max: u64, exec: Execution) -> Result<Vec<ExactRational>> {
    check_q(q)?;
    if k < 2 {
        return Err(Error::TooSmall { name: "k", min: 2, got: k as u64 });
    }
    let coarse = moments_bezp(&q.pow(k), n_max)?;
    let fact: Vec<BigInt> = (0..=n_max).map(|i| factorial(2 * i)).collect();
    let q_pow: Vec<ExactRational> =
        (0..=(k as u64 - 1) * n_max).map(|e| q.pow(e as u32)).collect();

    Ok(exec.map_range(n_max as usize + 1, |n| {
        let mut visited = 0u64;
        let mut acc = ExactRational::zero();
        for c in Compositions::new(n as u64, k as usize) {
            visited += 1;
            let denom: BigInt = c.iter().map(|&i| &fact[i as usize]).product();
            let multinomial = &fact[n] / denom;
            let exp: u64 = c.iter().enumerate().map(|(j, &i)| j as u64 * i).sum();
            let prod: ExactRational = c.iter().map(|&i| coarse.get(i).clone()).product();
            acc += &(&(&prod * &q_pow[exp as usize]) * &multinomial);
        }
        assert_eq!(
            BigInt::from(visited),
            binomial(n as u64 + k as u64 - 1, k as u64 - 1),
            "composition count for n={n}, k={k}"
        );
        acc
    }))
}

fn compare(name: String, lhs: &[ExactRational], rhs: &[ExactRational], n_min: u64) -> VerificationReport {
    let n_max = lhs.len() as u64 - 1;
    let mut b = VerificationReport::builder(name, n_min, n_max);
    for n in n_min..=n_max {
        b.exact(n, &lhs[n as usize], &rhs[n as usize]);
    }
    b.finish()
}

/// `m_2n(q)` against the `k`-fold decomposition into moments at `q^k`, `0 <= n <= N`.
pub fn verify_selfsim_k(q: &ExactRational, k: u32, n_max: u64, exec: Execution) -> Result<VerificationReport> {
    let rhs = selfsim_rhs(q, k, n_max, exec)?;
    let lhs = moments_bezp(q, n_max)?;
    Ok(compare(format!("selfsim-k{k}(q={q})"), &lhs.m, &rhs, 0))
}

/// Two-fold case: `Σ_j C(2n,2j) q^j m_2j(q²) m_{2n-2j}(q²)`.
pub fn kw_rhs(q: &ExactRational, n_max: u64) -> Result<Vec<ExactRational>> {
    check_q(q)?;
    let sq = moments_bezp(&q.pow(2), n_max)?;
    Ok((0..=n_max)
        .map(|n| {
            let c = even_binomials(n);
            let mut qj = ExactRational::one();
            let mut acc = ExactRational::zero();
            for j in 0..=n {
                let t = &(sq.get(j) * sq.get(n - j)) * &qj;
                acc += &(&t * &c[j as usize]);
                qj = &qj * q;
            }
            acc
        })
        .collect())
}

pub fn verify_kw(q: &ExactRational, n_max: u64) -> Result<VerificationReport> {
    let rhs = kw_rhs(q, n_max)?;
    let lhs = moments_bezp(q, n_max)?;
    Ok(compare(format!("kw(q={q})"), &lhs.m, &rhs, 0))
}

/// Three-fold case over `i + j <= n`:
/// `(2n)!/((2i)!(2j)!(2(n-i-j))!) q^i q^(2j) m_2j(q³) m_2i(q³) m_{2n-2i-2j}(q³)`.
pub fn kub_rhs(q: &ExactRational, n_max: u64) -> Result<Vec<ExactRational>> {
    check_q(q)?;
    let cu = moments_bezp(&q.pow(3), n_max)?;
    let fact: Vec<BigInt> = (0..=n_max).map(|i| factorial(2 * i)).collect();
    Ok((0..=n_max)
        .map(|n| {
            let mut acc = ExactRational::zero();
            for i in 0..=n {
                for j in 0..=(n - i) {
                    let r = n - i - j;
                    let coeff = &fact[n as usize]
                        / (&fact[i as usize] * &fact[j as usize] * &fact[r as usize]);
                    let t = &(&(cu.get(j) * cu.get(i)) * cu.get(r)) * &q.pow((i + 2 * j) as u32);
                    acc += &(&t * &coeff);
                }
            }
            acc
        })
        .collect())
}

pub fn verify_kub(q: &ExactRational, n_max: u64) -> Result<VerificationReport> {
    let rhs = kub_rhs(q, n_max)?;
    let lhs = moments_bezp(q, n_max)?;
    Ok(compare(format!("kub(q={q})"), &lhs.m, &rhs, 0))
}

/// `λ = 3`: `9^n m_2n = Σ_{j=0}^{n} C(2n,2j) m_2j` and
/// `81^n m_2n = Σ_{j=0}^{n} C(2n,2j) m_2j (2^(4(n-j)-1) + 2^(2(n-j)-1))`, for `1 <= n <= N`.
///
/// The `j = n` term of the second sum carries `2^(-1) + 2^(-1) = 1`.
pub fn verify_remark_q9(n_max: u64) -> Vec<VerificationReport> {
    let m = moments_bezp(&ExactRational::from(9), n_max).expect("q = 9 is valid");
    let two = ExactRational::from(2);
    let mut first = VerificationReport::builder("q9-moment-sum", 1, n_max);
    let mut second = VerificationReport::builder("q9-squared-step-sum", 1, n_max);
    for n in 1..=n_max {
        let c = even_binomials(n);
        let plain: ExactRational = (0..=n).map(|j| m.get(j) * &c[j as usize]).sum();
        first.exact(n, &(m.get(n) * &BigInt::from(9).pow(n as u32)), &plain);

        let weighted: ExactRational = (0..=n)
            .map(|j| {
                let r = (n - j) as i64;
                let w = two.powi(4 * r - 1).unwrap() + two.powi(2 * r - 1).unwrap();
                &(m.get(j) * &c[j as usize]) * &w
            })
            .sum();
        second.exact(n, &(m.get(n) * &BigInt::from(81).pow(n as u32)), &weighted);
    }
    vec![first.finish(), second.finish()]
}

/// `λ = √5`: `5^n m_2n = Σ_{j=0}^{n} C(2n,2j) m_2j` and
/// `25^n m_2n = Σ_{j=0}^{n} C(2n,2j) m_2j 4^(n-j) L_{2(n-j)}/2`, for `1 <= n <= N`.
pub fn verify_remark_q5(n_max: u64) -> Vec<VerificationReport> {
    let m = moments_bezp(&ExactRational::from(5), n_max).expect("q = 5 is valid");
    let lucas = lucas_table(2 * n_max);
    let mut first = VerificationReport::builder("q5-moment-sum", 1, n_max);
    let mut second = VerificationReport::builder("q5-lucas-sum", 1, n_max);
    for n in 1..=n_max {
        let c = even_binomials(n);
        let plain: ExactRational = (0..=n).map(|j| m.get(j) * &c[j as usize]).sum();
        first.exact(n, &(m.get(n) * &BigInt::from(5).pow(n as u32)), &plain);

        let weighted: ExactRational = (0..=n)
            .map(|j| {
                let r = n - j;
                let w = ExactRational::new(
                    BigInt::from(4).pow(r as u32) * &lucas[2 * r as usize],
                    2,
                )
                .expect("nonzero");
                &(m.get(j) * &c[j as usize]) * &w
            })
            .sum();
        second.exact(n, &(m.get(n) * &BigInt::from(25).pow(n as u32)), &weighted);
    }
    vec![first.finish(), second.finish()]
}

/// `4^n = Σ_{j=0}^{n} C(2n+1,2j+1)` and `1 = Σ_{j=0}^{n} C(2n+1,2j+1) 4^j E_{2(n-j)}`, for `1 <= n <= N`.
pub fn verify_p22_euler(n_max: u64) -> Vec<VerificationReport> {
    let e = euler_even_table(n_max);
    let mut binom = VerificationReport::builder("odd-binomial-power-of-four", 1, n_max);
    let mut euler = VerificationReport::builder("euler-odd-binomial", 1, n_max);
    for n in 1..=n_max {
        let row = pascal_row(2 * n + 1);
        let odd = |j: u64| &row[2 * j as usize + 1];
        let s: BigInt = (0..=n).map(odd).sum();
        binom.exact(n, &BigInt::from(4).pow(n as u32), &s);
        let s: BigInt = (0..=n)
            .map(|j| odd(j) * BigInt::from(4).pow(j as u32) * &e[(n - j) as usize])
            .sum();
        euler.exact(n, &BigInt::one(), &s);
    }
    vec![binom.finish(), euler.finish()]
}

/// The Pell/Pell–Lucas identities for `1 <= n <= N`:
///
/// * `P_{2n+2} = Σ_j C(2n+2,2j+1) 2^j`
/// * `Q_2n = 2 Σ_j C(2n,2j) 2^j`
/// * `2^(n-1) P_2n = Σ_j C(2n,2j) P_2j`
/// * `2^(2n-1) P_2n = Σ_j C(2n,2j) P_2j Q_{2(n-j)}`
/// * `Σ_j C(2n,2j) (1+√2)^(2j) = 2^(n-1) + 2^(n-2) Q_2n + 2^(n-1) √2 P_2n` (in `ℚ(√2)`)
///
/// The first four run in exact integers (each side doubled where a `1/2` could appear).
pub fn verify_pell_identities(n_max: u64) -> Vec<VerificationReport> {
    let p = pell_table(2 * n_max + 2);
    let q = pell_lucas_table(2 * n_max);
    let pow2 = |e: u64| BigInt::one() << e;
    let mut pn = VerificationReport::builder("pell-odd-binomial", 1, n_max);
    let mut qn = VerificationReport::builder("pell-lucas-even-binomial", 1, n_max);
    let mut spn = VerificationReport::builder("pell-self-sum", 1, n_max);
    let mut spqn = VerificationReport::builder("pell-lucas-convolution", 1, n_max);
    let mut ssilv = VerificationReport::builder("silver-quadratic-sum", 1, n_max);
    let delta_int: Vec<(BigInt, BigInt)> = (0..=n_max)
        .map(|j| {
            let d = delta_power(2 * j as i64);
            let int = |x: &ExactRational| x.to_integer().expect("δ_n is an algebraic integer");
            (int(d.rational_part()), int(d.sqrt_part()))
        })
        .collect();

    for n in 1..=n_max {
        let nu = n as usize;
        let row_odd = pascal_row(2 * n + 2);
        let s: BigInt = (0..=nu).map(|j| &row_odd[2 * j + 1] * pow2(j as u64)).sum();
        pn.exact(n, &p[2 * nu + 2], &s);

        let c = even_binomials(n);
        let s: BigInt = (0..=nu).map(|j| &c[j] * pow2(j as u64)).sum();
        qn.exact(n, &q[2 * nu], &(s * 2));

        let s: BigInt = (0..=nu).map(|j| &c[j] * &p[2 * j]).sum();
        spn.exact(n, &(&p[2 * nu] * pow2(n - 1)), &s);

        let s: BigInt = (0..=nu).map(|j| &c[j] * &p[2 * j] * &q[2 * (nu - j)]).sum();
        spqn.exact(n, &(&p[2 * nu] * pow2(2 * n - 1)), &s);

        // δ_2j has integer coordinates; accumulate over ℤ[√2], compare in ℚ(√2)
        let (mut ra, mut rb) = (BigInt::zero(), BigInt::zero());
        for j in 0..=nu {
            ra += &c[j] * &delta_int[j].0;
            rb += &c[j] * &delta_int[j].1;
        }
        let lhs = QuadRational::new(ra.into(), rb.into(), 2).expect("d = 2");
        let half_pow = ExactRational::from(pow2(n - 1));
        let a = &half_pow + &(&(&half_pow * &ExactRational::from(q[2 * nu].clone())) / &ExactRational::from(2));
        let b = &half_pow * &ExactRational::from(p[2 * nu].clone());
        let rhs = QuadRational::new(a, b, 2).expect("d = 2");
        ssilv.exact(n, &lhs, &rhs);
    }
    vec![pn.finish(), qn.finish(), spn.finish(), spqn.finish(), ssilv.finish()]
}

/// Recurrence values of `P_n`, `Q_n` against their `ℚ(√2)` closed forms, and
/// `τ_2n = Q_2n / 2`, for `0 <= n <= N`.
pub fn verify_pell_closed_forms(n_max: u64) -> Vec<VerificationReport> {
    let p = pell_table(n_max);
    let q = pell_lucas_table(2 * n_max);
    let mut pc = VerificationReport::builder("pell-closed-form", 0, n_max);
    let mut qc = VerificationReport::builder("pell-lucas-closed-form", 0, n_max);
    let mut tc = VerificationReport::builder("tau-pell-lucas", 0, n_max);
    let show = |r: Result<BigInt>| r.map(|v| v.to_string()).unwrap_or_else(|e| e.to_string());
    for n in 0..=n_max {
        let nu = n as usize;
        pc.exact(n, &p[nu].to_string(), &show(closed_form::pell(n)));
        qc.exact(n, &q[nu].to_string(), &show(closed_form::pell_lucas(n)));
        tc.exact(n, &tau(2 * n), &ExactRational::new(q[2 * nu].clone(), 2).expect("nonzero"));
    }
    vec![pc.finish(), qc.finish(), tc.finish()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Selfsim,
    Remarks,
    Pell,
    Euler,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Selfsim => "selfsim",
            Suite::Remarks => "remarks",
            Suite::Pell => "pell",
            Suite::Euler => "euler",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "selfsim" => Suite::Selfsim,
            "remarks" => Suite::Remarks,
            "pell" => Suite::Pell,
            "euler" => Suite::Euler,
            "all" => Suite::All,
            _ => return Err(Error::Parse { kind: "suite", input: s.to_string() }),
        })
    }
}

/// Parameters for the self-similarity part of a suite run.
#[derive(Debug, Clone)]
pub struct SelfsimParams {
    pub q: ExactRational,
    pub k: u32,
}

impl Default for SelfsimParams {
    fn default() -> Self {
        SelfsimParams { q: ExactRational::from(2), k: 4 }
    }
}

type Job = Box<dyn FnOnce() -> Result<Vec<VerificationReport>> + Send>;

/// Runs every identity in `suite` for indices up to `n_max`. Independent
/// identities run concurrently under [`Execution::Parallel`]; output order is
/// fixed.
pub fn run_suite(
    suite: Suite,
    n_max: u64,
    params: &SelfsimParams,
    exec: Execution,
) -> Result<Vec<VerificationReport>> {
    check_q(&params.q)?;
    if params.k < 2 {
        return Err(Error::TooSmall { name: "k", min: 2, got: params.k as u64 });
    }
    let mut jobs: Vec<Job> = Vec::new();
    let want = |s: Suite| suite == s || suite == Suite::All;

    if want(Suite::Selfsim) {
        let (q, k) = (params.q.clone(), params.k);
        let q2 = q.clone();
        let q3 = q.clone();
        jobs.push(Box::new(move || Ok(vec![verify_kw(&q, n_max)?])));
        jobs.push(Box::new(move || Ok(vec![verify_kub(&q2, n_max)?])));
        jobs.push(Box::new(move || Ok(vec![verify_selfsim_k(&q3, k, n_max, exec)?])));
    }
    if want(Suite::Remarks) {
        jobs.push(Box::new(move || Ok(verify_remark_q9(n_max))));
        jobs.push(Box::new(move || Ok(verify_remark_q5(n_max))));
        jobs.push(Box::new(move || Ok(vec![verify_silver_binomial_sum(n_max)])));
    }
    if want(Suite::Pell) {
        jobs.push(Box::new(move || Ok(verify_pell_identities(n_max))));
        jobs.push(Box::new(move || Ok(verify_pell_closed_forms(n_max))));
    }
    if want(Suite::Euler) {
        jobs.push(Box::new(move || Ok(verify_p22_euler(n_max))));
    }

    let mut out = Vec::new();
    for r in exec.run_jobs(jobs) {
        out.extend(r?);
    }
    Ok(out)
}
