//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Exact criteria compare rationals (or integers, or `ℚ(√2)` elements) for
//! equality; floating-point criteria use the tolerances pinned below.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bconv::analytic::{
    charfn, charfn_functional_eq_check, sample_s, silver_density_mass, silver_density_moment_quad,
    SamplerConfig,
};
use bconv::moments::{moments_bezp, moments_euler_inverse, moments_general_k, moments_l4};
use bconv::selfsim::{
    verify_kub, verify_kw, verify_p22_euler, verify_pell_identities, verify_remark_q5,
    verify_remark_q9, verify_selfsim_k,
};
use bconv::sequences::pell_table;
use bconv::weights::{theta_genfun_check, weights_recursive, weights_series_oracle};
use bconv::{ExactRational, Execution, VerificationReport};

const CHARFN_SINC_TOL: f64 = 1e-10;
const CHARFN_EVAL_TOL: f64 = 1e-12;
const FUNCTIONAL_EQ_TOL: f64 = 1e-9;
const MC_SIGMAS: f64 = 4.0;
const MC_COUNT: usize = 100_000;
const MC_SEED: u64 = 0x5eed_2013;

const AC1_BUDGET: Duration = Duration::from_secs(10);
const AC4_BUDGET: Duration = Duration::from_secs(30);
const AC6_BUDGET: Duration = Duration::from_secs(20);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r(s: &str) -> ExactRational {
    s.parse().unwrap()
}

fn all_passed(reports: &[VerificationReport]) -> Outcome {
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} first failure {:?}", r.identity_name, r.failures.first()))
        .collect();
    if failed.is_empty() {
        let checks: u64 = reports.iter().map(|r| r.checked).sum();
        Ok(format!("{} identities, {checks} checks", reports.len()))
    } else {
        Err(failed.join("; "))
    }
}

fn within(budget: Duration, elapsed: Duration, detail: String) -> Outcome {
    if elapsed <= budget {
        Ok(detail)
    } else {
        Err(format!("{detail}, but took {elapsed:?} > {budget:?}"))
    }
}

fn ac1_four_way() -> Outcome {
    let start = Instant::now();
    let qs: Vec<ExactRational> = ["3/2", "2", "4", "5", "9", "16"].iter().map(|s| r(s)).collect();
    let results = Execution::default().map_slice(&qs, |q| {
        let base = moments_bezp(q, 20).unwrap();
        let mut others = vec![moments_l4(q, 20).unwrap(), moments_euler_inverse(q, 20).unwrap()];
        others.extend((1..=4).map(|k| moments_general_k(q, k, 20).unwrap()));
        others
            .iter()
            .find(|t| !t.same_values(&base))
            .map(|t| format!("q={q}: {} disagrees with bezp", t.method))
    });
    if let Some(msg) = results.into_iter().flatten().next() {
        return Err(msg);
    }
    within(AC1_BUDGET, start.elapsed(), "6 q values x 7 methods, N=20, identical".into())
}

fn ac2_uniform() -> Outcome {
    let t = moments_bezp(&r("4"), 30).unwrap();
    for n in 0..=30u64 {
        let want = ExactRational::new(1, 2 * n + 1).unwrap();
        if *t.get(n) != want {
            return Err(format!("n={n}: {} != {want}", t.get(n)));
        }
    }
    Ok("m_2n(2) = 1/(2n+1), n <= 30".into())
}

fn ac3_silver() -> Outcome {
    let t = moments_bezp(&r("2"), 30).unwrap();
    let p = pell_table(62);
    for n in 0..=30u64 {
        let want = ExactRational::new(p[2 * n as usize + 2].clone(), (2 * n + 2) * (2 * n + 1)).unwrap();
        if *t.get(n) != want {
            return Err(format!("n={n}: {} != {want}", t.get(n)));
        }
    }
    for (n, v) in [(1, "1"), (2, "7/3"), (3, "51/7")] {
        if *t.get(n) != r(v) {
            return Err(format!("spot value m_{}: {} != {v}", 2 * n, t.get(n)));
        }
    }
    Ok("m_2n(√2) = P_{2n+2}/((2n+2)(2n+1)), n <= 30; spot values 1, 7/3, 51/7".into())
}

fn ac4_selfsim() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    for q in ["2", "4", "9"] {
        reports.push(verify_kw(&r(q), 15).unwrap());
    }
    for q in ["2", "4"] {
        reports.push(verify_kub(&r(q), 10).unwrap());
    }
    reports.push(verify_selfsim_k(&r("2"), 4, 8, Execution::default()).unwrap());
    let detail = all_passed(&reports)?;
    within(AC4_BUDGET, start.elapsed(), detail)
}

fn ac5_remarks() -> Outcome {
    let mut reports = verify_remark_q9(15);
    reports.extend(verify_remark_q5(15));
    all_passed(&reports)
}

fn ac6_pell() -> Outcome {
    let start = Instant::now();
    let mut reports = verify_pell_identities(200);
    reports.extend(verify_p22_euler(50));
    let detail = all_passed(&reports)?;
    within(AC6_BUDGET, start.elapsed(), detail)
}

fn ac7_weights() -> Outcome {
    let mut reports = Vec::new();
    for q in ["1", "2", "9"] {
        let q = r(q);
        for k in 1..=4 {
            let a = weights_recursive(&q, k, 12).unwrap();
            let b = weights_series_oracle(&q, k, 12).unwrap();
            if a != b {
                return Err(format!("q={q}, k={k}: recursion != series oracle"));
            }
            if k >= 2 {
                reports.push(theta_genfun_check(&q, k, 12).unwrap());
            }
        }
    }
    all_passed(&reports).map(|d| format!("12 tables match the series oracle; {d}"))
}

fn ac8_density() -> Outcome {
    let m = moments_bezp(&r("2"), 20).unwrap();
    for n in 0..=20u64 {
        let v = silver_density_moment_quad(n).unwrap();
        if !v.sqrt_part().is_zero() {
            return Err(format!("n={n}: sqrt(2) part {} did not cancel", v.sqrt_part()));
        }
        if v.rational_part() != m.get(n) {
            return Err(format!("n={n}: {} != {}", v.rational_part(), m.get(n)));
        }
    }
    let mass = silver_density_mass().unwrap();
    if mass != 1 {
        return Err(format!("mass {mass}"));
    }
    Ok("exact density moments = m_2n(√2), n <= 20; mass = 1".into())
}

fn ac9_analytic() -> Outcome {
    let mut worst: f64 = 0.0;
    for t in [0.1, 1.0, PI, 10.0] {
        let e = charfn(2.0, t, CHARFN_EVAL_TOL).unwrap();
        let err = (e.value - t.sin() / t).abs();
        worst = worst.max(err);
        if err > CHARFN_SINC_TOL {
            return Err(format!("t={t}: |charfn - sinc| = {err:e}"));
        }
    }
    let grid: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64).collect();
    let mut reports = Vec::new();
    for lambda in [1.5, 2.0, 3.0] {
        for k in 1..=3 {
            reports.push(charfn_functional_eq_check(lambda, k, &grid, FUNCTIONAL_EQ_TOL).unwrap());
        }
    }
    all_passed(&reports).map(|d| format!("max sinc error {worst:.1e}; functional equation {d}"))
}

fn ac10_monte_carlo() -> Outcome {
    let mut details = Vec::new();
    for (lambda, q) in [(2.0, "4"), (3.0, "9")] {
        let exact = moments_bezp(&r(q), 2).unwrap();
        let (m2, m4) = (exact.get(1).to_f64(), exact.get(2).to_f64());
        let cfg = SamplerConfig {
            lambda,
            depth: SamplerConfig::recommended_depth(lambda),
            seed: MC_SEED,
            count: MC_COUNT,
        };
        let run = sample_s(&cfg, Execution::default()).unwrap();
        let s = run.stats;
        let z2 = (s.mean_sq - m2) / s.se_mean_sq;
        let z4 = (s.mean_fourth - m4) / s.se_mean_fourth;
        if z2.abs() > MC_SIGMAS || z4.abs() > MC_SIGMAS {
            return Err(format!("lambda={lambda}: z(m2)={z2:.2}, z(m4)={z4:.2}"));
        }
        let radius = cfg.support_radius();
        if let Some(x) = run.samples.iter().find(|x| x.abs() > radius) {
            return Err(format!("lambda={lambda}: sample {x} outside [-{radius}, {radius}]"));
        }
        details.push(format!("lambda={lambda}: z(m2)={z2:.2}, z(m4)={z4:.2}"));
    }
    Ok(details.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 four-way moment agreement", ac1_four_way),
        ("AC2 uniform closed form", ac2_uniform),
        ("AC3 silver/Pell closed form", ac3_silver),
        ("AC4 self-similarity", ac4_selfsim),
        ("AC5 identity suites q=9, q=5", ac5_remarks),
        ("AC6 Pell/Lucas and Euler identities", ac6_pell),
        ("AC7 weights vs series oracle", ac7_weights),
        ("AC8 silver density moments", ac8_density),
        ("AC9 characteristic function", ac9_analytic),
        ("AC10 Monte Carlo moments and support", ac10_monte_carlo),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
