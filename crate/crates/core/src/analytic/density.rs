use std::f64::consts::SQRT_2;

use crate::error::Result;
use crate::exactnum::{ExactRational, QuadRational};

/// Density of `S(√2)`: flat at `√2/4` on `|x| <= √2 - 1`, falling linearly to
/// zero at `|x| = √2 + 1`.
pub fn silver_density(x: f64) -> f64 {
    let a = x.abs();
    if a <= SQRT_2 - 1.0 {
        SQRT_2 / 4.0
    } else if a <= SQRT_2 + 1.0 {
        SQRT_2 * (SQRT_2 + 1.0 - a) / 8.0
    } else {
        0.0
    }
}

fn q2(a: i64, b: i64) -> QuadRational {
    QuadRational::new(a.into(), b.into(), 2).expect("d = 2")
}

fn frac(n: i64, d: i64) -> ExactRational {
    ExactRational::new(n, d).expect("nonzero")
}

/// `∫ x^(2n) g(x) dx` over the real line, evaluated piecewise with polynomial
/// antiderivatives in `ℚ(√2)`. The `√2` part is kept, not simplified away.
pub fn silver_density_moment_quad(n: u64) -> Result<QuadRational> {
    let inner = q2(-1, 1); // √2 - 1
    let outer = q2(1, 1); // √2 + 1
    let root2 = q2(0, 1);
    let p = 2 * n as i64;

    let pw = |x: &QuadRational, e: i64| x.powi(e);
    let odd = frac(1, p + 1);
    let even = frac(1, p + 2);

    // flat part: (√2/4) a^(2n+1)/(2n+1)
    let flat = root2.scale(&frac(1, 4)).try_mul(&pw(&inner, p + 1)?.scale(&odd))?;

    // slope part: (√2/8) ∫_a^b x^(2n) (b - x) dx
    let ramp_odd = pw(&outer, p + 1)?.try_sub(&pw(&inner, p + 1)?)?.scale(&odd);
    let ramp_even = pw(&outer, p + 2)?.try_sub(&pw(&inner, p + 2)?)?.scale(&even);
    let ramp = outer.try_mul(&ramp_odd)?.try_sub(&ramp_even)?;
    let slope = root2.scale(&frac(1, 8)).try_mul(&ramp)?;

    // g is even: double the half-line integral
    Ok(flat.try_add(&slope)?.scale(&ExactRational::from(2)))
}

/// Exact `E S(√2)^(2n)` from the density; errors if the `√2` parts fail to cancel.
pub fn silver_density_exact_moment(n: u64) -> Result<ExactRational> {
    silver_density_moment_quad(n)?.to_rational()
}

/// Total mass of the density, exactly.
pub fn silver_density_mass() -> Result<ExactRational> {
    silver_density_exact_moment(0)
}
