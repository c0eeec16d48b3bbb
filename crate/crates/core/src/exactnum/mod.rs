//! Exact scalars: big integers, reduced rationals, and elements of `ℚ(√d)`.

mod quad;
mod rational;

pub use num_bigint::BigInt;
pub use quad::{quad_arith, QuadRational};
pub use rational::{rat_arith, ExactRational};

use num_traits::{One, Zero};

/// Field operation selector shared by [`rat_arith`] and [`quad_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Row `n` of Pascal's triangle: `[C(n,0), ..., C(n,n)]`.
pub fn pascal_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut cur = BigInt::one();
    row.push(cur.clone());
    for i in 0..n {
        cur = cur * (n - i) / (i + 1);
        row.push(cur.clone());
    }
    row
}

/// Even-index entries of row `2n`: `[C(2n,0), C(2n,2), ..., C(2n,2n)]`.
pub fn even_binomials(n: u64) -> Vec<BigInt> {
    pascal_row(2 * n).into_iter().step_by(2).collect()
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}
