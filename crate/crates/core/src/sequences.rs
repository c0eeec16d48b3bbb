//! Integer and rational sequences: Pell `P_n`, Pell–Lucas `Q_n`, Lucas `L_n`,
//! even Euler numbers `E_2k`, Chebyshev `T_n(x)`, silver-ratio powers
//! `δ_n = (1+√2)^n` and `τ_n`.
//!
//! The integer sequences come from their recurrences through a shared
//! append-only cache; the `ℚ(√2)` closed forms in [`closed_form`] exist to
//! cross-check them.

use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{pascal_row, BigInt, ExactRational, QuadRational};

/// Append-only memo table. Readers see either a missing entry or its final
/// value; entries are never rewritten.
struct Memo<T> {
    values: RwLock<Vec<T>>,
}

impl<T: Clone> Memo<T> {
    fn new(seed: Vec<T>) -> Self {
        Self { values: RwLock::new(seed) }
    }

    fn prefix(&self, len: usize, next: impl Fn(&[T]) -> T) -> Vec<T> {
        {
            let r = self.values.read().unwrap_or_else(|e| e.into_inner());
            if r.len() >= len {
                return r[..len].to_vec();
            }
        }
        let mut w = self.values.write().unwrap_or_else(|e| e.into_inner());
        while w.len() < len {
            let v = next(&w);
            w.push(v);
        }
        w[..len].to_vec()
    }

    fn get(&self, n: usize, next: impl Fn(&[T]) -> T) -> T {
        {
            let r = self.values.read().unwrap_or_else(|e| e.into_inner());
            if let Some(v) = r.get(n) {
                return v.clone();
            }
        }
        self.prefix(n + 1, next).pop().expect("nonempty prefix")
    }
}

struct Cache {
    pell: Memo<BigInt>,
    pell_lucas: Memo<BigInt>,
    lucas: Memo<BigInt>,
    euler: Memo<BigInt>,
}

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Cache {
        pell: Memo::new(vec![BigInt::zero(), BigInt::one()]),
        pell_lucas: Memo::new(vec![BigInt::from(2), BigInt::from(2)]),
        lucas: Memo::new(vec![BigInt::from(2), BigInt::one()]),
        euler: Memo::new(vec![BigInt::one()]),
    })
}

fn step_pell(v: &[BigInt]) -> BigInt {
    let n = v.len();
    &v[n - 1] * 2 + &v[n - 2]
}

fn step_lucas(v: &[BigInt]) -> BigInt {
    let n = v.len();
    &v[n - 1] + &v[n - 2]
}

// Σ_{j=0}^{k} C(2k,2j) E_{2(k-j)} = 0, solved for E_2k.
fn step_euler(v: &[BigInt]) -> BigInt {
    let k = v.len() as u64;
    let row = pascal_row(2 * k);
    let s: BigInt = (1..=k as usize).map(|j| &row[2 * j] * &v[k as usize - j]).sum();
    -s
}

/// Pell numbers: `P_0 = 0`, `P_1 = 1`, `P_n = 2P_{n-1} + P_{n-2}`.
pub fn pell(n: u64) -> BigInt {
    cache().pell.get(n as usize, step_pell)
}

/// Pell–Lucas numbers: `Q_0 = Q_1 = 2`, `Q_n = 2Q_{n-1} + Q_{n-2}`.
pub fn pell_lucas(n: u64) -> BigInt {
    cache().pell_lucas.get(n as usize, step_pell)
}

/// Lucas numbers: `L_0 = 2`, `L_1 = 1`, `L_n = L_{n-1} + L_{n-2}`.
pub fn lucas(n: u64) -> BigInt {
    cache().lucas.get(n as usize, step_lucas)
}

/// `E_{2k}`, the Euler (secant) number of index `2k`. Odd-index Euler
/// numbers vanish and are never produced.
pub fn euler_even(k: u64) -> BigInt {
    cache().euler.get(k as usize, step_euler)
}

pub fn pell_table(n_max: u64) -> Vec<BigInt> {
    cache().pell.prefix(n_max as usize + 1, step_pell)
}

pub fn pell_lucas_table(n_max: u64) -> Vec<BigInt> {
    cache().pell_lucas.prefix(n_max as usize + 1, step_pell)
}

pub fn lucas_table(n_max: u64) -> Vec<BigInt> {
    cache().lucas.prefix(n_max as usize + 1, step_lucas)
}

/// `[E_0, E_2, ..., E_{2 k_max}]`.
pub fn euler_even_table(k_max: u64) -> Vec<BigInt> {
    cache().euler.prefix(k_max as usize + 1, step_euler)
}

/// Chebyshev polynomial of the first kind, `T_n(x)`, by the three-term recurrence.
pub fn chebyshev_t(n: u64, x: &ExactRational) -> ExactRational {
    let mut prev = ExactRational::one();
    if n == 0 {
        return prev;
    }
    let two_x = x * &ExactRational::from(2);
    let mut cur = x.clone();
    for _ in 1..n {
        let next = &two_x * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `δ_n = (1 + √2)^n` in `ℚ(√2)`; negative `n` gives the exact inverse.
pub fn delta_power(n: i64) -> QuadRational {
    let silver = QuadRational::new(ExactRational::one(), ExactRational::one(), 2)
        .expect("2 is square-free");
    silver.powi(n).expect("silver ratio is a unit")
}

/// `τ_n = (1 + (-1)^n)(δ_n + δ_n^(-1)) / 4`, evaluated in `ℚ(√2)`.
pub fn tau(n: u64) -> ExactRational {
    let sign = if n.is_multiple_of(2) { 2 } else { 0 };
    let n = n as i64;
    let sum = delta_power(n).try_add(&delta_power(-n)).expect("same field");
    sum.scale(&ExactRational::new(sign, 4).expect("nonzero"))
        .to_rational()
        .expect("δ_n + δ_n^(-1) is rational")
}

/// Closed forms over `ℚ(√2)`, used as oracles for the recurrences.
pub mod closed_form {
    use super::*;

    fn sign(n: u64) -> ExactRational {
        if n.is_multiple_of(2) { ExactRational::one() } else { -ExactRational::one() }
    }

    /// `P_n = (δ_n + (-1)^(n+1) δ_n^(-1)) / (2√2)`. Errors if the result is not a rational integer.
    pub fn pell(n: u64) -> Result<BigInt> {
        let d = delta_power(n as i64);
        let inv = delta_power(-(n as i64)).scale(&-sign(n));
        let two_root2 = QuadRational::sqrt_d(2)?.scale(&ExactRational::from(2));
        integer(d.try_add(&inv)?.try_div(&two_root2)?)
    }

    /// `Q_n = δ_n + (-1)^n δ_n^(-1)`.
    pub fn pell_lucas(n: u64) -> Result<BigInt> {
        let d = delta_power(n as i64);
        let inv = delta_power(-(n as i64)).scale(&sign(n));
        integer(d.try_add(&inv)?)
    }

    fn integer(x: QuadRational) -> Result<BigInt> {
        let r = x.to_rational()?;
        r.to_integer().ok_or(Error::Parse { kind: "integer", input: r.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceName {
    Pell,
    PellLucas,
    Lucas,
    EulerEven,
    DeltaPower,
    Tau,
}

impl SequenceName {
    pub fn as_str(self) -> &'static str {
        match self {
            SequenceName::Pell => "pell",
            SequenceName::PellLucas => "pell-lucas",
            SequenceName::Lucas => "lucas",
            SequenceName::EulerEven => "euler",
            SequenceName::DeltaPower => "delta",
            SequenceName::Tau => "tau",
        }
    }
}

impl fmt::Display for SequenceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SequenceName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pell" => SequenceName::Pell,
            "pell-lucas" => SequenceName::PellLucas,
            "lucas" => SequenceName::Lucas,
            "euler" => SequenceName::EulerEven,
            "delta" => SequenceName::DeltaPower,
            "tau" => SequenceName::Tau,
            _ => return Err(Error::Parse { kind: "sequence name", input: s.to_string() }),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceValue {
    Int(BigInt),
    Rational(ExactRational),
    Quad(QuadRational),
}

impl fmt::Display for SequenceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceValue::Int(v) => write!(f, "{v}"),
            SequenceValue::Rational(v) => write!(f, "{v}"),
            SequenceValue::Quad(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for SequenceValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Contiguous values of one sequence from index 0. For `euler`, index `k`
/// holds `E_{2k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceTable {
    #[serde(serialize_with = "ser_name")]
    pub name: SequenceName,
    pub values: Vec<(u64, SequenceValue)>,
}

fn ser_name<S: Serializer>(n: &SequenceName, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(n.as_str())
}

impl SequenceTable {
    pub fn build(name: SequenceName, n_max: u64) -> Self {
        let ints = |v: Vec<BigInt>| -> Vec<SequenceValue> {
            v.into_iter().map(SequenceValue::Int).collect()
        };
        let vals = match name {
            SequenceName::Pell => ints(pell_table(n_max)),
            SequenceName::PellLucas => ints(pell_lucas_table(n_max)),
            SequenceName::Lucas => ints(lucas_table(n_max)),
            SequenceName::EulerEven => ints(euler_even_table(n_max)),
            SequenceName::DeltaPower => {
                (0..=n_max).map(|n| SequenceValue::Quad(delta_power(n as i64))).collect()
            }
            SequenceName::Tau => (0..=n_max).map(|n| SequenceValue::Rational(tau(n))).collect(),
        };
        SequenceTable { name, values: (0..).zip(vals).collect() }
    }
}
