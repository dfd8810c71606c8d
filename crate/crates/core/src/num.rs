//! Scalar types.
//!
//! Geometry and all exact-mode decisions use [`Rational`]. The LP solver is
//! generic over [`Scalar`] so the same simplex code runs on rationals (exact
//! mode) and on `f64` with a fixed tolerance (float mode).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"7"`, `"-3/4"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// `num/den`, or just `num` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: fall back to a scaled division
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Rounds `x` to the nearest multiple of `1/scale`.
pub fn from_f64_rounded(x: f64, scale: u64) -> Rational {
    let scaled = (x * scale as f64).round();
    let n = BigInt::from(scaled as i128);
    Rational::new(n, BigInt::from(scale))
}

/// Integer part (truncation toward zero) of `x * scale`.
pub fn truncate_scaled(x: f64, scale: u64) -> BigInt {
    BigInt::from((x * scale as f64).trunc() as i128)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Scales a rational vector to integers with gcd 1, preserving sign.
/// An all-zero input stays all zero.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Rank of a set of rational row vectors.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let pivot_row = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for k in c..cols {
                let delta = &f * &pivot_row[k];
                row[k] -= delta;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Numeric type the simplex runs on.
///
/// Sign tests go through [`Scalar::sign`] so that `f64` can apply its
/// tolerance while rationals compare exactly.
pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn s_zero() -> Self;
    fn s_one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_rational(&self) -> Rational;
    /// -1, 0 or 1.
    fn sign(&self) -> i8;
    /// Magnitude used for pivot selection when elimination has a choice.
    fn magnitude(&self) -> f64;

    fn is_zero_s(&self) -> bool {
        self.sign() == 0
    }
    fn is_pos(&self) -> bool {
        self.sign() > 0
    }
    fn is_neg(&self) -> bool {
        self.sign() < 0
    }
    fn lt_s(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_neg()
    }
}

impl Scalar for Rational {
    fn s_zero() -> Self {
        Zero::zero()
    }
    fn s_one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn magnitude(&self) -> f64 {
        to_f64(&self.abs())
    }
}

/// Absolute tolerance for float-mode sign tests inside the LP.
pub const FLOAT_LP_TOL: f64 = 1e-9;

impl Scalar for f64 {
    fn s_zero() -> Self {
        0.0
    }
    fn s_one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(Rational::zero)
    }
    fn sign(&self) -> i8 {
        if *self > FLOAT_LP_TOL {
            1
        } else if *self < -FLOAT_LP_TOL {
            -1
        } else {
            0
        }
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}
