//! Floating-point scalars used by the evaluation and quadrature routes.
//!
//! Everything numeric is written against [`Real`] so the same code runs in
//! plain `f64` ("double") or in [`DoubleDouble`] ("extended", about 31
//! significant decimal digits).

mod double_double;

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use double_double::DoubleDouble;

/// Arithmetic precision for floating routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
}

impl Precision {
    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(format!("unknown precision mode `{other}`")),
        }
    }
}

pub trait Real:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Unit roundoff of the representation.
    const EPSILON: f64;
    const PRECISION: Precision;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    /// Exact value of the representation as a rational; `None` for NaN/inf.
    fn to_rational(self) -> Option<BigRational>;

    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn pi() -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn from_i64(n: i64) -> Self {
        let hi = n as f64;
        let rem = n - hi as i64;
        Self::from_f64(hi) + Self::from_f64(rem as f64)
    }

    /// Nearest representable value of a big integer.
    fn from_bigint(n: &BigInt) -> Self {
        if let Some(small) = n.to_i64() {
            return Self::from_i64(small);
        }
        let mut acc = Self::zero();
        let mut rest = n.clone();
        // Peel off leading f64 chunks; three cover any 106-bit mantissa.
        for _ in 0..3 {
            let chunk = rest.to_f64().unwrap_or(f64::INFINITY);
            if !chunk.is_finite() {
                return Self::from_f64(chunk);
            }
            acc += Self::from_f64(chunk);
            rest -= float_to_bigint(chunk);
            if rest.is_zero() {
                break;
            }
        }
        acc
    }

    fn from_rational(r: &BigRational) -> Self {
        Self::from_bigint(r.numer()) / Self::from_bigint(r.denom())
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }

    fn powi(self, n: u32) -> Self {
        let mut base = self;
        let mut exp = n;
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }

    fn sinh(self) -> Self {
        if self.to_f64().abs() < 0.1 {
            // Series avoids cancellation in (e^x - e^-x)/2 near zero.
            let x2 = self * self;
            let mut term = self;
            let mut sum = self;
            let mut k = 1.0;
            loop {
                term = term * x2 / Self::from_f64((k + 1.0) * (k + 2.0));
                sum += term;
                k += 2.0;
                if term.abs().to_f64() <= Self::EPSILON * sum.abs().to_f64() * 0.01 {
                    break;
                }
            }
            return sum;
        }
        let e = self.exp();
        (e - Self::one() / e) * Self::from_f64(0.5)
    }

    fn cosh(self) -> Self {
        let e = self.exp();
        (e + Self::one() / e) * Self::from_f64(0.5)
    }

    /// `tanh(x)` and `sech(x)^2`, computed from `e^{-2|x|}` without cancellation.
    fn tanh_sech2(self) -> (Self, Self) {
        let neg = self < Self::zero();
        let e = (self.abs() * Self::from_f64(-2.0)).exp();
        let one = Self::one();
        let denom = one + e;
        let tanh_abs = (one - e) / denom;
        let sech2 = Self::from_f64(4.0) * e / (denom * denom);
        (if neg { -tanh_abs } else { tanh_abs }, sech2)
    }

    /// Decimal string with `digits` significant digits, e.g. `2.50e-1`.
    fn to_decimal(self, digits: usize) -> String {
        match self.to_rational() {
            Some(r) => format_significant(&r, digits),
            None => format!("{}", self.to_f64()),
        }
    }
}

fn float_to_bigint(x: f64) -> BigInt {
    BigRational::from_float(x)
        .map(|r| r.to_integer())
        .unwrap_or_default()
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON / 2.0;
    const PRECISION: Precision = Precision::Double;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn to_rational(self) -> Option<BigRational> {
        BigRational::from_float(self)
    }

    fn exp(self) -> Self {
        f64::exp(self)
    }

    fn ln(self) -> Self {
        f64::ln(self)
    }

    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    fn pi() -> Self {
        std::f64::consts::PI
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn sinh(self) -> Self {
        f64::sinh(self)
    }

    fn cosh(self) -> Self {
        f64::cosh(self)
    }
}

/// Formats a rational in scientific notation with `digits` significant
/// digits, rounding half away from zero. Deterministic for a given input.
pub fn format_significant(value: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if value.is_zero() {
        return if digits == 1 {
            "0e0".to_string()
        } else {
            format!("0.{}e0", "0".repeat(digits - 1))
        };
    }
    let negative = value.is_negative();
    let magnitude = value.abs();

    let ten = BigInt::from(10);
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };

    // Decimal exponent: 10^e <= |value| < 10^(e+1).
    let mut exponent = estimate_log10(&magnitude);
    while magnitude < pow10(exponent) {
        exponent -= 1;
    }
    while magnitude >= pow10(exponent + 1) {
        exponent += 1;
    }

    let scaled = &magnitude * pow10(digits as i64 - 1 - exponent);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut mantissa = (scaled + half).floor().to_integer();
    if mantissa >= num_traits::pow(ten.clone(), digits) {
        let (q, _) = mantissa.div_rem(&ten);
        mantissa = q;
        exponent += 1;
    }

    let text = mantissa.to_str_radix(10);
    let (lead, tail) = text.split_at(1);
    let sign = if negative { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{lead}e{exponent}")
    } else {
        format!("{sign}{lead}.{tail}e{exponent}")
    }
}

fn estimate_log10(r: &BigRational) -> i64 {
    let bits = |n: &BigInt| n.bits() as f64;
    let approx = (bits(r.numer()) - bits(r.denom())) * std::f64::consts::LOG10_2;
    approx.floor() as i64
}
