//! Exact verification of the Bernoulli-number identities.
//!
//! Every routine here works in rationals end to end; a report passes only
//! on exact equality. The one exception is [`verify_zeta_even`], an
//! infinite-sum identity checked against its analytic tail envelope.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_numbers::{bernoulli, binomial, factorial, stirling2_row};
use crate::gompertz::derivative_coeffs;
use crate::real::{DoubleDouble, Real};
use crate::report::{Identity, ParamValue, Parameter, ReportValue, Route, VerificationReport};
use crate::soliton::grosset_veselov_exact;

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

fn sign(even: bool) -> BigRational {
    if even {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// `B_{n+1} (1 - 2^{n+1}) / (n+1)`, the right side shared by several identities.
pub fn bernoulli_moment(n: u32) -> BigRational {
    bernoulli(n + 1) * int(BigInt::one() - pow2(n + 1)) / int(n + 1)
}

/// Coefficient of `z^n` in the Taylor series of `1/(e^z + 1)`.
pub fn euler_series_coeff(n: u32) -> BigRational {
    bernoulli(n + 1) * int(BigInt::one() - pow2(n + 1)) / int(factorial(n + 1))
}

/// Power sums against the Bernoulli-number closed form:
/// `sum_{k=1}^{m-1} k^n = 1/(n+1) sum_{j=0}^{n} C(n+1, j) B_j m^{n+1-j}`.
pub fn verify_faulhaber(m: u64, n: u32) -> Result<VerificationReport> {
    if m < 2 || n < 1 {
        return Err(Error::Precondition(format!(
            "power-sum check needs m >= 2 and n >= 1, got m = {m}, n = {n}"
        )));
    }
    let power_sum: BigInt = (1..m).map(|k| BigInt::from(k).pow(n)).sum();
    let m_big = BigInt::from(m);
    let closed = (0..=n)
        .map(|j| int(binomial(n + 1, j as i64)) * bernoulli(j) * int(m_big.pow(n + 1 - j)))
        .fold(BigRational::zero(), |acc, t| acc + t)
        / int(n + 1);
    Ok(VerificationReport::exact(
        Identity::Faulhaber,
        Parameter::Tuple(vec![
            ("m", ParamValue::Int(m)),
            ("n", ParamValue::Int(n as u64)),
        ]),
        closed,
        int(power_sum),
    ))
}

/// Smallest partial-sum length accepted by [`verify_zeta_even`].
pub const ZETA_MIN_TERMS: u64 = 10;

/// Even zeta values: the partial sum `sum_{k<=terms} k^{-2n}` must fall short
/// of `(-1)^{n+1} 2^{2n-1} pi^{2n} B_{2n} / (2n)!` by an amount inside the
/// integral tail envelope `[(terms+1)^{1-2n}, terms^{1-2n}] / (2n-1)`,
/// widened by `tol` on both sides.
pub fn verify_zeta_even(n: u32, terms: u64, tol: f64) -> Result<VerificationReport> {
    if n < 1 || terms < ZETA_MIN_TERMS {
        return Err(Error::Precondition(format!(
            "zeta check needs n >= 1 and terms >= {ZETA_MIN_TERMS}, got n = {n}, terms = {terms}"
        )));
    }
    type D = DoubleDouble;
    let two_n = 2 * n;
    let coeff = sign(n % 2 == 1) * int(pow2(two_n - 1)) * bernoulli(two_n) / int(factorial(two_n));
    let expected = D::from_rational(&coeff) * D::pi().powi(two_n);

    // Smallest terms first.
    let mut partial = D::zero();
    for k in (1..=terms).rev() {
        partial += D::one() / D::from_f64(k as f64).powi(two_n);
    }
    let residual = (expected - partial).to_f64();

    let exponent = 1.0 - two_n as f64;
    let scale = 1.0 / (two_n as f64 - 1.0);
    let upper = (terms as f64).powf(exponent) * scale;
    let lower = (terms as f64 + 1.0).powf(exponent) * scale;
    let passed = residual >= lower - tol && residual <= upper + tol;

    let abs_error = residual.abs();
    let rel_error = abs_error / expected.to_f64().abs();
    let mut report = VerificationReport {
        identity: Identity::Zeta,
        parameter: Parameter::Tuple(vec![
            ("n", ParamValue::Int(n as u64)),
            ("terms", ParamValue::Int(terms)),
        ]),
        expected: ReportValue::decimal(expected),
        computed: ReportValue::decimal(partial),
        abs_error,
        rel_error,
        passed,
        route: Route::Exact,
        tolerance: upper + tol,
        note: None,
    };
    if upper > tol {
        report.note = Some(format!(
            "insufficient terms: tail bound {upper:e} exceeds tolerance {tol:e}; judged against the tail envelope"
        ));
    }
    Ok(report)
}

/// `sum_{k=1}^{n} (-1)^k {n brace k} k! / 2^{k+1}`.
pub fn stirling_bernoulli_sum(n: u32) -> BigRational {
    let row = stirling2_row(n);
    (1..=n)
        .map(|k| {
            sign(k % 2 == 0) * int(row[k as usize].clone()) * int(factorial(k)) / int(pow2(k + 1))
        })
        .fold(BigRational::zero(), |acc, t| acc + t)
}

pub fn verify_stirling_bernoulli(n: u32) -> Result<VerificationReport> {
    if n < 1 {
        return Err(Error::Precondition(
            "Stirling-Bernoulli check needs n >= 1".into(),
        ));
    }
    Ok(VerificationReport::exact(
        Identity::StirlingBernoulli,
        Parameter::Index(n as u64),
        bernoulli_moment(n),
        stirling_bernoulli_sum(n),
    ))
}

/// The Stirling sum with each `k! {n brace k}` replaced by its binomial
/// expansion. The outer `(-1)^k` folds into the inner sign, leaving
/// `sum_k 2^{-(k+1)} sum_j (-1)^j C(k, j) j^n`; without that factor the
/// sum is `1/4` at `n = 1` rather than `-1/4`.
pub fn binomial_bernoulli_sum(n: u32) -> BigRational {
    let mut total = BigRational::zero();
    for k in 1..=n {
        let mut inner = BigInt::zero();
        for j in 0..=k {
            let term = BigInt::from(binomial(k, j as i64)) * BigInt::from(j).pow(n);
            if j % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        total += BigRational::new(inner, pow2(k + 1));
    }
    total
}

pub fn verify_binomial_bernoulli(n: u32) -> Result<VerificationReport> {
    if n < 1 {
        return Err(Error::Precondition(
            "binomial-Bernoulli check needs n >= 1".into(),
        ));
    }
    Ok(VerificationReport::exact(
        Identity::BinomialBernoulli,
        Parameter::Index(n as u64),
        bernoulli_moment(n),
        binomial_bernoulli_sum(n),
    ))
}

fn check_positive(u_max: &BigRational) -> Result<()> {
    if u_max.is_positive() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "u_max",
            value: u_max.to_f64().unwrap_or(f64::NAN),
            domain: "(0, inf)",
        })
    }
}

/// `int_0^{u_max} u log^n(u_max/u) du = n! / 2^{n+1} u_max^2`.
pub fn log_moment_exact(n: u32, u_max: &BigRational) -> Result<BigRational> {
    check_positive(u_max)?;
    Ok(int(factorial(n)) / int(pow2(n + 1)) * u_max * u_max)
}

/// Rational factor `m_n` of the moment `p_n = int_0^{u_max} P_n(u) du = (-q)^n m_n`,
/// from the Bernoulli closed form `m_n = B_{n+1}(1 - 2^{n+1})/(n+1) u_max^2`.
pub fn moment_exact(n: u32, u_max: &BigRational) -> Result<BigRational> {
    check_positive(u_max)?;
    Ok(bernoulli_moment(n) * u_max * u_max)
}

/// The same factor through the derivative coefficients and log moments:
/// `m_n = (-1)^n sum_k a_k int_0^{u_max} u log^k(u_max/u) du`.
pub fn moment_via_log_moments(n: u32, u_max: &BigRational) -> Result<BigRational> {
    if n == 0 {
        return log_moment_exact(0, u_max);
    }
    let poly = derivative_coeffs(n)?;
    let mut sum = BigRational::zero();
    for (k, a) in poly.coeffs() {
        sum += int(a.clone()) * log_moment_exact(k, u_max)?;
    }
    Ok(sign(n.is_multiple_of(2)) * sum)
}

/// Both routes for the moment factor must agree rationally.
pub fn verify_moment_routes(n: u32, u_max: &BigRational) -> Result<VerificationReport> {
    Ok(VerificationReport::exact(
        Identity::MomentRoutes,
        Parameter::Index(n as u64),
        moment_exact(n, u_max)?,
        moment_via_log_moments(n, u_max)?,
    ))
}

/// `int_R (g^{(k-1)}(t))^2 dt` for the Gumbel density, exactly.
///
/// With `v = e^{-t}`, `g^{(k-1)} = e^{-v} sum_j a_j v^j` and the integral is
/// `sum_{i,j} a_i a_j (i+j-1)! / 2^{i+j}` by `int_0^inf e^{-2v} v^m dv = m!/2^{m+1}`.
pub fn gumbel_integral_exact(k: u32) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::Precondition(
            "Gumbel integral index k must be >= 1".into(),
        ));
    }
    let a: Vec<BigInt> = derivative_coeffs(k)?
        .coeffs()
        .map(|(_, c)| c.clone())
        .collect();
    // Scaled by 2^{2k} so every term is an integer.
    let mut numer = BigInt::zero();
    for (i, ai) in a.iter().enumerate() {
        for (j, aj) in a.iter().enumerate() {
            let (i, j) = (i as u32 + 1, j as u32 + 1);
            numer += ai * aj * BigInt::from(factorial(i + j - 1)) * pow2(2 * k - i - j);
        }
    }
    Ok(BigRational::new(numer, pow2(2 * k)))
}

/// `(-1)^k B_{2k} (1 - 2^{2k}) / (2k)`.
pub fn gumbel_integral_bernoulli(k: u32) -> BigRational {
    sign(k.is_multiple_of(2)) * bernoulli_moment(2 * k - 1)
}

pub fn verify_gumbel_bernoulli(k: u32) -> Result<VerificationReport> {
    let computed = gumbel_integral_exact(k)?;
    Ok(VerificationReport::exact(
        Identity::Gumbel,
        Parameter::Index(k as u64),
        gumbel_integral_bernoulli(k),
        computed,
    ))
}

/// `B_{2k} = (-1)^{k-1} / 2^{2k+1} int_R (d^{k-1}/dx^{k-1} sech^2 x)^2 dx`,
/// checked as an equality of rationals.
pub fn verify_grosset_veselov(k: u32) -> Result<VerificationReport> {
    let integral = grosset_veselov_exact(k)?;
    let computed = sign(k % 2 == 1) * integral / int(pow2(2 * k + 1));
    Ok(VerificationReport::exact(
        Identity::Soliton,
        Parameter::Index(k as u64),
        bernoulli(2 * k),
        computed,
    ))
}

/// `2^{2k+1} (-1)^{k-1} B_{2k}`: the soliton integral predicted by Bernoulli numbers.
pub fn grosset_veselov_bernoulli(k: u32) -> BigRational {
    sign(k % 2 == 1) * int(pow2(2 * k + 1)) * bernoulli(2 * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn euler_coefficients() {
        assert_eq!(euler_series_coeff(0), rat(1, 2));
        assert_eq!(euler_series_coeff(1), rat(-1, 4));
        assert_eq!(euler_series_coeff(2), rat(0, 1));
    }

    #[test]
    fn faulhaber_examples() {
        let r = verify_faulhaber(3, 2).unwrap();
        assert!(r.passed);
        assert_eq!(r.computed.as_exact(), Some(&rat(5, 1)));
        let r = verify_faulhaber(2, 1).unwrap();
        assert!(r.passed);
        assert_eq!(r.expected.as_exact(), Some(&rat(1, 1)));
        // sum_{k=1}^{9} k^5 = 120825, by direct count.
        let r = verify_faulhaber(10, 5).unwrap();
        assert!(r.passed);
        assert_eq!(r.computed.as_exact(), Some(&rat(120825, 1)));
        assert!(verify_faulhaber(1, 3).is_err());
        assert!(verify_faulhaber(4, 0).is_err());
    }

    #[test]
    fn zeta_examples() {
        let r = verify_zeta_even(1, 1_000_000, 1e-10).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.abs_error < 1e-6);
        let r = verify_zeta_even(2, 1_000, 1e-10).unwrap();
        assert!(r.passed);
        assert!(r.abs_error < 1e-9);
        // pi^2/6 - H_10^(2) = 0.0951663356816857..., inside the 1/9 envelope.
        let r = verify_zeta_even(1, 10, 1e-10).unwrap();
        assert!(r.passed);
        assert!((r.abs_error - 0.09516633568168575).abs() < 1e-15);
        assert!(r.note.is_some());
        assert!(verify_zeta_even(1, 9, 1e-10).is_err());
        assert!(verify_zeta_even(0, 100, 1e-10).is_err());
    }

    #[test]
    fn stirling_and_binomial_examples() {
        assert_eq!(stirling_bernoulli_sum(1), rat(-1, 4));
        assert_eq!(stirling_bernoulli_sum(2), rat(0, 1));
        assert!(verify_stirling_bernoulli(1).unwrap().passed);
        assert!(verify_stirling_bernoulli(2).unwrap().passed);
        assert!(verify_stirling_bernoulli(100).unwrap().passed);
        assert_eq!(binomial_bernoulli_sum(1), rat(-1, 4));
        assert_eq!(binomial_bernoulli_sum(2), rat(0, 1));
        assert!(verify_binomial_bernoulli(40).unwrap().passed);
        assert!(verify_stirling_bernoulli(0).is_err());
    }

    #[test]
    fn moment_examples() {
        let one = rat(1, 1);
        assert_eq!(log_moment_exact(0, &one).unwrap(), rat(1, 2));
        assert_eq!(log_moment_exact(1, &one).unwrap(), rat(1, 4));
        assert_eq!(log_moment_exact(3, &rat(2, 1)).unwrap(), rat(3, 2));
        assert_eq!(moment_exact(0, &one).unwrap(), rat(1, 2));
        assert_eq!(moment_exact(1, &one).unwrap(), rat(-1, 4));
        assert_eq!(moment_exact(2, &one).unwrap(), rat(0, 1));
        assert_eq!(moment_exact(3, &one).unwrap(), rat(1, 8));
        assert!(log_moment_exact(1, &rat(0, 1)).is_err());
        assert!(moment_exact(1, &rat(-1, 1)).is_err());
    }

    #[test]
    fn gumbel_examples() {
        assert_eq!(gumbel_integral_exact(1).unwrap(), rat(1, 4));
        assert_eq!(gumbel_integral_exact(2).unwrap(), rat(1, 8));
        assert_eq!(gumbel_integral_bernoulli(1), rat(1, 4));
        assert_eq!(gumbel_integral_bernoulli(4), rat(17, 16));
        for k in [1, 2, 50] {
            let r = verify_gumbel_bernoulli(k).unwrap();
            assert!(r.passed && r.abs_error == 0.0);
        }
        assert!(gumbel_integral_exact(0).is_err());
    }

    #[test]
    fn soliton_examples() {
        let r = verify_grosset_veselov(1).unwrap();
        assert!(r.passed);
        assert_eq!(r.expected.as_exact(), Some(&rat(1, 6)));
        let r = verify_grosset_veselov(2).unwrap();
        assert_eq!(r.computed.as_exact(), Some(&rat(-1, 30)));
        let r = verify_grosset_veselov(6).unwrap();
        assert!(r.passed);
        assert_eq!(r.expected.as_exact(), Some(&rat(-691, 2730)));
        assert_eq!(grosset_veselov_bernoulli(3), rat(64, 21));
    }

    #[test]
    fn exact_failure_is_reported() {
        let r =
            VerificationReport::exact(Identity::Gumbel, Parameter::Index(1), rat(1, 4), rat(1, 3));
        assert!(!r.passed);
        assert!((r.abs_error - 1.0 / 12.0).abs() < 1e-15);
    }
}
