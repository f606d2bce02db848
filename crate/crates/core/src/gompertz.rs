//! The Gompertz curve `u(t) = u_max exp(-c exp(-q t))` and its derivatives.
//!
//! The n-th derivative has the closed form
//! `u^(n) = q^n sum_k (-1)^(n-k) {n brace k} u log^k(u_max/u)` ([`LogPoly`]).
//! Along the curve `log(u_max/u) = c e^{-qt}`, which gives the exponential-sum
//! form [`ExpSum`] used for evaluation: every term decays for large `|t|`.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_numbers::{bell_polynomial_eval, factorial, stirling2_row};
use crate::real::{DoubleDouble, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GompertzParams {
    q: f64,
    c: f64,
    u_max: f64,
}

impl GompertzParams {
    /// Rate `q`, shape `c = log(u_max/u_0)` and saturation level `u_max`;
    /// all three must be finite and positive.
    pub fn new(q: f64, c: f64, u_max: f64) -> Result<Self> {
        for (name, value) in [("q", q), ("c", c), ("u_max", u_max)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        Ok(Self { q, c, u_max })
    }

    /// `q = c = u_max = 1`: the curve is the standard Gumbel cdf.
    pub fn unit() -> Self {
        Self {
            q: 1.0,
            c: 1.0,
            u_max: 1.0,
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// `u(0) = u_max e^{-c}`.
    pub fn initial_value(&self) -> f64 {
        self.u_max * (-self.c).exp()
    }
}

/// `u(t) = u_max exp(-c exp(-q t))`.
pub fn gompertz_eval<R: Real>(params: &GompertzParams, t: R) -> R {
    let v = R::from_f64(params.c) * (-(R::from_f64(params.q) * t)).exp();
    R::from_f64(params.u_max) * (-v).exp()
}

/// Integer coefficients `a_k = (-1)^(n-k) {n brace k}`, `k = 1..=n`, of the
/// n-th derivative in the basis `q^n u log^k(u_max/u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogPoly {
    degree: u32,
    coeffs: Vec<BigInt>,
}

impl LogPoly {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `a_k` for `k` in `1..=degree`; zero outside.
    pub fn coeff(&self, k: u32) -> BigInt {
        if k == 0 || k > self.degree {
            return BigInt::zero();
        }
        self.coeffs[k as usize - 1].clone()
    }

    /// `(k, a_k)` pairs in increasing `k`.
    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| (i as u32 + 1, a))
    }

    /// `P_n(u) = q^n sum_k a_k u log^k(u_max/u)`, the derivative expressed
    /// through the value of the curve itself.
    pub fn eval<R: Real>(&self, params: &GompertzParams, u: R) -> R {
        let log_ratio = (R::from_f64(params.u_max) / u).ln();
        let mut acc = R::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * log_ratio + R::from_bigint(a);
        }
        R::from_f64(params.q).powi(self.degree) * u * acc * log_ratio
    }
}

pub fn derivative_coeffs(n: u32) -> Result<LogPoly> {
    if n == 0 {
        return Err(Error::Precondition(
            "derivative coefficients start at n = 1; P_0(u) = u".into(),
        ));
    }
    let row = stirling2_row(n);
    let coeffs = (1..=n)
        .map(|k| {
            let s = BigInt::from(row[k as usize].clone());
            if (n - k).is_multiple_of(2) {
                s
            } else {
                -s
            }
        })
        .collect();
    Ok(LogPoly { degree: n, coeffs })
}

/// `u^(n)(t) = q^n u_max e^{-v} sum_j a_j v^j` with `v = c e^{-qt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum {
    params: GompertzParams,
    poly: LogPoly,
}

impl ExpSum {
    pub fn new(n: u32, params: &GompertzParams) -> Result<Self> {
        Ok(Self {
            params: *params,
            poly: derivative_coeffs(n)?,
        })
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree
    }

    pub fn log_poly(&self) -> &LogPoly {
        &self.poly
    }

    /// Terms `(j, a_j c^j)` multiplying `q^n u_max e^{-v} e^{-j q t}`.
    pub fn terms(&self) -> Vec<(u32, f64)> {
        self.poly
            .coeffs()
            .map(|(j, a)| {
                let scaled = f64::from_bigint(a) * self.params.c.powi(j as i32);
                (j, scaled)
            })
            .collect()
    }

    pub fn eval<R: Real>(&self, t: R) -> R {
        let n = self.poly.degree;
        let v = R::from_f64(self.params.c) * (-(R::from_f64(self.params.q) * t)).exp();
        let v_f = v.to_f64();
        // e^{-v} v^n underflows long before v^n can overflow.
        if !v_f.is_finite() || v_f - n as f64 * v_f.ln() > 800.0 {
            return R::zero();
        }
        let mut acc = R::zero();
        for a in self.poly.coeffs.iter().rev() {
            acc = acc * v + R::from_bigint(a);
        }
        let scale = R::from_f64(self.params.q).powi(n) * R::from_f64(self.params.u_max);
        scale * (-v).exp() * acc * v
    }
}

/// `u^(n)(t)` along the curve; `n = 0` is the curve itself.
pub fn derivative_eval<R: Real>(n: u32, params: &GompertzParams, t: R) -> R {
    match ExpSum::new(n, params) {
        Ok(sum) => sum.eval(t),
        Err(_) => gompertz_eval(params, t),
    }
}

/// `d^{k-1}/dt^{k-1}` of the Gumbel density `g(t) = e^{-e^{-t}} e^{-t}`.
///
/// `g` is the first derivative of the unit Gompertz curve.
pub fn gumbel_pdf_derivative<R: Real>(k: u32, t: R) -> Result<R> {
    if k == 0 {
        return Err(Error::Precondition(
            "Gumbel derivative index k must be >= 1".into(),
        ));
    }
    Ok(derivative_eval(k, &GompertzParams::unit(), t))
}

/// `q^n u (-1)^n B_n(x)` at `u = u_max e^x`: the derivative written with the
/// Bell polynomial of `x = log(u/u_max)`.
pub fn derivative_via_bell(n: u32, params: &GompertzParams, x: &BigRational) -> f64 {
    let u = params.u_max * f64::from_rational(x).exp();
    let bell = f64::from_rational(&bell_polynomial_eval(n, x));
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    params.q.powi(n as i32) * u * sign * bell
}

/// Closed-form exponential generating function of the derivative family,
/// `G(u, z) = u_max (u/u_max)^{e^{-qz}}`, for `0 < u < u_max`.
pub fn egf_eval<R: Real>(u: R, z: R, params: &GompertzParams) -> Result<R> {
    let u_f = u.to_f64();
    if !(u_f > 0.0 && u_f < params.u_max) {
        return Err(Error::OutOfDomain {
            name: "u",
            value: u_f,
            domain: "(0, u_max)",
        });
    }
    let u_max = R::from_f64(params.u_max);
    let exponent = (-(R::from_f64(params.q) * z)).exp();
    Ok(u_max * (exponent * (u / u_max).ln()).exp())
}

/// Finite-difference estimate of a Taylor coefficient `n! [z^n] u(t + z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorEstimate {
    pub value: f64,
    /// Step-halving difference, absolute.
    pub error_estimate: f64,
}

/// Largest order the finite-difference oracle supports.
pub const TAYLOR_ORACLE_MAX_ORDER: u32 = 12;
const TAYLOR_ORACLE_REL_BOUND: f64 = 1e-6;

static STENCILS: Mutex<Vec<Option<Vec<DoubleDouble>>>> = Mutex::new(Vec::new());

/// Weights `w_i`, `i = -n..=n`, with `sum_i w_i f(t + i h) / h^n = f^(n)(t) + O(h^{n+1})`.
fn stencil_weights(n: u32) -> Vec<DoubleDouble> {
    let mut cache = STENCILS.lock().unwrap_or_else(|e| e.into_inner());
    let idx = n as usize;
    if cache.len() <= idx {
        cache.resize(idx + 1, None);
    }
    if let Some(w) = &cache[idx] {
        return w.clone();
    }
    let nodes: Vec<i64> = (-(n as i64)..=n as i64).collect();
    let n_fact = BigRational::from_integer(BigInt::from(factorial(n)));
    let weights: Vec<DoubleDouble> = nodes
        .iter()
        .map(|&i| {
            // Lagrange basis polynomial for node i, coefficients low to high.
            let mut poly = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for &j in nodes.iter().filter(|&&j| j != i) {
                let root = BigRational::from_integer(BigInt::from(j));
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (d, c) in poly.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= c * &root;
                }
                poly = next;
                denom *= BigRational::from_integer(BigInt::from(i - j));
            }
            let w = &poly[n as usize] / denom * &n_fact;
            DoubleDouble::from_rational(&w)
        })
        .collect();
    cache[idx] = Some(weights.clone());
    weights
}

/// Independent estimate of `u^(n)(t)` from values of `u` alone, via a
/// symmetric `2n+1` point stencil evaluated in extended precision.
///
/// The step is scaled by the local time scale `1/(q (1 + c e^{-qt}))` of the
/// curve; the error estimate is the change under halving the step.
pub fn taylor_coeff_oracle(params: &GompertzParams, t: f64, n: u32) -> Result<TaylorEstimate> {
    if n > TAYLOR_ORACLE_MAX_ORDER {
        return Err(Error::Precondition(format!(
            "Taylor oracle supports n <= {TAYLOR_ORACLE_MAX_ORDER}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(TaylorEstimate {
            value: gompertz_eval(params, t),
            error_estimate: 0.0,
        });
    }
    let weights = stencil_weights(n);
    let center = DoubleDouble::from_f64(t);
    let local_rate = params.q * (1.0 + params.c * (-params.q * t).exp());
    let h0 = 10f64.powf(-12.0 / (n as f64 + 1.0)) / local_rate;

    let difference = |h: f64| -> DoubleDouble {
        let h = DoubleDouble::from_f64(h);
        let mut acc = DoubleDouble::zero();
        for (i, w) in weights.iter().enumerate() {
            let offset = DoubleDouble::from_i64(i as i64 - n as i64);
            acc += *w * gompertz_eval(params, center + offset * h);
        }
        acc / h.powi(n)
    };
    let coarse = difference(h0);
    let fine = difference(h0 / 2.0);
    let value = fine.to_f64();
    let error_estimate = (fine - coarse).abs().to_f64();

    let scale = value.abs().max(params.q.powi(n as i32) * params.u_max);
    if error_estimate.is_nan() || error_estimate > TAYLOR_ORACLE_REL_BOUND * scale {
        return Err(Error::OracleInaccurate {
            estimate: error_estimate / scale,
            bound: TAYLOR_ORACLE_REL_BOUND,
        });
    }
    Ok(TaylorEstimate {
        value,
        error_estimate,
    })
}

/// Magnitude used for relative comparisons of `n`-th derivatives: the
/// larger of `|value|` and `q^n u_max`, so zero crossings stay meaningful.
pub fn derivative_scale(n: u32, params: &GompertzParams, value: f64) -> f64 {
    value.abs().max(params.q.powi(n as i32) * params.u_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E_INV: f64 = 0.36787944117144233;

    #[test]
    fn params_are_validated() {
        assert!(GompertzParams::new(1.0, 1.0, 1.0).is_ok());
        assert!(GompertzParams::new(0.0, 1.0, 1.0).is_err());
        assert!(GompertzParams::new(1.0, -1.0, 1.0).is_err());
        assert!(GompertzParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn gompertz_values() {
        let unit = GompertzParams::unit();
        assert!((gompertz_eval(&unit, 50.0) - 1.0).abs() < 1e-15);
        assert!((gompertz_eval(&unit, 0.0) - E_INV).abs() < 1e-15);
        let p = GompertzParams::new(2.0, 3.0, 5.0).unwrap();
        assert!((gompertz_eval(&p, 0.0) - p.initial_value()).abs() < 1e-15);
    }

    #[test]
    fn coefficient_examples() {
        assert!(derivative_coeffs(0).is_err());
        let one = derivative_coeffs(1).unwrap();
        assert_eq!(one.coeff(1), BigInt::from(1));
        let two = derivative_coeffs(2).unwrap();
        assert_eq!(two.coeff(1), BigInt::from(-1));
        assert_eq!(two.coeff(2), BigInt::from(1));
        assert_eq!(derivative_coeffs(4).unwrap().coeff(2), BigInt::from(7));
    }

    #[test]
    fn gumbel_density_derivatives() {
        assert!((gumbel_pdf_derivative(1, 0.0).unwrap() - E_INV).abs() < 1e-15);
        assert!(gumbel_pdf_derivative(2, 0.0f64).unwrap().abs() < 1e-16);
        assert!(gumbel_pdf_derivative(0, 0.0f64).is_err());
        let terms = ExpSum::new(2, &GompertzParams::unit()).unwrap().terms();
        assert_eq!(terms, vec![(1, -1.0), (2, 1.0)]);
    }

    #[test]
    fn derivative_of_order_zero_is_the_curve() {
        let p = GompertzParams::new(0.5, 3.0, 2.0).unwrap();
        for &t in &[-2.0, 0.0, 1.25] {
            assert_eq!(derivative_eval(0, &p, t), gompertz_eval(&p, t));
        }
    }

    #[test]
    fn far_tails_are_zero_not_nan() {
        let p = GompertzParams::new(2.0, 3.0, 5.0).unwrap();
        for n in 0..12 {
            assert_eq!(derivative_eval(n, &p, -1e6), 0.0);
            let far = derivative_eval(n, &p, 1e6);
            if n == 0 {
                assert_eq!(far, 5.0);
            } else {
                assert_eq!(far, 0.0);
            }
            let dd: DoubleDouble = derivative_eval(n, &p, DoubleDouble::from_f64(-1e6));
            assert_eq!(dd.to_f64(), 0.0);
        }
    }

    #[test]
    fn egf_examples() {
        let p = GompertzParams::unit();
        assert_eq!(egf_eval(0.3, 0.0, &p).unwrap(), 0.3);
        // 0.5^(e^-0.3), frozen from a 40-digit evaluation.
        let v = egf_eval(0.5, 0.3, &p).unwrap();
        assert!((v - 0.5983998751431957).abs() < 1e-15);
        let q = GompertzParams::new(2.0, 3.0, 5.0).unwrap();
        let shifted = egf_eval(q.initial_value(), 0.4, &q).unwrap();
        assert!((shifted - gompertz_eval(&q, 0.4)).abs() < 1e-14);
        assert!(egf_eval(5.0, 0.1, &q).is_err());
        assert!(egf_eval(0.0, 0.1, &q).is_err());
    }

    #[test]
    fn taylor_oracle_examples() {
        let unit = GompertzParams::unit();
        let zeroth = taylor_coeff_oracle(&unit, 0.3, 0).unwrap();
        assert_eq!(zeroth.value, gompertz_eval(&unit, 0.3));
        let first = taylor_coeff_oracle(&unit, 0.0, 1).unwrap();
        assert!((first.value - E_INV).abs() < 1e-8);
        let p = GompertzParams::new(2.0, 3.0, 5.0).unwrap();
        let fifth = taylor_coeff_oracle(&p, 0.4, 5).unwrap();
        let exact = derivative_eval(5, &p, 0.4);
        assert!((fifth.value - exact).abs() <= 1e-5 * exact.abs());
        assert!(taylor_coeff_oracle(&p, 0.4, 13).is_err());
    }
}
