//! Double-exponential quadrature over the real line, the half line and
//! finite intervals, and the floating-point verification routes built on it.
//!
//! Each rule is the trapezoidal rule applied after a change of variables
//! (sinh-sinh, exp-sinh, tanh-sinh). The step is halved until two successive
//! levels agree to `tol`; the reported error estimate is that difference,
//! floored by an accumulated-roundoff bound. Runs are deterministic: the
//! same integrand and tolerance always visit the same nodes.

use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::gompertz::{gompertz_eval, gumbel_pdf_derivative, ExpSum, GompertzParams};
use crate::real::{DoubleDouble, Precision, Real};
use crate::report::{Identity, ParamValue, Parameter, ReportValue, Route, VerificationReport};
use crate::soliton::sech2_derivative;
use crate::verify::{
    grosset_veselov_bernoulli, gumbel_integral_bernoulli, log_moment_exact, moment_exact,
};

/// Integrand evaluations allowed per integral.
pub const MAX_EVALUATIONS: usize = 1 << 20;
const MAX_LEVEL: u32 = 16;
const MIN_LEVEL: u32 = 3;
/// Largest transformed abscissa; far beyond where any in-scope weight matters.
const S_MAX: f64 = 6.5;
/// Roundoff floor multiplier on `eps * int |f|`.
const ROUNDOFF_FACTOR: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<R> {
    pub value: R,
    /// Claimed bound on `|value - integral|`.
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
enum Transform<R> {
    /// `x = sinh(pi/2 sinh s)`
    Line,
    /// `x = exp(pi/2 sinh s)`
    HalfLine,
    /// `x = mid + half tanh(pi/2 sinh s)`
    Interval { a: R, b: R, half: R },
}

impl<R: Real> Transform<R> {
    /// Abscissa and weight at `s`; `None` once either is not finite.
    fn node(&self, s: R) -> Option<(R, R)> {
        let half_pi = R::from_f64(FRAC_PI_2);
        let y = half_pi * s.sinh();
        let dy = half_pi * s.cosh();
        let (x, w) = match *self {
            Transform::Line => (y.sinh(), dy * y.cosh()),
            Transform::HalfLine => {
                let x = y.exp();
                (x, dy * x)
            }
            Transform::Interval { a, b, half } => {
                // Offset from the nearer endpoint, half (1 - |tanh y|), formed
                // without cancellation so singular endpoints stay resolved.
                let (_, sech2) = y.tanh_sech2();
                let e = (R::from_f64(-2.0) * y.abs()).exp();
                let offset = half * (e + e) / (R::one() + e);
                let x = if y < R::zero() {
                    a + offset
                } else {
                    b - offset
                };
                (x, half * dy * sech2)
            }
        };
        (x.is_finite() && w.is_finite()).then_some((x, w))
    }
}

fn de_integrate<R, F>(f: F, transform: Transform<R>, tol: f64) -> Result<QuadratureResult<R>>
where
    R: Real,
    F: Fn(R) -> R,
{
    let counter = Cell::new(0usize);
    let eval = |s: R| -> Option<(R, f64)> {
        let (x, w) = transform.node(s)?;
        counter.set(counter.get() + 1);
        let term = w * f(x);
        let mag = term.abs().to_f64();
        mag.is_finite().then_some((term, mag))
    };

    // Level 0: unit step, walk outwards until terms are negligible.
    let mut sum = R::zero();
    let mut l1 = 0.0;
    let mut edges = [0.0f64; 2];
    if let Some((t, m)) = eval(R::zero()) {
        sum += t;
        l1 += m;
    }
    for (dir, edge) in [1.0, -1.0].into_iter().zip(edges.iter_mut()) {
        let mut s = 1.0;
        while s <= S_MAX {
            match eval(R::from_f64(dir * s)) {
                Some((t, m)) => {
                    sum += t;
                    l1 += m;
                    *edge = s;
                    if s >= 2.0 && m <= R::EPSILON * 1e-3 * l1 {
                        break;
                    }
                }
                None => break,
            }
            s += 1.0;
        }
    }

    let mut h = 1.0;
    let mut previous = sum;
    let mut last_estimate = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        for (dir, edge) in [1.0, -1.0].into_iter().zip(edges) {
            let mut s = h;
            while s <= edge {
                if let Some((t, m)) = eval(R::from_f64(dir * s)) {
                    sum += t;
                    l1 += m;
                }
                s += 2.0 * h;
            }
        }
        let evaluations = counter.get();
        let current = sum * R::from_f64(h);
        let difference = (current - previous).abs().to_f64();
        let roundoff = ROUNDOFF_FACTOR * R::EPSILON * l1 * h;
        let estimate = difference.max(roundoff);
        last_estimate = estimate;

        if level >= MIN_LEVEL && estimate <= tol {
            return Ok(QuadratureResult {
                value: current,
                error_estimate: estimate,
                evaluations,
            });
        }
        if level >= MIN_LEVEL && difference <= roundoff && roundoff > tol {
            return Err(Error::QuadratureNotConverged {
                evaluations,
                estimate,
                tol,
                reason: "tolerance is below the attainable precision",
            });
        }
        if evaluations * 2 > MAX_EVALUATIONS {
            break;
        }
        previous = current;
    }
    Err(Error::QuadratureNotConverged {
        evaluations: counter.get(),
        estimate: last_estimate,
        tol,
        reason: "refinement budget exhausted",
    })
}

/// `int_{-inf}^{inf} f(x) dx` for smooth, rapidly decaying `f`.
pub fn integrate_real_line<R: Real, F: Fn(R) -> R>(f: F, tol: f64) -> Result<QuadratureResult<R>> {
    de_integrate(f, Transform::Line, tol)
}

/// `int_0^inf f(x) dx`.
pub fn integrate_half_line<R: Real, F: Fn(R) -> R>(f: F, tol: f64) -> Result<QuadratureResult<R>> {
    de_integrate(f, Transform::HalfLine, tol)
}

/// `int_a^b f(x) dx`; endpoint singularities of integrable type are tolerated.
pub fn integrate_interval<R: Real, F: Fn(R) -> R>(
    f: F,
    a: R,
    b: R,
    tol: f64,
) -> Result<QuadratureResult<R>> {
    let half = (b - a) * R::from_f64(0.5);
    de_integrate(f, Transform::Interval { a, b, half }, tol)
}

fn exact_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("parameters are finite")
}

fn params_parameter(index_name: &'static str, index: u32, params: &GompertzParams) -> Parameter {
    Parameter::Tuple(vec![
        (index_name, ParamValue::Int(index as u64)),
        ("q", ParamValue::Real(params.q())),
        ("c", ParamValue::Real(params.c())),
        ("u_max", ParamValue::Real(params.u_max())),
    ])
}

fn report_from<R: Real>(
    identity: Identity,
    parameter: Parameter,
    expected: BigRational,
    result: Result<QuadratureResult<R>>,
    tol: f64,
) -> Result<VerificationReport> {
    match result {
        Ok(q) => {
            let note = format!(
                "error estimate {:e} after {} evaluations",
                q.error_estimate, q.evaluations
            );
            Ok(VerificationReport::against_exact(
                identity,
                parameter,
                Route::Quadrature,
                expected,
                q.value,
                tol,
            )
            .with_note(note))
        }
        Err(e @ Error::QuadratureNotConverged { .. }) => Ok(VerificationReport::failed(
            identity,
            parameter,
            Route::Quadrature,
            ReportValue::Exact(expected),
            e.to_string(),
        )),
        Err(e) => Err(e),
    }
}

macro_rules! dispatch {
    ($precision:expr, $func:ident ( $($arg:expr),* ), |$result:ident| $body:expr) => {
        match $precision {
            Precision::Double => {
                let $result = $func::<f64>($($arg),*);
                $body
            }
            Precision::Extended => {
                let $result = $func::<DoubleDouble>($($arg),*);
                $body
            }
        }
    };
}

/// Largest `k` accepted by [`verify_gumbel_bernoulli_quadrature`].
pub const GUMBEL_QUAD_MAX_K: u32 = 10;

/// `int_R (g^{(k-1)}(t))^2 dt` computed on the half line `v = e^{-t}`,
/// where the integrand is `g^{(k-1)}(-ln v)^2 / v`.
pub fn gumbel_square_integral<R: Real>(k: u32, tol: f64) -> Result<QuadratureResult<R>> {
    gumbel_pdf_derivative::<R>(k, R::zero())?;
    integrate_half_line(
        |v: R| {
            let g = gumbel_pdf_derivative(k, -v.ln()).unwrap_or_else(|_| R::zero());
            g * g / v
        },
        tol,
    )
}

pub fn verify_gumbel_bernoulli_quadrature(
    k: u32,
    tol: f64,
    precision: Precision,
) -> Result<VerificationReport> {
    if !(1..=GUMBEL_QUAD_MAX_K).contains(&k) {
        return Err(Error::Precondition(format!(
            "Gumbel quadrature supports 1 <= k <= {GUMBEL_QUAD_MAX_K}, got {k}"
        )));
    }
    dispatch!(precision, gumbel_square_integral(k, tol), |result| {
        report_from(
            Identity::GumbelQuad,
            Parameter::Index(k as u64),
            gumbel_integral_bernoulli(k),
            result,
            tol,
        )
    })
}

/// Largest `k` accepted by [`verify_general_derivative_integral`].
pub const GENERAL_DERIVATIVE_MAX_K: u32 = 8;

/// `int_R (u^{(k)}(t))^2 dt`, integrated in `s = q (t - t0)` with `t0 = ln(c)/q`
/// so the peak sits near the origin.
pub fn derivative_square_integral<R: Real>(
    k: u32,
    params: &GompertzParams,
    tol: f64,
) -> Result<QuadratureResult<R>> {
    let sum = ExpSum::new(k, params)?;
    let inv_q = R::one() / R::from_f64(params.q());
    let t0 = R::from_f64(params.c()).ln() * inv_q;
    integrate_real_line(
        |s: R| {
            let d = sum.eval(t0 + s * inv_q);
            d * d * inv_q
        },
        tol,
    )
}

/// `(-1)^k q^{2k-1} B_{2k} (1 - 2^{2k}) / (2k) u_max^2`, exact in the binary
/// values of `q` and `u_max`.
pub fn general_derivative_expected(k: u32, params: &GompertzParams) -> BigRational {
    let q = exact_f64(params.q());
    let u_max = exact_f64(params.u_max());
    let mut q_pow = BigRational::one();
    for _ in 0..(2 * k - 1) {
        q_pow *= &q;
    }
    gumbel_integral_bernoulli(k) * q_pow * &u_max * &u_max
}

pub fn verify_general_derivative_integral(
    k: u32,
    params: &GompertzParams,
    tol: f64,
    precision: Precision,
) -> Result<VerificationReport> {
    if !(1..=GENERAL_DERIVATIVE_MAX_K).contains(&k) {
        return Err(Error::Precondition(format!(
            "general derivative integral supports 1 <= k <= {GENERAL_DERIVATIVE_MAX_K}, got {k}"
        )));
    }
    dispatch!(
        precision,
        derivative_square_integral(k, params, tol),
        |result| report_from(
            Identity::GeneralDerivative,
            params_parameter("k", k, params),
            general_derivative_expected(k, params),
            result,
            tol,
        )
    )
}

/// Largest `n` accepted by [`verify_moment_quadrature`].
pub const MOMENT_QUAD_MAX_N: u32 = 10;

/// `int_R u^{(n)}(t) u'(t) dt`, in the same shifted variable as
/// [`derivative_square_integral`].
pub fn moment_integral<R: Real>(
    n: u32,
    params: &GompertzParams,
    tol: f64,
) -> Result<QuadratureResult<R>> {
    let first = ExpSum::new(1, params)?;
    let nth = if n == 0 {
        None
    } else {
        Some(ExpSum::new(n, params)?)
    };
    let inv_q = R::one() / R::from_f64(params.q());
    let t0 = R::from_f64(params.c()).ln() * inv_q;
    integrate_real_line(
        |s: R| {
            let t = t0 + s * inv_q;
            let un = match &nth {
                Some(sum) => sum.eval(t),
                None => gompertz_eval(params, t),
            };
            un * first.eval(t) * inv_q
        },
        tol,
    )
}

/// `(-q)^n m_n` with `m_n` the exact moment factor.
pub fn moment_expected(n: u32, params: &GompertzParams) -> Result<BigRational> {
    let neg_q = -exact_f64(params.q());
    let mut scale = BigRational::one();
    for _ in 0..n {
        scale *= &neg_q;
    }
    Ok(scale * moment_exact(n, &exact_f64(params.u_max()))?)
}

pub fn verify_moment_quadrature(
    n: u32,
    params: &GompertzParams,
    tol: f64,
    precision: Precision,
) -> Result<VerificationReport> {
    if n > MOMENT_QUAD_MAX_N {
        return Err(Error::Precondition(format!(
            "moment quadrature supports n <= {MOMENT_QUAD_MAX_N}, got {n}"
        )));
    }
    let expected = moment_expected(n, params)?;
    dispatch!(precision, moment_integral(n, params, tol), |result| {
        report_from(
            Identity::Moment,
            params_parameter("n", n, params),
            expected,
            result,
            tol,
        )
    })
}

/// Largest `k` accepted by [`verify_grosset_veselov_quadrature`].
pub const SOLITON_QUAD_MAX_K: u32 = 8;

/// `int_R (d^{k-1}/dx^{k-1} sech^2 x)^2 dx`.
pub fn soliton_square_integral<R: Real>(k: u32, tol: f64) -> Result<QuadratureResult<R>> {
    if k == 0 {
        return Err(Error::Precondition(
            "soliton integral index k must be >= 1".into(),
        ));
    }
    let poly = sech2_derivative(k - 1);
    integrate_real_line(
        |x: R| {
            let d = poly.eval(x);
            d * d
        },
        tol,
    )
}

/// Quadrature of the soliton integral against `2^{2k+1} (-1)^{k-1} B_{2k}`.
pub fn verify_grosset_veselov_quadrature(
    k: u32,
    tol: f64,
    precision: Precision,
) -> Result<VerificationReport> {
    if !(1..=SOLITON_QUAD_MAX_K).contains(&k) {
        return Err(Error::Precondition(format!(
            "soliton quadrature supports 1 <= k <= {SOLITON_QUAD_MAX_K}, got {k}"
        )));
    }
    dispatch!(precision, soliton_square_integral(k, tol), |result| {
        report_from(
            Identity::SolitonQuad,
            Parameter::Index(k as u64),
            grosset_veselov_bernoulli(k),
            result,
            tol,
        )
    })
}

/// `int_0^{u_max} u log^n(u_max/u) du` by tanh-sinh.
pub fn log_moment_integral<R: Real>(n: u32, u_max: f64, tol: f64) -> Result<QuadratureResult<R>> {
    let top = R::from_f64(u_max);
    integrate_interval(
        |u: R| {
            if u <= R::zero() || u >= top {
                return R::zero();
            }
            u * (top / u).ln().powi(n)
        },
        R::zero(),
        top,
        tol,
    )
}

pub fn verify_log_moment_quadrature(
    n: u32,
    u_max: f64,
    tol: f64,
    precision: Precision,
) -> Result<VerificationReport> {
    if !(u_max.is_finite() && u_max > 0.0) {
        return Err(Error::OutOfDomain {
            name: "u_max",
            value: u_max,
            domain: "(0, inf)",
        });
    }
    let expected = log_moment_exact(n, &exact_f64(u_max))?;
    dispatch!(precision, log_moment_integral(n, u_max, tol), |result| {
        report_from(
            Identity::LogMoment,
            Parameter::Tuple(vec![
                ("n", ParamValue::Int(n as u64)),
                ("u_max", ParamValue::Real(u_max)),
            ]),
            expected,
            result,
            tol,
        )
    })
}
