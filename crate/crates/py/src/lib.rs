//! Python bindings. Exact values come back as `fractions.Fraction` or `int`,
//! verification reports as plain dicts.

use bernoulli_gumbel as core;
use bernoulli_gumbel::quadrature::{
    verify_general_derivative_integral, verify_grosset_veselov_quadrature,
    verify_gumbel_bernoulli_quadrature, verify_log_moment_quadrature, verify_moment_quadrature,
};
use bernoulli_gumbel::verify::{
    verify_binomial_bernoulli, verify_faulhaber, verify_grosset_veselov, verify_gumbel_bernoulli,
    verify_moment_routes, verify_stirling_bernoulli, verify_zeta_even,
};
use bernoulli_gumbel::{BigRational, DoubleDouble, Precision, Real, VerificationReport};
use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py_err(e: core::Error) -> PyErr {
    match e {
        core::Error::QuadratureNotConverged { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

fn rational_from_py(x: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    let numer: BigInt = x.getattr("numerator")?.extract()?;
    let denom: BigInt = x.getattr("denominator")?.extract()?;
    Ok(BigRational::new(numer, denom))
}

fn parse_precision(s: &str) -> PyResult<Precision> {
    s.parse().map_err(|_| {
        PyValueError::new_err(format!(
            "precision must be 'double' or 'extended', got {s:?}"
        ))
    })
}

fn report_dict<'py>(
    py: Python<'py>,
    report: core::Result<VerificationReport>,
) -> PyResult<Bound<'py, PyAny>> {
    let report = report.map_err(to_py_err)?;
    let mut value =
        serde_json::to_value(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    if let Some(note) = &report.note {
        value["note"] = note.clone().into();
    }
    py.import("json")?
        .call_method1("loads", (value.to_string(),))
}

/// Gompertz curve `u(t) = u_max exp(-c e^{-q t})`.
#[pyclass(name = "GompertzParams", frozen, from_py_object)]
#[derive(Clone)]
struct PyGompertzParams {
    inner: core::GompertzParams,
}

#[pymethods]
impl PyGompertzParams {
    #[new]
    #[pyo3(signature = (q = 1.0, c = 1.0, u_max = 1.0))]
    fn new(q: f64, c: f64, u_max: f64) -> PyResult<Self> {
        let inner = core::GompertzParams::new(q, c, u_max).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q()
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c()
    }

    #[getter]
    fn u_max(&self) -> f64 {
        self.inner.u_max()
    }

    fn __call__(&self, t: f64) -> f64 {
        core::gompertz_eval(&self.inner, t)
    }

    fn __repr__(&self) -> String {
        format!(
            "GompertzParams(q={}, c={}, u_max={})",
            self.inner.q(),
            self.inner.c(),
            self.inner.u_max()
        )
    }
}

#[pyfunction]
fn bernoulli(py: Python<'_>, n: u32) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &core::bernoulli(n))
}

#[pyfunction]
fn stirling2(n: u32, k: i64) -> BigInt {
    core::stirling2(n, k).into()
}

#[pyfunction]
fn binomial(n: u32, k: i64) -> BigInt {
    core::binomial(n, k).into()
}

/// `sum_k {n brace k} x^k` for a rational (or integer) `x`.
#[pyfunction]
fn bell_polynomial_eval<'py>(
    py: Python<'py>,
    n: u32,
    x: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let x = rational_from_py(x)?;
    fraction(py, &core::bell_polynomial_eval(n, &x))
}

/// Coefficients `[a_0, ..., a_n]` of the log-polynomial for `u^(n)`.
#[pyfunction]
fn derivative_coeffs(n: u32) -> PyResult<Vec<BigInt>> {
    let poly = core::derivative_coeffs(n).map_err(to_py_err)?;
    Ok((0..=poly.degree()).map(|k| poly.coeff(k)).collect())
}

#[pyfunction]
#[pyo3(signature = (n, params, t, precision = "extended"))]
fn derivative_eval(n: u32, params: &PyGompertzParams, t: f64, precision: &str) -> PyResult<f64> {
    Ok(match parse_precision(precision)? {
        Precision::Double => core::derivative_eval(n, &params.inner, t),
        Precision::Extended => {
            core::derivative_eval(n, &params.inner, DoubleDouble::from_f64(t)).to_f64()
        }
    })
}

/// `u(t + z)` written in terms of `u = u(t)`.
#[pyfunction]
fn egf_eval(u: f64, z: f64, params: &PyGompertzParams) -> PyResult<f64> {
    core::egf_eval(u, z, &params.inner).map_err(to_py_err)
}

/// Finite-difference estimate of `u^(n)(t)`, as `(value, error_estimate)`.
#[pyfunction]
fn taylor_coeff_oracle(params: &PyGompertzParams, t: f64, n: u32) -> PyResult<(f64, f64)> {
    let est = core::taylor_coeff_oracle(&params.inner, t, n).map_err(to_py_err)?;
    Ok((est.value, est.error_estimate))
}

/// Coefficients of `T_m`, low degree first, where
/// `d^m/dx^m sech^2 x = sech^2 x * T_m(tanh x)`.
#[pyfunction]
fn sech2_derivative(py: Python<'_>, m: u32) -> PyResult<Vec<Bound<'_, PyAny>>> {
    core::sech2_derivative(m)
        .coeffs()
        .iter()
        .map(|c| fraction(py, c))
        .collect()
}

#[pyfunction]
fn grosset_veselov_exact(py: Python<'_>, k: u32) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &core::grosset_veselov_exact(k).map_err(to_py_err)?)
}

/// Run one identity check and return its report as a dict.
///
/// `param` is `k` or `n` depending on the identity; quadrature identities
/// honour `tol` and `precision`, `zeta` uses `terms`, `faulhaber` uses `m`.
#[pyfunction]
#[pyo3(signature = (identity, param, *, tol = 1e-10, precision = "extended", params = None, terms = 1_000_000, m = 10, u_max = None))]
#[allow(clippy::too_many_arguments)]
fn verify<'py>(
    py: Python<'py>,
    identity: &str,
    param: u32,
    tol: f64,
    precision: &str,
    params: Option<PyGompertzParams>,
    terms: u64,
    m: u64,
    u_max: Option<&Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let id: core::Identity = identity
        .parse()
        .map_err(|_| PyValueError::new_err(format!("unknown identity {identity:?}")))?;
    let precision = parse_precision(precision)?;
    let gp = params.map_or_else(core::GompertzParams::unit, |p| p.inner);
    let u_exact = match u_max {
        Some(x) => rational_from_py(x)?,
        None => BigRational::from_float(gp.u_max()).expect("u_max is finite"),
    };
    use core::Identity::*;
    let report = py.detach(|| match id {
        Gumbel => verify_gumbel_bernoulli(param),
        GumbelQuad => verify_gumbel_bernoulli_quadrature(param, tol, precision),
        Soliton => verify_grosset_veselov(param),
        SolitonQuad => verify_grosset_veselov_quadrature(param, tol, precision),
        GeneralDerivative => verify_general_derivative_integral(param, &gp, tol, precision),
        StirlingBernoulli => verify_stirling_bernoulli(param),
        BinomialBernoulli => verify_binomial_bernoulli(param),
        Zeta => verify_zeta_even(param, terms, tol),
        Moment => verify_moment_quadrature(param, &gp, tol, precision),
        LogMoment => verify_log_moment_quadrature(param, gp.u_max(), tol, precision),
        MomentRoutes => verify_moment_routes(param, &u_exact),
        Faulhaber => verify_faulhaber(m, param),
    });
    report_dict(py, report)
}

#[pymodule]
fn pybernoulli_gumbel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGompertzParams>()?;
    m.add_function(wrap_pyfunction!(bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(stirling2, m)?)?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(bell_polynomial_eval, m)?)?;
    m.add_function(wrap_pyfunction!(derivative_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(derivative_eval, m)?)?;
    m.add_function(wrap_pyfunction!(egf_eval, m)?)?;
    m.add_function(wrap_pyfunction!(taylor_coeff_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(sech2_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(grosset_veselov_exact, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    let names: Vec<&str> = core::Identity::ALL.iter().map(|i| i.name()).collect();
    m.add("IDENTITIES", names)?;
    Ok(())
}
