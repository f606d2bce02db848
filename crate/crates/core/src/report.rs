use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::real::{format_significant, Real};

/// Significant digits used when a floating value is written out.
pub const DECIMAL_DIGITS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    Faulhaber,
    Zeta,
    StirlingBernoulli,
    BinomialBernoulli,
    Gumbel,
    GumbelQuad,
    Soliton,
    SolitonQuad,
    Moment,
    GeneralDerivative,
    LogMoment,
    MomentRoutes,
}

impl Identity {
    pub const ALL: [Identity; 12] = [
        Identity::Faulhaber,
        Identity::Zeta,
        Identity::StirlingBernoulli,
        Identity::BinomialBernoulli,
        Identity::Gumbel,
        Identity::GumbelQuad,
        Identity::Soliton,
        Identity::SolitonQuad,
        Identity::Moment,
        Identity::GeneralDerivative,
        Identity::LogMoment,
        Identity::MomentRoutes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Faulhaber => "faulhaber",
            Identity::Zeta => "zeta",
            Identity::StirlingBernoulli => "stirling-bernoulli",
            Identity::BinomialBernoulli => "binomial-bernoulli",
            Identity::Gumbel => "gumbel",
            Identity::GumbelQuad => "gumbel-quad",
            Identity::Soliton => "soliton",
            Identity::SolitonQuad => "soliton-quad",
            Identity::Moment => "moment",
            Identity::GeneralDerivative => "general-derivative",
            Identity::LogMoment => "log-moment",
            Identity::MomentRoutes => "moment-routes",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Identity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown identity `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Exact,
    Quadrature,
}

/// A single scalar parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(u64),
    Real(f64),
}

/// The parameter a report was produced for: a bare index, or named values
/// serialized as a JSON object in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub enum Parameter {
    Index(u64),
    Tuple(Vec<(&'static str, ParamValue)>),
}

impl Serialize for Parameter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Parameter::Index(i) => serializer.serialize_u64(*i),
            Parameter::Tuple(entries) => {
                let mut map = serializer.serialize_map(Some(entries.len()))?;
                for (name, value) in entries {
                    map.serialize_entry(name, value)?;
                }
                map.end()
            }
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parameter::Index(i) => write!(f, "{i}"),
            Parameter::Tuple(entries) => {
                let parts: Vec<String> = entries
                    .iter()
                    .map(|(name, value)| match value {
                        ParamValue::Int(i) => format!("{name}={i}"),
                        ParamValue::Real(x) => format!("{name}={x}"),
                    })
                    .collect();
                f.write_str(&parts.join(";"))
            }
        }
    }
}

/// Expected or computed value: exact rationals serialize as `"p/q"`,
/// floating values as decimal strings with [`DECIMAL_DIGITS`] digits.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportValue {
    Exact(BigRational),
    Decimal { text: String, approx: f64 },
}

impl ReportValue {
    pub fn decimal<R: Real>(x: R) -> Self {
        ReportValue::Decimal {
            text: x.to_decimal(DECIMAL_DIGITS),
            approx: x.to_f64(),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            ReportValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            ReportValue::Decimal { approx, .. } => *approx,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            ReportValue::Exact(r) => Some(r),
            ReportValue::Decimal { .. } => None,
        }
    }
}

/// `"p/q"`, always with an explicit denominator.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for ReportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportValue::Exact(r) => f.write_str(&rational_string(r)),
            ReportValue::Decimal { text, .. } => f.write_str(text),
        }
    }
}

impl Serialize for ReportValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: Identity,
    pub parameter: Parameter,
    pub expected: ReportValue,
    pub computed: ReportValue,
    pub abs_error: f64,
    pub rel_error: f64,
    pub passed: bool,
    pub route: Route,
    /// Absolute tolerance the report was judged against (zero for exact).
    #[serde(skip)]
    pub tolerance: f64,
    /// Diagnostic detail, e.g. why a quadrature failed.
    #[serde(skip)]
    pub note: Option<String>,
}

impl VerificationReport {
    /// Exact comparison: passes only on rational equality.
    pub fn exact(
        identity: Identity,
        parameter: Parameter,
        expected: BigRational,
        computed: BigRational,
    ) -> Self {
        let diff = (&computed - &expected).abs();
        let abs_error = diff.to_f64().unwrap_or(f64::INFINITY);
        let rel_error = if expected.is_zero() {
            abs_error
        } else {
            (diff / expected.abs()).to_f64().unwrap_or(f64::INFINITY)
        };
        let passed = computed == expected;
        VerificationReport {
            identity,
            parameter,
            expected: ReportValue::Exact(expected),
            computed: ReportValue::Exact(computed),
            abs_error,
            rel_error,
            passed,
            route: Route::Exact,
            tolerance: 0.0,
            note: None,
        }
    }

    /// Floating comparison of `computed` against an exact expectation,
    /// passing when `|computed - expected| <= tolerance`.
    pub fn against_exact<R: Real>(
        identity: Identity,
        parameter: Parameter,
        route: Route,
        expected: BigRational,
        computed: R,
        tolerance: f64,
    ) -> Self {
        let (abs_error, rel_error) = match computed.to_rational() {
            Some(c) => {
                let diff = (c - &expected).abs();
                let abs = diff.to_f64().unwrap_or(f64::INFINITY);
                let rel = if expected.is_zero() {
                    abs
                } else {
                    (diff / expected.abs()).to_f64().unwrap_or(f64::INFINITY)
                };
                (abs, rel)
            }
            None => (f64::NAN, f64::NAN),
        };
        VerificationReport {
            identity,
            parameter,
            expected: ReportValue::Exact(expected),
            computed: ReportValue::decimal(computed),
            abs_error,
            rel_error,
            passed: abs_error <= tolerance,
            route,
            tolerance,
            note: None,
        }
    }

    /// A report for a floating computation that produced no value.
    pub fn failed(
        identity: Identity,
        parameter: Parameter,
        route: Route,
        expected: ReportValue,
        reason: String,
    ) -> Self {
        VerificationReport {
            identity,
            parameter,
            expected,
            computed: ReportValue::Decimal {
                text: "NaN".into(),
                approx: f64::NAN,
            },
            abs_error: f64::NAN,
            rel_error: f64::NAN,
            passed: false,
            route,
            tolerance: 0.0,
            note: Some(reason),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Convenience used by tests and the CLI: a rational rendered as a decimal.
pub fn rational_decimal(r: &BigRational) -> String {
    format_significant(r, DECIMAL_DIGITS)
}
