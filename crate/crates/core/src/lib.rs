//! Exact Bernoulli and Stirling arithmetic, derivatives of the Gompertz
//! curve, and two independent verification routes (exact rationals and
//! double-exponential quadrature) for the integral identities tying the
//! Gumbel density and the `sech^2` soliton to Bernoulli numbers.

pub mod error;
pub mod exact_numbers;
pub mod gompertz;
pub mod quadrature;
pub mod real;
pub mod report;
pub mod soliton;
pub mod verify;

pub use error::{Error, Result};
pub use exact_numbers::{bell_polynomial_eval, bernoulli, binomial, stirling2};
pub use gompertz::{
    derivative_coeffs, derivative_eval, egf_eval, gompertz_eval, gumbel_pdf_derivative,
    taylor_coeff_oracle, ExpSum, GompertzParams, LogPoly,
};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
pub use quadrature::{integrate_real_line, QuadratureResult};
pub use real::{DoubleDouble, Precision, Real};
pub use report::{Identity, Parameter, ReportValue, Route, VerificationReport};
pub use soliton::{grosset_veselov_exact, sech2_derivative, TanhPoly};
