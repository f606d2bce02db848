//! Derivatives of the 1-soliton profile `sech^2(x)` as polynomials in
//! `tanh(x)`, and the exact value of the squared-derivative integral.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::real::Real;

/// `T_m` with `d^m/dx^m sech^2(x) = sech^2(x) T_m(tanh x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TanhPoly {
    order: u32,
    /// Coefficient of `tau^i` at index `i`.
    coeffs: Vec<BigRational>,
}

impl TanhPoly {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval_tau(&self, tau: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * tau + c)
    }

    /// `d^m/dx^m sech^2(x)` at `x`.
    pub fn eval<R: Real>(&self, x: R) -> R {
        let (tau, sech2) = x.tanh_sech2();
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * tau + R::from_rational(c);
        }
        sech2 * acc
    }

    fn next(&self) -> TanhPoly {
        // T' = (1 - tau^2) T'(tau) - 2 tau T(tau)
        let len = self.coeffs.len() + 1;
        let mut out = vec![BigRational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i >= 1 {
                let d = c * BigRational::from_integer(BigInt::from(i));
                out[i - 1] += &d;
                out[i + 1] -= &d;
            }
            out[i + 1] -= c * BigRational::from_integer(BigInt::from(2));
        }
        while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        TanhPoly {
            order: self.order + 1,
            coeffs: out,
        }
    }
}

pub fn sech2_derivative(m: u32) -> TanhPoly {
    let mut poly = TanhPoly {
        order: 0,
        coeffs: vec![BigRational::from_integer(BigInt::from(1))],
    };
    for _ in 0..m {
        poly = poly.next();
    }
    poly
}

/// `int_R (d^{k-1}/dx^{k-1} sech^2 x)^2 dx`, exactly.
///
/// With `tau = tanh x` the integral becomes the polynomial moment
/// `int_{-1}^{1} (1 - tau^2) T_{k-1}(tau)^2 dtau`.
pub fn grosset_veselov_exact(k: u32) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::Precondition(
            "soliton integral index k must be >= 1".into(),
        ));
    }
    let t = sech2_derivative(k - 1);
    let c = t.coeffs();
    let mut square = vec![BigRational::zero(); 2 * c.len() - 1];
    for (i, a) in c.iter().enumerate() {
        for (j, b) in c.iter().enumerate() {
            square[i + j] += a * b;
        }
    }
    // (1 - tau^2) * square, then integrate even powers: 2/(2j+1).
    let moment = |p: usize| -> BigRational {
        if p % 2 == 1 {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(2), BigInt::from(p + 1))
        }
    };
    let total = square
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .fold(BigRational::zero(), |acc, (p, s)| {
            acc + s * (moment(p) - moment(p + 2))
        });
    debug_assert!(!total.is_negative());
    Ok(total)
}
