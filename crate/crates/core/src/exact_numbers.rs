//! Exact integers and rationals: Stirling numbers of the second kind,
//! Bernoulli numbers, binomial coefficients and Bell polynomials.
//!
//! Stirling rows and Bernoulli numbers are memoized process-wide behind
//! locks; a cached call returns exactly what a fresh computation would.

use std::sync::{Mutex, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

static STIRLING_ROWS: RwLock<Vec<Vec<BigUint>>> = RwLock::new(Vec::new());
static BERNOULLI: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// Row `n` of the Stirling triangle, `{n brace k}` for `k = 0..=n`.
pub fn stirling2_row(n: u32) -> Vec<BigUint> {
    let n = n as usize;
    {
        let rows = STIRLING_ROWS.read().unwrap_or_else(|e| e.into_inner());
        if let Some(row) = rows.get(n) {
            return row.clone();
        }
    }
    let mut rows = STIRLING_ROWS.write().unwrap_or_else(|e| e.into_inner());
    if rows.is_empty() {
        rows.push(vec![BigUint::one()]);
    }
    while rows.len() <= n {
        // {m+1 brace k} = k {m brace k} + {m brace k-1}
        let prev = rows.last().expect("row 0 is seeded");
        let m = prev.len() - 1;
        let mut next = vec![BigUint::zero(); m + 2];
        for k in 1..=m + 1 {
            let carried = if k <= m {
                &prev[k] * k
            } else {
                BigUint::zero()
            };
            next[k] = carried + &prev[k - 1];
        }
        rows.push(next);
    }
    rows[n].clone()
}

/// Stirling number of the second kind `{n brace k}`.
///
/// `{0 brace 0} = 1`, `{n brace 0} = 0` for `n > 0`, and zero whenever
/// `k < 0` or `k > n`.
pub fn stirling2(n: u32, k: i64) -> BigUint {
    if k < 0 || k > n as i64 {
        return BigUint::zero();
    }
    let n_idx = n as usize;
    {
        let rows = STIRLING_ROWS.read().unwrap_or_else(|e| e.into_inner());
        if let Some(row) = rows.get(n_idx) {
            return row[k as usize].clone();
        }
    }
    stirling2_row(n).swap_remove(k as usize)
}

/// `{n brace k}` from the explicit alternating sum
/// `(1/k!) sum_j (-1)^(k-j) C(k, j) j^n`. Uncached; used as a cross-check.
pub fn stirling2_explicit(n: u32, k: i64) -> BigUint {
    if k < 0 || k > n as i64 {
        return BigUint::zero();
    }
    let k = k as u32;
    let mut sum = BigInt::zero();
    for j in 0..=k {
        let term = BigInt::from(binomial(k, j as i64)) * BigInt::from(j).pow(n);
        if (k - j).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (quotient, remainder) = sum.div_rem(&BigInt::from(factorial(k)));
    debug_assert!(remainder.is_zero());
    quotient
        .to_biguint()
        .expect("Stirling numbers are non-negative")
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u32, k: i64) -> BigUint {
    if k < 0 || k > n as i64 {
        return BigUint::zero();
    }
    let k = (k as u32).min(n - k as u32);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u32) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Bernoulli number `B_n` with `B_1 = -1/2`, in lowest terms.
///
/// Computed from `sum_{j=0}^{n} C(n+1, j) B_j = 0`, memoized.
pub fn bernoulli(n: u32) -> BigRational {
    let n = n as usize;
    let mut table = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= n {
        let next = bernoulli_next(&table);
        table.push(next);
    }
    table[n].clone()
}

/// `B_0 ..= B_max`.
pub fn bernoulli_table(max: u32) -> Vec<BigRational> {
    bernoulli(max);
    let table = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    table[..=max as usize].to_vec()
}

fn bernoulli_next(known: &[BigRational]) -> BigRational {
    let n = known.len();
    if n == 0 {
        return BigRational::one();
    }
    // Accumulate sum_{j<n} C(n+1, j) B_j over a running common denominator;
    // Bernoulli denominators are small, so this avoids big gcds per term.
    let mut numer = BigInt::zero();
    let mut denom = BigInt::one();
    let mut choose = BigUint::one();
    for (j, b) in known.iter().enumerate() {
        if !b.is_zero() {
            let lcm = denom.lcm(b.denom());
            numer = numer * (&lcm / &denom)
                + BigInt::from(choose.clone()) * b.numer() * (&lcm / b.denom());
            denom = lcm;
        }
        choose = choose * (n + 1 - j) / (j + 1);
    }
    BigRational::new(-numer, denom * BigInt::from(n + 1))
}

/// Bell polynomial `sum_{k=1}^{n} {n brace k} x^k`, with `B_0(x) = 1`.
pub fn bell_polynomial_eval(n: u32, x: &BigRational) -> BigRational {
    if n == 0 {
        return BigRational::one();
    }
    let row = stirling2_row(n);
    // Horner over k = n..1, then one trailing factor of x.
    let mut acc = BigRational::zero();
    for coeff in row[1..].iter().rev() {
        acc = acc * x + BigRational::from_integer(BigInt::from(coeff.clone()));
    }
    acc * x
}
