use bernoulli_gumbel::verify::{
    bernoulli_moment, euler_series_coeff, gumbel_integral_exact, moment_exact,
    moment_via_log_moments, verify_faulhaber, verify_gumbel_bernoulli, verify_zeta_even,
};
use bernoulli_gumbel::{BigRational, Identity, Parameter, VerificationReport};
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn euler_series_sums_to_logistic() {
    // sum_n e_n z^n = 1/(e^z + 1)
    let z: f64 = 0.5;
    let series: f64 = (0..40)
        .map(|n| euler_series_coeff(n).to_f64().unwrap() * z.powi(n as i32))
        .sum();
    assert!((series - 1.0 / (z.exp() + 1.0)).abs() < 1e-12);
}

#[test]
fn euler_coefficients_vanish_at_even_orders() {
    for n in (2..=100).step_by(2) {
        assert!(euler_series_coeff(n).is_zero(), "n={n}");
    }
}

#[test]
fn gumbel_integral_by_gamma_moments_matches_direct_sum() {
    // Independent of the library: expand g^{(k-1)} in powers of v = e^{-t}
    // by repeated differentiation and integrate e^{-2v} v^m / v termwise.
    for k in 1..=12u32 {
        // g(t) = e^{-v} v, d/dt acts on e^{-v} v^j as (v - j) e^{-v} v^j.
        let mut poly: Vec<i128> = vec![0, 1];
        for _ in 1..k {
            let mut next = vec![0i128; poly.len() + 1];
            for (j, &a) in poly.iter().enumerate() {
                next[j + 1] += a;
                next[j] -= j as i128 * a;
            }
            poly = next;
        }
        // int (sum a_i v^i)^2 e^{-2v} dv / v = sum a_i a_j (i+j-1)! / 2^{i+j}
        let mut total = BigRational::zero();
        for (i, &a) in poly.iter().enumerate() {
            for (j, &b) in poly.iter().enumerate() {
                if a == 0 || b == 0 {
                    continue;
                }
                let m = (i + j - 1) as u32;
                let fact: num_bigint::BigInt = (1..=m).map(num_bigint::BigInt::from).product();
                let pow2 = num_bigint::BigInt::from(1) << (i + j);
                total += BigRational::new(fact * a * b, pow2);
            }
        }
        assert_eq!(gumbel_integral_exact(k).unwrap(), total, "k={k}");
    }
}

#[test]
fn moment_routes_agree_and_alternate() {
    let u_max = rat(3, 2);
    for n in 0..=30 {
        assert_eq!(
            moment_exact(n, &u_max).unwrap(),
            moment_via_log_moments(n, &u_max).unwrap(),
            "n={n}"
        );
    }
    assert_eq!(bernoulli_moment(0), rat(1, 2));
    assert_eq!(bernoulli_moment(1), rat(-1, 4));
}

#[test]
fn report_json_schema() {
    let report = verify_gumbel_bernoulli(2).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    let keys: Vec<&str> = json
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    assert_eq!(
        sorted,
        [
            "abs_error",
            "computed",
            "expected",
            "identity",
            "parameter",
            "passed",
            "rel_error",
            "route"
        ]
    );
    assert_eq!(json["identity"], "gumbel");
    assert_eq!(json["expected"], "1/8");
    assert_eq!(json["computed"], "1/8");
    assert_eq!(json["route"], "exact");
    assert_eq!(json["parameter"], 2);
    assert_eq!(json["passed"], true);
}

#[test]
fn floating_reports_carry_25_digits() {
    let report: VerificationReport = verify_zeta_even(2, 1000, 1e-10).unwrap();
    let text = report.computed.to_string();
    let mantissa = text.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 25, "{text}");
    assert_eq!(report.identity, Identity::Zeta);
}

#[test]
fn tuple_parameters_serialize_in_order() {
    let report = verify_faulhaber(4, 3).unwrap();
    assert!(matches!(report.parameter, Parameter::Tuple(_)));
    let json = serde_json::to_string(&report.parameter).unwrap();
    assert_eq!(json, r#"{"m":4,"n":3}"#);
}

#[test]
fn zeta_flags_too_few_terms() {
    let r = verify_zeta_even(1, 10, 1e-10).unwrap();
    assert!(r.passed);
    assert!(r.note.unwrap().contains("tail"));
}

proptest! {
    #[test]
    fn faulhaber_matches_brute_force(m in 2u64..200, n in 1u32..12) {
        let brute: u128 = (1..m as u128).map(|k| k.pow(n)).sum();
        let r = verify_faulhaber(m, n).unwrap();
        prop_assert!(r.passed);
        prop_assert_eq!(r.computed.to_string(), format!("{brute}/1"));
    }
}
