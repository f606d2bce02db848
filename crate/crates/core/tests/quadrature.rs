use bernoulli_gumbel::quadrature::{
    derivative_square_integral, general_derivative_expected, gumbel_square_integral,
    integrate_half_line, integrate_interval, log_moment_integral, moment_expected, moment_integral,
    soliton_square_integral, verify_gumbel_bernoulli_quadrature, verify_moment_quadrature,
    GUMBEL_QUAD_MAX_K,
};
use bernoulli_gumbel::verify::{
    grosset_veselov_bernoulli, gumbel_integral_bernoulli, log_moment_exact,
};
use bernoulli_gumbel::{
    integrate_real_line, BigRational, DoubleDouble, Error, GompertzParams, Precision,
    QuadratureResult, Real,
};
use num_traits::{Signed, ToPrimitive};

fn actual_error<R: Real>(result: &QuadratureResult<R>, exact: &BigRational) -> f64 {
    let value = result.value.to_rational().unwrap();
    (value - exact).abs().to_f64().unwrap()
}

fn assert_honest<R: Real>(label: &str, result: &QuadratureResult<R>, exact: &BigRational) {
    let err = actual_error(result, exact);
    assert!(
        err <= result.error_estimate,
        "{label}: actual error {err:e} exceeds estimate {:e}",
        result.error_estimate
    );
}

#[test]
fn error_estimates_are_honest_for_gumbel() {
    for k in 1..=GUMBEL_QUAD_MAX_K {
        let exact = gumbel_integral_bernoulli(k);
        let dd = gumbel_square_integral::<DoubleDouble>(k, 1e-10).unwrap();
        assert_honest(&format!("extended k={k}"), &dd, &exact);
        if k <= 6 {
            let d = gumbel_square_integral::<f64>(k, 1e-10).unwrap();
            assert_honest(&format!("double k={k}"), &d, &exact);
        }
    }
}

#[test]
fn error_estimates_are_honest_for_soliton() {
    for k in 1..=8 {
        let exact = grosset_veselov_bernoulli(k);
        let r = soliton_square_integral::<DoubleDouble>(k, 1e-12).unwrap();
        assert_honest(&format!("k={k}"), &r, &exact);
    }
}

#[test]
fn error_estimates_are_honest_for_general_derivatives() {
    for (q, c, u_max) in [(0.5, 0.5, 1.0), (1.0, 3.0, 2.0), (2.0, 1.0, 5.0)] {
        let p = GompertzParams::new(q, c, u_max).unwrap();
        for k in 1..=6 {
            let r = derivative_square_integral::<DoubleDouble>(k, &p, 1e-10).unwrap();
            assert_honest(
                &format!("k={k} {p:?}"),
                &r,
                &general_derivative_expected(k, &p),
            );
        }
        for n in 0..=8 {
            let r = moment_integral::<DoubleDouble>(n, &p, 1e-10).unwrap();
            assert_honest(
                &format!("n={n} {p:?}"),
                &r,
                &moment_expected(n, &p).unwrap(),
            );
        }
    }
}

#[test]
fn error_estimates_are_honest_for_log_moments() {
    for u_max in [0.5, 1.0, 3.0] {
        let exact_u = BigRational::from_float(u_max).unwrap();
        for n in 0..=8 {
            let r = log_moment_integral::<DoubleDouble>(n, u_max, 1e-12).unwrap();
            assert_honest(
                &format!("n={n} u_max={u_max}"),
                &r,
                &log_moment_exact(n, &exact_u).unwrap(),
            );
        }
    }
}

#[test]
fn reference_integrals() {
    let gauss = integrate_real_line(|x: f64| (-x * x).exp(), 1e-13).unwrap();
    assert!((gauss.value - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    // int_0^inf x^4 e^{-2x} dx = 4!/2^5
    let gamma = integrate_half_line(|x: DoubleDouble| x.powi(4) * (-(x + x)).exp(), 1e-25).unwrap();
    assert!((gamma.value - DoubleDouble::from_f64(0.75)).abs().to_f64() < 1e-25);
    // int_0^1 ln(x) dx = -1 has an endpoint singularity.
    let log = integrate_interval(|x: f64| x.ln(), 0.0, 1.0, 1e-12).unwrap();
    assert!((log.value + 1.0).abs() < 1e-12);
    // int_{-1}^{1} sqrt(1 - x^2) dx = pi/2
    let semicircle =
        integrate_interval(|x: f64| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0, 1e-12).unwrap();
    assert!((semicircle.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn evaluation_counts_do_not_depend_on_history() {
    let first = gumbel_square_integral::<DoubleDouble>(4, 1e-10).unwrap();
    let _ = gumbel_square_integral::<f64>(3, 1e-8).unwrap();
    let again = gumbel_square_integral::<DoubleDouble>(4, 1e-10).unwrap();
    assert_eq!(first.evaluations, again.evaluations);
    assert_eq!(first.value.to_rational(), again.value.to_rational());
}

#[test]
fn parallel_runs_match_serial_runs() {
    let serial: Vec<_> = (1..=6)
        .map(|k| gumbel_square_integral::<DoubleDouble>(k, 1e-10).unwrap())
        .collect();
    let handles: Vec<_> = (1..=6)
        .map(|k| {
            std::thread::spawn(move || gumbel_square_integral::<DoubleDouble>(k, 1e-10).unwrap())
        })
        .collect();
    for (s, h) in serial.iter().zip(handles) {
        let p = h.join().unwrap();
        assert_eq!(s.evaluations, p.evaluations);
        assert_eq!(s.value.to_rational(), p.value.to_rational());
    }
}

#[test]
fn failures_are_errors_not_degraded_answers() {
    // Roundoff in double precision cannot reach 1e-13 on a value near 2.8e7.
    let r = gumbel_square_integral::<f64>(10, 1e-13);
    assert!(
        matches!(r, Err(Error::QuadratureNotConverged { .. })),
        "{r:?}"
    );
    let report = verify_gumbel_bernoulli_quadrature(10, 1e-13, Precision::Double).unwrap();
    assert!(!report.passed);
    assert!(report.note.is_some());
    // A non-integrable tail never converges.
    let r = integrate_half_line(|x: f64| 1.0 / (1.0 + x), 1e-10);
    assert!(r.is_err());
}

#[test]
fn moment_quadrature_matches_sign_pattern() {
    let p = GompertzParams::new(1.5, 2.0, 3.0).unwrap();
    for n in 0..=8 {
        let r = verify_moment_quadrature(n, &p, 1e-10, Precision::Extended).unwrap();
        assert!(r.passed, "n={n}: {r:?}");
        let expected = moment_expected(n, &p).unwrap();
        if n >= 2 && n % 2 == 0 {
            assert!(
                expected.is_integer() && expected.to_f64() == Some(0.0),
                "n={n}"
            );
        }
    }
}
