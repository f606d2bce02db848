use bernoulli_gumbel::exact_numbers::{
    bernoulli_table, factorial, stirling2_explicit, stirling2_row,
};
use bernoulli_gumbel::{bell_polynomial_eval, bernoulli, binomial, stirling2, BigInt, BigRational};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Counts set partitions of `{0..n}` by number of blocks, by enumerating
/// restricted growth strings.
fn partitions_by_blocks(n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    if n == 0 {
        counts[0] = 1;
        return counts;
    }
    fn walk(pos: usize, n: usize, blocks: usize, counts: &mut [u64]) {
        if pos == n {
            counts[blocks] += 1;
            return;
        }
        for b in 0..=blocks {
            walk(pos + 1, n, blocks.max(b + 1), counts);
        }
    }
    walk(1, n, 1, &mut counts);
    counts
}

/// Akiyama-Tanigawa algorithm; yields `B_n` with `B_1 = +1/2`.
fn akiyama_tanigawa(n: usize) -> BigRational {
    let mut a: Vec<BigRational> = (0..=n).map(|m| rat(1, m as i64 + 1)).collect();
    for j in (1..=n).rev() {
        for i in 0..j {
            a[i] = BigRational::from_integer(BigInt::from(i + 1)) * (&a[i] - &a[i + 1]);
        }
    }
    a[0].clone()
}

#[test]
fn stirling_matches_set_partition_enumeration() {
    for n in 0..=12u32 {
        let brute = partitions_by_blocks(n as usize);
        for (k, &count) in brute.iter().enumerate() {
            assert_eq!(stirling2(n, k as i64), count.into(), "n={n} k={k}");
        }
        let row_sum: u64 = brute.iter().sum();
        let bell = bell_polynomial_eval(n, &rat(1, 1));
        assert_eq!(bell, rat(row_sum as i64, 1), "Bell number n={n}");
    }
}

#[test]
fn recurrence_matches_explicit_sum() {
    for n in 0..=30u32 {
        let row = stirling2_row(n);
        for k in 0..=n as i64 {
            assert_eq!(row[k as usize], stirling2_explicit(n, k), "n={n} k={k}");
        }
    }
}

#[test]
fn bernoulli_matches_akiyama_tanigawa() {
    for n in 0..=60usize {
        let mut expected = akiyama_tanigawa(n);
        if n == 1 {
            expected = -expected;
        }
        assert_eq!(bernoulli(n as u32), expected, "n={n}");
    }
}

#[test]
fn odd_bernoulli_numbers_vanish() {
    for m in 1..=100u32 {
        assert!(bernoulli(2 * m + 1).is_zero(), "B_{}", 2 * m + 1);
    }
}

#[test]
fn bernoulli_values_are_in_lowest_terms() {
    for (n, b) in bernoulli_table(120).iter().enumerate() {
        assert!(b.denom() > &BigInt::zero());
        assert!(b.numer().gcd(b.denom()).is_one(), "B_{n} = {b}");
    }
}

#[test]
fn bernoulli_signs_alternate() {
    // sign(B_{2m}) = (-1)^{m+1}
    for m in 1..=60u32 {
        let b = bernoulli(2 * m);
        let positive = b > BigRational::zero();
        assert_eq!(positive, m % 2 == 1, "B_{}", 2 * m);
    }
}

#[test]
fn bernoulli_1000_is_fast_and_exact_in_structure() {
    let start = std::time::Instant::now();
    let b = bernoulli(1000);
    assert!(start.elapsed().as_secs() < 30);
    // Von Staudt-Clausen: the denominator of B_1000 is the product of primes p with (p-1) | 1000.
    let primes = [2u32, 3, 5, 11, 41, 101, 251];
    let denom: u64 = primes.iter().map(|&p| p as u64).product();
    assert_eq!(b.denom(), &BigInt::from(denom));
}

#[test]
fn taylor_series_of_stirling_generating_function() {
    // (e^w - 1)^k / k! = sum_{n>=k} {n brace k} w^n / n!
    for k in 0..=8u32 {
        for &w in &[-0.5, -0.25, 0.1, 0.3, 0.5] {
            let closed = (f64::exp(w) - 1.0).powi(k as i32) / factorial(k).to_f64().unwrap();
            let mut series = 0.0;
            for n in k..=40 {
                let coeff = BigRational::new(stirling2(n, k as i64).into(), factorial(n).into());
                series += coeff.to_f64().unwrap() * w.powi(n as i32);
            }
            assert!(
                (series - closed).abs() < 1e-12,
                "k={k} w={w}: {series} vs {closed}"
            );
        }
    }
}

#[test]
fn binomial_matches_pascal() {
    let mut row = vec![1u64];
    for n in 0..=40u32 {
        for (k, &v) in row.iter().enumerate() {
            assert_eq!(binomial(n, k as i64), v.into());
        }
        let mut next = vec![1u64; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
}

proptest! {
    #[test]
    fn stirling_triangle_recurrence(n in 1u32..60, k in 1i64..60) {
        let lhs = stirling2(n, k);
        let rhs = stirling2(n - 1, k - 1) + stirling2(n - 1, k) * (k as u64);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bernoulli_recurrence_holds(n in 1u32..80) {
        let mut sum = BigRational::zero();
        for j in 0..=n {
            sum += BigRational::from_integer(binomial(n + 1, j as i64).into()) * bernoulli(j);
        }
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn bell_polynomial_is_the_stirling_sum(n in 0u32..25, p in -20i64..20, q in 1i64..20) {
        let x = rat(p, q);
        let mut direct = if n == 0 { BigRational::one() } else { BigRational::zero() };
        let mut power = x.clone();
        for k in 1..=n {
            direct += BigRational::from_integer(stirling2(n, k as i64).into()) * &power;
            power *= &x;
        }
        prop_assert_eq!(bell_polynomial_eval(n, &x), direct);
    }
}
