mod common;

use qforms::number_theory::{bernoulli, divisors, is_prime, prime_sieve, sigma, sigma_table};
use qforms::Rational;

#[test]
fn primality_agrees_with_naive_trial() {
    let sieve = prime_sieve(5000);
    for n in 0..=5000u64 {
        assert_eq!(is_prime(n), common::prime_naive(n), "n={n}");
        assert_eq!(sieve[n as usize], is_prime(n));
    }
}

#[test]
fn sigma_agrees_with_naive_sum() {
    for nu in 0..=9 {
        let table = sigma_table(nu, 400);
        for n in 1..=400u64 {
            let naive = common::sigma_naive(nu, n);
            assert_eq!(sigma(nu, n), naive);
            assert_eq!(table[n as usize], naive);
        }
    }
    assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
}

#[test]
fn bernoulli_values() {
    let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
    assert_eq!(bernoulli(0), r(1, 1));
    assert_eq!(bernoulli(2), r(1, 6));
    assert_eq!(bernoulli(12), r(-691, 2730));
    assert_eq!(bernoulli(13), r(0, 1));
    // sum_{j<m} C(m+1, j) B_j = -(m+1) B_m
    for m in 1..30usize {
        let mut acc = Rational::from_integer(0.into());
        let mut binom = num_bigint::BigInt::from(1);
        for j in 0..=m {
            acc += Rational::from_integer(binom.clone()) * bernoulli(j);
            binom = binom * (m + 1 - j) / (j + 1);
        }
        assert_eq!(acc, Rational::from_integer(0.into()), "m={m}");
    }
}
