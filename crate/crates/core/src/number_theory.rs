//! Divisor sums, Bernoulli numbers and primality.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::series::Rational;

/// Ascending list of the positive divisors of `n`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of 0 are not defined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `sigma_nu(n) = sum of d^nu over the divisors d of n`.
pub fn sigma(nu: u32, n: u64) -> BigInt {
    assert!(n >= 1, "sigma is defined for n >= 1");
    divisors(n).into_iter().map(|d| BigInt::from(d).pow(nu)).sum()
}

/// `sigma_nu(n)` for every `0 <= n <= limit`, with the unused slot 0 set to zero.
pub fn sigma_table(nu: u32, limit: usize) -> Vec<BigInt> {
    let mut table = vec![BigInt::zero(); limit + 1];
    for d in 1..=limit {
        let p = BigInt::from(d).pow(nu);
        for m in (d..=limit).step_by(d) {
            table[m] += &p;
        }
    }
    table
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Sieve of Eratosthenes: entry `n` is true iff `n` is prime.
pub fn prime_sieve(limit: usize) -> Vec<bool> {
    let mut sieve = vec![true; limit + 1];
    sieve[0] = false;
    if limit >= 1 {
        sieve[1] = false;
    }
    let mut p = 2;
    while p * p <= limit {
        if sieve[p] {
            for m in (p * p..=limit).step_by(p) {
                sieve[m] = false;
            }
        }
        p += 1;
    }
    sieve
}

pub fn primes_up_to(limit: usize) -> Vec<usize> {
    prime_sieve(limit).into_iter().enumerate().filter_map(|(n, p)| p.then_some(n)).collect()
}

fn bernoulli_memo() -> &'static Mutex<Vec<Rational>> {
    static MEMO: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_m` with the convention `B_1 = -1/2`.
///
/// Computed from `sum_{j=0}^{m} C(m+1, j) B_j = 0` and memoized.
pub fn bernoulli(m: usize) -> Rational {
    let mut memo = bernoulli_memo().lock().unwrap_or_else(|e| e.into_inner());
    while memo.len() <= m {
        let k = memo.len();
        // row of binomials C(k+1, j) for j = 0..k
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (j, b) in memo.iter().enumerate() {
            acc += b * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        // binom is now C(k+1, k) = k+1
        let next = -acc / Rational::from_integer(binom);
        memo.push(next);
    }
    memo[m].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use proptest::prelude::*;

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(1, 1), BigInt::from(1));
        assert_eq!(sigma(3, 6), BigInt::from(1 + 8 + 27 + 216));
        assert_eq!(sigma(1, 97), BigInt::from(98));
        assert_eq!(sigma(0, 12), BigInt::from(6));
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(97), vec![1, 97]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli(3), rat(0, 1));
    }

    #[test]
    fn primality_small_cases() {
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(!is_prime(5041));
        assert!(is_prime(9_999_991));
    }

    #[test]
    fn trial_division_matches_sieve() {
        let sieve = prime_sieve(1_000_000);
        for (n, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "n = {n}");
        }
    }

    #[test]
    fn sigma_matches_divisor_sum_and_table() {
        for nu in 0..=7 {
            let table = sigma_table(nu, 1000);
            for n in 1..=1000u64 {
                let direct: BigInt = (1..=n).filter(|d| n % d == 0).map(|d| BigInt::from(d).pow(nu)).sum();
                assert_eq!(sigma(nu, n), direct);
                assert_eq!(table[n as usize], direct);
            }
        }
    }

    proptest! {
        #[test]
        fn sigma_is_multiplicative(m in 1u64..400, n in 1u64..400, nu in 0u32..6) {
            prop_assume!(num_integer::gcd(m, n) == 1);
            prop_assert_eq!(sigma(nu, m * n), sigma(nu, m) * sigma(nu, n));
        }
    }
}
