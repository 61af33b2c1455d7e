#![allow(dead_code)]

use num_bigint::BigInt;
use qforms::quasimodular::monomials_up_to;
use qforms::{QMPoly, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    let mut n: i64 = rng.gen_range(-9..=9);
    if n == 0 {
        n = 1;
    }
    Rational::new(BigInt::from(n), BigInt::from(rng.gen_range(1..=6)))
}

/// A few monomials of mixed weight `<= max_weight` with small coefficients.
pub fn random_poly(rng: &mut impl Rng, max_weight: u32) -> QMPoly {
    let basis = monomials_up_to(max_weight);
    let count = rng.gen_range(1..=6);
    let mut p = QMPoly::zero();
    for m in basis.choose_multiple(rng, count) {
        p = p.add(&QMPoly::term(*m, small_rational(rng)));
    }
    p
}

/// Divisor sum by trial over `1..=n`.
pub fn sigma_naive(nu: u32, n: u64) -> BigInt {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| BigInt::from(d).pow(nu)).sum()
}

/// Primality by trial over every smaller integer.
pub fn prime_naive(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}
