mod common;

use num_bigint::BigInt;
use qforms::macmahon::{macmahon_M, macmahonesque_M, search, SearchOptions, U_series, U_vec_series};
use qforms::omega::h_coeff;
use qforms::{MMExpression, PartVector, Rational};
use rand::Rng;

#[test]
fn u_series_matches_enumeration() {
    for a in 1..=3 {
        let s = U_series(a, 200);
        for n in 0..=200 {
            assert_eq!(s.coeffs()[n], Rational::from_integer(macmahon_M(a, n as u64)), "a={a} n={n}");
        }
    }
}

#[test]
fn vector_series_match_enumeration() {
    let mut g = common::rng(11);
    for _ in 0..10 {
        let len = g.gen_range(1..=3);
        let v = PartVector::new((0..len).map(|_| g.gen_range(0..=3)).collect()).unwrap();
        let s = U_vec_series(&v, 120);
        for n in 0..=120 {
            assert_eq!(s.coeffs()[n], Rational::from_integer(macmahonesque_M(&v, n as u64)), "{v} n={n}");
        }
    }
}

#[test]
fn degree_two_is_six_h6() {
    let e = MMExpression::parse("builtin:1").unwrap();
    let values = e.eval_range(300);
    for n in 1..=300u64 {
        assert_eq!(values[n as usize], Rational::from_integer(6.into()) * h_coeff(6, n));
        let bridge = common::sigma_naive(3, n) - BigInt::from(2 * n - 1) * common::sigma_naive(1, n);
        assert_eq!(BigInt::from(8) * macmahon_M(2, n), bridge);
    }
}

#[test]
fn search_finds_verified_primitive_vectors() {
    let r = search(SearchOptions {
        weight_bound: 6,
        verification_bound: 120,
        prime_bound: 60,
        cross_certify: true,
    })
    .unwrap();
    assert_eq!(r.vectors.len(), 63);
    assert!(r.refined_dim <= r.nullspace_dim);
    for hit in &r.hits {
        assert!(hit.verification.passed);
        let content = hit.coeffs.iter().fold(BigInt::from(0), |g, c| num_integer::Integer::gcd(&g, c));
        assert_eq!(content, BigInt::from(1));
        assert!(hit.cross_certification.is_some());
    }
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"norm\":\"sum(v_i + 1)\""));
}
