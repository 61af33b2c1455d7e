mod common;

use proptest::prelude::*;
use qforms::quasimodular::{
    decompose, poly_from_json, qm_expand, recognize, required_truncation, Recognition,
};
use qforms::{QMPoly, QSeries};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn expansion_is_a_ring_map(seed in any::<u64>()) {
        let mut g = common::rng(seed);
        let a = common::random_poly(&mut g, 10);
        let b = common::random_poly(&mut g, 10);
        let t = 40;
        prop_assert_eq!(qm_expand(&a.mul(&b), t), qm_expand(&a, t).mul(&qm_expand(&b, t)));
        prop_assert_eq!(qm_expand(&a.add(&b), t), qm_expand(&a, t).add(&qm_expand(&b, t)));
    }

    #[test]
    fn recognition_inverts_expansion(seed in any::<u64>()) {
        let mut g = common::rng(seed);
        let p = common::random_poly(&mut g, 12);
        let s = qm_expand(&p, required_truncation(12));
        prop_assert_eq!(recognize(&s, 12).unwrap(), Recognition::Form(p));
    }

    #[test]
    fn decomposition_round_trips(seed in any::<u64>()) {
        let mut g = common::rng(seed);
        let p = common::random_poly(&mut g, 18);
        prop_assert_eq!(decompose(&p).expand(80), qm_expand(&p, 80));
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let mut g = common::rng(seed);
        let p = common::random_poly(&mut g, 14);
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(poly_from_json(&text).unwrap(), p.clone());
        let s = qm_expand(&p, 12);
        let back: QSeries = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn delta_derivative_is_cuspidal() {
    let d = decompose(&qforms::quasimodular::delta_poly().derivative());
    assert!(d.eisenstein_part.is_empty());
    assert_eq!(d.cusp_part.len(), 1);
    assert_eq!(d.cusp_part[0].order, 1);
    assert!(decompose(&QMPoly::g2().pow(3)).is_eisenstein());
}
