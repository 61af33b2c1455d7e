use qforms::omega::{
    dh_span_solve, h_form, h_series, omega_check, verify_certificate, Certificate, SpanResult,
};
use qforms::quasimodular::{delta_poly, qm_expand};
use qforms::{HFormId, OmegaInput, OmegaVerdict, QMPoly, Rational, Status};

#[test]
fn verdict_json_shape() {
    let v = omega_check(&OmegaInput::Poly(QMPoly::g4()), 30).unwrap();
    let json = serde_json::to_value(&v).unwrap();
    assert_eq!(json["status"], "REJECT_COEFFICIENT");
    assert_eq!(json["certificate"]["kind"], "coefficient");
    assert_eq!(json["certificate"]["index"], 2);
    assert_eq!(json["certificate"]["value"], "9");
    let back: OmegaVerdict = serde_json::from_value(json).unwrap();
    assert_eq!(back, v);
}

#[test]
fn accept_records_cutoff_and_note() {
    let id = HFormId::new(10, 1).unwrap();
    let input = OmegaInput::Poly(h_form(id, 10).poly);
    let v = omega_check(&input, 300).unwrap();
    assert_eq!(v.status, Status::AcceptUpTo);
    assert_eq!(v.weight_bound, 12);
    assert_eq!(v.cutoff, 16);
    assert!(v.note.contains("bound"));
    match &v.certificate {
        Certificate::Accept { combination, .. } => {
            assert_eq!(combination.terms.len(), 1);
            assert_eq!(combination.coefficient(10, 1), Rational::from_integer(1.into()));
        }
        other => panic!("{other:?}"),
    }
    verify_certificate(&input, &v).unwrap();
}

#[test]
fn cusp_forms_are_outside_the_h_span() {
    let t = 200;
    let s = h_series(HFormId { k: 12, deriv: 0 }, t).add(&qm_expand(&delta_poly(), t));
    assert!(matches!(dh_span_solve(&s, 12).unwrap(), SpanResult::Residual(_)));
    let v = omega_check(&OmegaInput::Series { series: s, weight_bound: 12 }, t).unwrap();
    assert_eq!(v.status, Status::RejectCuspidal);
}

#[test]
fn positive_combinations_are_accepted() {
    let p = h_form(HFormId { k: 6, deriv: 0 }, 0)
        .poly
        .scale(&Rational::from_integer(3.into()))
        .add(&h_form(HFormId { k: 8, deriv: 2 }, 0).poly);
    let input = OmegaInput::Poly(p);
    let v = omega_check(&input, 500).unwrap();
    assert_eq!(v.status, Status::AcceptUpTo);
    verify_certificate(&input, &v).unwrap();
}
