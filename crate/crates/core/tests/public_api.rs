//! Cross-module checks through the public API.

use num_complex::Complex64;

use divsum::borcherds::CmProduct;
use divsum::bqf::{class_reps, singular_modulus, QuadForm};
use divsum::level11::{weight2_form, Level11};
use divsum::qseries::forms::{faber_jn, j_value};
use divsum::qseries::{rat, QSeries, Rat};
use divsum::regint::{reg_inner, RegIntegralSpec, TailModel};
use divsum::{Error, ModularPoint};

#[test]
fn class_number_one_singular_moduli() {
    for (disc, j) in [(-3, 0.0), (-4, 1728.0), (-7, -3375.0), (-8, 8000.0), (-11, -32768.0)] {
        let reps = class_reps(disc).unwrap();
        assert_eq!(reps.len(), 1);
        let v = singular_modulus(&reps[0], 1e-6).unwrap();
        assert!((v.re - j).abs() <= 1e-9 * j.abs().max(1.0) && v.im.abs() < 1e-6, "{disc}: {v}");
    }
    // Double precision cannot certify j((1 + √−163)/2) to 1e−6; the
    // multiprecision route is needed there.
    let q = class_reps(-163).unwrap()[0];
    assert!(matches!(singular_modulus(&q, 1e-6), Err(Error::ToleranceUnreachable { .. })));
}

#[test]
fn hecke_system_agrees_with_values_of_j() {
    // j_2 = j² − 1488j + 159840 pointwise.
    let tau = ModularPoint::new(0.1, 1.3);
    let j = j_value(tau);
    let j2 = faber_jn(2, 60).to_complex().evaluate_tol(tau, 1e-9).unwrap();
    let poly = j * j - 1488.0 * j + Complex64::new(159840.0, 0.0);
    assert!((j2 - poly).norm() < 1e-8 * poly.norm());
}

#[test]
fn cm_product_is_normalized_at_the_cusp() {
    let p = CmProduct::new(-4, 5).unwrap();
    // Ψ = 1 + O(q); at v = 4, |q| ≈ 1.2e−11.
    let far = p.eval(ModularPoint::new(0.2, 4.0));
    assert!((far - 1.0).norm() < 1e-3, "{far}");
    let farther = p.eval(ModularPoint::new(0.2, 5.0));
    assert!((farther - 1.0).norm() < (far - 1.0).norm());
    let q = QuadForm::new(1, 0, 5).unwrap();
    assert_eq!(q.disc(), -20);
}

#[test]
fn level11_basis_and_weight2_form() {
    let f = weight2_form(10);
    assert_eq!(f.coeff(0), rat(1, 1));
    let b = Level11::new(8, 2).basis(2).unwrap();
    assert_eq!(b.a_minus1, rat(2, 1));
    assert_eq!(b.series.coeff(1), rat(5, 1));
}

#[test]
fn series_json_round_trip() {
    let s = faber_jn(3, 6);
    let back = QSeries::<Rat>::from_json(&s.to_json()).unwrap();
    assert_eq!(back, s);
}

#[test]
fn regularized_volume() {
    let spec = RegIntegralSpec {
        integrand: Box::new(|_| Complex64::new(1.0, 0.0)),
        y: 6.0,
        singular_points: vec![],
        tail_model: TailModel::LogLinear,
        tol: 1e-10,
    };
    let r = reg_inner(&spec).unwrap();
    assert!((r.value.re - std::f64::consts::PI / 3.0).abs() < 1e-9);
}
