use super::*;
use crate::modcurve::{elliptic_counts, index_gamma0};
use crate::qseries::rat;

fn ints(s: &QSeries<Rat>, from: i64, to: i64) -> Vec<Rat> {
    (from..=to).map(|n| s.coeff(n)).collect()
}

#[test]
fn weight2_form_and_log_derivative() {
    let f = weight2_form(20);
    assert_eq!(f.coeff(0), rat(1, 1));
    let ld = f.theta_log_deriv().unwrap();
    assert_eq!(ints(&ld, 0, 4), vec![rat(0, 1), rat(0, 1), rat(24, 1), rat(36, 1), rat(-240, 1)]);
    let h = h11(8);
    assert_eq!(ints(&h, 1, 4), vec![rat(1, 1), rat(-2, 1), rat(-1, 1), rat(2, 1)]);
}

#[test]
fn fricke_table_holds_numerically() {
    let r = 1.0 / 11f64.sqrt();
    let pts: Vec<ModularPoint> = [1.3, 1.57, 1.8].iter().map(|&t: &f64| ModularPoint::new(r * t.cos(), r * t.sin())).collect();
    for row in fricke_table_check(&pts, 200).unwrap() {
        assert!(row.rel_err < 1e-8, "{row:?}");
    }
}

#[test]
fn basis_elements_have_expected_shape() {
    let ctx = Level11::new(12, 6);
    let f2 = ctx.basis(2).unwrap();
    assert_eq!(ints(&f2.series, -2, 2), vec![rat(1, 1), rat(2, 1), rat(0, 1), rat(5, 1), rat(8, 1)]);
    let h = h11(12);
    for m in 2..=6 {
        let b = ctx.basis(m).unwrap();
        assert_eq!(b.series.valuation(), -m);
        assert_eq!(b.series.coeff(0), rat(0, 1));
        assert!(b.fricke_valuation >= 0);
        assert!(b.series.is_integral(), "f_11,{m} not integral");
        // a(m, −1) = −b(m)
        assert_eq!(b.a_minus1, -h.coeff(m), "m = {m}");
    }
}

#[test]
fn algebraic_relation_in_degree_four() {
    let ctx = Level11::new(12, 4);
    let f2 = ctx.basis(2).unwrap().series;
    let f3 = ctx.basis(3).unwrap().series;
    let f4 = ctx.basis(4).unwrap().series;
    let four = rat(4, 1);
    let rhs = f2
        .mul(&f2)
        .unwrap()
        .sub(&f3.scale(&four))
        .unwrap()
        .sub(&f2.scale(&four))
        .unwrap()
        .add_constant(&rat(-36, 1))
        .unwrap();
    let diff = f4.sub(&rhs).unwrap();
    assert!(diff.coeffs().iter().all(|c| c.is_zero()), "{:?}", ints(&diff, -4, 5));
}

#[test]
fn coefficient_duality() {
    // m c_n(m) − n c_m(n) + a_m c_n(1) − a_n c_m(1) = 0, with c_m(n) the
    // q^n coefficient of f_11,m.
    let ctx = Level11::new(10, 6);
    let b: Vec<Basis11Element> = (2..=6).map(|m| ctx.basis(m).unwrap()).collect();
    for x in &b {
        for y in &b {
            let (m, n) = (x.m, y.m);
            let c = |e: &Basis11Element, k: i64| e.series.coeff(k);
            let r = rat(m, 1) * c(y, m) - rat(n, 1) * c(x, n) + &x.a_minus1 * c(y, 1) - &y.a_minus1 * c(x, 1);
            assert!(r.is_zero(), "m = {m}, n = {n}");
        }
    }
}

#[test]
fn rhs_values_are_exact() {
    let f = weight2_form(20);
    let ld = f.theta_log_deriv().unwrap();
    let h = h11(20);
    let want = [(2, -22), (3, -34), (4, 242)];
    for (m, v) in want {
        assert_eq!(bklor_rhs(m, 2, &ld, &h).unwrap(), rat(v, 1), "m = {m}");
    }
}

#[test]
fn zeros_match_closed_form() {
    let z = level11_zeros().unwrap();
    assert_eq!(z.len(), 2);
    let s = 19f64.sqrt() / 22.0;
    for (p, sign) in z.iter().zip([1.0, -1.0]) {
        let want = Complex64::new(sign * 5.0 / 22.0, s);
        assert!((p.to_complex() - want).norm() < 1e-6, "{p}");
    }
}

#[test]
fn identity_and_product() {
    let r = bklor_check(&[2, 3, 4]).unwrap();
    for row in &r.rows {
        assert!(row.abs_err < 1e-4, "{row:?}");
    }
    assert!((r.product - Complex64::new(197.0, 0.0)).norm() < 1e-4, "{}", r.product);
    // f_11,2(z±) are the roots of X² + 22X + 197.
    for [re, im] in &r.values_m2 {
        let x = Complex64::new(*re, *im);
        assert!((x * x + 22.0 * x + 197.0).norm() < 1e-3);
    }
}

#[test]
fn valence_of_weight2_form() {
    // Γ0(11) has no elliptic points; f is 1 at i∞ and −f at 0 under Fricke,
    // so both cusp orders vanish and the two simple zeros carry the full
    // weight (2/12)·12 = 2.
    assert_eq!(elliptic_counts(11), (0, 0));
    assert_eq!(index_gamma0(11), 12);
    let f = weight2_form(F_PREC);
    let df = f.theta().to_complex();
    let z = level11_zeros().unwrap();
    for p in &z {
        assert!(df.evaluate(*p).value.norm() > 1e-3, "zero at {p} not simple");
    }
    let total = z.len() as i64;
    assert_eq!(rat(total, 1), rat(2 * index_gamma0(11) as i64, 12));
}

#[test]
fn rejects_small_m() {
    assert!(matches!(Level11::new(8, 2).basis(1), Err(Error::OutOfRange(_))));
}
