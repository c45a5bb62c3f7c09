use super::forms::*;
use super::*;
use crate::arith::sigma;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_integer(x.into())).collect()
}

fn series(ell: u32, v0: i64, v: &[i64]) -> QSeries<Rat> {
    QSeries::from_coeffs(ell, v0, ints(v))
}

#[test]
fn basic_products() {
    let a = series(1, -1, &[1, 24, 0, 0]);
    let q = series(1, 1, &[1, 0, 0, 0]);
    let p = a.mul(&q).unwrap();
    assert_eq!(p.valuation(), 0);
    assert_eq!(p.coeffs()[..2], ints(&[1, 24])[..]);
    let d = delta(30);
    let one = d.mul(&d.inverse().unwrap()).unwrap();
    assert_eq!(one.coeff(0), Rat::one());
    for n in 1..one.prec() {
        assert!(one.coeff(n).is_zero());
    }
}

#[test]
fn zero_series_and_errors() {
    let z: QSeries<Rat> = QSeries::zero(1, 5);
    assert!(z.is_zero());
    assert_eq!(z.inverse().unwrap_err(), Error::DivisionByZero);
    assert_eq!(z.theta_log_deriv().unwrap_err(), Error::DivisionByZero);
    let a = series(1, 0, &[1, 2, 3]);
    assert!(a.mul(&z).unwrap().is_zero());
}

#[test]
fn delta_coefficients() {
    let d = delta(6);
    assert_eq!(d.valuation(), 1);
    assert_eq!(d.coeffs(), &ints(&[1, -24, 252, -1472, 4830])[..]);
}

#[test]
fn delta_against_repeated_euler_product() {
    // Oracle: multiply ∏(1 − qⁿ) (built factor by factor) 24 times.
    let prec = 25usize;
    let mut e = vec![0i64; prec];
    e[0] = 1;
    for n in 1..prec {
        for k in (n..prec).rev() {
            e[k] -= e[k - n];
        }
    }
    let mut acc = vec![0i128; prec];
    acc[0] = 1;
    for _ in 0..24 {
        let mut next = vec![0i128; prec];
        for i in 0..prec {
            for k in 0..prec - i {
                next[i + k] += acc[i] * e[k] as i128;
            }
        }
        acc = next;
    }
    let d = delta(prec as i64 + 1);
    for n in 0..prec {
        assert_eq!(d.coeff(n as i64 + 1), Rat::from_integer((acc[n] as i64).into()));
    }
}

#[test]
fn eta_pentagonal_and_h11() {
    let e = eta_expand(&EtaQuotient::new(1, vec![(1, 1)]).unwrap(), 16);
    assert_eq!(e.prefactor24(), 1);
    let expect = [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1];
    assert_eq!(e.coeffs(), &ints(&expect)[..]);
    let h = eta_expand(&EtaQuotient::h11(), 10).absorb_prefactor();
    assert_eq!(h.valuation(), 1);
    assert_eq!(h.ell(), 1);
    assert_eq!(h.coeffs()[..4], ints(&[1, -2, -1, 2])[..]);
}

#[test]
fn eisenstein_normalizations() {
    let e2 = eisenstein_qexp(2, 10).unwrap();
    assert_eq!(e2.coeff(2), Rat::from_integer((-72).into()));
    assert_eq!(e2_level(11, 10).coeff(0), Rat::from_integer((-10).into()));
    let e4 = eisenstein_qexp(4, 30).unwrap();
    assert_eq!(e4.coeff(1), Rat::from_integer(240.into()));
    // Ramanujan: Θ E4 = (E2 E4 − E6)/3.
    let e6 = eisenstein_qexp(6, 30).unwrap();
    let rhs = e2.truncate(10).unwrap().mul(&e4).unwrap().sub(&e6).unwrap().scale(&rat(1, 3));
    let lhs = e4.theta().truncate(10).unwrap();
    assert_eq!(lhs, rhs.truncate(10).unwrap());
    assert!(eisenstein_qexp(8, 5).is_err());
}

#[test]
fn j_expansion() {
    let j = j_invariant(4);
    assert_eq!(j.valuation(), -1);
    assert_eq!(j.coeffs(), &ints(&[1, 744, 196884, 21493760, 864299970])[..]);
    // j₁ = j − 720
    let j1 = faber_jn(1, 4);
    assert_eq!(j1.coeffs(), &ints(&[1, 24, 196884, 21493760, 864299970])[..]);
}

#[test]
fn hecke_system_normalization() {
    let hs = hecke_system(20, 3);
    for (i, s) in hs.series.iter().enumerate() {
        let n = i as i64 + 1;
        assert_eq!(s.valuation(), -n);
        assert_eq!(s.coeff(-n), Rat::one());
        for m in (-n + 1)..0 {
            assert!(s.coeff(m).is_zero(), "j_{n} has q^{m}");
        }
        assert_eq!(s.coeff(0), Rat::from_integer(sigma(1, n as u64) * 24));
    }
    // j₂ = j² − 1488 j + 159840 = q^{−2} + 72 + 42987520 q + 40491909396 q² + …
    assert_eq!(hs.polys[1], ints(&[159840, -1488, 1]));
    assert_eq!(hs.series[1].coeff(1), Rat::from_integer(42987520.into()));
    assert_eq!(hs.series[1].coeff(2), Rat::from_integer(40491909396i64.into()));
}

#[test]
fn divisor_identity_level_one() {
    // j_n(ρ)/3 = −Coeff_{qⁿ}(ΘE4/E4), with j(ρ) = 0.
    let hs = hecke_system(10, 2);
    let e4 = eisenstein_qexp(4, 12).unwrap();
    let ld = e4.theta_log_deriv().unwrap();
    for n in 1..=10 {
        let at_rho = hs.polys[n - 1][0].clone();
        assert_eq!(at_rho / Rat::from_integer(3.into()), -ld.coeff(n as i64), "n = {n}");
    }
}

#[test]
fn theta_log_deriv_examples() {
    let q5 = series(1, 5, &[1, 0, 0]);
    let t = q5.theta_log_deriv().unwrap();
    assert_eq!(t.coeff(0), Rat::from_integer(5.into()));
    assert!(t.coeff(1).is_zero());
    // ΘΔ/Δ = E2
    let d = delta(52);
    let t = d.theta_log_deriv().unwrap();
    assert_eq!(t.truncate(50).unwrap(), eisenstein_qexp(2, 50).unwrap());
    // Raw eta product: the prefactor contributes 1/24.
    let e = eta_expand(&EtaQuotient::new(1, vec![(1, 1)]).unwrap(), 20);
    let t = e.theta_log_deriv().unwrap();
    assert_eq!(t.coeff(0), rat(1, 24));
    assert_eq!(t.coeff(1), Rat::from_integer((-1).into()));
}

#[test]
fn fractional_exponents_and_prefactor() {
    // η(τ) η(τ)^{23} = Δ even when prefactors are added.
    let e1 = eta_expand(&EtaQuotient::new(1, vec![(1, 1)]).unwrap(), 10);
    let e23 = eta_expand(&EtaQuotient::new(1, vec![(1, 23)]).unwrap(), 10);
    let p = e1.mul(&e23).unwrap().absorb_prefactor();
    assert_eq!(p, delta(11));
    // Adding series with different prefactors goes through a common ℓ.
    let s = e1.add(&e1.at_multiple(2)).unwrap();
    assert_eq!(s.ell(), 24);
    assert_eq!(s.coeff(1), Rat::one());
    assert_eq!(s.coeff(2), Rat::one());
    let r = series(1, 0, &[1, 0, 3, 0, 5]).rescale(3).simplify_ell();
    assert_eq!(r, series(1, 0, &[1, 0, 3, 0, 5]));
}

#[test]
fn json_round_trip() {
    let j = j_invariant(5);
    let back = QSeries::<Rat>::from_json(&j.to_json()).unwrap();
    assert_eq!(back, j);
    let c = j.to_complex();
    let back = QSeries::<Complex64>::from_json(&c.to_json()).unwrap();
    assert_eq!(back, c);
    let half = series(2, -1, &[1, 0, 1]).scale(&rat(1, 2));
    assert_eq!(half.to_json()["coeffs"][0], "1/2");
}

#[test]
fn evaluation_at_special_points() {
    let i = ModularPoint::new(0.0, 1.0);
    let rho = ModularPoint::new(0.5, 3f64.sqrt() / 2.0);
    let j = j_invariant(60);
    assert!((j.evaluate_tol(i, 1e-6).unwrap() - 1728.0).norm() < 1e-6);
    assert!(j.evaluate_tol(rho, 1e-6).unwrap().norm() < 1e-6);
    // E4³/Δ evaluated separately at i where E6 vanishes.
    let e4 = eisenstein_qexp(4, 60).unwrap().evaluate(i).value;
    let d = delta_product(i);
    assert!((e4.powi(3) / d - 1728.0).norm() < 1e-8);
    assert!(d.re > 0.0 && d.im.abs() < 1e-20);
    assert!((j_value(i) - 1728.0).norm() < 1e-9);
    assert!(j_value(rho).norm() < 1e-9);
    assert!(e6_value(i).unwrap().norm() < 1e-13);
    // Too short a series at small v is rejected.
    assert!(j_invariant(10).evaluate_tol(ModularPoint::new(0.1, 0.3), 1e-6).is_err());
}

#[test]
fn evaluation_respects_modularity() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let j = j_invariant(120).to_complex();
    for _ in 0..20 {
        let t = ModularPoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.9..1.6));
        let a = j.evaluate(t).value;
        let b = j.evaluate(ModularPoint::new(t.u + 1.0, t.v)).value;
        let c = j.evaluate(ModularPoint::from_complex(-1.0 / t.to_complex())).value;
        assert!((a - b).norm() < 1e-8 * a.norm().max(1.0));
        assert!((a - c).norm() < 1e-6 * a.norm().max(1.0), "{t}: {a} {c}");
    }
}

fn arb_series() -> impl Strategy<Value = QSeries<Rat>> {
    (-2i64..3, proptest::collection::vec(-20i64..20, 8..12)).prop_map(|(v0, mut c)| {
        if c[0] == 0 {
            c[0] = 1;
        }
        QSeries::from_coeffs(1, v0, ints(&c))
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        let p = l.prec().min(r.prec());
        prop_assert_eq!(l.truncate(p).unwrap(), r.truncate(p).unwrap());
        let l = a.mul(&b.add(&c).unwrap()).unwrap();
        let r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        let p = l.prec().min(r.prec());
        prop_assert_eq!(l.truncate(p).unwrap(), r.truncate(p).unwrap());
    }

    #[test]
    fn theta_is_a_derivation(a in arb_series(), b in arb_series()) {
        let l = a.mul(&b).unwrap().theta_log_deriv().unwrap();
        let r = a.theta_log_deriv().unwrap().add(&b.theta_log_deriv().unwrap()).unwrap();
        let p = l.prec().min(r.prec());
        prop_assert_eq!(l.truncate(p).unwrap(), r.truncate(p).unwrap());
    }

    #[test]
    fn inverse_and_powers(a in arb_series(), k in -3i64..4) {
        let pk = a.pow(k).unwrap();
        let back = pk.mul(&a.pow(-k).unwrap()).unwrap();
        prop_assert_eq!(back.coeff(0), Rat::one());
        for n in 1..back.prec() {
            prop_assert!(back.coeff(n).is_zero());
        }
    }
}
