//! CM points and singular moduli `j(α_Q)`.

use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::QuadForm;
use crate::mp::{MpComplex, MpCtx};
use crate::qseries::forms::{delta, eisenstein_qexp, j_value};
use crate::qseries::ModularPoint;
use crate::{Error, Result};

/// A form together with its root `α_Q = (−b + i√|disc|)/(2a)` in `ℍ`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HeegnerPoint {
    pub form: QuadForm,
    pub alpha_u: f64,
    pub alpha_v: f64,
}

impl HeegnerPoint {
    pub fn new(form: QuadForm) -> Self {
        let a2 = 2.0 * form.a as f64;
        HeegnerPoint {
            form,
            alpha_u: -form.b as f64 / a2,
            alpha_v: ((-form.disc()) as f64).sqrt() / a2,
        }
    }

    pub fn alpha(&self) -> ModularPoint {
        ModularPoint::new(self.alpha_u, self.alpha_v)
    }
}

/// `j(α_Q)` in double precision, evaluated at the reduced representative
/// (largest imaginary part in the orbit).
///
/// Fails when `tol` is below the rounding floor of the q-series sum,
/// which is about `1e−15·|q|^{−1}`.
pub fn singular_modulus(q: &QuadForm, tol: f64) -> Result<Complex64> {
    let (r, _) = q.reduce();
    let alpha = HeegnerPoint::new(r).alpha();
    let floor = 1e-15 * (2.0 * std::f64::consts::PI * alpha.v).exp();
    if tol < floor {
        return Err(Error::ToleranceUnreachable {
            tol,
            reason: format!("q-series rounding floor {floor:.1e} at {r}"),
        });
    }
    Ok(j_value(alpha))
}

const MP_TERMS: i64 = 700;

/// Integer coefficients of `E4` and of `Δ/q`, shared by all precisions.
fn integer_tables() -> &'static (Vec<i64>, Vec<i64>) {
    static T: OnceLock<(Vec<i64>, Vec<i64>)> = OnceLock::new();
    T.get_or_init(|| {
        let e4 = eisenstein_qexp(4, MP_TERMS).expect("weight 4");
        let dl = delta(MP_TERMS + 1);
        let to_i64 = |c: &num_rational::BigRational| c.to_integer().to_i64().expect("fits i64");
        (e4.coeffs().iter().map(to_i64).collect(), dl.coeffs().iter().map(to_i64).collect())
    })
}

/// `j(α_Q) = E4³/Δ` at the reduced representative, in the working
/// precision of `ctx`.
pub fn singular_modulus_mp(ctx: &mut MpCtx, q: &QuadForm) -> Result<MpComplex> {
    let (r, _) = q.reduce();
    // q = exp(2πiα) = exp(−π√|disc|/a)·exp(−iπb/a)
    let pi = ctx.pi();
    let sqrt_d = ctx.sqrt(&ctx.int(-r.disc()));
    let bits = ctx.bits;
    let rm = astro_float::RoundingMode::ToEven;
    let a = ctx.int(r.a);
    let modulus_log = pi.mul(&sqrt_d, bits, rm).div(&a, bits, rm).neg();
    let modulus = ctx.exp(&modulus_log);
    let arg = pi.mul(&ctx.int(-r.b), bits, rm).div(&a, bits, rm);
    let qq = ctx.polar(&modulus, &arg);
    // |q|^N < 2^{−bits−32}
    let decay = std::f64::consts::PI * ((-r.disc()) as f64).sqrt() / r.a as f64;
    let n = ((bits as f64 + 32.0) * std::f64::consts::LN_2 / decay).ceil() as usize + 2;
    let (e4, dl) = integer_tables();
    if n >= e4.len() {
        return Err(Error::PrecisionExhausted { bits });
    }
    let horner = |ctx: &MpCtx, c: &[i64]| {
        let mut acc = ctx.zero();
        for &k in c[..n].iter().rev() {
            acc = ctx.mul(&acc, &qq);
            acc.re = acc.re.add(&ctx.int(k), bits, rm);
        }
        acc
    };
    let e = horner(ctx, e4);
    let d = ctx.mul(&horner(ctx, dl), &qq);
    let e3 = ctx.mul(&ctx.mul(&e, &e), &e);
    Ok(ctx.div(&e3, &d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqf::class_reps;
    use crate::mp::{round_to_bigint, to_f64};
    use num_bigint::BigInt;

    /// Classical integral singular moduli for class number one.
    const CLASS_ONE: [(i64, i64); 9] = [
        (-3, 0),
        (-4, 1728),
        (-7, -3375),
        (-8, 8000),
        (-11, -32768),
        (-19, -884736),
        (-43, -884736000),
        (-67, -147197952000),
        (-163, -262537412640768000),
    ];

    #[test]
    fn heegner_point_is_root() {
        let q = QuadForm::new(2, 1, 2).unwrap();
        let z = HeegnerPoint::new(q).alpha().to_complex();
        let val = 2.0 * z * z + z + 2.0;
        assert!(val.norm() < 1e-14);
    }

    #[test]
    fn double_precision_values() {
        for (d, j) in CLASS_ONE {
            let q = class_reps(d).unwrap()[0];
            let v = singular_modulus(&q, 1e-3 * (j as f64).abs().max(1.0)).unwrap();
            let tol = 1e-3 * (j as f64).abs().max(1.0);
            assert!((v - j as f64).norm() < tol, "disc {d}: {v}");
        }
        assert!(singular_modulus(&class_reps(-4).unwrap()[0], 1e-20).is_err());
    }

    #[test]
    fn multiprecision_values_are_exact_integers() {
        let mut ctx = MpCtx::new(192);
        for (d, j) in CLASS_ONE {
            let q = class_reps(d).unwrap()[0];
            let v = singular_modulus_mp(&mut ctx, &q).unwrap();
            assert_eq!(round_to_bigint(&v.re), BigInt::from(j), "disc {d}");
            assert!(to_f64(&v.im).abs() < 1e-30);
        }
    }

    #[test]
    fn orbit_independence() {
        // a non-reduced form gives the same value as its reduction
        let q = QuadForm::new(4, -1, 1).unwrap();
        let mut ctx = MpCtx::new(128);
        let v = singular_modulus_mp(&mut ctx, &q).unwrap();
        let w = singular_modulus(&q, 1e-3).unwrap();
        assert!((to_f64(&v.re) - w.re).abs() < 1e-6 * w.norm());
    }
}
