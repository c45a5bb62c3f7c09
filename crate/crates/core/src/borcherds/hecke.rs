//! Half-integral weight Hecke operators on plus-space coefficient streams,
//! the multiplicative Hecke operator `𝒯(p)` on weight-zero functions, and
//! the equivariance check relating them through CM products.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::CmProduct;
use crate::arith::{is_prime, kronecker, Discriminant};
use crate::qseries::{serialize_complex, Coeff, ModularPoint, QSeries, Rat};
use crate::{Error, Result};

/// A series supported on exponents `≡ 0, 1 (mod 4)` (Kohnen's plus space).
#[derive(Debug, Clone, PartialEq)]
pub struct PlusSeries(QSeries<Rat>);

impl PlusSeries {
    pub fn new(s: QSeries<Rat>) -> Result<Self> {
        if s.ell() != 1 || s.prefactor24() != 0 {
            return Err(Error::OutOfRange("plus-space series must be integral-exponent".into()));
        }
        let v = s.valuation();
        for (i, c) in s.coeffs().iter().enumerate() {
            let n = v + i as i64;
            if !c.is_nil() && !matches!(n.rem_euclid(4), 0 | 1) {
                return Err(Error::OutOfRange(format!("coefficient at q^{n} violates the plus condition")));
            }
        }
        Ok(PlusSeries(s))
    }

    pub fn series(&self) -> &QSeries<Rat> {
        &self.0
    }
}

/// `p·T(p²)`: `c'(n) = p c(p²n) + (n/p) c(n) + c(n/p²)`, on the exponent
/// range where every term is determined by the input.
///
/// Only exponents `n ≡ 0, 1 (mod 4)` are kept. For odd `p` the others
/// vanish anyway; for `p = 2` this is the projection that makes the
/// operator act on the plus space.
pub fn hecke_halfint(f: &PlusSeries, p: u64) -> Result<PlusSeries> {
    if !is_prime(p) {
        return Err(Error::OutOfRange(format!("{p} is not prime")));
    }
    let s = &f.0;
    let p = p as i64;
    let p2 = p * p;
    let (v0, prec) = (s.valuation(), s.prec());
    let lo = if v0 < 0 { v0 * p2 } else { (v0 + p2 - 1) / p2 };
    let hi = (prec - 1).div_euclid(p2) + 1;
    if hi <= lo {
        return Err(Error::EmptyPrecision);
    }
    let get = |n: i64| if n < v0 { Rat::nil() } else { s.coeff(n) };
    let coeffs = (lo..hi)
        .map(|n| {
            if !matches!(n.rem_euclid(4), 0 | 1) {
                return Rat::nil();
            }
            let mut c = get(p2 * n).mul(&Rat::from_i64(p));
            let chi = kronecker(n, p);
            if chi != 0 {
                c = c.add(&get(n).mul(&Rat::from_i64(chi as i64)));
            }
            if n % p2 == 0 {
                c = c.add(&get(n / p2));
            }
            c
        })
        .collect();
    PlusSeries::new(QSeries::from_coeffs(1, lo, coeffs))
}

/// `𝒯(p)F(τ) = ∏_{ad=p} ∏_{b mod d} F((aτ + b)/d)` for prime `p`.
pub fn mult_hecke<F>(p: u64, f: F, tau: ModularPoint) -> Complex64
where
    F: Fn(ModularPoint) -> Complex64,
{
    let pf = p as f64;
    let mut prod = f(ModularPoint::new(pf * tau.u, pf * tau.v));
    for b in 0..p {
        prod *= f(ModularPoint::new((tau.u + b as f64) / pf, tau.v / pf));
    }
    prod
}

/// Series form of `𝒯(p)` for `F = q^{v}(1 + O(q))`, computed in
/// `q^{1/p}` and returned in `q` once the fractional exponents cancel.
pub fn mult_hecke_series(p: u64, f: &QSeries<Complex64>) -> Result<QSeries<Complex64>> {
    if f.ell() != 1 || f.prefactor24() != 0 {
        return Err(Error::OutOfRange("𝒯(p) expects a series in integral powers of q".into()));
    }
    if f.leading() != Some(&Complex64::new(1.0, 0.0)) {
        return Err(Error::LeadingCoefficient);
    }
    let pi = p as i64;
    let v0 = f.valuation();
    // F(pτ) in q^{1/p}: exponents n ↦ p²n.
    let mut acc = f.at_multiple(p as u32).rescale(p as u32);
    for b in 0..p {
        // F((τ + b)/p) = Σ cₙ e(bn/p) q^{n/p}
        let coeffs = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let n = v0 + i as i64;
                c * Complex64::from_polar(1.0, 2.0 * PI * ((b as i64 * n).rem_euclid(pi)) as f64 / p as f64)
            })
            .collect();
        acc = acc.mul(&QSeries::from_coeffs(p as u32, v0, coeffs))?;
    }
    // Fold back to integral exponents, checking that the others vanish.
    let scale: f64 = acc.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max);
    let (w0, prec) = (acc.valuation(), acc.prec());
    let lo = w0.div_euclid(pi) + i64::from(w0.rem_euclid(pi) != 0);
    let hi = (prec - 1).div_euclid(pi) + 1;
    for n in w0..prec {
        if n.rem_euclid(pi) != 0 && acc.coeff(n).norm() > 1e-9 * scale {
            return Err(Error::OutOfRange(format!("𝒯(p) left a term at q^({n}/{p})")));
        }
    }
    Ok(QSeries::from_coeffs(1, lo, (lo..hi).map(|n| acc.coeff(n * pi)).collect()))
}

/// `|Σ_{b mod D} (D/b) e(b/D) − √D|`, which must vanish for fundamental
/// `D > 1`; used before trusting the Gauss-sum normalization.
pub fn gauss_sum_check(big_d: i64) -> Result<f64> {
    Discriminant::fundamental(big_d)?;
    let s: Complex64 = (0..big_d)
        .map(|b| kronecker(big_d, b) as f64 * Complex64::from_polar(1.0, 2.0 * PI * b as f64 / big_d as f64))
        .sum();
    let err = (s - (big_d as f64).sqrt()).norm();
    if err > 1e-10 {
        return Err(Error::OutOfRange(format!("Gauss sum for D = {big_d} off by {err:e}")));
    }
    Ok(err)
}

/// Both sides of `𝒯(p)Ψ_D(f_d) = Ψ_D(f_{dp²}) Ψ_D(f_d)^{(d/p)} Ψ_D(f_{d/p²})^p`
/// at one point.
#[derive(Debug, Clone, Serialize)]
pub struct EquivarianceRow {
    pub u: f64,
    pub v: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub lhs: Complex64,
    #[serde(serialize_with = "serialize_complex")]
    pub rhs: Complex64,
    pub abs_err: f64,
}

/// Evaluate both sides of the Hecke equivariance of CM products at each
/// point. The factor for `d/p²` is dropped unless `p² | d` and `d/p²` is a
/// discriminant.
pub fn verify_equivariance(d: i64, big_d: i64, p: u64, taus: &[ModularPoint]) -> Result<Vec<EquivarianceRow>> {
    if !is_prime(p) {
        return Err(Error::OutOfRange(format!("{p} is not prime")));
    }
    if big_d % p as i64 == 0 {
        return Err(Error::PrimeDividesDiscriminant { p, d: big_d });
    }
    gauss_sum_check(big_d)?;
    let pi = p as i64;
    let base = CmProduct::new(d, big_d)?;
    let up = CmProduct::new(d * pi * pi, big_d)?;
    let down = if d % (pi * pi) == 0 && Discriminant::new(d / (pi * pi)).is_ok() {
        Some(CmProduct::new(d / (pi * pi), big_d)?)
    } else {
        None
    };
    let chi = kronecker(d, pi) as i32;
    Ok(taus
        .iter()
        .map(|&tau| {
            let lhs = mult_hecke(p, |z| base.eval(z), tau);
            let mut rhs = up.eval(tau) * base.eval(tau).powi(chi);
            if let Some(dn) = &down {
                rhs *= dn.eval(tau).powi(pi as i32);
            }
            EquivarianceRow { u: tau.u, v: tau.v, lhs, rhs, abs_err: (lhs - rhs).norm() }
        })
        .collect())
}
