//! Classical level-one forms, the Hecke system `j_n` and fast numerical
//! evaluators for `j`, `E4`, `E6` and `Δ`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{eta_expand, rational_to_f64, EtaQuotient, ModularPoint, QSeries, Rat};
use crate::arith::sigma;
use crate::{Error, Result};

/// Eisenstein series `E_k` for `k ∈ {2, 4, 6}`, known below `q^{prec}`.
pub fn eisenstein_qexp(k: u32, prec: i64) -> Result<QSeries<Rat>> {
    let c: i64 = match k {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => return Err(Error::OutOfRange(format!("E_{k} not provided (k ∈ {{2,4,6}})"))),
    };
    let mut coeffs = vec![Rat::one()];
    for n in 1..prec {
        coeffs.push(Rat::from_integer(sigma(k - 1, n as u64) * c));
    }
    Ok(QSeries::from_coeffs(1, 0, coeffs))
}

/// `E2(τ) − N·E2(Nτ)`, a holomorphic weight-2 form on `Γ0(N)`.
pub fn e2_level(n: u32, prec: i64) -> QSeries<Rat> {
    let e2 = eisenstein_qexp(2, prec).unwrap();
    let scaled = e2.at_multiple(n).truncate(prec).unwrap().scale(&Rat::from_integer(n.into()));
    e2.sub(&scaled).unwrap()
}

/// `Δ = q ∏ (1 − qⁿ)^{24}` below `q^{prec}`.
pub fn delta(prec: i64) -> QSeries<Rat> {
    eta_expand(&EtaQuotient::delta(), prec - 1).absorb_prefactor()
}

/// `j = E4³/Δ` below `q^{prec}`.
pub fn j_invariant(prec: i64) -> QSeries<Rat> {
    let p = prec + 2;
    let e4 = eisenstein_qexp(4, p).unwrap();
    e4.pow(3).unwrap().div(&delta(p)).unwrap().truncate(prec).unwrap()
}

/// The Hecke system `j_1, …, j_nmax` together with each `j_n` as a
/// polynomial in `j`.
#[derive(Debug, Clone)]
pub struct HeckeSystem {
    /// `series[n−1] = j_n`, known below `q^{prec}`.
    pub series: Vec<QSeries<Rat>>,
    /// `polys[n−1][i]` is the coefficient of `j^i` in `j_n`.
    pub polys: Vec<Vec<Rat>>,
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

/// Faber-style reduction: `j_n` is `j_1^n` minus a combination of
/// `j_{n−1}, …, j_1` that cancels the lower principal part, plus the
/// constant making the constant term `24σ1(n)`.
pub fn hecke_system(nmax: usize, prec: i64) -> HeckeSystem {
    assert!(nmax >= 1 && prec >= 1);
    let work = prec + nmax as i64 + 1;
    let j = j_invariant(work);
    let j1 = j.add_constant(&Rat::from_integer((-720).into())).unwrap();
    let j1_poly = vec![Rat::from_integer((-720).into()), Rat::one()];
    let mut series: Vec<QSeries<Rat>> = Vec::new();
    let mut polys: Vec<Vec<Rat>> = Vec::new();
    let mut power = j1.clone();
    let mut power_poly = j1_poly.clone();
    for n in 1..=nmax {
        if n > 1 {
            power = power.mul(&j1).unwrap();
            power_poly = poly_mul(&power_poly, &j1_poly);
        }
        let mut g = power.clone();
        let mut gp = power_poly.clone();
        for m in (1..n).rev() {
            let c = g.coeff(-(m as i64));
            if !c.is_zero() {
                g = g.sub(&series[m - 1].scale(&c)).unwrap();
                for (i, x) in polys[m - 1].iter().enumerate() {
                    gp[i] -= &c * x;
                }
            }
        }
        let target = Rat::from_integer(sigma(1, n as u64) * 24);
        let adj = &target - g.coeff(0);
        g = g.add_constant(&adj).unwrap();
        gp[0] += adj;
        series.push(g);
        polys.push(gp);
    }
    let series = series.into_iter().map(|s| s.truncate(prec).unwrap()).collect();
    HeckeSystem { series, polys }
}

/// `j_n` below `q^{prec}`.
pub fn faber_jn(n: usize, prec: i64) -> QSeries<Rat> {
    hecke_system(n, prec).series.pop().unwrap()
}

/// A level-one series cached as doubles for fast repeated evaluation.
#[derive(Debug)]
pub struct NumericSeries {
    /// Exponent of the first coefficient.
    pub v0: i64,
    pub coeffs: Vec<f64>,
}

impl NumericSeries {
    pub fn from_exact(s: &QSeries<Rat>) -> Self {
        NumericSeries { v0: s.valuation(), coeffs: s.coeffs().iter().map(rational_to_f64).collect() }
    }

    /// Sum at `τ`, stopping once the terms fall below `1e−17` relative to
    /// the running sum for several consecutive indices.
    pub fn eval(&self, tau: Complex64) -> Result<Complex64> {
        let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
        let r = q.norm();
        let mut pw = (Complex64::new(0.0, 2.0 * PI * self.v0 as f64) * tau).exp();
        let mut rp = pw.norm();
        let mut sum = Complex64::zero();
        let mut small = 0;
        for &c in &self.coeffs {
            let term = c * pw;
            sum += term;
            if c.abs() * rp <= 1e-17 * sum.norm().max(1e-300) {
                small += 1;
                if small >= 4 {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
            pw *= q;
            rp *= r;
        }
        Err(Error::ToleranceUnreachable {
            tol: 1e-17,
            reason: format!("cached series too short at Im τ = {}", tau.im),
        })
    }
}

fn cached(slot: &'static OnceLock<NumericSeries>, build: fn() -> QSeries<Rat>) -> &'static NumericSeries {
    slot.get_or_init(|| NumericSeries::from_exact(&build()))
}

static J_CACHE: OnceLock<NumericSeries> = OnceLock::new();
static E4_CACHE: OnceLock<NumericSeries> = OnceLock::new();
static E6_CACHE: OnceLock<NumericSeries> = OnceLock::new();

/// `j(τ)`, reducing `τ` to the fundamental domain first.
pub fn j_value(tau: ModularPoint) -> Complex64 {
    let (t, _) = tau.reduce();
    cached(&J_CACHE, || j_invariant(80)).eval(t.to_complex()).expect("v ≥ √3/2 after reduction")
}

/// `E4(τ)` from its q-series (meant for `Im τ ≳ 0.3`).
pub fn e4_value(tau: ModularPoint) -> Result<Complex64> {
    cached(&E4_CACHE, || eisenstein_qexp(4, 400).unwrap()).eval(tau.to_complex())
}

/// `E6(τ)` from its q-series (meant for `Im τ ≳ 0.3`).
pub fn e6_value(tau: ModularPoint) -> Result<Complex64> {
    cached(&E6_CACHE, || eisenstein_qexp(6, 400).unwrap()).eval(tau.to_complex())
}

/// `Δ(τ)` by the product formula `q ∏ (1 − qⁿ)^{24}`.
pub fn delta_product(tau: ModularPoint) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau.to_complex()).exp();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qn = q;
    for _ in 0..100_000 {
        prod *= Complex64::new(1.0, 0.0) - qn;
        if qn.norm() < 1e-18 {
            break;
        }
        qn *= q;
    }
    q * prod.powi(24)
}
