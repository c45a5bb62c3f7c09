//! The real-analytic Eisenstein series `E(τ, s)` of level one.
//!
//! Two independent evaluators are provided: the Fourier expansion in
//! K-Bessel functions, and the Epstein zeta function of the lattice
//! `Zτ + Z` computed through the theta-function splitting at `t = 1`
//! (which converges for every `s` and so doubles as a continuation).

mod trace;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{sigma_complex, zeta_constants};
use crate::qseries::forms::delta_product;
use crate::qseries::ModularPoint;
use crate::quad::{exp_sinh, QuadOptions};
use crate::special::{bessel_k_fast, completed_zeta, gamma, zeta};
use crate::{Error, Result};

pub use trace::{
    m_function, m_function_factored, m_function_prime_power, trace_cm, verify_dit, ClassDatum, DitReport,
    TraceReport,
};

/// How `E(τ, s)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EisMode {
    FourierBessel,
    LatticeSum,
    /// Both evaluators; they must agree to `1e−8` (relative).
    Both,
}

/// An evaluation request for `E(τ, s)`.
#[derive(Debug, Clone, Copy)]
pub struct EisSpec {
    pub s: Complex64,
    /// Maximum number of Fourier–Bessel terms.
    pub n_fourier: usize,
    /// Lattice points with `π|mτ + n|²/v` up to this bound are summed.
    pub lattice_cutoff: f64,
    pub mode: EisMode,
    /// Move `τ` into the fundamental domain before a Fourier evaluation.
    pub reduce: bool,
}

impl EisSpec {
    pub fn new(s: f64) -> Self {
        Self::complex(Complex64::new(s, 0.0))
    }

    pub fn complex(s: Complex64) -> Self {
        EisSpec { s, n_fourier: 600, lattice_cutoff: 50.0, mode: EisMode::FourierBessel, reduce: true }
    }

    pub fn mode(mut self, mode: EisMode) -> Self {
        self.mode = mode;
        self
    }

    /// Evaluate at the given point without first reducing it.
    pub fn raw(mut self) -> Self {
        self.reduce = false;
        self
    }
}

/// Agreement demanded between the two evaluators in `Both` mode.
pub const MODE_TOL: f64 = 1e-8;

/// `E(τ, s) = (1/2ζ(2s)) Σ'_{(m,n)} v^s/|mτ + n|^{2s}` (continued in `s`).
pub fn eis_value(tau: ModularPoint, spec: &EisSpec) -> Result<Complex64> {
    if (spec.s - 1.0).norm() == 0.0 {
        return Err(Error::OutOfRange("E(τ, s) has a pole at s = 1".into()));
    }
    let t = if spec.reduce { tau.reduce().0 } else { tau };
    match spec.mode {
        EisMode::FourierBessel => fourier(t, spec.s, spec.n_fourier),
        EisMode::LatticeSum => lattice(tau, spec.s, spec.lattice_cutoff),
        EisMode::Both => {
            let a = fourier(t, spec.s, spec.n_fourier)?;
            let b = lattice(tau, spec.s, spec.lattice_cutoff)?;
            if (a - b).norm() > MODE_TOL * a.norm().max(1.0) {
                return Err(Error::ModeDisagreement { a: a.to_string(), b: b.to_string() });
            }
            Ok(a)
        }
    }
}

/// The Fourier–Bessel expansion
/// `E(τ, s) = v^s + φ(s)v^{1−s} + (4/ξ(2s))√v Σ σ_{2s−1}(n) n^{1/2−s}
/// K_{s−1/2}(2πnv) cos(2πnu)` with `φ(s) = ξ(2s−1)/ξ(2s)`, with the
/// `s`-dependent constants and the first coefficients computed once.
#[derive(Debug, Clone)]
pub struct FourierExpansion {
    s: Complex64,
    phi: Complex64,
    pref: Complex64,
    nmax: usize,
    /// `σ_{2s−1}(n) n^{1/2−s}` for `n = 1, …, coeffs.len()`.
    coeffs: Vec<Complex64>,
}

impl FourierExpansion {
    /// Constants for `s`, caching `cached` coefficients and allowing up to
    /// `nmax` terms.
    pub fn new(s: Complex64, nmax: usize, cached: usize) -> Result<Self> {
        if (s - 1.0).norm() == 0.0 {
            return Err(Error::OutOfRange("E(τ, s) has a pole at s = 1".into()));
        }
        let one = Complex64::new(1.0, 0.0);
        let xi2s = completed_zeta(2.0 * s);
        let phi = completed_zeta(2.0 * s - one) / xi2s;
        let coeffs = (1..=cached.min(nmax)).map(|n| Self::coeff(s, n)).collect();
        Ok(FourierExpansion { s, phi, pref: 4.0 / xi2s, nmax, coeffs })
    }

    fn coeff(s: Complex64, n: usize) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        sigma_complex(2.0 * s - one, n as u64) * ((n as f64).ln() * (0.5 - s)).exp()
    }

    /// Evaluate at `τ` without reduction (meant for `Im τ ≳ 0.5`).
    pub fn eval(&self, tau: ModularPoint) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let s = self.s;
        let (u, v) = (tau.u, tau.v);
        let vc = Complex64::new(v, 0.0);
        let mut sum = vc.powc(s) + self.phi * vc.powc(one - s);
        let pref = self.pref * v.sqrt();
        let nu = s - 0.5;
        let mut small = 0;
        for n in 1..=self.nmax {
            let x = 2.0 * PI * n as f64 * v;
            if x > 700.0 {
                return Ok(sum);
            }
            let c = self.coeffs.get(n - 1).copied().unwrap_or_else(|| Self::coeff(s, n));
            let mag = pref * c * bessel_k_fast(nu, x)?;
            sum += mag * (2.0 * PI * n as f64 * u).cos();
            if mag.norm() < 1e-18 * sum.norm() {
                small += 1;
                if small >= 2 {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
        }
        Err(Error::ToleranceUnreachable {
            tol: 1e-18,
            reason: format!("Fourier–Bessel series not settled after {} terms at v = {v}", self.nmax),
        })
    }
}

fn fourier(tau: ModularPoint, s: Complex64, nmax: usize) -> Result<Complex64> {
    FourierExpansion::new(s, nmax, 0)?.eval(tau)
}

/// `∫_1^∞ e^{−xt}(t^{s−1} + t^{−s}) dt`.
fn split_term(x: f64, s: Complex64) -> Result<Complex64> {
    let opts = QuadOptions { abs_tol: 1e-24, rel_tol: 1e-14, min_level: 3, max_level: 9, parallel: false };
    let one = Complex64::new(1.0, 0.0);
    let r = exp_sinh(
        |t: f64| {
            let lt = t.ln();
            (-x * t).exp() * (((s - one) * lt).exp() + (-s * lt).exp())
        },
        1.0,
        &opts,
    )?;
    Ok(r.value)
}

/// Epstein-zeta route, valid for any point and any `s ≠ 0, 1`.
///
/// `π^{−s}Γ(s)Σ' Q^{−s} = 1/(s−1) − 1/s + Σ' ∫_1^∞ e^{−πQt}(t^{s−1} + t^{−s}) dt`
/// where `Q(m, n) = |mτ + n|²/v` has determinant one.
fn lattice(tau: ModularPoint, s: Complex64, cutoff: f64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let (u, v) = (tau.u, tau.v);
    let qmax = cutoff / PI;
    let mut acc = Complex64::new(0.0, 0.0);
    // (m, n) and (−m, −n) contribute equally: take m > 0, or m = 0 and n > 0.
    let mmax = (qmax / v).sqrt().floor() as i64;
    for m in 0..=mmax {
        let mf = m as f64;
        let rem = qmax * v - (mf * v).powi(2);
        if rem < 0.0 {
            continue;
        }
        let r = rem.sqrt();
        let c = -mf * u;
        let lo = if m == 0 { 1 } else { (c - r).ceil() as i64 };
        for n in lo..=(c + r).floor() as i64 {
            let w = mf * u + n as f64;
            let q = (w * w + (mf * v).powi(2)) / v;
            acc += split_term(PI * q, s)?;
        }
    }
    let lambda = one / (s - one) - one / s + 2.0 * acc;
    let z = Complex64::from(PI).powc(s) / gamma(s) * lambda;
    Ok(z / (2.0 * zeta(2.0 * s)))
}

/// Result of the Kronecker limit comparison at one point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KroneckerReport {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

/// Compare the constant term of `E(τ, s)` at `s = 1` with
/// `−(1/2π) log(v⁶|Δ(τ)|) + C`.
///
/// The left side is extrapolated from `s = 1 ± ε`: the symmetric mean
/// `(E(1+ε) + E(1−ε))/2` cancels the pole and the odd Laurent terms,
/// leaving `c₀ + c₂ε² + …`, and one Richardson step removes `ε²`.
pub fn kronecker_limit_check(tau: ModularPoint) -> Result<KroneckerReport> {
    let g = |h: f64| -> Result<f64> {
        let a = eis_value(tau, &EisSpec::new(1.0 + h))?;
        let b = eis_value(tau, &EisSpec::new(1.0 - h))?;
        Ok(0.5 * (a.re + b.re))
    };
    let (g4, g2, g1) = (g(4e-3)?, g(2e-3)?, g(1e-3)?);
    let coarse = (4.0 * g2 - g4) / 3.0;
    let fine = (4.0 * g1 - g2) / 3.0;
    if (coarse - fine).abs() > 1e-7 {
        return Err(Error::ExtrapolationUnstable(format!("Richardson estimates {coarse} and {fine} disagree")));
    }
    let c = zeta_constants().kronecker_c;
    let d = delta_product(tau).norm();
    let rhs = -(tau.v.powi(6) * d).ln() / (2.0 * PI) + c;
    Ok(KroneckerReport { lhs: fine, rhs, diff: (fine - rhs).abs() })
}

/// Weight-zero Hecke operator
/// `T_p F(τ) = (1/p)[F(pτ) + Σ_{b mod p} F((τ + b)/p)]`.
pub fn hecke_weight0<F>(p: u64, f: F, tau: ModularPoint) -> Result<Complex64>
where
    F: Fn(ModularPoint) -> Result<Complex64>,
{
    let pf = p as f64;
    let mut sum = f(ModularPoint::new(pf * tau.u, pf * tau.v))?;
    for b in 0..p {
        sum += f(ModularPoint::new((tau.u + b as f64) / pf, tau.v / pf))?;
    }
    Ok(sum / pf)
}
