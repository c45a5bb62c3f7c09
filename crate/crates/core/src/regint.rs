//! Regularized integrals over the standard fundamental domain of `SL2(Z)`.
//!
//! The truncated domain `{|u| ≤ 1/2, |τ| ≥ 1, v ≤ Y}` is integrated as an
//! iterated double-exponential quadrature against `du dv/v²`: the outer
//! integral runs over `u`, the inner one over `v ∈ [√(1−u²), Y]`. Both are
//! split at the coordinates of the logarithmic singularities (and of their
//! boundary images), so every singularity sits at an endpoint of a panel
//! where the tanh-sinh rule resolves it. The region `v > Y` is added
//! analytically from a log-linear model of the `u`-average of the integrand.

use std::f64::consts::PI;
use std::sync::Mutex;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::zeta_constants;
use crate::borcherds::CmProduct;
use crate::eisenstein::{eis_value, EisMode, EisSpec, FourierExpansion};
use crate::qseries::forms::{delta_product, e4_value, e6_value, j_value};
use crate::qseries::serialize_complex;
use crate::quad::{tanh_sinh, QuadOptions};
use crate::{Error, ModularPoint, Result};

/// Treatment of the region above the truncation height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailModel {
    /// The integrand is exponentially small above `Y`.
    None,
    /// The `u`-average is `c₁ log v + c₂` up to exponentially small terms.
    LogLinear,
}

/// A regularized integral `∫_F g(τ) du dv/v²`.
pub struct RegIntegralSpec<'a> {
    pub integrand: Box<dyn Fn(ModularPoint) -> Complex64 + Sync + 'a>,
    /// Truncation height, at least 2.
    pub y: f64,
    /// Logarithmic singularities inside or on the boundary of the domain.
    pub singular_points: Vec<ModularPoint>,
    pub tail_model: TailModel,
    pub tol: f64,
}

/// Value of a regularized integral with its error estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegResult {
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    pub error: f64,
    /// Contribution of `v > Y`.
    #[serde(serialize_with = "serialize_complex")]
    pub tail: Complex64,
    /// Number of panels (rectangular pieces between split lines).
    pub cells_used: usize,
    pub evals: usize,
}

const BOUNDARY_TOL: f64 = 1e-9;

/// Split coordinates along `u` and the `v`-coordinates of the singularities.
fn split_points(points: &[ModularPoint]) -> (Vec<f64>, Vec<f64>) {
    let mut us = vec![-0.5, 0.5];
    let mut vs = Vec::new();
    for p in points {
        let (r, _) = p.reduce();
        let mut images = vec![r];
        // u = −1/2 ~ u = 1/2 and τ ~ −τ̄ on the arc.
        if (r.u.abs() - 0.5).abs() < BOUNDARY_TOL {
            images.push(ModularPoint::new(-r.u, r.v));
        }
        if (r.to_complex().norm() - 1.0).abs() < BOUNDARY_TOL {
            images.push(ModularPoint::new(-r.u, r.v));
        }
        for q in images {
            us.push(q.u.clamp(-0.5, 0.5));
            vs.push(q.v);
        }
    }
    us.sort_by(f64::total_cmp);
    us.dedup_by(|a, b| (*a - *b).abs() < BOUNDARY_TOL);
    vs.sort_by(f64::total_cmp);
    vs.dedup_by(|a, b| (*a - *b).abs() < BOUNDARY_TOL);
    (us, vs)
}

/// `u`-average of the integrand at height `v` (the domain is the full strip
/// there).
fn strip_average(g: &(dyn Fn(ModularPoint) -> Complex64 + Sync), v: f64, opts: &QuadOptions) -> Result<Complex64> {
    Ok(tanh_sinh(|u| g(ModularPoint::new(u, v)), -0.5, 0.5, opts)?.value)
}

/// Fit `c₁ log v + c₂` through the averages at `Y` and `Y + 1`, check it at
/// `Y + 2` and return `∫_Y^∞ (c₁ log v + c₂) dv/v² = (c₁(log Y + 1) + c₂)/Y`.
fn log_linear_tail(g: &(dyn Fn(ModularPoint) -> Complex64 + Sync), y: f64, tol: f64) -> Result<Complex64> {
    let opts = QuadOptions { abs_tol: tol * 1e-3, rel_tol: 1e-13, ..Default::default() };
    let a = [y, y + 1.0, y + 2.0].map(|v| strip_average(g, v, &opts));
    let [a0, a1, a2] = [a[0].clone()?, a[1].clone()?, a[2].clone()?];
    let (l0, l1, l2) = (y.ln(), (y + 1.0).ln(), (y + 2.0).ln());
    let c1 = (a1 - a0) / (l1 - l0);
    let c2 = a0 - c1 * l0;
    let pred = c1 * l2 + c2;
    let scale = a2.norm().max(1.0);
    if (pred - a2).norm() > 1e-6 * scale {
        return Err(Error::TailGrowth(format!(
            "u-average at v = {} is {a2}, log-linear model predicts {pred}",
            y + 2.0
        )));
    }
    Ok((c1 * (l0 + 1.0) + c2) / y)
}

/// Evaluate a regularized integral over the level-one fundamental domain.
pub fn reg_inner(spec: &RegIntegralSpec) -> Result<RegResult> {
    if !(spec.y >= 2.0) {
        return Err(Error::OutOfRange(format!("truncation height {} < 2", spec.y)));
    }
    if !(spec.tol > 0.0) {
        return Err(Error::OutOfRange(format!("tolerance {} not positive", spec.tol)));
    }
    let y = spec.y;
    let g = &*spec.integrand;
    let (us, vs) = split_points(&spec.singular_points);
    let inner_opts = QuadOptions { abs_tol: spec.tol * 1e-3, rel_tol: 1e-12, min_level: 3, max_level: 12, parallel: false };
    let outer_opts = QuadOptions { abs_tol: spec.tol * 0.1, rel_tol: 1e-11, min_level: 3, max_level: 10, parallel: true };
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let evals = std::sync::atomic::AtomicUsize::new(0);
    let inner = |u: f64| -> Complex64 {
        let lo = (1.0 - u * u).max(0.0).sqrt();
        let mut cuts = vec![lo];
        cuts.extend(vs.iter().copied().filter(|&v| v > lo + 1e-14 && v < y));
        cuts.push(y);
        let mut acc = Complex64::default();
        for w in cuts.windows(2) {
            match tanh_sinh(|v| g(ModularPoint::new(u, v)) / (v * v), w[0], w[1], &inner_opts) {
                Ok(r) => {
                    evals.fetch_add(r.evals, std::sync::atomic::Ordering::Relaxed);
                    acc += r.value;
                }
                Err(e) => {
                    failure.lock().unwrap().get_or_insert(e);
                }
            }
        }
        acc
    };
    let mut value = Complex64::default();
    let mut error = 0.0;
    let mut cells = 0;
    for w in us.windows(2) {
        let r = tanh_sinh(inner, w[0], w[1], &outer_opts)?;
        value += r.value;
        error += r.error;
        cells += 1 + vs.iter().filter(|&&v| v < y).count();
    }
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let tail = match spec.tail_model {
        TailModel::None => Complex64::default(),
        TailModel::LogLinear => log_linear_tail(g, y, spec.tol)?,
    };
    Ok(RegResult { value: value + tail, error, tail, cells_used: cells, evals: evals.into_inner() })
}

/// The two level-one forms supported by [`rohrlich_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RohrlichForm {
    E4,
    E6,
}

impl RohrlichForm {
    pub fn weight(self) -> u32 {
        match self {
            RohrlichForm::E4 => 4,
            RohrlichForm::E6 => 6,
        }
    }

    /// The single zero in the domain with its stabilizer size.
    pub fn zero(self) -> (ModularPoint, u32) {
        match self {
            RohrlichForm::E4 => (ModularPoint::new(-0.5, 3f64.sqrt() / 2.0), 3),
            RohrlichForm::E6 => (ModularPoint::new(0.0, 1.0), 2),
        }
    }

    fn value(self, tau: ModularPoint) -> Result<Complex64> {
        match self {
            RohrlichForm::E4 => e4_value(tau),
            RohrlichForm::E6 => e6_value(tau),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "E4" => Some(RohrlichForm::E4),
            "E6" => Some(RohrlichForm::E6),
            _ => None,
        }
    }
}

/// Both sides of Rohrlich's formula.
#[derive(Debug, Clone, Serialize)]
pub struct RohrlichReport {
    pub form: RohrlichForm,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub quad_error: f64,
    pub cells_used: usize,
    pub runtime_ms: u128,
}

/// `⟨1, log(v^{k/2}|f|)⟩` by quadrature versus
/// `−(π/3)(Σ ord/ω·log(y⁶|Δ(z)|) − πkC/6 + k/2)`.
pub fn rohrlich_check(f: RohrlichForm, y: f64, tol: f64) -> Result<RohrlichReport> {
    let start = Instant::now();
    let k = f.weight() as f64;
    let (z, omega) = f.zero();
    let spec = RegIntegralSpec {
        integrand: Box::new(move |tau: ModularPoint| {
            let val = f.value(tau).expect("E4/E6 series converge on the domain");
            Complex64::new(0.5 * k * tau.v.ln() + val.norm().ln(), 0.0)
        }),
        y,
        singular_points: vec![z],
        tail_model: TailModel::LogLinear,
        tol,
    };
    let r = reg_inner(&spec)?;
    let c = zeta_constants().kronecker_c;
    let log_delta = 6.0 * z.v.ln() + delta_product(z).norm().ln();
    let rhs = -(PI / 3.0) * (log_delta / omega as f64 - PI * k * c / 6.0 + k / 2.0);
    Ok(RohrlichReport {
        form: f,
        lhs: r.value.re,
        rhs,
        abs_err: (r.value.re - rhs).abs(),
        quad_error: r.error,
        cells_used: r.cells_used,
        runtime_ms: start.elapsed().as_millis(),
    })
}

/// `−πkC/6 + k/2` and `k(1/2 + log 2 − γ + ζ'(2)/ζ(2))` for weight `k`.
pub fn rohrlich_constants(k: f64) -> (f64, f64) {
    let z = zeta_constants();
    (
        -PI * k * z.kronecker_c / 6.0 + k / 2.0,
        k * (0.5 + 2f64.ln() - z.euler_gamma + z.zeta_prime_two_over_zeta_two),
    )
}

/// Both sides of `s(1−s)⟨E(·,s), log|Ψ|⟩ = −2π Σ ord/ω·E(z, s)` for a CM
/// product `Ψ`.
#[derive(Debug, Clone, Serialize)]
pub struct EisenCaseReport {
    pub d: i64,
    #[serde(rename = "D")]
    pub big_d: i64,
    pub s: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub quad_error: f64,
    pub cells_used: usize,
    pub runtime_ms: u128,
}

/// `log|Ψ(τ)|` from the factor list; when `Σχ = 0` the form
/// `Σ χ log|1 − j_Q/j|` is used for `|j| > 1` to avoid cancellation.
fn log_abs_cm(psi: &CmProduct, tau: ModularPoint) -> f64 {
    let j = j_value(tau);
    let balanced = psi.factors.iter().map(|f| f.chi as i64).sum::<i64>() == 0;
    psi.factors
        .iter()
        .filter(|f| f.chi != 0)
        .map(|f| {
            let jq = Complex64::new(f.j_re, f.j_im);
            let l = if balanced && j.norm() > 1.0 {
                let w = jq / j;
                if w.norm() < 0.5 {
                    0.5 * (w.norm_sqr() - 2.0 * w.re).ln_1p()
                } else {
                    (1.0 - w).norm().ln()
                }
            } else {
                (j - jq).norm().ln()
            };
            f.chi as f64 * l
        })
        .sum()
}

/// Truncation height for the Eisenstein case; `log|Ψ|` is `O(e^{−2πv})`.
pub const EISEN_Y: f64 = 8.0;

/// Evaluate both sides for `Ψ = Ψ_D(f_d)` at real `s > 1`.
pub fn eisen_case_check(d: i64, big_d: i64, s: f64, tol: f64) -> Result<EisenCaseReport> {
    if !(s > 1.0 && s <= 3.0) {
        return Err(Error::OutOfRange(format!("s = {s} outside (1, 3]")));
    }
    let start = Instant::now();
    let psi = CmProduct::new(d, big_d)?;
    let expansion = FourierExpansion::new(Complex64::new(s, 0.0), 600, 64)?;
    let points: Vec<ModularPoint> =
        psi.factors.iter().filter(|f| f.chi != 0).map(|f| crate::bqf::HeegnerPoint::new(f.form).alpha()).collect();
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let spec = RegIntegralSpec {
        integrand: Box::new(|tau: ModularPoint| {
            let e = expansion.eval(tau).unwrap_or_else(|e| {
                failure.lock().unwrap().get_or_insert(e);
                Complex64::default()
            });
            e * log_abs_cm(&psi, tau)
        }),
        y: EISEN_Y,
        singular_points: points,
        tail_model: TailModel::None,
        tol,
    };
    let r = reg_inner(&spec)?;
    drop(spec);
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let lhs = s * (1.0 - s) * r.value.re;
    // The right side uses both evaluators, independent of the cached
    // expansion used in the integrand.
    let es = EisSpec::new(s).mode(EisMode::Both);
    let mut rhs = 0.0;
    for f in psi.factors.iter().filter(|f| f.chi != 0) {
        let alpha = crate::bqf::HeegnerPoint::new(f.form).alpha();
        rhs += f.chi as f64 / f.omega as f64 * eis_value(alpha, &es)?.re;
    }
    rhs *= -2.0 * PI;
    Ok(EisenCaseReport {
        d,
        big_d,
        s,
        lhs,
        rhs,
        rel_err: (lhs - rhs).abs() / rhs.abs().max(1e-300),
        quad_error: r.error,
        cells_used: r.cells_used,
        runtime_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::forms::delta_product;

    fn spec<'a>(g: impl Fn(ModularPoint) -> Complex64 + Sync + 'a, y: f64, tail: TailModel) -> RegIntegralSpec<'a> {
        RegIntegralSpec { integrand: Box::new(g), y, singular_points: vec![], tail_model: tail, tol: 1e-9 }
    }

    #[test]
    fn volume_of_domain() {
        let r = reg_inner(&spec(|_| Complex64::new(1.0, 0.0), 4.0, TailModel::LogLinear)).unwrap();
        assert!((r.value.re - PI / 3.0).abs() < 1e-6, "{}", r.value);
        let z = reg_inner(&spec(|t| Complex64::new(0.0 * t.v.powf(-0.01), 0.0), 4.0, TailModel::None)).unwrap();
        assert_eq!(z.value, Complex64::default());
    }

    #[test]
    fn truncation_height_independence() {
        // log(v⁶|Δ/q|): the u-average is exactly 6 log v above the domain.
        let g = |t: ModularPoint| {
            let q = (Complex64::new(0.0, 2.0 * PI) * t.to_complex()).exp();
            Complex64::new(6.0 * t.v.ln() + (delta_product(t) / q).norm().ln(), 0.0)
        };
        let a = reg_inner(&spec(g, 8.0, TailModel::LogLinear)).unwrap().value;
        let b = reg_inner(&spec(g, 12.0, TailModel::LogLinear)).unwrap().value;
        assert!((a - b).norm() < 1e-5, "{a} vs {b}");
    }

    #[test]
    fn tail_growth_is_detected() {
        let r = reg_inner(&spec(|t| Complex64::new(t.v, 0.0), 4.0, TailModel::LogLinear));
        assert!(matches!(r, Err(Error::TailGrowth(_))), "{r:?}");
    }

    #[test]
    fn rejects_low_truncation() {
        assert!(reg_inner(&spec(|_| Complex64::new(1.0, 0.0), 1.5, TailModel::None)).is_err());
    }

    #[test]
    fn boundary_images_are_split() {
        let (us, vs) = split_points(&[ModularPoint::new(-0.5, 3f64.sqrt() / 2.0), ModularPoint::new(0.25, 15f64.sqrt() / 4.0)]);
        assert_eq!(us, vec![-0.5, -0.25, 0.25, 0.5]);
        assert_eq!(vs.len(), 2);
    }

    #[test]
    fn log_singularity_on_the_arc() {
        // ∫_F log|τ − i| dμ against the same integral with the singular
        // point declared: both must converge to the same value.
        let g = |t: ModularPoint| Complex64::new((t.to_complex() - Complex64::new(0.0, 1.0)).norm().ln() * (-t.v).exp(), 0.0);
        let mut s = spec(g, 8.0, TailModel::None);
        s.singular_points = vec![ModularPoint::new(0.0, 1.0)];
        let a = reg_inner(&s).unwrap();
        let s2 = RegIntegralSpec { tol: 1e-11, ..s };
        let b = reg_inner(&s2).unwrap();
        assert!((a.value - b.value).norm() < 1e-8);
    }

    #[test]
    fn rohrlich_constants_agree() {
        for k in [4.0, 6.0, 12.0] {
            let (a, b) = rohrlich_constants(k);
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn rohrlich_e4_e6() {
        for f in [RohrlichForm::E4, RohrlichForm::E6] {
            let r = rohrlich_check(f, 8.0, 1e-8).unwrap();
            assert!(r.abs_err < 1e-3, "{r:?}");
        }
    }

    #[test]
    fn rohrlich_is_deterministic() {
        let a = rohrlich_check(RohrlichForm::E4, 8.0, 1e-8).unwrap();
        let b = rohrlich_check(RohrlichForm::E4, 8.0, 1e-8).unwrap();
        assert_eq!(a.lhs.to_bits(), b.lhs.to_bits());
    }

    #[test]
    fn eisenstein_case() {
        for (d, big_d) in [(-3, 5), (-4, 5)] {
            let r = eisen_case_check(d, big_d, 2.0, 1e-8).unwrap_or_else(|e| panic!("{e}"));
            assert!(r.rel_err < 1e-3, "{r:?}");
        }
    }

    #[test]
    fn empty_divisor_gives_zero() {
        let e = FourierExpansion::new(Complex64::new(2.0, 0.0), 600, 64).unwrap();
        let g = move |t: ModularPoint| e.eval(t).unwrap() * 1f64.ln();
        let r = reg_inner(&spec(g, EISEN_Y, TailModel::None)).unwrap();
        assert_eq!(r.value, Complex64::default());
    }

    #[test]
    fn eisenstein_case_rejects_bad_s() {
        assert!(eisen_case_check(-3, 5, 1.0, 1e-8).is_err());
        assert!(eisen_case_check(-3, 5, 3.5, 1e-8).is_err());
    }
}
