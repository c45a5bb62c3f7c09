use std::f64::consts::PI;

use num_complex::Complex64;

use super::{kronecker, Discriminant};
use crate::special::{euler_gamma, hurwitz_zeta_em, zeta, zeta_deriv};
use crate::{Error, Result};

/// Dirichlet L-function `L_D(s) = Σ (D/n) n^{−s}` of a fundamental
/// discriminant, to absolute accuracy `tol`, via
/// `L_D(s) = |D|^{−s} Σ_{a mod |D|} (D/a) ζ(s, a/|D|)`.
pub fn dirichlet_l(d: i64, s: Complex64, tol: f64) -> Result<Complex64> {
    Discriminant::fundamental(d)?;
    if s.re <= 0.5 {
        return Err(Error::OutOfRange(format!("L_D(s) needs Re(s) > 1/2, got {s}")));
    }
    if d == 1 && (s - 1.0).norm() < 1e-14 {
        return Err(Error::OutOfRange("ζ has a pole at s = 1".into()));
    }
    let m = d.unsigned_abs();
    let residues: Vec<(f64, i8)> = (1..=m)
        .map(|a| (a as f64 / m as f64, kronecker(d, a as i64)))
        .filter(|&(_, k)| k != 0)
        .collect();
    // Depth: grow the explicit part until the omitted correction is small.
    let mut n = 8 + s.norm().ceil() as usize;
    while n <= 1 << 14 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for &(a, k) in &residues {
            let (z, _, e) = hurwitz_zeta_em(s, a, n, 20);
            acc += k as f64 * z;
            err += e;
        }
        let scale = (-s * (m as f64).ln()).exp();
        if err * scale.norm() < tol {
            return Ok(acc * scale);
        }
        n *= 2;
    }
    Err(Error::ToleranceUnreachable { tol, reason: format!("L_{d}({s}) Euler–Maclaurin depth") })
}

/// Constants entering the Kronecker limit formula and Rohrlich's formula.
#[derive(Debug, Clone, Copy)]
pub struct ZetaConstants {
    pub zeta_prime_minus_one: f64,
    pub zeta_prime_two_over_zeta_two: f64,
    pub euler_gamma: f64,
    /// `C = (6 − 72 ζ'(−1) − 6 log(4π))/π`.
    pub kronecker_c: f64,
}

impl ZetaConstants {
    /// Real zeta function, exposed for convenience.
    pub fn zeta(&self, s: f64) -> f64 {
        zeta(Complex64::new(s, 0.0)).re
    }
}

/// Evaluate the zeta constants (accurate to about 1e−14).
pub fn zeta_constants() -> ZetaConstants {
    // A short explicit sum keeps the cancellation in Σ k log k small; the
    // Euler–Maclaurin correction converges fast enough at N = 6.
    let zpm1 = hurwitz_zeta_em(Complex64::new(-1.0, 0.0), 1.0, 6, 24).1.re;
    let z2 = zeta(Complex64::new(2.0, 0.0)).re;
    let zp2 = zeta_deriv(Complex64::new(2.0, 0.0)).re;
    ZetaConstants {
        zeta_prime_minus_one: zpm1,
        zeta_prime_two_over_zeta_two: zp2 / z2,
        euler_gamma: euler_gamma(),
        kronecker_c: (6.0 - 72.0 * zpm1 - 6.0 * (4.0 * PI).ln()) / PI,
    }
}
