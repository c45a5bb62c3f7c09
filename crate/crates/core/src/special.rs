//! Special functions: Gamma, Bernoulli numbers, Hurwitz and Riemann zeta,
//! completed zeta and the modified Bessel function `K_ν`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex Gamma function (Lanczos, with reflection for `Re z < 1/2`).
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::from(PI) / (s * gamma(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::from(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Even-index Bernoulli numbers `B_0, B_2, …, B_{2·(len−1)}` as exact rationals.
pub fn bernoulli_even() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 64usize;
        let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
        b.push(BigRational::from_integer(1.into()));
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        for m in 1..=n {
            let mut binom = BigInt::from(1);
            let mut acc = BigRational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += bj * BigRational::from_integer(binom.clone());
                binom = binom * (m + 1 - j) / (j + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b.into_iter().step_by(2).collect()
    })
}

/// `B_{2j}/(2j)!` as doubles for `j = 0, 1, …`.
fn bernoulli_over_factorial() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut fact = BigInt::from(1);
        let mut out = Vec::new();
        for (j, b) in bernoulli_even().iter().enumerate() {
            if j > 0 {
                fact *= (2 * j - 1) * (2 * j);
            }
            let v = b / BigRational::from_integer(fact.clone());
            out.push(v.to_f64().unwrap_or(0.0));
        }
        out
    })
}

/// Hurwitz zeta `ζ(s, a)` and its `s`-derivative by Euler–Maclaurin with
/// `n` explicit terms and `m` Bernoulli corrections. Returns
/// `(value, derivative, estimate of the first omitted correction)`.
/// At `s = 1` the polar part is removed (value `−ψ(a)`), so that character
/// sums with `Σ χ(a) = 0` come out right.
pub fn hurwitz_zeta_em(s: Complex64, a: f64, n: usize, m: usize) -> (Complex64, Complex64, f64) {
    assert!(a > 0.0);
    let bf = bernoulli_over_factorial();
    let m = m.min(bf.len() - 2);
    let mut val = Complex64::zero();
    let mut der = Complex64::zero();
    for k in 0..n {
        let x = k as f64 + a;
        let lx = x.ln();
        let t = (-s * lx).exp();
        val += t;
        der -= lx * t;
    }
    let x = n as f64 + a;
    let lx = x.ln();
    let xs = (-s * lx).exp();
    let one = Complex64::new(1.0, 0.0);
    if (s - one).norm() < 1e-13 {
        // At s = 1 the pole 1/(s−1) is dropped: the result is the constant
        // term of the Laurent expansion, −ψ(a).
        val += -lx + 0.5 * xs;
        der += 0.5 * lx * lx - 0.5 * lx * xs;
    } else {
        let head = x * xs / (s - one);
        val += head + 0.5 * xs;
        der += -lx * head - head / (s - one) - 0.5 * lx * xs;
    }
    // Pochhammer (s)_{2j−1} and its derivative.
    let mut p = s;
    let mut dp = one;
    let mut xpow = xs / x; // x^{−s−1}
    let mut last = 0.0;
    for j in 1..=m + 1 {
        let t = bf[j] * p * xpow;
        if j == m + 1 {
            last = t.norm();
            break;
        }
        val += t;
        der += bf[j] * (dp * xpow - lx * p * xpow);
        // advance to (s)_{2j+1}
        for i in [2 * j - 1, 2 * j] {
            let f = s + i as f64;
            dp = dp * f + p;
            p *= f;
        }
        xpow /= x * x;
    }
    (val, der, last)
}

/// Hurwitz zeta to roughly double precision for moderate `|s|`.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Complex64 {
    let n = 16 + s.norm().ceil() as usize;
    hurwitz_zeta_em(s, a, n, 24).0
}

/// Riemann zeta for `s ≠ 1` with `Re s > −10` or so.
pub fn zeta(s: Complex64) -> Complex64 {
    if s.re < -0.5 {
        // Functional equation keeps the Euler–Maclaurin terms small.
        let one = Complex64::new(1.0, 0.0);
        let w = one - s;
        return 2.0 * Complex64::from(2.0 * PI).powc(s - one) * (s * PI / 2.0).sin() * gamma(w) * zeta(w);
    }
    hurwitz_zeta(s, 1.0)
}

/// Derivative `ζ'(s)`.
pub fn zeta_deriv(s: Complex64) -> Complex64 {
    let n = 16 + s.norm().ceil() as usize;
    hurwitz_zeta_em(s, 1.0, n, 24).1
}

/// Completed zeta `ξ(w) = π^{−w/2} Γ(w/2) ζ(w)`, continued by `ξ(w) = ξ(1−w)`.
pub fn completed_zeta(w: Complex64) -> Complex64 {
    if w.re < 0.5 {
        return completed_zeta(Complex64::new(1.0, 0.0) - w);
    }
    Complex64::from(PI).powc(-w / 2.0) * gamma(w / 2.0) * zeta(w)
}

/// Euler's constant via the Euler–Maclaurin expansion of `ζ(s) − 1/(s−1)` at `s = 1`.
pub fn euler_gamma() -> f64 {
    let n = 40usize;
    let bf = bernoulli_even();
    let h: f64 = (1..n).rev().map(|k| 1.0 / k as f64).sum();
    let nf = n as f64;
    let mut g = h - nf.ln() + 0.5 / nf;
    let mut np = nf * nf;
    for b in bf.iter().take(12).skip(1).enumerate() {
        let (j, b) = (b.0 + 1, b.1);
        g += b.to_f64().unwrap() / (2 * j) as f64 / np;
        np *= nf * nf;
    }
    g
}

/// Closed form `K_{n+1/2}(x)`.
pub fn bessel_k_half(n: u32, x: f64) -> f64 {
    // K_{n+1/2}(x) = sqrt(π/2x) e^{−x} Σ_k (n+k)!/(k!(n−k)!) (2x)^{−k}
    let mut sum = 0.0;
    let mut coef = 1.0; // (n+k)!/(k!(n−k)!)
    let mut p = 1.0;
    for k in 0..=n {
        sum += coef * p;
        let kf = k as f64;
        coef *= (n as f64 + kf + 1.0) * (n as f64 - kf) / (kf + 1.0);
        p /= 2.0 * x;
    }
    (PI / (2.0 * x)).sqrt() * (-x).exp() * sum
}

fn bessel_k_trap<F: Fn(f64) -> f64>(x: f64, nu_abs: f64, tol: f64, cosh_nu: F) -> Result<f64> {
    if !(1e-3..=700.0).contains(&x) {
        return Err(Error::OutOfRange(format!("Bessel K argument {x} outside [1e-3, 700]")));
    }
    // Integrand e^{−x(cosh t − 1)} cosh(νt); K = e^{−x} · ∫_0^∞.
    let g = |t: f64| (-x * (t.cosh() - 1.0)).exp() * cosh_nu(t);
    // Truncation: x(cosh t − 1) − ν t > 45.
    let mut tmax = 1.0f64;
    while x * (tmax.cosh() - 1.0) - nu_abs * tmax < 45.0 {
        tmax += 0.5;
    }
    let mut h = (0.5f64).min(1.0 / x.sqrt());
    let mut sum = 0.5 * g(0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        sum += g(k as f64 * h);
        k += 1;
    }
    let mut est = h * sum;
    for _ in 0..12 {
        // Halve: add the midpoints.
        let mut mid = 0.0;
        let mut t = h / 2.0;
        while t <= tmax {
            mid += g(t);
            t += h;
        }
        sum += mid;
        h /= 2.0;
        let next = h * sum;
        // Rounding in the sum sits near 1e−15; tighter requests are clamped.
        if (next - est).abs() <= tol.max(1e-14) * next.abs() {
            return Ok(next * (-x).exp());
        }
        est = next;
    }
    Err(Error::ToleranceUnreachable {
        tol,
        reason: format!("Bessel K_{nu_abs}({x}) trapezoid did not settle"),
    })
}

/// Modified Bessel `K_ν(x)` for real order, relative tolerance `tol`, via
/// the trapezoidal rule on `∫_0^∞ e^{−x cosh t} cosh(νt) dt`.
pub fn bessel_k(nu: f64, x: f64, tol: f64) -> Result<f64> {
    let nu = nu.abs();
    bessel_k_trap(x, nu, tol, |t| (nu * t).cosh())
}

/// `K_ν(x)` for complex order; returns a complex value.
pub fn bessel_k_complex(nu: Complex64, x: f64, tol: f64) -> Result<Complex64> {
    if nu.im == 0.0 {
        return bessel_k(nu.re, x, tol).map(Complex64::from);
    }
    let re = bessel_k_trap(x, nu.re.abs(), tol, |t| (nu * t).cosh().re)?;
    let im = bessel_k_trap(x, nu.re.abs(), tol, |t| (nu * t).cosh().im)?;
    Ok(Complex64::new(re, im))
}

/// `K_ν(x)` picking the closed form for half-integral real orders.
pub fn bessel_k_fast(nu: Complex64, x: f64) -> Result<Complex64> {
    if nu.im == 0.0 {
        let a = nu.re.abs() - 0.5;
        if a >= 0.0 && a.fract() == 0.0 && a < 30.0 {
            return Ok(Complex64::from(bessel_k_half(a as u32, x)));
        }
    }
    bessel_k_complex(nu, x, 1e-15)
}
