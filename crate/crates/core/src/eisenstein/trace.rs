//! Genus-character twisted CM traces of `E(τ, s)` and the function
//! `M_d(m, s)` governing their dependence on the conductor.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{eis_value, EisMode, EisSpec};
use crate::arith::{dirichlet_l, divisors, gcd, kronecker, moebius, sigma_complex, Discriminant, Factorization};
use crate::bqf::{class_reps, HeegnerPoint, QuadForm};
use crate::qseries::serialize_complex;
use crate::special::zeta;
use crate::{Error, Result};

/// One class of forms entering a twisted trace.
#[derive(Debug, Clone, Serialize)]
pub struct ClassDatum {
    pub form: QuadForm,
    pub chi: i8,
    pub omega: u32,
    #[serde(serialize_with = "serialize_complex")]
    pub e_value: Complex64,
}

/// `Tr_{d,D}(E(·, s)) = Σ_Q χ_D(Q)/ω_Q · E(α_Q, s)` with per-class data.
#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub d: i64,
    #[serde(rename = "D")]
    pub big_d: i64,
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    pub classes: Vec<ClassDatum>,
}

/// Twisted trace over all classes of discriminant `dD`, each value
/// computed in `Both` mode so that the two evaluators cross-check.
pub fn trace_cm(d: i64, big_d: i64, s: Complex64) -> Result<TraceReport> {
    if d >= 0 {
        return Err(Error::InvalidDiscriminant(d));
    }
    Discriminant::new(d)?;
    let dd = Discriminant::fundamental(big_d)?;
    if dd.value <= 1 {
        return Err(Error::InvalidDiscriminant(big_d));
    }
    let forms = class_reps(d * big_d)?;
    let spec = EisSpec::complex(s).mode(EisMode::Both);
    let classes = forms
        .par_iter()
        .map(|q| -> Result<ClassDatum> {
            let chi = q.genus_char(big_d)?;
            let omega = q.stabilizer_order();
            let e_value = if chi == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                eis_value(HeegnerPoint::new(*q).alpha(), &spec)?
            };
            Ok(ClassDatum { form: *q, chi, omega, e_value })
        })
        .collect::<Result<Vec<_>>>()?;
    let value = classes.iter().map(|c| c.e_value * (c.chi as f64 / c.omega as f64)).sum();
    Ok(TraceReport { d, big_d, value, classes })
}

fn pow_real(x: f64, s: Complex64) -> Complex64 {
    (s * x.ln()).exp()
}

/// `M_d(m, s) = Σ_{n|m} μ(m/n) (d/(m/n)) n^{1−s} σ_{2s−1}(n)`, summed
/// directly over divisors.
pub fn m_function(d: i64, m: u64, s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    divisors(m)
        .into_iter()
        .map(|n| {
            let k = m / n;
            let coef = moebius(k) as f64 * kronecker(d, k as i64) as f64;
            if coef == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            coef * pow_real(n as f64, one - s) * sigma_complex(2.0 * s - one, n)
        })
        .sum()
}

/// Closed form of `M_d(p^r, s)` for a prime `p`:
/// `p^{r(1−s)}(1 − p^{(r+1)(2s−1)})/(1 − p^{2s−1})
///  − (d/p) p^{(r−1)(1−s)}(1 − p^{r(2s−1)})/(1 − p^{2s−1})`.
pub fn m_function_prime_power(d: i64, p: u64, r: u32, s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if r == 0 {
        return one;
    }
    let pf = p as f64;
    let rf = r as f64;
    let w = 2.0 * s - one;
    let den = one - pow_real(pf, w);
    let first = pow_real(pf, rf * (one - s)) * (one - pow_real(pf, (rf + 1.0) * w)) / den;
    let second = pow_real(pf, (rf - 1.0) * (one - s)) * (one - pow_real(pf, rf * w)) / den;
    first - kronecker(d, p as i64) as f64 * second
}

/// `M_d(m, s)` as the product of prime-power closed forms.
pub fn m_function_factored(d: i64, m: u64, s: Complex64) -> Complex64 {
    Factorization::of(m)
        .factors
        .iter()
        .map(|&(p, r)| m_function_prime_power(d, p, r, s))
        .product()
}

/// Both sides of the decomposition
/// `Tr_{D'm², D}(E(·, s)) = |DD'|^{s/2}/2^s · L_D(s)L_{D'}(s)/ζ(2s) · M_{D'}(m, s)`.
#[derive(Debug, Clone, Serialize)]
pub struct DitReport {
    #[serde(rename = "D")]
    pub big_d: i64,
    #[serde(rename = "Dp")]
    pub d_prime: i64,
    pub m: u64,
    #[serde(serialize_with = "serialize_complex")]
    pub s: Complex64,
    #[serde(serialize_with = "serialize_complex")]
    pub lhs: Complex64,
    #[serde(serialize_with = "serialize_complex")]
    pub rhs: Complex64,
    pub rel_err: f64,
    /// Whether `gcd(m, D) = 1`; other cases are informational only.
    pub coprime: bool,
    pub class_data: Vec<ClassDatum>,
}

/// Evaluate both sides for fundamental `D > 1`, `D' < 0` and `d = D'm²`.
pub fn verify_dit(big_d: i64, d_prime: i64, m: u64, s: Complex64) -> Result<DitReport> {
    let dd = Discriminant::fundamental(big_d)?;
    let dp = Discriminant::fundamental(d_prime)?;
    if dd.value <= 1 || dp.value >= 0 || m == 0 {
        return Err(Error::OutOfRange(format!("need D > 1, D' < 0, m ≥ 1; got {big_d}, {d_prime}, {m}")));
    }
    let d = d_prime * (m * m) as i64;
    let tr = trace_cm(d, big_d, s)?;
    let tol = 1e-14;
    let ld = dirichlet_l(big_d, s, tol)?;
    let ldp = dirichlet_l(d_prime, s, tol)?;
    let rhs = pow_real((big_d * d_prime).unsigned_abs() as f64, s / 2.0) / pow_real(2.0, s) * ld * ldp
        / zeta(2.0 * s)
        * m_function(d_prime, m, s);
    let rel_err = (tr.value - rhs).norm() / rhs.norm().max(1e-300);
    Ok(DitReport {
        big_d,
        d_prime,
        m,
        s,
        lhs: tr.value,
        rhs,
        rel_err,
        coprime: gcd(m as i64, big_d) == 1,
        class_data: tr.classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-12 * a.norm().max(b.norm()).max(1.0)
    }

    #[test]
    fn m_function_small_cases() {
        let s = c(1.7);
        assert!(close(m_function(-3, 1, s), c(1.0)));
        for p in [2u64, 3, 5, 7] {
            let pf = p as f64;
            let expect = pow_real(pf, c(1.0) - s) + pow_real(pf, s) - kronecker(-3, p as i64) as f64;
            assert!(close(m_function(-3, p, s), expect), "p = {p}");
            assert!(close(m_function_prime_power(-3, p, 1, s), expect));
        }
    }

    #[test]
    fn m_function_properties_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dps = [-3i64, -4, -7, -8, -11, -15, -19, -20, -23, -24];
        let primes = [2u64, 3, 5, 7, 11, 13];
        for _ in 0..50 {
            let dp = dps[rng.gen_range(0..dps.len())];
            let s = Complex64::new(rng.gen_range(1.1..3.0), rng.gen_range(-1.0..1.0));
            let m = rng.gen_range(1u64..60);
            let n = rng.gen_range(1u64..60);
            let l = rng.gen_range(1u64..12);
            if gcd(l as i64, m as i64) == 1 {
                let dl = dp * (l * l) as i64;
                assert!(close(m_function(dl, m, s), m_function(dp, m, s)));
            }
            if gcd(m as i64, n as i64) == 1 {
                assert!(close(m_function(dp, m * n, s), m_function(dp, m, s) * m_function(dp, n, s)));
            }
            let p = primes[rng.gen_range(0..primes.len())];
            let r = rng.gen_range(1u32..5);
            let pr = p.pow(r);
            let lhs = m_function(dp, pr * p, s);
            let rhs = (pow_real(p as f64, c(1.0) - s) + pow_real(p as f64, s)) * m_function(dp, pr, s)
                - p as f64 * m_function(dp, pr / p, s);
            assert!(close(lhs, rhs));
            assert!(close(m_function_factored(dp, m, s), m_function(dp, m, s)));
        }
    }
}
