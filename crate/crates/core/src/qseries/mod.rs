//! Truncated Fourier–Laurent series in `q^{1/ℓ}`.
//!
//! A [`QSeries`] stores `q^{prefactor24/24} · Σ_{v0 ≤ n < prec} c_n q^{n/ℓ}`.
//! Coefficients are exact rationals ([`Rat`]) in the algebraic layer and
//! complex doubles in the evaluation layer; [`QSeries::to_complex`] is the
//! explicit bridge.

mod coeff;
mod eta;
pub mod forms;
mod point;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use serde_json::{json, Value};

pub use coeff::{parse_rational, rational_to_f64, round_rational, Coeff};
pub use eta::{eta_expand, EtaQuotient};
pub use point::{ModularPoint, Sl2};

use crate::{Error, Result};

/// Exact rational coefficient type.
pub type Rat = BigRational;

/// Truncated Fourier–Laurent series.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries<C: Coeff> {
    ell: u32,
    v0: i64,
    prec: i64,
    prefactor24: i64,
    coeffs: Vec<C>,
}

/// A point value of a series together with a truncation-error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub error: f64,
}

impl<C: Coeff> QSeries<C> {
    /// Series `Σ coeffs[i] q^{(v0+i)/ℓ}` known for exponents below `v0 + len`.
    pub fn from_coeffs(ell: u32, v0: i64, coeffs: Vec<C>) -> Self {
        let prec = v0 + coeffs.len() as i64;
        Self::normalized(ell, v0, prec, 0, coeffs)
    }

    fn normalized(ell: u32, mut v0: i64, prec: i64, prefactor24: i64, mut coeffs: Vec<C>) -> Self {
        assert!(ell >= 1);
        let lead = coeffs.iter().position(|c| !c.is_nil()).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        v0 += lead as i64;
        QSeries { ell, v0, prec, prefactor24, coeffs }
    }

    /// The zero series known up to `q^{prec/ℓ}`.
    pub fn zero(ell: u32, prec: i64) -> Self {
        QSeries { ell, v0: prec, prec, prefactor24: 0, coeffs: Vec::new() }
    }

    /// `c · q^{n/ℓ} + O(q^{prec/ℓ})`.
    pub fn monomial(ell: u32, n: i64, c: C, prec: i64) -> Self {
        assert!(prec > n, "monomial q^{n} needs prec > {n}");
        let mut coeffs = vec![C::nil(); (prec - n) as usize];
        coeffs[0] = c;
        Self::normalized(ell, n, prec, 0, coeffs)
    }

    /// `1 + O(q^{prec/ℓ})`.
    pub fn one(ell: u32, prec: i64) -> Self {
        Self::monomial(ell, 0, C::unit(), prec)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Valuation in units of `1/ℓ` (equal to `prec` for the zero series).
    pub fn valuation(&self) -> i64 {
        self.v0
    }

    /// Exclusive upper exponent in units of `1/ℓ`.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn prefactor24(&self) -> i64 {
        self.prefactor24
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored coefficients, starting at exponent `valuation()`.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `q^{n/ℓ}` (zero below the valuation).
    ///
    /// # Panics
    /// If `n ≥ prec`.
    pub fn coeff(&self, n: i64) -> C {
        assert!(n < self.prec, "coefficient q^{n} beyond precision {}", self.prec);
        if n < self.v0 {
            C::nil()
        } else {
            self.coeffs[(n - self.v0) as usize].clone()
        }
    }

    /// Leading coefficient, `None` for the zero series.
    pub fn leading(&self) -> Option<&C> {
        self.coeffs.first()
    }

    /// Drop all terms at or above `q^{prec/ℓ}`.
    pub fn truncate(&self, prec: i64) -> Result<Self> {
        if prec > self.prec {
            return Err(Error::EmptyPrecision);
        }
        let keep = (prec - self.v0).max(0) as usize;
        let coeffs = self.coeffs.iter().take(keep).cloned().collect();
        Ok(Self::normalized(self.ell, self.v0.min(prec), prec, self.prefactor24, coeffs))
    }

    /// Map the coefficients into another ring.
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> QSeries<D> {
        QSeries::normalized(self.ell, self.v0, self.prec, self.prefactor24, self.coeffs.iter().map(f).collect())
    }

    pub fn to_complex(&self) -> QSeries<Complex64> {
        self.map(|c| c.to_complex())
    }

    /// Same function written in `q^{1/(k·ℓ)}`.
    pub fn rescale(&self, k: u32) -> Self {
        if k == 1 || self.is_zero() {
            return QSeries { ell: self.ell * k, v0: self.v0 * k as i64, prec: self.prec * k as i64, ..self.clone() };
        }
        let mut coeffs = vec![C::nil(); (self.coeffs.len() - 1) * k as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        let k64 = k as i64;
        let mut out = QSeries { ell: self.ell * k, v0: self.v0 * k64, prec: self.prec * k64, prefactor24: self.prefactor24, coeffs };
        out.pad_to_prec();
        out
    }

    fn pad_to_prec(&mut self) {
        if !self.is_zero() {
            let want = (self.prec - self.v0) as usize;
            self.coeffs.resize(want, C::nil());
        }
    }

    /// The series of `f(kτ)`, i.e. `q ↦ q^k`.
    pub fn at_multiple(&self, k: u32) -> Self {
        let mut s = self.rescale(k);
        s.ell = self.ell;
        s.prefactor24 = self.prefactor24 * k as i64;
        s
    }

    /// Move `q^{prefactor24/24}` into the exponents, rescaling `ℓ` if needed.
    pub fn absorb_prefactor(&self) -> Self {
        if self.prefactor24 == 0 {
            return self.clone();
        }
        let num = self.prefactor24 * self.ell as i64;
        let g = num.gcd(&24);
        let k = (24 / g) as u32;
        let mut s = self.rescale(k);
        let shift = self.prefactor24 * s.ell as i64 / 24;
        s.v0 += shift;
        s.prec += shift;
        s.prefactor24 = 0;
        s
    }

    /// Bring two series to a common `ℓ` (prefactors must already agree).
    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let l = a.ell.lcm(&b.ell);
        (a.rescale(l / a.ell), b.rescale(l / b.ell))
    }

    /// Cheap `ℓ` reduction: return to the smallest denominator that carries
    /// all nonzero exponents.
    pub fn simplify_ell(&self) -> Self {
        if self.ell == 1 {
            return self.clone();
        }
        let mut g = self.ell as i64;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_nil() {
                g = g.gcd(&(self.v0 + i as i64));
            }
        }
        g = g.gcd(&self.prec);
        if g <= 1 {
            return self.clone();
        }
        let g = g as usize;
        let coeffs: Vec<C> = self.coeffs.iter().step_by(g).cloned().collect();
        let v0 = self.v0 / g as i64;
        let prec = self.prec / g as i64;
        Self::normalized(self.ell / g as u32, v0, prec, self.prefactor24, coeffs)
    }

    /// Sum of two series with equal prefactors (after absorbing them).
    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = if self.prefactor24 == other.prefactor24 {
            (self.clone(), other.clone())
        } else {
            (self.absorb_prefactor(), other.absorb_prefactor())
        };
        let (a, b) = Self::common(&a, &b);
        let prec = a.prec.min(b.prec);
        let v0 = a.v0.min(b.v0).min(prec);
        let coeffs = (v0..prec)
            .map(|n| {
                let x = if n >= a.v0 && n < a.prec { a.coeff(n) } else { C::nil() };
                let y = if n >= b.v0 && n < b.prec { b.coeff(n) } else { C::nil() };
                x.add(&y)
            })
            .collect();
        Ok(Self::normalized(a.ell, v0, prec, a.prefactor24, coeffs))
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Add the constant `c` (requires prefactor 0 and `prec > 0`).
    pub fn add_constant(&self, c: &C) -> Result<Self> {
        let one = QSeries::monomial(self.ell, 0, c.clone(), self.prec.max(1));
        self.add(&one)
    }

    /// Product; precision is the largest one determined by both factors.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::common(self, other);
        let prefactor24 = a.prefactor24 + b.prefactor24;
        let prec = (a.prec + b.v0).min(b.prec + a.v0);
        let v0 = a.v0 + b.v0;
        if a.is_zero() || b.is_zero() {
            return Ok(QSeries { ell: a.ell, v0: prec, prec, prefactor24, coeffs: Vec::new() });
        }
        if prec <= v0 {
            return Err(Error::EmptyPrecision);
        }
        let coeffs = C::convolve(&a.coeffs, &b.coeffs, (prec - v0) as usize);
        Ok(Self::normalized(a.ell, v0, prec, prefactor24, coeffs))
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<Self> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        let inv0 = lead.inv().ok_or(Error::DivisionByZero)?;
        let n = (self.prec - self.v0) as usize;
        let coeffs = invert_unit(&self.coeffs, &inv0, n);
        Ok(QSeries {
            ell: self.ell,
            v0: -self.v0,
            prec: self.prec - 2 * self.v0,
            prefactor24: -self.prefactor24,
            coeffs,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse()?)
    }

    /// Integer power (negative powers invert first).
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(QSeries::one(self.ell, (self.prec - self.v0).max(1)));
        }
        let mut b = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc: Option<Self> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.mul(&b)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            b = b.mul(&b)?;
        }
        Ok(acc.expect("nonzero exponent"))
    }

    /// `Θ = q d/dq` applied to the series (including the prefactor).
    pub fn theta(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let n = self.v0 + i as i64;
                // n/ℓ + p/24 = (24 n + p ℓ)/(24 ℓ)
                let w = C::from_ratio(24 * n + self.prefactor24 * self.ell as i64, 24 * self.ell as i64);
                c.mul(&w)
            })
            .collect();
        Self::normalized(self.ell, self.v0, self.prec, self.prefactor24, coeffs)
    }

    /// Logarithmic derivative `Θf/f`; its constant term is `v0/ℓ + p/24`.
    pub fn theta_log_deriv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = QSeries { prefactor24: 0, ..self.clone() };
        let q = g.theta().div(&g)?;
        let c = C::from_ratio(self.prefactor24, 24);
        if c.is_nil() {
            Ok(q)
        } else {
            q.add_constant(&c)
        }
    }

    /// Evaluate at `τ`; the error estimate is the largest modulus among the
    /// last ten stored coefficients times the geometric tail `Σ_{n≥prec} |w|^n`,
    /// `w = e^{2πiτ/ℓ}`. The model is heuristic; callers needing certainty
    /// re-evaluate at a doubled precision.
    pub fn evaluate(&self, tau: ModularPoint) -> Evaluation {
        let z = tau.to_complex();
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let w = (two_pi_i * z / self.ell as f64).exp();
        let pre = (two_pi_i * z * (self.prefactor24 as f64 / 24.0)).exp();
        let mut pw = (two_pi_i * z * (self.v0 as f64 / self.ell as f64)).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        for c in &self.coeffs {
            sum += c.to_complex() * pw;
            pw *= w;
        }
        let r = w.norm();
        let tail_max = self.coeffs.iter().rev().take(10).map(|c| c.to_complex().norm()).fold(0.0, f64::max);
        let tail = if r < 1.0 { tail_max * r.powf(self.prec as f64) / (1.0 - r) } else { f64::INFINITY };
        Evaluation { value: pre * sum, error: pre.norm() * tail }
    }

    /// Evaluate and insist on the error estimate being below `tol`.
    pub fn evaluate_tol(&self, tau: ModularPoint, tol: f64) -> Result<Complex64> {
        let e = self.evaluate(tau);
        if e.error <= tol {
            Ok(e.value)
        } else {
            Err(Error::ToleranceUnreachable { tol, reason: format!("series truncation error {:e} at {tau}", e.error) })
        }
    }

    /// JSON form `{ell, v0, prec, prefactor24, coeffs}`.
    pub fn to_json(&self) -> Value {
        json!({
            "ell": self.ell,
            "v0": self.v0,
            "prec": self.prec,
            "prefactor24": self.prefactor24,
            "coeffs": self.coeffs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("series JSON: bad {what}"));
        let ell = v["ell"].as_u64().ok_or_else(|| bad("ell"))? as u32;
        let v0 = v["v0"].as_i64().ok_or_else(|| bad("v0"))?;
        let prec = v["prec"].as_i64().ok_or_else(|| bad("prec"))?;
        let p = v["prefactor24"].as_i64().ok_or_else(|| bad("prefactor24"))?;
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| bad("coeffs"))?
            .iter()
            .map(|c| C::from_json(c).ok_or_else(|| bad("coefficient")))
            .collect::<Result<Vec<C>>>()?;
        if ell == 0 || coeffs.len() as i64 != prec - v0 {
            return Err(bad("length"));
        }
        Ok(Self::normalized(ell, v0, prec, p, coeffs))
    }
}

fn invert_unit<C: Coeff>(a: &[C], inv0: &C, n: usize) -> Vec<C> {
    let mut b: Vec<C> = Vec::with_capacity(n);
    b.push(inv0.clone());
    for k in 1..n {
        let mut acc = C::nil();
        for j in 1..=k.min(a.len() - 1) {
            acc = acc.add(&a[j].mul(&b[k - j]));
        }
        b.push(acc.mul(inv0).neg());
    }
    b
}

impl QSeries<Rat> {
    /// Exact integer-valued check.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// `f^r` for a series `q^{v0}(1 + …)` with leading coefficient 1 and any
    /// rational `r` with `r·v0` integral, by the J.C.P. Miller recurrence.
    pub fn pow_rational(&self, r: &Rat) -> Result<Self> {
        use num_traits::{One, Zero};
        if self.leading() != Some(&Rat::one()) {
            return Err(Error::LeadingCoefficient);
        }
        let shift = r * Rat::from_integer(self.v0.into());
        if !shift.is_integer() {
            return Err(Error::OutOfRange("fractional valuation in power".into()));
        }
        let shift: i64 = num_traits::ToPrimitive::to_i64(&shift.to_integer()).unwrap();
        let n = (self.prec - self.v0) as usize;
        let a = &self.coeffs;
        let mut g: Vec<Rat> = Vec::with_capacity(n);
        g.push(Rat::one());
        let rp1 = r + Rat::one();
        for k in 1..n {
            let mut acc = Rat::zero();
            for j in 1..=k {
                if a[j].is_zero() {
                    continue;
                }
                let w = &rp1 * Rat::from_integer((j as i64).into()) - Rat::from_integer((k as i64).into());
                acc += w * &a[j] * &g[k - j];
            }
            g.push(acc / Rat::from_integer((k as i64).into()));
        }
        let mut out = QSeries::normalized(self.ell, shift, shift + n as i64, 0, g);
        out.prefactor24 = 0;
        if self.prefactor24 != 0 {
            let p = r * Rat::from_integer(self.prefactor24.into());
            if !p.is_integer() {
                return Err(Error::OutOfRange("fractional prefactor in power".into()));
            }
            out.prefactor24 = num_traits::ToPrimitive::to_i64(&p.to_integer()).unwrap();
        }
        Ok(out)
    }
}

/// Shorthand for an exact rational from integers.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

#[cfg(test)]
mod tests;

/// Serde helper writing a rational as `"p/q"`.
pub fn serialize_rat<S: serde::Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Serde helper writing a complex number as `[re, im]`.
pub fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}
