use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::Value;

/// Coefficient ring of a [`super::QSeries`]: exact rationals or complex doubles.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_complex(&self) -> Complex64;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// First `n` coefficients of the Cauchy product of `a` and `b`.
    fn convolve(a: &[Self], b: &[Self], n: usize) -> Vec<Self> {
        (0..n)
            .map(|i| {
                let mut acc = Self::nil();
                let lo = i.saturating_sub(b.len().saturating_sub(1));
                for j in lo..=i.min(a.len().saturating_sub(1)) {
                    if i - j < b.len() {
                        acc = acc.add(&a[j].mul(&b[i - j]));
                    }
                }
                acc
            })
            .collect()
    }
}

impl Coeff for Complex64 {
    fn nil() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn unit() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_nil(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Coeff::is_nil(self)).then(|| 1.0 / self)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn to_json(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }
    fn from_json(v: &Value) -> Option<Self> {
        let a = v.as_array()?;
        Some(Complex64::new(a.first()?.as_f64()?, a.get(1)?.as_f64()?))
    }
}

fn lcm_denominators(xs: &[BigRational]) -> BigInt {
    xs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Big-integer convolution, parallel over output coefficients for long series.
pub(crate) fn convolve_int(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let one = |i: usize| {
        let mut acc = BigInt::zero();
        let lo = (i + 1).saturating_sub(b.len());
        let hi = i.min(a.len().saturating_sub(1));
        for j in lo..=hi {
            if !a[j].is_zero() {
                acc += &a[j] * &b[i - j];
            }
        }
        acc
    };
    if n * a.len().min(b.len()) > 20_000 {
        (0..n).into_par_iter().map(one).collect()
    } else {
        (0..n).map(one).collect()
    }
}

impl Coeff for BigRational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn from_json(v: &Value) -> Option<Self> {
        parse_rational(v.as_str()?)
    }

    fn convolve(a: &[Self], b: &[Self], n: usize) -> Vec<Self> {
        let la = lcm_denominators(a);
        let lb = lcm_denominators(b);
        let ai: Vec<BigInt> = a.iter().map(|x| x.numer() * (&la / x.denom())).collect();
        let bi: Vec<BigInt> = b.iter().map(|x| x.numer() * (&lb / x.denom())).collect();
        let den = la * lb;
        convolve_int(&ai, &bi, n)
            .into_iter()
            .map(|c| BigRational::new(c, den.clone()))
            .collect()
    }
}

/// Accurate conversion of a (possibly huge) rational to a double.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = nb - db - 60;
    let (n, d) = if shift > 0 {
        (x.numer().clone(), x.denom() << shift as usize)
    } else {
        (x.numer() << (-shift) as usize, x.denom().clone())
    };
    let q = (n / d).to_f64().unwrap_or(f64::NAN);
    q * 2f64.powi(shift as i32)
}

/// Parse `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if Zero::is_zero(&q) {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Round a rational to the nearest integer (ties away from zero).
pub fn round_rational(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let n = x.numer() * &two + if x.is_negative() { -x.denom() } else { x.denom().clone() };
    n / (x.denom() * two)
}
