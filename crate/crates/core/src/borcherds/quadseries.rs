//! Series with coefficients in `Q(√D)`, stored as two rational series.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::qseries::{rational_to_f64, QSeries, Rat};
use crate::{Error, Result};

/// `X + Y√D` for rational q-series `X`, `Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadIntSeries {
    big_d: i64,
    rat: QSeries<Rat>,
    irr: QSeries<Rat>,
}

impl QuadIntSeries {
    pub fn new(big_d: i64, rat: QSeries<Rat>, irr: QSeries<Rat>) -> Self {
        let prec = rat.prec().min(irr.prec());
        QuadIntSeries {
            big_d,
            rat: rat.truncate(prec).expect("prec within both"),
            irr: irr.truncate(prec).expect("prec within both"),
        }
    }

    pub fn big_d(&self) -> i64 {
        self.big_d
    }

    pub fn rat(&self) -> &QSeries<Rat> {
        &self.rat
    }

    pub fn irr(&self) -> &QSeries<Rat> {
        &self.irr
    }

    pub fn prec(&self) -> i64 {
        self.rat.prec()
    }

    /// Coefficient of `qⁿ` as `(x, y)`.
    pub fn coeff(&self, n: i64) -> (Rat, Rat) {
        (self.rat.coeff(n), self.irr.coeff(n))
    }

    /// Galois conjugate `X − Y√D`.
    pub fn conj(&self) -> Self {
        QuadIntSeries { big_d: self.big_d, rat: self.rat.clone(), irr: self.irr.neg() }
    }

    pub fn truncate(&self, prec: i64) -> Result<Self> {
        Ok(QuadIntSeries { big_d: self.big_d, rat: self.rat.truncate(prec)?, irr: self.irr.truncate(prec)? })
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.big_d != other.big_d {
            return Err(Error::OutOfRange(format!("Q(√{}) vs Q(√{})", self.big_d, other.big_d)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let d = Rat::from_integer(self.big_d.into());
        let rat = self.rat.mul(&other.rat)?.add(&self.irr.mul(&other.irr)?.scale(&d))?;
        let irr = self.rat.mul(&other.irr)?.add(&self.irr.mul(&other.rat)?)?;
        Ok(Self::new(self.big_d, rat, irr))
    }

    /// `X² − DY²`.
    pub fn norm(&self) -> Result<QSeries<Rat>> {
        let d = Rat::from_integer(self.big_d.into());
        self.rat.mul(&self.rat)?.sub(&self.irr.mul(&self.irr)?.scale(&d))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let num = self.mul(&other.conj())?;
        let n = other.norm()?;
        Ok(Self::new(self.big_d, num.rat.div(&n)?, num.irr.div(&n)?))
    }

    /// Whether every coefficient lies in the ring of integers of `Q(√D)`.
    pub fn is_integral(&self) -> bool {
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        (self.rat.valuation().min(self.irr.valuation())..self.prec()).all(|n| {
            let (x, y) = self.coeff(n);
            if x.is_integer() && y.is_integer() {
                return true;
            }
            self.big_d % 4 == 1 && (&x - &half).is_integer() && (&y - &half).is_integer()
        })
    }

    /// Coefficients as doubles `x + y√D`, from `q^{v}` on.
    pub fn to_f64(&self, v: i64) -> Vec<f64> {
        let s = (self.big_d as f64).sqrt();
        (v..self.prec())
            .map(|n| {
                let (x, y) = self.coeff(n);
                rational_to_f64(&x) + s * rational_to_f64(&y)
            })
            .collect()
    }

    /// Same, as a complex series (for pointwise evaluation).
    pub fn to_complex(&self) -> QSeries<Complex64> {
        let v = self.rat.valuation().min(self.irr.valuation()).min(self.prec());
        QSeries::from_coeffs(1, v, self.to_f64(v).into_iter().map(Complex64::from).collect())
    }

    /// For `Ψ = 1 + O(q)` of norm 1, the rational series `L` with
    /// `log Ψ = √D·L`, from `ΘL = (XΘY − YΘX)/(X² − DY²)`.
    pub fn log_sqrt_d(&self) -> Result<QSeries<Rat>> {
        if self.rat.valuation() != 0 || !self.rat.coeff(0).is_one() || self.irr.valuation() <= 0 {
            return Err(Error::LeadingCoefficient);
        }
        let norm = self.norm()?;
        if (0..self.prec()).any(|n| norm.coeff(n) != if n == 0 { Rat::one() } else { Rat::zero() }) {
            return Err(Error::OutOfRange("logarithm needs a series of norm 1".into()));
        }
        let t = self.rat.mul(&self.irr.theta())?.sub(&self.irr.mul(&self.rat.theta())?)?;
        let coeffs = (0..self.prec())
            .map(|n| if n == 0 { Rat::zero() } else { t.coeff(n) / Rat::from_integer(n.into()) })
            .collect();
        Ok(QSeries::from_coeffs(1, 0, coeffs))
    }

    /// `exp(√D·L)` for a rational series given by coefficients `l[n]`
    /// (`l[0]` must vanish), via
    /// `n Xₙ = D Σ k l_k Y_{n−k}`, `n Yₙ = Σ k l_k X_{n−k}`.
    pub fn exp_sqrt_d(big_d: i64, l: &[Rat]) -> Result<Self> {
        if l.first().is_some_and(|c| !c.is_zero()) {
            return Err(Error::OutOfRange("exp needs a series without constant term".into()));
        }
        let n = l.len();
        let d = Rat::from_integer(big_d.into());
        let mut x = vec![Rat::zero(); n];
        let mut y = vec![Rat::zero(); n];
        if n > 0 {
            x[0] = Rat::one();
        }
        let kl: Vec<Rat> = l.iter().enumerate().map(|(k, c)| c * Rat::from_integer(k.into())).collect();
        for m in 1..n {
            let mut sx = Rat::zero();
            let mut sy = Rat::zero();
            for k in 1..=m {
                if kl[k].is_zero() {
                    continue;
                }
                sx += &kl[k] * &y[m - k];
                sy += &kl[k] * &x[m - k];
            }
            let mf = Rat::from_integer(m.into());
            x[m] = sx * &d / &mf;
            y[m] = sy / mf;
        }
        Ok(Self::new(big_d, QSeries::from_coeffs(1, 0, x), QSeries::from_coeffs(1, 0, y)))
    }
}
