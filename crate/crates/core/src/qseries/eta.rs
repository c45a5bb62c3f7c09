use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{QSeries, Rat};
use crate::{Error, Result};

/// Eta quotient `∏_δ η(δτ)^{r_δ}` of level `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotient {
    pub level: u64,
    /// `(δ, r_δ)` with `δ | N`; sorted by `δ`, no zero exponents.
    pub terms: Vec<(u64, i64)>,
}

impl EtaQuotient {
    pub fn new(level: u64, terms: Vec<(u64, i64)>) -> Result<Self> {
        if level == 0 {
            return Err(Error::OutOfRange("level must be positive".into()));
        }
        let mut merged: Vec<(u64, i64)> = Vec::new();
        let mut t = terms;
        t.sort_unstable();
        for (d, r) in t {
            if d == 0 || !level.is_multiple_of(d) {
                return Err(Error::OutOfRange(format!("{d} does not divide the level {level}")));
            }
            match merged.last_mut() {
                Some((e, s)) if *e == d => *s += r,
                _ => merged.push((d, r)),
            }
        }
        merged.retain(|&(_, r)| r != 0);
        Ok(EtaQuotient { level, terms: merged })
    }

    /// Twice the weight, `Σ r_δ`.
    pub fn weight_times_two(&self) -> i64 {
        self.terms.iter().map(|&(_, r)| r).sum()
    }

    /// Weight `Σ r_δ / 2`.
    pub fn weight(&self) -> Rat {
        Rat::new(self.weight_times_two().into(), 2.into())
    }

    /// Parse `"δ^r,δ^r,…@N"`, e.g. `"1^2,11^2@11"`.
    pub fn parse(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("eta quotient {s:?}: expected \"delta^r,...@N\""));
        let (terms, level) = s.trim().split_once('@').ok_or_else(err)?;
        let level: u64 = level.trim().parse().map_err(|_| err())?;
        let mut out = Vec::new();
        for t in terms.split(',').filter(|t| !t.trim().is_empty()) {
            let (d, r) = t.trim().split_once('^').unwrap_or((t.trim(), "1"));
            out.push((d.trim().parse().map_err(|_| err())?, r.trim().parse().map_err(|_| err())?));
        }
        Self::new(level, out)
    }

    /// Standard Delta function, `η(τ)^24`.
    pub fn delta() -> Self {
        EtaQuotient { level: 1, terms: vec![(1, 24)] }
    }

    /// `η(τ)²η(11τ)²`.
    pub fn h11() -> Self {
        EtaQuotient { level: 11, terms: vec![(1, 2), (11, 2)] }
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(d, r)| format!("{d}^{r}")).collect();
        write!(f, "{}@{}", parts.join(","), self.level)
    }
}

/// `∏_{n≥1} (1 − qⁿ)` from Euler's pentagonal number theorem, to `q^{prec}`.
fn euler_product(prec: i64) -> Vec<Rat> {
    let mut c = vec![Rat::zero(); prec.max(1) as usize];
    c[0] = Rat::one();
    let mut k = 1i64;
    loop {
        let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        let a = k * (3 * k - 1) / 2;
        let b = k * (3 * k + 1) / 2;
        if a >= prec {
            break;
        }
        c[a as usize] = sign.clone();
        if b < prec {
            c[b as usize] = sign;
        }
        k += 1;
    }
    c
}

/// Expansion of an eta quotient: `q^{Σδr/24} · ∏_δ ∏_n (1 − q^{δn})^{r_δ}`
/// with integer coefficients, known below `q^{prec}` (before the prefactor).
pub fn eta_expand(eq: &EtaQuotient, prec: i64) -> QSeries<Rat> {
    assert!(prec > 0);
    let base = QSeries::from_coeffs(1, 0, euler_product(prec));
    let mut acc: QSeries<Rat> = QSeries::one(1, prec);
    for &(d, r) in &eq.terms {
        let e = base.pow_rational(&BigRational::from_integer(r.into())).expect("leading 1");
        let e = e.at_multiple(d as u32).truncate(prec).expect("precision");
        acc = acc.mul(&e).expect("precision");
    }
    let p: i64 = eq.terms.iter().map(|&(d, r)| d as i64 * r).sum();
    QSeries { prefactor24: p, ..acc }
}
