use crate::{Error, Result};

use super::Factorization;

/// A quadratic discriminant (nonzero, `≡ 0, 1 mod 4`), or the value 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Discriminant {
    pub value: i64,
    pub is_fundamental: bool,
}

fn squarefree(n: u64) -> bool {
    Factorization::of(n).factors.iter().all(|&(_, e)| e == 1)
}

impl Discriminant {
    pub fn new(value: i64) -> Result<Self> {
        if value == 0 || !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(value));
        }
        let is_fundamental = if value == 1 {
            true
        } else if value.rem_euclid(4) == 1 {
            squarefree(value.unsigned_abs())
        } else {
            let k = value / 4;
            matches!(k.rem_euclid(4), 2 | 3) && squarefree(k.unsigned_abs())
        };
        Ok(Discriminant { value, is_fundamental })
    }

    /// Like [`Discriminant::new`] but insists on a fundamental discriminant.
    pub fn fundamental(value: i64) -> Result<Self> {
        let d = Self::new(value)?;
        if d.is_fundamental {
            Ok(d)
        } else {
            Err(Error::NotFundamental(value))
        }
    }

    /// Split as `D0·f²` with `D0` fundamental; returns `(D0, f)`.
    pub fn fundamental_part(&self) -> (i64, u64) {
        let mut f = 1u64;
        for (p, e) in Factorization::of(self.value.unsigned_abs()).factors {
            for _ in 0..e / 2 {
                f *= p;
            }
        }
        // Largest square factor may overshoot when the cofactor is not a
        // discriminant (e.g. 4·odd square part); back off until valid.
        let mut best = (self.value, 1u64);
        for g in super::divisors(f).into_iter().rev() {
            let g2 = (g * g) as i64;
            if self.value % g2 != 0 {
                continue;
            }
            if let Ok(d0) = Discriminant::new(self.value / g2) {
                if d0.is_fundamental {
                    best = (d0.value, g);
                    break;
                }
            }
        }
        best
    }
}
