//! Borcherds-type products `Ψ_D(f_d)` realized as finite CM products
//! `∏_Q (j − j(α_Q))^{χ_D(Q)/ω_Q}`, the exponents `c_d(Dn²)` of their
//! infinite-product form, and the Hecke operators relating them.
//!
//! Singular moduli of discriminant `dD` are not rational: the
//! polynomials `P_± = ∏_{χ_D(Q)=±1}(X − j(α_Q))` have coefficients in the
//! ring of integers of `Q(√D)` and are Galois conjugate. They are computed
//! in multiprecision, written as `x + y√D` with `2x, 2y` rounded to
//! integers, and from there every expansion is exact.

mod hecke;
mod quadseries;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{divisors, kronecker, Discriminant};
use crate::bqf::{class_reps, singular_modulus_mp, QuadForm};
use crate::mp::{round_to_bigint, to_f64, MpComplex, MpCtx};
use crate::qseries::forms::{j_invariant, j_value};
use crate::qseries::{ModularPoint, QSeries, Rat};
use crate::{Error, Result};

pub use hecke::{
    gauss_sum_check, hecke_halfint, mult_hecke, mult_hecke_series, verify_equivariance, EquivarianceRow, PlusSeries,
};
pub use quadseries::QuadIntSeries;

/// Rounding threshold for the half-integers `2x`, `2y`.
pub const ROUND_TOL: f64 = 1e-4;
/// First and last working precisions (bits) of the escalation ladder.
pub const START_BITS: usize = 256;
pub const MAX_BITS: usize = 2048;

/// One factor `(j − j(α_Q))^{χ_D(Q)/ω_Q}` of a CM product.
#[derive(Debug, Clone, Serialize)]
pub struct CmFactor {
    pub form: QuadForm,
    pub chi: i8,
    pub omega: u32,
    /// `j(α_Q)` rounded to double precision.
    pub j_re: f64,
    pub j_im: f64,
}

/// The CM product `Ψ_D(f_d) = P_+(j)/P_−(j)`.
#[derive(Debug, Clone, Serialize)]
pub struct CmProduct {
    pub d: i64,
    #[serde(rename = "D")]
    pub big_d: i64,
    pub factors: Vec<CmFactor>,
    /// `P_+` coefficients (constant term first) as `(2x, 2y)` with
    /// coefficient `x + y√D`; `P_−` is the conjugate.
    #[serde(serialize_with = "serialize_pairs")]
    pub plus_twice: Vec<(BigInt, BigInt)>,
    /// Largest distance of any `2x`, `2y` from its rounding.
    pub rounding_error: f64,
    /// Working precision at which the rounding succeeded.
    pub bits: usize,
}

impl CmProduct {
    /// Build the product for `d < 0` and fundamental `D > 1`, escalating the
    /// precision from [`START_BITS`] to [`MAX_BITS`] until the conjugate
    /// coefficients round cleanly.
    pub fn new(d: i64, big_d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::InvalidDiscriminant(d));
        }
        Discriminant::new(d)?;
        let dd = Discriminant::fundamental(big_d)?;
        if dd.value <= 1 {
            return Err(Error::InvalidDiscriminant(big_d));
        }
        let forms = class_reps(d * big_d)?;
        let mut labelled = Vec::with_capacity(forms.len());
        for q in &forms {
            labelled.push((*q, q.genus_char(big_d)?, q.stabilizer_order()));
        }
        if labelled.iter().all(|f| f.1 == 0) {
            return Err(Error::TrivialCharacter(d * big_d));
        }
        if labelled.iter().any(|f| f.1 != 0 && f.2 != 1) {
            // Never happens for D > 1; guards the ±1 exponent bookkeeping.
            return Err(Error::OutOfRange("elliptic CM point with nonzero character".into()));
        }
        let mut bits = START_BITS;
        loop {
            match Self::attempt(d, big_d, &labelled, bits) {
                Ok(p) => return Ok(p),
                Err(Error::RoundingFailure(_)) | Err(Error::PrecisionExhausted { .. }) if bits < MAX_BITS => bits *= 2,
                Err(Error::RoundingFailure(_)) => return Err(Error::PrecisionExhausted { bits }),
                Err(e) => return Err(e),
            }
        }
    }

    fn attempt(d: i64, big_d: i64, labelled: &[(QuadForm, i8, u32)], bits: usize) -> Result<Self> {
        let values: Vec<MpComplex> = labelled
            .par_iter()
            .map(|(q, _, _)| singular_modulus_mp(&mut MpCtx::new(bits), q))
            .collect::<Result<_>>()?;
        let mut ctx = MpCtx::new(bits);
        let expand = |ctx: &MpCtx, sign: i8| {
            let mut poly = vec![ctx.one()];
            for (v, (_, chi, _)) in values.iter().zip(labelled) {
                if *chi != sign {
                    continue;
                }
                // poly · (X − v)
                let mut next = vec![ctx.zero(); poly.len() + 1];
                for (k, c) in poly.iter().enumerate() {
                    next[k + 1] = ctx.add(&next[k + 1], c);
                    next[k] = ctx.sub(&next[k], &ctx.mul(c, v));
                }
                poly = next;
            }
            poly
        };
        let plus = expand(&ctx, 1);
        let minus = expand(&ctx, -1);
        if plus.len() != minus.len() {
            return Err(Error::RoundingFailure(format!(
                "genus halves of disc {} have sizes {} and {}",
                d * big_d,
                plus.len() - 1,
                minus.len() - 1
            )));
        }
        let rm = astro_float::RoundingMode::ToEven;
        let sqrt_d = ctx.sqrt(&ctx.int(big_d));
        let mut plus_twice = Vec::with_capacity(plus.len());
        let mut worst = 0.0f64;
        for (a, b) in plus.iter().zip(&minus) {
            let two_x = a.re.add(&b.re, bits, rm);
            let two_y = a.re.sub(&b.re, bits, rm).div(&sqrt_d, bits, rm);
            let (rx, ry) = (round_to_bigint(&two_x), round_to_bigint(&two_y));
            let ex = to_f64(&two_x.sub(&ctx.bigint(&rx), bits, rm)).abs();
            let ey = to_f64(&two_y.sub(&ctx.bigint(&ry), bits, rm)).abs();
            let ei = to_f64(&a.im).abs().max(to_f64(&b.im).abs());
            worst = worst.max(ex).max(ey).max(ei);
            plus_twice.push((rx, ry));
        }
        if !(worst < ROUND_TOL) {
            return Err(Error::RoundingFailure(format!(
                "disc {}: conjugate coefficients off by {worst:e} at {bits} bits",
                d * big_d
            )));
        }
        let factors = labelled
            .iter()
            .zip(&values)
            .map(|((form, chi, omega), v)| CmFactor {
                form: *form,
                chi: *chi,
                omega: *omega,
                j_re: to_f64(&v.re),
                j_im: to_f64(&v.im),
            })
            .collect();
        Ok(CmProduct { d, big_d, factors, plus_twice, rounding_error: worst, bits })
    }

    /// Coefficients `(x_k, y_k)` of `P_+ = Σ (x_k + y_k√D) X^k`.
    pub fn plus_coeffs(&self) -> Vec<(Rat, Rat)> {
        let two = BigInt::from(2);
        self.plus_twice
            .iter()
            .map(|(x, y)| (BigRational::new(x.clone(), two.clone()), BigRational::new(y.clone(), two.clone())))
            .collect()
    }

    /// Whether every coefficient of `P_±` is an algebraic integer of
    /// `Q(√D)`: `x, y ∈ Z`, or for `D ≡ 1 (mod 4)` also `x, y ∈ 1/2 + Z`.
    pub fn coefficients_integral(&self) -> bool {
        let odd = |n: &BigInt| (n % 2u8).is_one() || (n % 2u8) == BigInt::from(-1);
        self.plus_twice.iter().all(|(x, y)| {
            let (ox, oy) = (odd(x), odd(y));
            if self.big_d % 4 == 1 {
                ox == oy
            } else {
                !ox && !oy
            }
        })
    }

    /// `Ψ(τ) = ∏ (j(τ) − j(α_Q))^{χ_D(Q)}` from double-precision values.
    pub fn eval(&self, tau: ModularPoint) -> Complex64 {
        let j = j_value(tau);
        let mut num = Complex64::new(1.0, 0.0);
        let mut den = Complex64::new(1.0, 0.0);
        for f in &self.factors {
            let t = j - Complex64::new(f.j_re, f.j_im);
            match f.chi {
                1 => num *= t,
                -1 => den *= t,
                _ => {}
            }
        }
        num / den
    }

    /// Exact expansion `Ψ = X + Y√D = 1 + O(q)` up to `q^{prec}`.
    pub fn series(&self, prec: i64) -> Result<QuadIntSeries> {
        let coeffs = self.plus_coeffs();
        let h = coeffs.len() as i64 - 1;
        let j = j_invariant(prec + h + 1);
        // Horner: A + B√D = P_+(j)
        let mut a = QSeries::<Rat>::zero(1, prec + h + 1);
        let mut b = a.clone();
        for (x, y) in coeffs.iter().rev() {
            a = a.mul(&j)?.add_constant(x)?;
            b = b.mul(&j)?.add_constant(y)?;
        }
        let p = QuadIntSeries::new(self.big_d, a, b);
        let psi = p.div(&p.conj())?;
        psi.truncate(prec)
    }

    /// The same expansion computed purely in floating point from the
    /// double-precision singular moduli (independent cross-check).
    pub fn numeric_series(&self, prec: i64) -> Result<QSeries<Complex64>> {
        let h = self.factors.iter().filter(|f| f.chi == 1).count() as i64;
        let j = j_invariant(prec + h + 1).to_complex();
        let mut out = QSeries::<Complex64>::one(1, prec + 2 * h + 2);
        for f in &self.factors {
            if f.chi == 0 {
                continue;
            }
            let t = j.add_constant(&-Complex64::new(f.j_re, f.j_im))?;
            out = if f.chi == 1 { out.mul(&t)? } else { out.div(&t)? };
        }
        out.truncate(prec)
    }
}

fn serialize_pairs<S: serde::Serializer>(v: &[(BigInt, BigInt)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (x, y) in v {
        seq.serialize_element(&[x.to_string(), y.to_string()])?;
    }
    seq.end()
}

/// Exponents `c_d(Dn²)`, `n = 1..=nmax`, of
/// `Ψ = ∏_n ∏_{b mod D} (1 − e(b/D)qⁿ)^{(D/b) c_d(Dn²)}`.
///
/// With the Gauss sum `Σ_b (D/b) e(bk/D) = (D/k)√D`,
/// `log Ψ = −√D Σ_N q^N Σ_{nk=N} c(Dn²)(D/k)/k`. Writing `Ψ = P/P̄` with
/// `P = A + B√D` gives `Θ log Ψ = 2√D (AΘB − BΘA)/(A² − DB²)`, a rational
/// series times `√D`, which is inverted triangularly.
pub fn extract_cd(psi: &QuadIntSeries, nmax: usize) -> Result<Vec<BigInt>> {
    let big_d = psi.big_d();
    let ell = psi.log_sqrt_d()?;
    let mut c: Vec<BigInt> = Vec::with_capacity(nmax);
    for big_n in 1..=nmax as i64 {
        let l = ell.coeff(big_n);
        // −ℓ_N = Σ_{n|N} c(Dn²) (D/(N/n)) / (N/n)
        let mut rest = -l;
        for n in divisors(big_n as u64) {
            let n = n as i64;
            if n == big_n {
                continue;
            }
            let k = big_n / n;
            let chi = kronecker(big_d, k);
            if chi != 0 {
                rest -= BigRational::new(c[(n - 1) as usize].clone() * chi, BigInt::from(k));
            }
        }
        if !rest.is_integer() {
            return Err(Error::RoundingFailure(format!("c(D·{big_n}²) = {rest} is not an integer")));
        }
        c.push(rest.to_integer());
    }
    Ok(c)
}

/// Rebuild `Ψ` from exponents `c(Dn²)` up to `q^{prec}` (inverse of
/// [`extract_cd`]).
pub fn rebuild_product(big_d: i64, c: &[BigInt], prec: i64) -> Result<QuadIntSeries> {
    if (c.len() as i64) < prec - 1 {
        return Err(Error::OutOfRange(format!("{} exponents cannot fix q^{}", c.len(), prec - 1)));
    }
    // log Ψ / √D = −Σ_n c(Dn²) Σ_k (D/k) q^{nk}/k
    let mut l = vec![Rat::zero(); prec.max(1) as usize];
    for (i, cn) in c.iter().enumerate() {
        let n = i as i64 + 1;
        if cn.is_zero() {
            continue;
        }
        let mut k = 1;
        while n * k < prec {
            let chi = kronecker(big_d, k);
            if chi != 0 {
                l[(n * k) as usize] -= BigRational::new(cn * chi, BigInt::from(k));
            }
            k += 1;
        }
    }
    QuadIntSeries::exp_sqrt_d(big_d, &l)
}

/// Sanity helper used by tests and the CLI: the leading coefficient of
/// the exact expansion is 1 and it starts at `q^0`.
pub fn is_normalized(psi: &QuadIntSeries) -> bool {
    psi.rat().valuation() == 0 && psi.rat().coeff(0).is_one() && (psi.irr().is_zero() || psi.irr().valuation() > 0)
}
