//! Minimal multiprecision complex arithmetic on top of `astro-float`,
//! used for singular moduli whose class polynomials must be recognised
//! exactly.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision plus the constant cache of `astro-float`.
pub struct MpCtx {
    pub bits: usize,
    cc: Consts,
}

/// Complex number with `BigFloat` parts.
#[derive(Debug, Clone)]
pub struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl MpCtx {
    pub fn new(bits: usize) -> Self {
        MpCtx { bits, cc: Consts::new().expect("astro-float constants") }
    }

    pub fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits)
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.bits)
    }

    pub fn bigint(&mut self, n: &BigInt) -> BigFloat {
        BigFloat::parse(&n.to_string(), Radix::Dec, self.bits, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }

    pub fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.bits, RM)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.bits, RM, &mut self.cc)
    }

    pub fn zero(&self) -> MpComplex {
        MpComplex { re: self.int(0), im: self.int(0) }
    }

    pub fn one(&self) -> MpComplex {
        MpComplex { re: self.int(1), im: self.int(0) }
    }

    pub fn from_real(&self, x: BigFloat) -> MpComplex {
        MpComplex { re: x, im: self.int(0) }
    }

    /// `r · e^{iθ}`.
    pub fn polar(&mut self, r: &BigFloat, theta: &BigFloat) -> MpComplex {
        let c = theta.cos(self.bits, RM, &mut self.cc);
        let s = theta.sin(self.bits, RM, &mut self.cc);
        MpComplex { re: r.mul(&c, self.bits, RM), im: r.mul(&s, self.bits, RM) }
    }

    pub fn add(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        MpComplex { re: a.re.add(&b.re, self.bits, RM), im: a.im.add(&b.im, self.bits, RM) }
    }

    pub fn sub(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        MpComplex { re: a.re.sub(&b.re, self.bits, RM), im: a.im.sub(&b.im, self.bits, RM) }
    }

    pub fn mul(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        let p = self.bits;
        MpComplex {
            re: a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM),
            im: a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM),
        }
    }

    pub fn scale(&self, a: &MpComplex, x: &BigFloat) -> MpComplex {
        MpComplex { re: a.re.mul(x, self.bits, RM), im: a.im.mul(x, self.bits, RM) }
    }

    pub fn div(&self, a: &MpComplex, b: &MpComplex) -> MpComplex {
        let p = self.bits;
        let den = b.re.mul(&b.re, p, RM).add(&b.im.mul(&b.im, p, RM), p, RM);
        let re = a.re.mul(&b.re, p, RM).add(&a.im.mul(&b.im, p, RM), p, RM);
        let im = a.im.mul(&b.re, p, RM).sub(&a.re.mul(&b.im, p, RM), p, RM);
        MpComplex { re: re.div(&den, p, RM), im: im.div(&den, p, RM) }
    }
}

/// Nearest integer to a finite `BigFloat`.
pub fn round_to_bigint(x: &BigFloat) -> BigInt {
    let Some((words, _, sign, e, _)) = x.as_raw_parts() else {
        return BigInt::zero();
    };
    if x.is_zero() {
        return BigInt::zero();
    }
    let mut mag = BigUint::zero();
    for w in words.iter().rev() {
        mag = (mag << WORD_BIT_SIZE) + BigUint::from(*w);
    }
    // value = mag · 2^{e − bits(words)}
    let shift = e as i64 - (words.len() * WORD_BIT_SIZE) as i64;
    let mag = if shift >= 0 {
        mag << shift as usize
    } else {
        let s = (-shift) as usize;
        (mag + (BigUint::from(1u8) << (s - 1))) >> s
    };
    let m = BigInt::from(mag);
    if sign == Sign::Neg {
        -m
    } else {
        m
    }
}

/// Double nearest to a finite `BigFloat`.
pub fn to_f64(x: &BigFloat) -> f64 {
    let Some((words, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    if x.is_zero() {
        return 0.0;
    }
    let top = *words.last().unwrap() as f64;
    let next = if words.len() > 1 { words[words.len() - 2] as f64 } else { 0.0 };
    let m = top + next / 2f64.powi(WORD_BIT_SIZE as i32);
    let v = m * 2f64.powi(e - WORD_BIT_SIZE as i32);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `|x − round(x)|` as a double, for near-integer checks.
pub fn distance_to_integer(ctx: &MpCtx, x: &BigFloat) -> f64 {
    let r = round_to_bigint(x);
    let rf = BigFloat::parse(&r.to_string(), Radix::Dec, ctx.bits, RM, &mut Consts::new().unwrap());
    to_f64(&x.sub(&rf, ctx.bits, RM)).abs()
}

/// Convert a `BigInt` that fits to `i64`, for diagnostics.
pub fn small(n: &BigInt) -> Option<i64> {
    n.to_i64()
}
