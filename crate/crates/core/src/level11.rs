//! The worked example on `Γ0(11)`: the weight-2 form
//! `f = −(1/10)(E2(τ) − 11E2(11τ) + 24h)` with `h = η(τ)²η(11τ)²`, the basis
//! `f_{11,m} = q^{−m} + a(m)q^{−1} + O(q)` of functions with poles only at
//! `i∞`, the zeros of `f`, and the explicit divisor-sum identity.
//!
//! The basis is produced by exact linear algebra: `f_{11,m} = g/h^m` with
//! `g` a weight-`2m` polynomial in `E2 − 11E2(11τ)`, `h`, `E4`, `E4(11τ)`,
//! `E6`, `E6(11τ)` whose Fricke image vanishes to order `m` (so the quotient
//! is holomorphic at the cusp 0).

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::sigma;
use crate::qseries::forms::{e2_level, eisenstein_qexp};
use crate::qseries::{eta_expand, serialize_complex, serialize_rat, EtaQuotient, ModularPoint, QSeries, Rat};
use crate::{Error, Result};

const N: u32 = 11;

/// Generators of `M_*(Γ0(11))` used for the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    /// `E2(τ) − 11E2(11τ)`.
    E2Level,
    /// `η(τ)²η(11τ)²`.
    H,
    E4,
    E4At11,
    E6,
    E6At11,
}

impl Gen {
    pub const ALL: [Gen; 6] = [Gen::E2Level, Gen::H, Gen::E4, Gen::E4At11, Gen::E6, Gen::E6At11];

    pub fn weight(self) -> u32 {
        match self {
            Gen::E2Level | Gen::H => 2,
            Gen::E4 | Gen::E4At11 => 4,
            Gen::E6 | Gen::E6At11 => 6,
        }
    }

    /// Image under `g ↦ 11^{k/2}(11τ)^{−k} g(−1/(11τ))` as `(factor, generator)`.
    pub fn fricke(self) -> (Rat, Gen) {
        let r = |n: i64, d: i64| Rat::new(n.into(), d.into());
        match self {
            Gen::E2Level => (r(-1, 1), Gen::E2Level),
            Gen::H => (r(-1, 1), Gen::H),
            Gen::E4 => (r(121, 1), Gen::E4At11),
            Gen::E4At11 => (r(1, 121), Gen::E4),
            Gen::E6 => (r(1331, 1), Gen::E6At11),
            Gen::E6At11 => (r(1, 1331), Gen::E6),
        }
    }

    fn index(self) -> usize {
        Gen::ALL.iter().position(|&g| g == self).unwrap()
    }
}

/// `h = η(τ)²η(11τ)² = q − 2q² − q³ + 2q⁴ + …` below `q^{prec}`.
pub fn h11(prec: i64) -> QSeries<Rat> {
    eta_expand(&EtaQuotient::h11(), prec - 1).absorb_prefactor()
}

/// Expansions of the six generators below `q^{prec}`.
pub fn generator_series(prec: i64) -> [QSeries<Rat>; 6] {
    let at11 = |k| eisenstein_qexp(k, prec).unwrap().at_multiple(N).truncate(prec).unwrap();
    [
        e2_level(N, prec),
        h11(prec),
        eisenstein_qexp(4, prec).unwrap(),
        at11(4),
        eisenstein_qexp(6, prec).unwrap(),
        at11(6),
    ]
}

/// `f = −(1/10)(E2(τ) − 11E2(11τ) + 24h)`, constant term 1.
pub fn weight2_form(prec: i64) -> QSeries<Rat> {
    let g = generator_series(prec);
    g[0].add(&g[1].scale(&Rat::from_integer(24.into())))
        .unwrap()
        .scale(&Rat::new((-1).into(), 10.into()))
}

/// One row of the numerical check of the Fricke table.
#[derive(Debug, Clone, Serialize)]
pub struct FrickeRow {
    pub generator: String,
    pub u: f64,
    pub v: f64,
    pub rel_err: f64,
}

/// Verify `g|W = c·g'` numerically for every generator at the given points
/// (which should have `Im τ` and `Im(−1/(11τ))` both around 0.3 or more).
pub fn fricke_table_check(points: &[ModularPoint], prec: i64) -> Result<Vec<FrickeRow>> {
    let gens = generator_series(prec).map(|s| s.to_complex());
    let mut rows = Vec::new();
    for g in Gen::ALL {
        let (c, img) = g.fricke();
        let k = g.weight() as i32;
        for &tau in points {
            let z = tau.to_complex();
            let w = ModularPoint::from_complex(-1.0 / (11.0 * z));
            let lhs = 11f64.powf(k as f64 / 2.0) * (11.0 * z).powi(-k) * gens[g.index()].evaluate_tol(w, 1e-14)?;
            let rhs = crate::qseries::rational_to_f64(&c) * gens[img.index()].evaluate_tol(tau, 1e-14)?;
            rows.push(FrickeRow {
                generator: format!("{g:?}"),
                u: tau.u,
                v: tau.v,
                rel_err: (lhs - rhs).norm() / rhs.norm().max(1e-300),
            });
        }
    }
    Ok(rows)
}

/// Exponent vectors of all monomials of weight `2k` in the generators,
/// in a fixed order (lower-weight generators first).
fn monomials(k: u32) -> Vec<[u32; 6]> {
    fn rec(i: usize, left: u32, cur: &mut [u32; 6], out: &mut Vec<[u32; 6]>) {
        if i == 6 {
            if left == 0 {
                out.push(*cur);
            }
            return;
        }
        let w = Gen::ALL[i].weight();
        let mut e = 0;
        while e * w <= left {
            cur[i] = e;
            rec(i + 1, left - e * w, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, 2 * k, &mut [0; 6], &mut out);
    // Prefer monomials using few factors of the Eisenstein generators of
    // level one, for smaller coefficients.
    out.sort_by_key(|e| std::cmp::Reverse(e[0] + e[1]));
    out
}

/// A basis element `f_{11,m}` with its normalization data.
#[derive(Debug, Clone, Serialize)]
pub struct Basis11Element {
    pub m: i64,
    #[serde(skip)]
    pub series: QSeries<Rat>,
    /// `a₁₁(m, −1)`, the `q^{−1}` coefficient.
    #[serde(serialize_with = "serialize_rat")]
    pub a_minus1: Rat,
    /// Valuation of the Fricke image (`≥ 0` means holomorphic at 0).
    pub fricke_valuation: i64,
}

/// Cached generator expansions and Fricke images.
pub struct Level11 {
    prec: i64,
    gens: [QSeries<Rat>; 6],
    h: QSeries<Rat>,
}

impl Level11 {
    /// Prepare generators for bases known below `q^{prec}` up to pole
    /// order `max_m`.
    pub fn new(prec: i64, max_m: i64) -> Self {
        let p = prec + max_m + 2;
        let gens = generator_series(p);
        let h = gens[1].clone();
        Level11 { prec, gens, h }
    }

    fn monomial(&self, e: &[u32; 6], fricke: bool) -> Result<QSeries<Rat>> {
        let p = self.gens[0].prec();
        let mut acc = QSeries::<Rat>::one(1, p);
        let mut factor = Rat::one();
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let g = if fricke {
                let (c, img) = Gen::ALL[i].fricke();
                for _ in 0..k {
                    factor *= &c;
                }
                &self.gens[img.index()]
            } else {
                &self.gens[i]
            };
            acc = acc.mul(&g.pow(k as i64)?)?;
        }
        Ok(acc.scale(&factor))
    }

    /// `f_{11,m} = q^{−m} + a(m)q^{−1} + O(q)` below `q^{prec}`.
    pub fn basis(&self, m: i64) -> Result<Basis11Element> {
        if m < 2 {
            return Err(Error::OutOfRange(format!("f_11,m needs m ≥ 2, got {m}")));
        }
        let k = m as u32;
        let dim = 2 * k as usize;
        // Greedy choice of monomials spanning M_{2k}(Γ0(11)) (dimension 2k,
        // detected on the first 2k + 1 coefficients).
        let mut chosen: Vec<(QSeries<Rat>, [u32; 6])> = Vec::new();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for e in monomials(k) {
            let s = self.monomial(&e, false)?;
            let row: Vec<Rat> = (0..=dim as i64).map(|n| s.coeff(n)).collect();
            let mut trial = rows.clone();
            trial.push(row.clone());
            if linalg::rank(&trial) > rows.len() {
                rows.push(row);
                chosen.push((s, e));
                if chosen.len() == dim {
                    break;
                }
            }
        }
        if chosen.len() < dim {
            return Err(Error::SpanningFailure(format!(
                "generator monomials span only {} of {dim} dimensions in weight {}",
                chosen.len(),
                2 * k
            )));
        }
        // ord_0 ≥ k: the Fricke images vanish to order k.
        let fr: Vec<QSeries<Rat>> = chosen.iter().map(|(_, e)| self.monomial(e, true)).collect::<Result<_>>()?;
        let cond: Vec<Vec<Rat>> = (0..k as i64).map(|n| fr.iter().map(|s| s.coeff(n)).collect()).collect();
        let null = linalg::nullspace(&cond, dim);
        let hk = self.h.pow(k as i64)?;
        let cands: Vec<(QSeries<Rat>, QSeries<Rat>)> = null
            .iter()
            .map(|v| -> Result<_> {
                let mut g = QSeries::<Rat>::zero(1, chosen[0].0.prec());
                let mut gf = QSeries::<Rat>::zero(1, fr[0].prec());
                for (j, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        g = g.add(&chosen[j].0.scale(c))?;
                        gf = gf.add(&fr[j].scale(c))?;
                    }
                }
                Ok((g.div(&hk)?, gf))
            })
            .collect::<Result<_>>()?;
        // Impose the shape q^{−m} + a q^{−1} + O(q): conditions on the
        // coefficients at q^{−m}, …, q^{−2} and q^0.
        let exps: Vec<i64> = (-m..=0).filter(|&n| n != -1).collect();
        let a: Vec<Vec<Rat>> = exps.iter().map(|&n| cands.iter().map(|(s, _)| s.coeff(n)).collect()).collect();
        let mut rhs = vec![Rat::zero(); exps.len()];
        rhs[0] = Rat::one();
        let x = linalg::solve(&a, &rhs).ok_or_else(|| {
            Error::SpanningFailure(format!("principal parts of weight-{} quotients miss q^-{m}", 2 * k))
        })?;
        let mut f = QSeries::<Rat>::zero(1, cands[0].0.prec());
        let mut ff = QSeries::<Rat>::zero(1, cands[0].1.prec());
        for (c, (s, sf)) in x.iter().zip(&cands) {
            if !c.is_zero() {
                f = f.add(&s.scale(c))?;
                ff = ff.add(&sf.scale(c))?;
            }
        }
        let f = f.truncate(self.prec)?;
        // (g/h^k)|W = (g|W)/(−h)^k
        let hk_w = self.h.neg().pow(k as i64)?;
        let fw = ff.div(&hk_w)?;
        let fricke_valuation = if fw.is_zero() { fw.prec() } else { fw.valuation() };
        if fricke_valuation < 0 {
            return Err(Error::SpanningFailure(format!("f_11,{m} has a pole at the cusp 0")));
        }
        Ok(Basis11Element { m, a_minus1: f.coeff(-1), series: f, fricke_valuation })
    }
}

/// Right-hand side of the explicit identity,
/// `−Coeff_{q^m}(Θf/f) + b(m)·Coeff_q(Θf/f) + (k/5)(σ₁(m) − 121σ₁(m/11) − b(m))`,
/// with `b(m)` the `q^m` coefficient of `h`.
pub fn bklor_rhs(m: i64, k: i64, logdiv: &QSeries<Rat>, h: &QSeries<Rat>) -> Result<Rat> {
    if logdiv.prec() <= m || h.prec() <= m {
        return Err(Error::EmptyPrecision);
    }
    let b = h.coeff(m);
    let s11 = if m % 11 == 0 { sigma(1, (m / 11) as u64) } else { Zero::zero() };
    let tail = Rat::from_integer(sigma(1, m as u64) - s11 * 121u32) - &b;
    Ok(-logdiv.coeff(m) + &b * logdiv.coeff(1) + Rat::new(k.into(), 5.into()) * tail)
}

/// Newton's method on `f` (derivative `2πiΘf`) from each seed; converged
/// points with `|f(z)| < 1e−10` are returned, duplicates merged.
pub fn find_zeros(f: &QSeries<Rat>, seeds: &[ModularPoint]) -> Result<Vec<ModularPoint>> {
    let fc = f.to_complex();
    let df = f.theta().to_complex();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mut out: Vec<ModularPoint> = Vec::new();
    for &seed in seeds {
        let mut z = seed.to_complex();
        let mut done = false;
        for _ in 0..100 {
            let p = ModularPoint::from_complex(z);
            let val = fc.evaluate(p).value;
            let der = two_pi_i * df.evaluate(p).value;
            let step = val / der;
            z -= step;
            if z.im <= 0.0 {
                break;
            }
            if step.norm() < 1e-15 * z.norm() {
                done = fc.evaluate(ModularPoint::from_complex(z)).value.norm() < 1e-10;
                break;
            }
        }
        if !done {
            return Err(Error::NoConvergence(format!("Newton from {seed} did not converge")));
        }
        let p = ModularPoint::from_complex(z);
        if !out.iter().any(|q| (q.to_complex() - z).norm() < 1e-9) {
            out.push(p);
        }
    }
    Ok(out)
}

/// One row of the explicit identity check.
#[derive(Debug, Clone, Serialize)]
pub struct BklorRow {
    pub m: i64,
    #[serde(serialize_with = "serialize_complex")]
    pub lhs: Complex64,
    #[serde(serialize_with = "serialize_rat")]
    pub rhs: Rat,
    pub abs_err: f64,
}

/// Full report: zeros, per-`m` rows and the product `f_{11,2}(z₊)f_{11,2}(z₋)`.
#[derive(Debug, Clone, Serialize)]
pub struct BklorReport {
    pub zeros: Vec<[f64; 2]>,
    pub rows: Vec<BklorRow>,
    #[serde(serialize_with = "serialize_complex")]
    pub product: Complex64,
    /// `f_{11,2}(z₊)` and `f_{11,2}(z₋)`.
    pub values_m2: Vec<[f64; 2]>,
}

/// Series lengths used by [`bklor_check`].
pub const F_PREC: i64 = 400;
pub const BASIS_PREC: i64 = 160;

/// Zeros `z₊`, `z₋` of `f` (in that order).
pub fn level11_zeros() -> Result<Vec<ModularPoint>> {
    let f = weight2_form(F_PREC);
    let mut z = find_zeros(&f, &[ModularPoint::new(0.23, 0.2), ModularPoint::new(-0.23, 0.2)])?;
    z.sort_by(|a, b| b.u.total_cmp(&a.u));
    Ok(z)
}

/// Evaluate `f_{11,m}(z₊) + f_{11,m}(z₋)` against the exact right-hand side.
pub fn bklor_check(ms: &[i64]) -> Result<BklorReport> {
    let f = weight2_form(F_PREC);
    let logdiv = f.theta_log_deriv()?;
    let zeros = level11_zeros()?;
    if zeros.len() != 2 {
        return Err(Error::NoConvergence(format!("expected two zeros, found {}", zeros.len())));
    }
    let max_m = ms.iter().copied().max().unwrap_or(2).max(2);
    let ctx = Level11::new(BASIS_PREC, max_m);
    let eval = |s: &QSeries<Rat>| -> Result<Vec<Complex64>> {
        let c = s.to_complex();
        zeros.iter().map(|&z| c.evaluate_tol(z, 1e-9)).collect()
    };
    let mut rows = Vec::new();
    for &m in ms {
        let b = ctx.basis(m)?;
        let vals = eval(&b.series)?;
        let lhs = vals.iter().sum::<Complex64>();
        let rhs = bklor_rhs(m, 2, &logdiv, &ctx.h)?;
        let abs_err = (lhs - crate::qseries::rational_to_f64(&rhs)).norm();
        rows.push(BklorRow { m, lhs, rhs, abs_err });
    }
    let v2 = eval(&ctx.basis(2)?.series)?;
    Ok(BklorReport {
        zeros: zeros.iter().map(|z| [z.u, z.v]).collect(),
        rows,
        product: v2[0] * v2[1],
        values_m2: v2.iter().map(|z| [z.re, z.im]).collect(),
    })
}

mod linalg {
    //! Exact Gaussian elimination over the rationals.

    use num_traits::{One, Zero};

    use crate::qseries::Rat;

    /// Row-reduce in place; returns pivot columns.
    fn rref(m: &mut [Vec<Rat>], cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = Rat::one() / &m[r][c];
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..m[r].len() {
                        let t = &f * &m[r][j];
                        m[i][j] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.len() {
                break;
            }
        }
        pivots
    }

    pub fn rank(rows: &[Vec<Rat>]) -> usize {
        let cols = rows.first().map_or(0, |r| r.len());
        rref(&mut rows.to_vec(), cols).len()
    }

    /// Basis of `{x : A x = 0}` for `A` with `cols` columns.
    pub fn nullspace(a: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
        let mut m = a.to_vec();
        let pivots = rref(&mut m, cols);
        (0..cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Rat::zero(); cols];
                v[free] = Rat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[row][free].clone();
                }
                v
            })
            .collect()
    }

    /// The unique solution of a square system, if it exists.
    pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
        let n = a.len();
        if a.iter().any(|r| r.len() != n) {
            return None;
        }
        let mut m: Vec<Vec<Rat>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
        let pivots = rref(&mut m, n);
        (pivots.len() == n).then(|| m.iter().map(|r| r[n].clone()).collect())
    }

    #[cfg(test)]
    mod tests {
        use super::*;
        use crate::qseries::rat;

        #[test]
        fn small_systems() {
            let a = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(3, 1), rat(4, 1)]];
            assert_eq!(solve(&a, &[rat(5, 1), rat(6, 1)]).unwrap(), vec![rat(-4, 1), rat(9, 2)]);
            let s = vec![vec![rat(1, 1), rat(2, 1), rat(3, 1)]];
            let ns = nullspace(&s, 3);
            assert_eq!(ns.len(), 2);
            for v in ns {
                assert!((rat(1, 1) * &v[0] + rat(2, 1) * &v[1] + rat(3, 1) * &v[2]).is_zero());
            }
            assert_eq!(rank(&[vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]]), 1);
        }
    }
}

#[cfg(test)]
mod tests;
