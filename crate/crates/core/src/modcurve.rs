//! Cusps, widths, index and the valence formula on `Γ0(N)`.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{divisors, kronecker, Factorization};
use crate::qseries::{EtaQuotient, ModularPoint, Rat};
use crate::{Error, Result};

/// A cusp `a/c` of `Γ0(N)`; `i∞` is stored as `1/0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CuspInfo {
    pub a: i64,
    pub c: i64,
    pub width: u64,
    /// `[a, b, c, d]` in `SL2(Z)` mapping `i∞` to the cusp.
    pub scaling: [i64; 4],
}

impl CuspInfo {
    pub fn is_infinity(&self) -> bool {
        self.c == 0
    }

    /// Denominator used in level formulas (`N` for `i∞`).
    fn denominator(&self, level: u64) -> u64 {
        if self.c == 0 {
            level
        } else {
            self.c as u64
        }
    }

    pub fn label(&self) -> String {
        if self.c == 0 {
            "i∞".to_string()
        } else {
            format!("{}/{}", self.a, self.c)
        }
    }
}

/// Where an entry of a divisor sits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DivisorLocation {
    Point(ModularPointRepr),
    Cusp(CuspInfo),
}

/// Serializable copy of a [`ModularPoint`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModularPointRepr {
    pub u: f64,
    pub v: f64,
}

impl From<ModularPoint> for ModularPointRepr {
    fn from(p: ModularPoint) -> Self {
        ModularPointRepr { u: p.u, v: p.v }
    }
}

/// One entry `ord_z(f)` of a divisor with stabilizer size `ω`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisorEntry {
    pub location: DivisorLocation,
    #[serde(serialize_with = "crate::qseries::serialize_rat")]
    pub order: Rat,
    pub omega: u32,
}

/// `[SL2(Z) : Γ0(N)] = N ∏_{p|N} (1 + 1/p)`.
pub fn index_gamma0(n: u64) -> u64 {
    assert!(n >= 1);
    Factorization::of(n).primes().fold(n, |acc, p| acc / p * (p + 1))
}

/// Hyperbolic volume of `Γ0(N)\H`, `(π/3)·index`.
pub fn volume(n: u64) -> f64 {
    std::f64::consts::PI / 3.0 * index_gamma0(n) as f64
}

/// Numbers `(ν2, ν3)` of elliptic points of order 2 and 3 on `Γ0(N)`.
pub fn elliptic_counts(n: u64) -> (u64, u64) {
    let f = Factorization::of(n);
    let nu2 = if n.is_multiple_of(4) { 0 } else { f.primes().map(|p| (1 + kronecker(-1, p as i64)) as u64).product() };
    let nu3 = if n.is_multiple_of(9) { 0 } else { f.primes().map(|p| (1 + kronecker(-3, p as i64)) as u64).product() };
    (nu2, nu3)
}

/// One representative per cusp class: `a/c` with `c | N`, `a` running
/// over units mod `gcd(c, N/c)`.
pub fn cusp_list(n: u64) -> Vec<CuspInfo> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for c in divisors(n) {
        let g = c.gcd(&(n / c));
        let width = n / (c * c).gcd(&n);
        for r in 0..g {
            if r.gcd(&g) != 1 {
                continue;
            }
            if c == n {
                out.push(CuspInfo { a: 1, c: 0, width, scaling: [1, 0, 0, 1] });
                continue;
            }
            let a = (0..).map(|k| r + k * g).find(|a| a.gcd(&c) == 1).unwrap();
            let (a, c) = (a as i64, c as i64);
            // a d − b c = 1
            let e = a.extended_gcd(&c);
            let (d, b) = (e.x, -e.y);
            out.push(CuspInfo { a, c, width, scaling: [a, b, c, d] });
        }
    }
    out
}

/// Order of an eta quotient at a cusp in the local parameter `q^{1/ℓ}`:
/// `N/(24 gcd(c², N)) · Σ_δ gcd(c, δ)² r_δ / δ`.
pub fn eta_cusp_order(eq: &EtaQuotient, cusp: &CuspInfo) -> Rat {
    let n = eq.level;
    let c = cusp.denominator(n);
    let mut s = Rat::zero();
    for &(d, r) in &eq.terms {
        let g = c.gcd(&d);
        s += Rat::new(((g * g) as i64 * r).into(), (d as i64).into());
    }
    s * Rat::new((n as i64).into(), (24 * (c * c).gcd(&n) as i64).into())
}

/// Whether an eta quotient is a form on `Γ0(N)` with trivial character
/// (Newman's conditions).
pub fn check_trivial_multiplier(eq: &EtaQuotient) -> Result<()> {
    let n = eq.level as i64;
    let s1: i64 = eq.terms.iter().map(|&(d, r)| d as i64 * r).sum();
    let s2: i64 = eq.terms.iter().map(|&(d, r)| n / d as i64 * r).sum();
    let k2 = eq.weight_times_two();
    if s1.rem_euclid(24) != 0 {
        return Err(Error::NontrivialMultiplier(format!("Σ δ r_δ = {s1} is not divisible by 24")));
    }
    if s2.rem_euclid(24) != 0 {
        return Err(Error::NontrivialMultiplier(format!("Σ (N/δ) r_δ = {s2} is not divisible by 24")));
    }
    if k2 % 2 != 0 {
        return Err(Error::NontrivialMultiplier("half-integral weight".into()));
    }
    let k = k2 / 2;
    // (−1)^k ∏ δ^{r_δ} must be a rational square.
    let mut odd_primes = std::collections::BTreeMap::<u64, i64>::new();
    for &(d, r) in &eq.terms {
        for (p, e) in Factorization::of(d).factors {
            *odd_primes.entry(p).or_default() += e as i64 * r;
        }
    }
    if k % 2 != 0 || odd_primes.values().any(|e| e % 2 != 0) {
        return Err(Error::NontrivialMultiplier("(−1)^k ∏ δ^{r_δ} is not a square".into()));
    }
    Ok(())
}

/// Outcome of the valence formula for an eta quotient.
#[derive(Debug, Clone, Serialize)]
pub struct ValenceReport {
    pub quotient: String,
    pub weight: i64,
    pub index: u64,
    pub orders: Vec<(String, String)>,
    #[serde(serialize_with = "crate::qseries::serialize_rat")]
    pub lhs: Rat,
    #[serde(serialize_with = "crate::qseries::serialize_rat")]
    pub rhs: Rat,
    pub equal: bool,
}

/// Σ over cusps of the order versus `(k/12)·index` (eta quotients have no
/// zeros or poles on `H`).
pub fn valence_check(eq: &EtaQuotient) -> Result<ValenceReport> {
    check_trivial_multiplier(eq)?;
    let k = eq.weight_times_two() / 2;
    let index = index_gamma0(eq.level);
    let mut lhs = Rat::zero();
    let mut orders = Vec::new();
    for cusp in cusp_list(eq.level) {
        let o = eta_cusp_order(eq, &cusp);
        orders.push((cusp.label(), o.to_string()));
        lhs += o;
    }
    let rhs = Rat::new((k * index as i64).into(), 12.into());
    Ok(ValenceReport { quotient: eq.to_string(), weight: k, index, orders, equal: lhs == rhs, lhs, rhs })
}

/// Round a rational known to be integral.
pub fn rat_to_i64(x: &Rat) -> Option<i64> {
    x.is_integer().then(|| x.to_integer().to_i64()).flatten()
}
