//! The end-to-end acceptance suite: one pass/fail verdict per criterion,
//! each with its pinned tolerances and runtime budget.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use divsum::arith::{divisors, gcd, kronecker, sigma};
use divsum::borcherds::{extract_cd, rebuild_product, verify_equivariance, CmProduct};
use divsum::eisenstein::{
    eis_value, hecke_weight0, kronecker_limit_check, m_function, m_function_factored, m_function_prime_power,
    verify_dit, EisMode, EisSpec,
};
use divsum::level11::{bklor_check, Level11};
use divsum::modcurve::{check_trivial_multiplier, valence_check};
use divsum::qseries::forms::{eisenstein_qexp, hecke_system};
use divsum::qseries::{rat, EtaQuotient, Rat};
use divsum::regint::{eisen_case_check, rohrlich_check, rohrlich_constants, RohrlichForm};
use divsum::{ModularPoint, Result};

/// Verdict for one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub runtime_ms: u128,
    pub budget_ms: u128,
}

impl Criterion {
    /// `[PASS] 3 valence formula: … (0.41 s / 5 s)`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {} ({:.2} s / {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.runtime_ms as f64 / 1000.0,
            self.budget_ms / 1000
        )
    }
}

/// Run a check, timing it and folding the runtime budget into the verdict.
fn timed(id: u8, title: &'static str, budget: Duration, f: impl FnOnce() -> Result<(bool, String)>) -> Criterion {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match out {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > budget {
        passed = false;
        detail.push_str(&format!("; over budget ({:.2} s)", elapsed.as_secs_f64()));
    }
    Criterion { id, title, passed, detail, runtime_ms: elapsed.as_millis(), budget_ms: budget.as_millis() }
}

/// `j_n = q^{−n} + 24σ₁(n) + O(q)` for `n ≤ 20`, `j₁ = q^{−1} + 24 + 196884q + …`
/// and `j₂ = j² − 1488j + 159840`.
pub fn hecke_normalization() -> Criterion {
    timed(1, "Hecke-system normalization", Duration::from_secs(1), || {
        let hs = hecke_system(20, 3);
        let mut bad = Vec::new();
        for (i, s) in hs.series.iter().enumerate() {
            let n = i as i64 + 1;
            let principal_ok = s.valuation() == -n && s.coeff(-n).is_one() && ((-n + 1)..0).all(|m| s.coeff(m).is_zero());
            if !principal_ok || s.coeff(0) != Rat::from_integer(sigma(1, n as u64) * 24) {
                bad.push(n);
            }
        }
        let j1 = hs.series[0].coeff(1) == rat(196884, 1);
        let j2 = hs.polys[1] == vec![rat(159840, 1), rat(-1488, 1), rat(1, 1)];
        Ok((
            bad.is_empty() && j1 && j2,
            format!("n ≤ 20 normalized: {}; j₁ q-coefficient 196884: {j1}; j₂ = j² − 1488j + 159840: {j2}", bad.is_empty()),
        ))
    })
}

/// `j_n(ρ)/3 = −Coeff_{qⁿ}(ΘE4/E4)` exactly for `n ≤ 10`.
pub fn level_one_divisor_sum() -> Criterion {
    timed(2, "level-1 divisor-sum identity for E4", Duration::from_secs(1), || {
        let hs = hecke_system(10, 2);
        let ld = eisenstein_qexp(4, 12)?.theta_log_deriv()?;
        let failures: Vec<usize> =
            (1..=10).filter(|&n| &hs.polys[n - 1][0] / rat(3, 1) != -ld.coeff(n as i64)).collect();
        Ok((failures.is_empty(), format!("exact for n = 1..10, failures: {failures:?}")))
    })
}

/// Random eta quotients of level `≤ max_level` with trivial multiplier.
pub fn random_eta_quotients(count: usize, max_level: u64, seed: u64) -> Vec<EtaQuotient> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=max_level);
        let terms = divisors(n).into_iter().map(|d| (d, rng.gen_range(-8i64..=8))).collect();
        let eq = EtaQuotient::new(n, terms).expect("divisors of the level");
        if !eq.terms.is_empty() && check_trivial_multiplier(&eq).is_ok() {
            out.push(eq);
        }
    }
    out
}

/// Valence formula for `Δ`, `h₁₁` and 100 random eta quotients.
pub fn valence(seed: u64) -> Criterion {
    timed(3, "valence formula for eta quotients", Duration::from_secs(5), || {
        let mut quotients = vec![EtaQuotient::delta(), EtaQuotient::h11()];
        quotients.extend(random_eta_quotients(100, 36, seed));
        let mut failed = Vec::new();
        for q in &quotients {
            if !valence_check(q)?.equal {
                failed.push(q.to_string());
            }
        }
        Ok((failed.is_empty(), format!("{} quotients exact, failures: {failed:?}", quotients.len())))
    })
}

/// Rohrlich's formula for `E4` and `E6` plus the constants identity.
pub fn rohrlich() -> Criterion {
    timed(4, "Rohrlich formula for E4 and E6", Duration::from_secs(120), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for f in [RohrlichForm::E4, RohrlichForm::E6] {
            let r = rohrlich_check(f, 8.0, 1e-8)?;
            ok &= r.abs_err < 1e-3 && r.runtime_ms < 60_000;
            parts.push(format!("{f:?} |lhs − rhs| = {:.1e}", r.abs_err));
        }
        let (a, b) = rohrlich_constants(1.0);
        ok &= (a - b).abs() < 1e-12;
        parts.push(format!("constants identity diff {:.1e}", (a - b).abs()));
        Ok((ok, parts.join("; ")))
    })
}

/// The level-11 example: right sides, left sides, product, zeros and the
/// degree-four relation.
pub fn level11() -> Criterion {
    timed(5, "level-11 explicit identity", Duration::from_secs(30), || {
        let r = bklor_check(&[2, 3, 4])?;
        let want = [rat(-22, 1), rat(-34, 1), rat(242, 1)];
        let rhs_ok = r.rows.iter().zip(&want).all(|(row, w)| &row.rhs == w);
        let lhs_err = r.rows.iter().map(|row| row.abs_err).fold(0.0, f64::max);
        let prod_err = (r.product - Complex64::new(197.0, 0.0)).norm();
        let s = 19f64.sqrt() / 22.0;
        let zero_err = r
            .zeros
            .iter()
            .zip([1.0, -1.0])
            .map(|(z, sign)| (Complex64::new(z[0], z[1]) - Complex64::new(sign * 5.0 / 22.0, s)).norm())
            .fold(0.0, f64::max);
        let ctx = Level11::new(12, 4);
        let (f2, f3, f4) = (ctx.basis(2)?.series, ctx.basis(3)?.series, ctx.basis(4)?.series);
        let four = rat(4, 1);
        let rel = f2.mul(&f2)?.sub(&f3.scale(&four))?.sub(&f2.scale(&four))?.add_constant(&rat(-36, 1))?;
        let rel_ok = f4.sub(&rel)?.is_zero();
        let ok = rhs_ok && lhs_err < 1e-4 && prod_err < 1e-4 && zero_err < 1e-6 && rel_ok;
        Ok((
            ok,
            format!(
                "rhs (−22, −34, 242) exact: {rhs_ok}; max |lhs − rhs| {lhs_err:.1e}; |product − 197| {prod_err:.1e}; \
                 zero error {zero_err:.1e}; f₁₁,₄ relation: {rel_ok}"
            ),
        ))
    })
}

fn sample_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<ModularPoint> {
    (0..n).map(|_| ModularPoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.9..2.5))).collect()
}

/// DIT decomposition cases and agreement of the two evaluators of `E(τ, s)`.
pub fn dit(seed: u64) -> Criterion {
    timed(6, "twisted-trace decomposition", Duration::from_secs(120), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (dd, dp, m, s, tol) in
            [(5, -3, 1, 2.0, 1e-6), (5, -3, 2, 2.0, 1e-6), (8, -3, 1, 2.0, 1e-6), (8, -3, 1, 1.5, 1e-5)]
        {
            let r = verify_dit(dd, dp, m, Complex64::new(s, 0.0))?;
            ok &= r.rel_err < tol;
            parts.push(format!("({dd},{dp},{m},{s}) {:.1e}", r.rel_err));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for tau in sample_points(&mut rng, 20) {
            for s in [1.5, 2.0, 2.5] {
                let a = eis_value(tau, &EisSpec::new(s).mode(EisMode::FourierBessel))?;
                let b = eis_value(tau, &EisSpec::new(s).mode(EisMode::LatticeSum))?;
                worst = worst.max((a - b).norm() / a.norm().max(1.0));
            }
        }
        ok &= worst < 1e-8;
        parts.push(format!("mode agreement {worst:.1e}"));
        Ok((ok, parts.join("; ")))
    })
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * a.norm().max(b.norm()).max(1.0)
}

fn pow_real(x: f64, s: Complex64) -> Complex64 {
    (s * x.ln()).exp()
}

/// Invariance under `D' ↦ D'l²` (coprime `l`), multiplicativity, the
/// prime-power recursion and the factored evaluation of `M_d(m, s)`.
pub fn m_function_properties(seed: u64) -> Criterion {
    timed(7, "M-function properties", Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dps = [-3i64, -4, -7, -8, -11, -15, -19, -20, -23, -24];
        let primes = [2u64, 3, 5, 7, 11, 13];
        let mut failures = 0;
        let mut checks = 0;
        for _ in 0..50 {
            let dp = dps[rng.gen_range(0..dps.len())];
            let s = Complex64::new(rng.gen_range(1.1..3.0), rng.gen_range(-1.0..1.0));
            let m = rng.gen_range(1u64..60);
            let n = rng.gen_range(1u64..60);
            let l = rng.gen_range(1u64..12);
            let mut check = |c: bool| {
                checks += 1;
                failures += usize::from(!c);
            };
            if gcd(l as i64, m as i64) == 1 {
                check(close(m_function(dp * (l * l) as i64, m, s), m_function(dp, m, s)));
            }
            if gcd(m as i64, n as i64) == 1 {
                check(close(m_function(dp, m * n, s), m_function(dp, m, s) * m_function(dp, n, s)));
            }
            let p = primes[rng.gen_range(0..primes.len())];
            let r = rng.gen_range(1u32..5);
            let pr = p.pow(r);
            let rhs = (pow_real(p as f64, Complex64::new(1.0, 0.0) - s) + pow_real(p as f64, s)) * m_function(dp, pr, s)
                - p as f64 * m_function(dp, pr / p, s);
            check(close(m_function(dp, pr * p, s), rhs));
            check(close(m_function_prime_power(dp, p, r, s), m_function(dp, pr, s)));
            check(close(m_function_factored(dp, m, s), m_function(dp, m, s)));
            let chi = kronecker(dp, p as i64) as f64;
            check(close(
                m_function(dp, p, s),
                pow_real(p as f64, Complex64::new(1.0, 0.0) - s) + pow_real(p as f64, s) - chi,
            ));
        }
        Ok((failures == 0, format!("{checks} relations over 50 tuples, {failures} outside 1e−12")))
    })
}

/// `T_p E(·, s) = (p^{−s} + p^{s−1}) E(·, s)`.
pub fn hecke_eigenvalues(seed: u64) -> Criterion {
    timed(8, "Hecke eigenvalues of E(τ, s)", Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let taus = sample_points(&mut rng, 5);
        let mut worst = 0.0f64;
        for p in [2u64, 3, 5] {
            for s in [1.5, 2.0] {
                let spec = EisSpec::new(s);
                let pf = p as f64;
                let lam = pf.powf(-s) + pf.powf(s - 1.0);
                for &tau in &taus {
                    let t = hecke_weight0(p, |z| eis_value(z, &spec), tau)?;
                    let e = eis_value(tau, &spec)?;
                    worst = worst.max((t - lam * e).norm());
                }
            }
        }
        Ok((worst < 1e-7, format!("max error {worst:.1e} over p ∈ {{2,3,5}}, s ∈ {{3/2,2}}, 5 points")))
    })
}

/// Pairs used for the integrality and round-trip checks.
pub const CM_PAIRS: [(i64, i64); 4] = [(-3, 5), (-4, 5), (-3, 8), (-7, 5)];

/// Hecke equivariance of CM products, integrality and exact round trip of
/// the exponent extraction.
pub fn equivariance() -> Criterion {
    timed(9, "Hecke equivariance of CM products", Duration::from_secs(60), || {
        let taus = [ModularPoint::new(0.13, 1.21), ModularPoint::new(0.3, 1.4), ModularPoint::new(-0.27, 0.95)];
        let mut worst = 0.0f64;
        for (d, dd, p) in [(-3, 5, 2), (-4, 5, 3)] {
            for row in verify_equivariance(d, dd, p, &taus)? {
                worst = worst.max(row.abs_err);
            }
        }
        let mut integral = true;
        let mut round_trip = true;
        for (d, dd) in CM_PAIRS {
            let s = CmProduct::new(d, dd)?.series(12)?;
            integral &= s.is_integral();
            let c = extract_cd(&s, 11)?;
            round_trip &= rebuild_product(dd, &c, 12)? == s;
        }
        Ok((
            worst < 1e-5 && integral && round_trip,
            format!("max |lhs − rhs| {worst:.1e}; integral to q^11: {integral}; exact round trip: {round_trip}"),
        ))
    })
}

/// `s(1−s)⟨E(·,s), log|Ψ|⟩ = −2π Σ ord/ω·E(z, s)` and the Kronecker limit
/// formula at `i` and `2i`.
pub fn eisenstein_case() -> Criterion {
    timed(10, "Eisenstein case and Kronecker limit", Duration::from_secs(120), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (d, dd) in [(-3, 5), (-4, 5)] {
            let r = eisen_case_check(d, dd, 2.0, 1e-8)?;
            ok &= r.rel_err < 1e-3;
            parts.push(format!("({d},{dd},2) rel {:.1e}", r.rel_err));
        }
        for v in [1.0, 2.0] {
            let r = kronecker_limit_check(ModularPoint::new(0.0, v))?;
            ok &= r.diff < 1e-5;
            parts.push(format!("Kronecker at {v}i {:.1e}", r.diff));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// All criteria in order.
pub fn run_all(seed: u64) -> Vec<Criterion> {
    vec![
        hecke_normalization(),
        level_one_divisor_sum(),
        valence(seed),
        rohrlich(),
        level11(),
        dit(seed),
        m_function_properties(seed),
        hecke_eigenvalues(seed),
        equivariance(),
        eisenstein_case(),
    ]
}

