//! Integer and Dirichlet-series primitives.

mod disc;
mod factor;
mod kronecker;
mod lfunc;

pub use disc::Discriminant;
pub use factor::{divisors, is_prime, moebius, sigma, sigma_complex, sigma_f64, Factorization};
pub use kronecker::kronecker;
pub use lfunc::{dirichlet_l, zeta_constants, ZetaConstants};

/// Greatest common divisor of two signed integers (always non-negative).
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}
