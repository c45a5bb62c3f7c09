//! Exact and numerical tools for Rohrlich-type divisor sums.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: factorization, divisor sums, Kronecker symbols, discriminants,
//!   Dirichlet L-values and zeta constants.
//! * [`special`] and [`quad`]: Gamma, Hurwitz zeta, Bessel K and
//!   double-exponential quadrature.
//! * [`qseries`]: truncated Fourier–Laurent series, eta quotients, classical
//!   level-one forms, the Hecke system `j_n`, point evaluation.
//! * [`modcurve`]: cusps, widths and the valence formula on `Γ0(N)`.
//! * [`bqf`]: binary quadratic forms, genus characters and singular moduli.
//! * [`eisenstein`]: the real-analytic Eisenstein series, twisted CM traces
//!   and the `M_d(m, s)` function.
//! * [`borcherds`]: CM products, exponent extraction and Hecke operators.
//! * [`level11`]: the weight-2 form on `Γ0(11)`, the basis `f_{11,m}` and
//!   its zeros.
//! * [`regint`]: regularized integrals over the level-one fundamental domain.

pub mod arith;
pub mod bqf;
pub mod borcherds;
pub mod eisenstein;
mod error;
pub mod level11;
pub mod modcurve;
pub mod mp;
pub mod qseries;
pub mod quad;
pub mod regint;
pub mod special;

pub use error::{Error, Result};
pub use qseries::ModularPoint;
