//! Numerical study of primitive rational points on expanding horocycles
//! of the modular surface.
//!
//! The sample set at level n is P(n) = {(k/n, (k+i)/n) : gcd(k, n) = 1}.
//! This crate evaluates twisted Weyl sums of automorphic forms
//! (holomorphic cusp-form lifts, Maass forms, real-analytic Eisenstein
//! series) over P(n), the exact Ramanujan-sum averages on the torus, and
//! the discrepancy of synthesized test functions, and fits the empirical
//! decay exponents in n.
//!
//! Modules:
//! - [`arith`]: totient, Moebius, divisor sums, Ramanujan sums (exact).
//! - [`specfun`]: complex zeta, completed xi, K-Bessel of imaginary order.
//! - [`modsurf`]: half-plane geometry, fundamental-domain reduction, P(n).
//! - [`forms`]: eigenform evaluators and the Eisenstein direct-sum oracle.
//! - [`equidist`]: Weyl sums, torus averages, discrepancy, decay fits.

pub mod arith;
pub mod equidist;
pub mod error;
pub mod forms;
pub mod modsurf;
pub mod specfun;
pub mod summation;

pub use error::{Error, Result};
pub use forms::{Eigenform, EisensteinLinePoint, HolomorphicLift, MaassForm, Parity};
pub use modsurf::{HorocycleSample, ReductionResult, UnimodularMatrix, UpperHalfPoint};

pub use equidist::{DecayFitResult, EnvelopeReport, SpectralSynthesis, TrigPolynomial};
