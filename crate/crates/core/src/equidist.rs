//! Twisted Weyl sums over the horocycle samples P(n) against each
//! spectral type, the Eisenstein constant-term prediction, exact totient
//! averages of trigonometric polynomials on the torus, the discrepancy of
//! synthesized test functions against their invariant integral, and
//! log-log decay-exponent fitting.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{euler_phi, ramanujan_sum_closed};
use crate::error::{Error, Result};
use crate::forms::Eigenform;
use crate::modsurf::horocycle_points;
use crate::specfun::{complex_exponential, completed_xi};
use crate::summation::chunked_pairwise_sum;

/// A trigonometric polynomial f(x) = sum_l fhat(l) e(lx) on the torus,
/// stored as its finite Fourier-coefficient map.
#[derive(Debug, Clone, Default)]
pub struct TrigPolynomial {
    fourier: BTreeMap<i64, Complex64>,
}

impl TrigPolynomial {
    /// Build from (mode, coefficient) pairs; repeated modes accumulate.
    pub fn new(pairs: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut fourier = BTreeMap::new();
        for (l, c) in pairs {
            *fourier.entry(l).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        TrigPolynomial { fourier }
    }

    /// The single Fourier mode e_l.
    pub fn mode(l: i64) -> Self {
        TrigPolynomial::new([(l, Complex64::new(1.0, 0.0))])
    }

    /// Coefficient fhat(l) (zero if absent).
    pub fn coefficient(&self, l: i64) -> Complex64 {
        self.fourier.get(&l).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// The stored modes in ascending order.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.fourier.iter().map(|(&l, &c)| (l, c))
    }

    /// Pointwise value sum_l fhat(l) e(lx).
    pub fn eval(&self, x: f64) -> Complex64 {
        self.fourier
            .iter()
            .map(|(&l, &c)| c * complex_exponential(l as f64 * x))
            .sum()
    }

    /// The torus integral, which is fhat(0).
    pub fn integral(&self) -> Complex64 {
        self.coefficient(0)
    }

    /// True when fhat(-l) = conj(fhat(l)) for all modes, i.e. the
    /// polynomial is real-valued.
    pub fn is_real(&self) -> bool {
        self.fourier.iter().all(|(&l, &c)| {
            let mirror = self.coefficient(-l);
            (mirror - c.conj()).norm() <= 1e-14 * (1.0 + c.norm())
        })
    }
}

/// A test function on the modular surface synthesized as
/// c0 + sum_j c_j (eigenform j); its invariant-measure integral is c0
/// because the non-constant eigenforms integrate to zero.
#[derive(Debug, Clone)]
pub struct SpectralSynthesis {
    /// Coefficient of the constant function 1.
    pub constant: Complex64,
    /// Eigenform components with their coefficients.
    pub components: Vec<(Complex64, Eigenform)>,
}

impl SpectralSynthesis {
    /// Pointwise value c0 + sum_j c_j F_j(z).
    pub fn eval(&self, z: &crate::modsurf::UpperHalfPoint) -> Result<Complex64> {
        let mut acc = self.constant;
        for (c, form) in &self.components {
            acc += c * form.evaluate(z)?;
        }
        Ok(acc)
    }

    /// The invariant integral over the modular surface, c0 by construction.
    pub fn invariant_integral(&self) -> Complex64 {
        self.constant
    }
}

/// Summation controls shared by the Weyl-sum entry points. The chunk
/// size pins the reduction tree, so results are bit-identical for a
/// fixed chunk size no matter how many workers run.
#[derive(Debug, Clone, Copy)]
pub struct SumOptions {
    /// Fixed chunk length of the pairwise reduction tree.
    pub chunk_size: usize,
    /// Evaluate samples and chunks on the rayon pool.
    pub parallel: bool,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions { chunk_size: 1024, parallel: true }
    }
}

/// Twisted Weyl sum (1/phi(n)) sum_{(k,n)=1} e(lk/n) F((k+i)/n) with
/// default summation options.
pub fn weyl_sum(form: &Eigenform, n: u64, l: i64) -> Result<Complex64> {
    weyl_sum_with(form, n, l, SumOptions::default())
}

/// Twisted Weyl sum with explicit summation options.
///
/// The twist exponent lk is reduced mod n in integer arithmetic, so the
/// result is exactly periodic in l with period n.
pub fn weyl_sum_with(form: &Eigenform, n: u64, l: i64, opts: SumOptions) -> Result<Complex64> {
    let samples = horocycle_points(n)?;
    let phi = samples.len() as f64;
    let term = |sample: &crate::modsurf::HorocycleSample| -> Result<Complex64> {
        let twist_num = (l as i128 * sample.k as i128).rem_euclid(n as i128) as f64;
        let twist = complex_exponential(twist_num / n as f64);
        Ok(twist * form.evaluate(&sample.point)?)
    };
    let terms: Vec<Complex64> = if opts.parallel {
        samples.par_iter().map(term).collect::<Result<_>>()?
    } else {
        samples.iter().map(term).collect::<Result<_>>()?
    };
    Ok(chunked_pairwise_sum(&terms, opts.chunk_size, opts.parallel) / phi)
}

/// The constant-term main term of the Eisenstein Weyl sum at s = 1/2 + it:
/// n^{-1/2} (n^{-it} + (xi(2it)/xi(1+2it)) n^{it}) r_n(l), with the
/// spherical normalization h(1) = M h(1) = 1. At t = 0 the xi ratio is
/// taken in its symmetric limit -1, which makes the prediction vanish.
pub fn eisenstein_constant_term_prediction(n: u64, l: i64, t: f64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if t.abs() > 100.0 {
        return Err(Error::domain(
            "eisenstein_constant_term_prediction",
            format!("|t| <= 100 required, got {t}"),
        ));
    }
    let r = ramanujan_sum_closed(n, l)?;
    let ln_n = (n as f64).ln();
    if t.abs() < 1e-8 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ratio = completed_xi(Complex64::new(0.0, 2.0 * t))?
        / completed_xi(Complex64::new(1.0, 2.0 * t))?;
    let n_down = Complex64::new(0.0, -t * ln_n).exp();
    let n_up = Complex64::new(0.0, t * ln_n).exp();
    Ok((n as f64).powf(-0.5) * (n_down + ratio * n_up) * r)
}

/// Exact totient average (1/phi(n)) sum_{(k,n)=1} f1(k/n), assembled as
/// sum_l fhat(l) r_n(l) with the closed-form Ramanujan sums.
pub fn totient_average(f1: &TrigPolynomial, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (l, c) in f1.modes() {
        acc += c * ramanujan_sum_closed(n, l)?;
    }
    Ok(acc)
}

/// Discrepancy of the pair (f1, f2) at level n:
///
///   (1/phi(n)) sum_{(k,n)=1} f1(k/n) f2(sample_k) - fhat1(0) c0,
///
/// assembled mode by mode as
/// sum_l fhat1(l) [c0 r_n(l) + sum_j c_j WeylSum(form_j, n, l)] - fhat1(0) c0.
pub fn discrepancy(f1: &TrigPolynomial, f2: &SpectralSynthesis, n: u64) -> Result<Complex64> {
    discrepancy_with(f1, f2, n, SumOptions::default())
}

/// [`discrepancy`] with explicit summation options.
pub fn discrepancy_with(
    f1: &TrigPolynomial,
    f2: &SpectralSynthesis,
    n: u64,
    opts: SumOptions,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (l, c) in f1.modes() {
        let mut bracket = f2.constant * ramanujan_sum_closed(n, l)?;
        for (cj, form) in &f2.components {
            bracket += cj * weyl_sum_with(form, n, l, opts)?;
        }
        acc += c * bracket;
    }
    Ok(acc - f1.integral() * f2.constant)
}

/// The same discrepancy evaluated as the direct double sum over P(n);
/// the assembly above must reproduce it to 1e-9. This is the module's
/// central correctness oracle.
pub fn discrepancy_direct(
    f1: &TrigPolynomial,
    f2: &SpectralSynthesis,
    n: u64,
    opts: SumOptions,
) -> Result<Complex64> {
    let samples = horocycle_points(n)?;
    let phi = samples.len() as f64;
    let term = |sample: &crate::modsurf::HorocycleSample| -> Result<Complex64> {
        Ok(f1.eval(sample.torus_coord) * f2.eval(&sample.point)?)
    };
    let terms: Vec<Complex64> = if opts.parallel {
        samples.par_iter().map(term).collect::<Result<_>>()?
    } else {
        samples.iter().map(term).collect::<Result<_>>()?
    };
    let avg = chunked_pairwise_sum(&terms, opts.chunk_size, opts.parallel) / phi;
    Ok(avg - f1.integral() * f2.constant)
}

/// Ordinary least squares of log|value| against log n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFitResult {
    /// Fitted exponent of the power law.
    pub slope: f64,
    /// Fitted log-amplitude.
    pub intercept: f64,
    /// Residual standard error sqrt(SSR / (points - 2)).
    pub stderr: f64,
    /// Samples used after dropping exact zeros.
    pub points_used: usize,
}

/// Fit log|value| = slope * log n + intercept by ordinary least squares.
/// Samples with |value| = 0 are dropped (and reflected in `points_used`);
/// fewer than 3 usable samples is an error.
pub fn decay_fit(samples: &[(u64, Complex64)]) -> Result<DecayFitResult> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(n, v)| ((*n as f64).ln(), v.norm().ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints { usable: pts.len() });
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr: f64 = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let stderr = (ssr / (n - 2.0)).sqrt();
    Ok(DecayFitResult { slope, intercept, stderr, points_used: pts.len() })
}

/// The implied-constant envelope max_n |value| / n^exponent and where it
/// is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeReport {
    /// The largest ratio |value| / n^exponent over the samples.
    pub max_ratio: f64,
    /// The n attaining it.
    pub argmax_n: u64,
}

/// Scan samples for the largest |value| / n^exponent.
pub fn envelope_check(samples: &[(u64, Complex64)], exponent: f64) -> Result<EnvelopeReport> {
    if samples.is_empty() {
        return Err(Error::domain("envelope_check", "empty sample list"));
    }
    let mut best = EnvelopeReport { max_ratio: f64::MIN, argmax_n: 0 };
    for (n, v) in samples {
        let ratio = v.norm() / (*n as f64).powf(exponent);
        if ratio > best.max_ratio {
            best = EnvelopeReport { max_ratio: ratio, argmax_n: *n };
        }
    }
    Ok(best)
}

/// Convenience: phi(n) as f64 for table output.
pub fn phi_f64(n: u64) -> Result<f64> {
    Ok(euler_phi(n)? as f64)
}
