//! Evaluators for the three spectral constituents of the decomposition on
//! the modular surface: holomorphic cusp-form lifts (Deligne-bounded
//! integer coefficients), Maass cusp forms (coefficients ingested from
//! data files, 7/64-bounded), and the real-analytic Eisenstein series —
//! plus the slow direct coset-sum oracle that pins all normalizations.

use std::f64::consts::TAU;
use std::io::BufRead;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{divisor_count, divisor_sigma, factorize, gcd, is_prime};
use crate::error::{Error, Result};
use crate::modsurf::{reduce_to_fundamental_domain, UpperHalfPoint};
use crate::specfun::{bessel_k, completed_xi};

/// Normalization of the nonzero Fourier modes of the Eisenstein series:
///
///   E(z, s) = y^s + (xi(2s-1)/xi(2s)) y^{1-s}
///           + (KAPPA / xi(2s)) sum_{m >= 1} m^{s-1/2} sigma_{1-2s}(m)
///             sqrt(y) K_{s-1/2}(2 pi m y) cos(2 pi m x).
///
/// Fixed once by least-squares calibration against
/// [`eisenstein_direct_oracle`] (see [`calibrate_kappa`]) and frozen.
pub const EISENSTEIN_MODE_CONSTANT: f64 = 4.0;

/// Integer coefficients tau(1..=n_max) of Delta = q prod (1 - q^n)^24.
///
/// Computed from Jacobi's sparse cube prod (1-q^n)^3 =
/// sum_k (-1)^k (2k+1) q^{k(k+1)/2} by three truncated squarings.
pub fn tau_coefficients(n_max: usize) -> Vec<i128> {
    if n_max == 0 {
        return Vec::new();
    }
    let len = n_max; // degrees 0..n_max-1 of prod(1-q^n)^24
    // sparse cube
    let mut cube: Vec<(usize, i128)> = Vec::new();
    let mut k = 0usize;
    loop {
        let deg = k * (k + 1) / 2;
        if deg >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1i128 } else { -1 };
        cube.push((deg, sign * (2 * k as i128 + 1)));
        k += 1;
    }
    // sixth power from the sparse cube
    let mut p6 = vec![0i128; len];
    for (i, (d1, c1)) in cube.iter().enumerate() {
        if 2 * d1 < len {
            p6[2 * d1] += c1 * c1;
        }
        for (d2, c2) in cube.iter().skip(i + 1) {
            let d = d1 + d2;
            if d >= len {
                break;
            }
            p6[d] += 2 * c1 * c2;
        }
    }
    let p12 = square_truncated(&p6);
    let p24 = square_truncated(&p12);
    p24 // tau(m) = coefficient of q^{m-1}
}

fn square_truncated(a: &[i128]) -> Vec<i128> {
    let len = a.len();
    let mut out = vec![0i128; len];
    for i in 0..len {
        let ai = a[i];
        if ai == 0 {
            continue;
        }
        if 2 * i < len {
            out[2 * i] += ai * ai;
        }
        let two_ai = 2 * ai;
        for j in (i + 1)..len.saturating_sub(i) {
            out[i + j] += two_ai * a[j];
        }
    }
    out
}

/// Arithmetically normalized holomorphic Hecke eigenform of even weight k,
/// stored as the exact integer coefficients a(1..=N), a(1) = 1, and
/// evaluated through its weight-k unitary lift y^{k/2} F(z).
#[derive(Debug, Clone)]
pub struct HolomorphicLift {
    weight: u32,
    coefficients: Vec<i128>,
}

impl HolomorphicLift {
    /// Validate and wrap a coefficient list. Load-time checks:
    /// a(1) = 1, the Deligne bound |a(m)| m^{-(k-1)/2} <= sigma_0(m),
    /// and exact multiplicativity a(m) a(n) = a(mn) for coprime m, n.
    pub fn new(weight: u32, coefficients: Vec<i128>) -> Result<Self> {
        if weight < 4 || weight % 2 != 0 {
            return Err(Error::InvariantViolation(format!(
                "weight must be an even integer >= 4, got {weight}"
            )));
        }
        if coefficients.first() != Some(&1) {
            return Err(Error::InvariantViolation(
                "normalization: a(1) must be 1".into(),
            ));
        }
        let half = (weight - 1) as f64 / 2.0;
        for (idx, &a) in coefficients.iter().enumerate() {
            let m = (idx + 1) as u64;
            let lambda = a.unsigned_abs() as f64 * (m as f64).powf(-half);
            let bound = divisor_count(m)? as f64;
            if lambda > bound * (1.0 + 1e-9) {
                return Err(Error::InvariantViolation(format!(
                    "Deligne bound violated at m = {m}: |lambda| = {lambda:.6} > sigma_0(m) = {bound}"
                )));
            }
        }
        let n = coefficients.len() as u64;
        for m in 2..=n {
            for k in 2..=n / m {
                if gcd(m, k) == 1 {
                    let prod = coefficients[(m - 1) as usize]
                        .checked_mul(coefficients[(k - 1) as usize]);
                    if prod != Some(coefficients[(m * k - 1) as usize]) {
                        return Err(Error::InvariantViolation(format!(
                            "multiplicativity violated: a({m}) a({k}) != a({})",
                            m * k
                        )));
                    }
                }
            }
        }
        Ok(HolomorphicLift { weight, coefficients })
    }

    /// The weight-12 discriminant form, the bundled discrete-series case.
    pub fn discriminant(n_coeffs: usize) -> Self {
        HolomorphicLift::new(12, tau_coefficients(n_coeffs))
            .expect("discriminant coefficients satisfy the load-time checks")
    }

    /// Weight k of the underlying form.
    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Stored coefficients a(1..).
    pub fn coefficients(&self) -> &[i128] {
        &self.coefficients
    }

    /// The unitary lift y^{k/2} F(z), F the weight-k form.
    ///
    /// Reduces z to the fundamental domain, evaluates the q-expansion at
    /// the reduced point (truncation M with 2 pi M y' >= 40) and
    /// transports back with the automorphy factor; the modulus of the
    /// result is invariant under the modular group.
    pub fn evaluate(&self, z: &UpperHalfPoint) -> Result<Complex64> {
        let red = reduce_to_fundamental_domain(z)?;
        let (x, y) = (red.reduced.x(), red.reduced.y());
        let m_needed = (40.0 / (TAU * y)).ceil().max(1.0) as usize;
        if m_needed > self.coefficients.len() {
            return Err(Error::InsufficientCoefficients {
                needed: m_needed,
                available: self.coefficients.len(),
            });
        }
        // q = e^{2 pi i z'}, powers taken iteratively
        let q = Complex64::new(-TAU * y, TAU * x).exp();
        let mut q_pow = Complex64::new(1.0, 0.0);
        let mut f_red = Complex64::new(0.0, 0.0);
        for &a in &self.coefficients[..m_needed] {
            q_pow *= q;
            f_red += a as f64 * q_pow;
        }
        // y^{k/2} (cz+d)^{-k} F(z') = y'^{k/2} phase^{-k} F(z') with the
        // unit-modulus phase of the automorphy factor; this avoids the
        // tiny-times-huge product at small heights.
        let phase = red.automorphy / red.automorphy.norm();
        let lift = y.powi(self.weight as i32 / 2) * phase.powi(-(self.weight as i32)) * f_red;
        Ok(lift)
    }
}

/// Parity of a Maass form: even forms expand in cosines, odd in sines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl FromStr for Parity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(format!("parity must be 'even' or 'odd', got '{other}'")),
        }
    }
}

/// Arithmetically normalized Maass cusp form with Laplace eigenvalue
/// 1/4 + r^2, ingested from a data file.
#[derive(Debug, Clone)]
pub struct MaassForm {
    spectral_r: f64,
    parity: Parity,
    coefficients: Vec<f64>,
}

impl MaassForm {
    /// Validate and wrap loaded data. Checks lambda(1) = 1, the
    /// 7/64-envelope |lambda(m)| <= sigma_0(m) m^{7/64 + 0.01}, and the
    /// Hecke relations lambda(p) lambda(p^j) = lambda(p^{j+1}) +
    /// lambda(p^{j-1}) to 1e-6 wherever p^{j+1} is in range.
    pub fn new(spectral_r: f64, parity: Parity, coefficients: Vec<f64>) -> Result<Self> {
        if !(spectral_r > 0.0) || !spectral_r.is_finite() {
            return Err(Error::InvariantViolation(format!(
                "spectral parameter must be finite and > 0, got {spectral_r}"
            )));
        }
        match coefficients.first() {
            Some(l1) if (l1 - 1.0).abs() <= 1e-12 => {}
            Some(l1) => {
                return Err(Error::InvariantViolation(format!(
                    "normalization: lambda(1) must be 1, got {l1}"
                )))
            }
            None => {
                return Err(Error::InvariantViolation(
                    "normalization: coefficient list is empty".into(),
                ))
            }
        }
        let n = coefficients.len() as u64;
        let exponent = 7.0 / 64.0 + 0.01;
        for (idx, &l) in coefficients.iter().enumerate() {
            let m = (idx + 1) as u64;
            let bound = divisor_count(m)? as f64 * (m as f64).powf(exponent);
            if l.abs() > bound * (1.0 + 1e-9) {
                return Err(Error::InvariantViolation(format!(
                    "Hecke-bound envelope violated at m = {m}: |lambda| = {} > {bound:.6}",
                    l.abs()
                )));
            }
        }
        let coeff = |m: u64| coefficients[(m - 1) as usize];
        for p in (2..=n).filter(|&p| is_prime(p)) {
            let mut pj = p; // p^j
            let mut j = 1u32;
            while let Some(pj1) = pj.checked_mul(p) {
                if pj1 > n {
                    break;
                }
                let prev = if j == 1 { 1.0 } else { coeff(pj / p) };
                let lhs = coeff(p) * coeff(pj);
                let rhs = coeff(pj1) + prev;
                if (lhs - rhs).abs() > 1e-6 {
                    return Err(Error::InvariantViolation(format!(
                        "Hecke relation violated at p = {p}, j = {j}: \
                         lambda(p) lambda(p^j) = {lhs} but lambda(p^(j+1)) + lambda(p^(j-1)) = {rhs}"
                    )));
                }
                pj = pj1;
                j += 1;
            }
        }
        Ok(MaassForm { spectral_r, parity, coefficients })
    }

    /// Parse the line-oriented Maass data format:
    /// a header `maass 1 <spectral_r> <even|odd>` followed by one line
    /// `m lambda(m)` per coefficient with consecutive m starting at 1.
    /// Blank lines and `#` comments are ignored.
    pub fn from_reader(reader: impl BufRead) -> Result<Self> {
        let mut header: Option<(f64, Parity)> = None;
        let mut coefficients: Vec<f64> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("read failure: {e}"),
            })?;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if header.is_none() {
                if fields.len() != 4 || fields[0] != "maass" {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "expected header 'maass 1 <spectral_r> <even|odd>'".into(),
                    });
                }
                if fields[1] != "1" {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unsupported format version '{}'", fields[1]),
                    });
                }
                let r: f64 = fields[2].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad spectral parameter '{}'", fields[2]),
                })?;
                let parity: Parity = fields[3].parse().map_err(|msg| Error::Parse {
                    line: line_no,
                    msg,
                })?;
                header = Some((r, parity));
                continue;
            }
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected 'm lambda', got {} fields", fields.len()),
                });
            }
            let m: usize = fields[0].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad index '{}'", fields[0]),
            })?;
            if m != coefficients.len() + 1 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!(
                        "coefficient indices must be consecutive from 1; expected {}, got {m}",
                        coefficients.len() + 1
                    ),
                });
            }
            let value: f64 = fields[1].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad coefficient '{}'", fields[1]),
            })?;
            coefficients.push(value);
        }
        let (r, parity) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header line".into(),
        })?;
        MaassForm::new(r, parity, coefficients)
    }

    /// Spectral parameter r (Laplace eigenvalue 1/4 + r^2).
    pub fn spectral_r(&self) -> f64 {
        self.spectral_r
    }

    /// Parity of the form.
    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Loaded Hecke eigenvalues lambda(1..).
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    fn truncation_at(&self, y: f64) -> usize {
        ((self.spectral_r + 40.0) / (TAU * y)).ceil().max(1.0) as usize
    }

    /// Value at z of 2 sqrt(y') sum_m lambda(m) K_{ir}(2 pi m y') trig(2 pi m x'),
    /// with trig = cos for even parity and sin for odd, after reducing z.
    pub fn evaluate(&self, z: &UpperHalfPoint) -> Result<f64> {
        let red = reduce_to_fundamental_domain(z)?;
        let terms = self.truncation_at(red.reduced.y());
        self.evaluate_reduced_truncated(red.reduced.x(), red.reduced.y(), terms)
    }

    /// Like [`evaluate`](Self::evaluate) but with an explicit truncation
    /// length, for tail-decay self-checks.
    pub fn evaluate_truncated(&self, z: &UpperHalfPoint, terms: usize) -> Result<f64> {
        let red = reduce_to_fundamental_domain(z)?;
        self.evaluate_reduced_truncated(red.reduced.x(), red.reduced.y(), terms)
    }

    fn evaluate_reduced_truncated(&self, x: f64, y: f64, terms: usize) -> Result<f64> {
        if terms > self.coefficients.len() {
            return Err(Error::InsufficientCoefficients {
                needed: terms,
                available: self.coefficients.len(),
            });
        }
        let order = Complex64::new(0.0, self.spectral_r);
        let mut sum = 0.0;
        for (idx, &lambda) in self.coefficients[..terms].iter().enumerate() {
            let m = (idx + 1) as f64;
            let kernel = bessel_k(order, TAU * m * y)?;
            let angle = TAU * m * x;
            let trig = match self.parity {
                Parity::Even => angle.cos(),
                Parity::Odd => angle.sin(),
            };
            sum += lambda * kernel * trig;
        }
        Ok(2.0 * y.sqrt() * sum)
    }
}

/// Spectral parameter t of a point s = 1/2 + it on the critical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EisensteinLinePoint {
    /// s = 1/2 + it; t = 0 is permitted (the series vanishes there).
    pub t: f64,
}

/// Partial direct coset sum of the Eisenstein series at real s = sigma > 1:
/// y^sigma plus the sum of y^sigma / |cz + d|^{2 sigma} over coprime pairs
/// with c >= 1 and max(|c|, |d|) <= cutoff (one representative per
/// +-(c, d)). No tail estimate is added; the caller controls the cutoff,
/// and the value is monotone nondecreasing in it.
pub fn eisenstein_direct_oracle(z: &UpperHalfPoint, sigma: f64, cutoff: u64) -> Result<f64> {
    if sigma <= 1.0 {
        return Err(Error::domain(
            "eisenstein_direct_oracle",
            format!("requires sigma > 1 for absolute convergence, got {sigma}"),
        ));
    }
    let (x, y) = (z.x(), z.y());
    let per_c: Vec<f64> = (1..=cutoff)
        .into_par_iter()
        .map_init(
            || vec![0u32; 0],
            |marks, c| {
                let span = (2 * cutoff + 1) as usize;
                if marks.len() != span {
                    *marks = vec![0u32; span];
                }
                // stamp multiples of each prime factor of c in [-cutoff, cutoff]
                let stamp = c as u32;
                for (p, _) in factorize(c) {
                    let start = cutoff % p; // index of the smallest marked d
                    let mut i = start as usize;
                    while i < span {
                        marks[i] = stamp;
                        i += p as usize;
                    }
                }
                let cf = c as f64;
                let h = (cf * y) * (cf * y);
                let mut acc = 0.0;
                for (i, mk) in marks.iter().enumerate() {
                    if *mk == stamp {
                        continue;
                    }
                    let d = i as f64 - cutoff as f64;
                    let t = cf * x + d;
                    acc += (t * t + h).powf(-sigma);
                }
                acc * y.powf(sigma)
            },
        )
        .collect();
    let mut total = y.powf(sigma); // the (c, d) = (0, 1) coset
    for v in per_c {
        total += v;
    }
    Ok(total)
}

/// Unit-amplitude nonzero-mode sum of the Eisenstein Fourier expansion at
/// the given (unreduced) point:
/// sum_{m=1}^{m_max} m^{s-1/2} sigma_{1-2s}(m) sqrt(y) K_{s-1/2}(2 pi m y)
/// cos(2 pi m x).
pub fn eisenstein_mode_sum_unit(x: f64, y: f64, s: Complex64, m_max: usize) -> Result<Complex64> {
    let half = Complex64::new(0.5, 0.0);
    let order = s - half;
    let z_exp = Complex64::new(1.0, 0.0) - 2.0 * s; // 1 - 2s
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 1..=m_max {
        let mf = m as f64;
        let kernel = bessel_k(order, TAU * mf * y)?;
        let coeff = ((s - half) * mf.ln()).exp() * divisor_sigma(z_exp, m as u64)?;
        sum += coeff * y.sqrt() * kernel * (TAU * mf * x).cos();
    }
    Ok(sum)
}

/// Eisenstein series E(z, s) via the Fourier expansion at the reduced
/// point: constant term y'^s + (xi(2s-1)/xi(2s)) y'^{1-s} plus the
/// nonzero modes weighted by [`EISENSTEIN_MODE_CONSTANT`].
///
/// Supported arguments: Re s in (1/2, 2] with s != 1, or the critical
/// line s = 1/2 + it with |t| <= 100. At t = 0 the constant-term ratio
/// tends to -1 and the series vanishes identically; a branch at
/// |t| < 1e-8 returns that limit.
pub fn evaluate_eisenstein(z: &UpperHalfPoint, s: Complex64) -> Result<Complex64> {
    if s.im == 0.0 && s.re == 1.0 {
        return Err(Error::domain("evaluate_eisenstein", "pole at s = 1"));
    }
    let on_line = s.re == 0.5;
    if !on_line && !(s.re > 0.5 && s.re <= 2.0) {
        return Err(Error::domain(
            "evaluate_eisenstein",
            format!("Re(s) must be 1/2 or in (1/2, 2], got {}", s.re),
        ));
    }
    if on_line && s.im.abs() > 100.0 {
        return Err(Error::domain(
            "evaluate_eisenstein",
            format!("|t| <= 100 required on the critical line, got {}", s.im),
        ));
    }
    let red = reduce_to_fundamental_domain(z)?;
    let (x, y) = (red.reduced.x(), red.reduced.y());
    let one = Complex64::new(1.0, 0.0);
    if on_line && s.im.abs() < 1e-8 {
        // symmetric limit: ratio -> -1 and 1/xi(2s) -> 0
        let y_s = (s * y.ln()).exp();
        let y_1s = ((one - s) * y.ln()).exp();
        return Ok(y_s - y_1s);
    }
    let xi_2s = completed_xi(2.0 * s)?;
    let xi_2s1 = completed_xi(2.0 * s - one)?;
    let constant = (s * y.ln()).exp() + (xi_2s1 / xi_2s) * ((one - s) * y.ln()).exp();
    let m_max = ((s.im.abs() + 40.0) / (TAU * y)).ceil().max(1.0) as usize;
    let modes = eisenstein_mode_sum_unit(x, y, s, m_max)?;
    Ok(constant + EISENSTEIN_MODE_CONSTANT * modes / xi_2s)
}

/// Limit of the direct coset sum by two-cutoff Richardson extrapolation.
///
/// The finite summation window misses a tail that decays like
/// A * cutoff^{2 - 2 sigma} (the exponent follows from the window
/// geometry of the defining sum alone). Evaluating at cutoff/2 and
/// cutoff and eliminating that leading term reaches accuracies that a
/// bare window cannot afford for sigma near 1.
pub fn eisenstein_direct_extrapolated(z: &UpperHalfPoint, sigma: f64, cutoff: u64) -> Result<f64> {
    let c1 = (cutoff / 2).max(1);
    let lo = eisenstein_direct_oracle(z, sigma, c1)?;
    let hi = eisenstein_direct_oracle(z, sigma, cutoff)?;
    let w = (cutoff as f64 / c1 as f64).powf(2.0 - 2.0 * sigma);
    Ok(hi + (hi - lo) * w / (1.0 - w))
}

/// One kappa estimate from a single calibration point (y, sigma):
/// the direct coset sums at x = 0 and x = 1/2 at the same height are
/// differenced, cancelling the (x-independent) constant term, and the
/// ratio against the unit-amplitude mode difference is extrapolated over
/// two cutoffs to remove the summation-window tail.
pub fn calibrate_kappa(y: f64, sigma: f64, cutoff: u64) -> Result<f64> {
    let s = Complex64::new(sigma, 0.0);
    let m_max = (40.0 / (TAU * y)).ceil().max(4.0) as usize;
    let unit_diff = (eisenstein_mode_sum_unit(0.0, y, s, m_max)?
        - eisenstein_mode_sum_unit(0.5, y, s, m_max)?)
    .re;
    let xi_2s = completed_xi(2.0 * s)?.re;
    let z0 = UpperHalfPoint::new(0.0, y)?;
    let z1 = UpperHalfPoint::new(0.5, y)?;
    let kappa_at = |c: u64| -> Result<f64> {
        let diff = eisenstein_direct_oracle(&z0, sigma, c)?
            - eisenstein_direct_oracle(&z1, sigma, c)?;
        Ok(diff * xi_2s / unit_diff)
    };
    let c1 = (cutoff / 2).max(1);
    let k_lo = kappa_at(c1)?;
    let k_hi = kappa_at(cutoff)?;
    let w = (cutoff as f64 / c1 as f64).powf(2.0 - 2.0 * sigma);
    Ok(k_hi + (k_hi - k_lo) * w / (1.0 - w))
}

/// A spectral constituent: holomorphic lift, Maass form, or a point on
/// the Eisenstein line.
#[derive(Debug, Clone)]
pub enum Eigenform {
    Holomorphic(HolomorphicLift),
    Maass(MaassForm),
    Eisenstein(EisensteinLinePoint),
}

impl Eigenform {
    /// Evaluate the constituent at z (Eisenstein points at s = 1/2 + it).
    pub fn evaluate(&self, z: &UpperHalfPoint) -> Result<Complex64> {
        match self {
            Eigenform::Holomorphic(f) => f.evaluate(z),
            Eigenform::Maass(f) => Ok(Complex64::new(f.evaluate(z)?, 0.0)),
            Eigenform::Eisenstein(p) => evaluate_eisenstein(z, Complex64::new(0.5, p.t)),
        }
    }
}
