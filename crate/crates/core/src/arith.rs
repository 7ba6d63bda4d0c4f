//! Exact arithmetic functions underlying Fourier coefficients and
//! Ramanujan sums: totient, Moebius, divisor sums with complex exponent,
//! coprime residue enumeration, and the normalized Ramanujan sum
//! r_n(m) = (1/phi(n)) sum_{(a,n)=1} e(am/n) by both its definition and
//! its closed form mu(n/g)/phi(n/g), g = gcd(n, m).

use std::f64::consts::TAU;

use num_complex::Complex64;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Default sieve limit; factorization falls back to trial division past it.
pub const DEFAULT_SIEVE_LIMIT: usize = 1_000_000;

/// Smallest-prime-factor table, built once and read-only afterwards.
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    /// Build the smallest-prime-factor table for all n <= limit.
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    /// Largest n this sieve can factor directly.
    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Prime factorization of n as (prime, exponent) pairs, ascending.
    /// Deterministic trial division takes over beyond the sieve limit.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut n = n;
        while n > 1 && n <= self.limit() {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        if n > 1 {
            // n exceeded the sieve: plain trial division.
            let mut d = 2u64;
            while d * d <= n {
                if n % d == 0 {
                    let mut e = 0;
                    while n % d == 0 {
                        n /= d;
                        e += 1;
                    }
                    out.push((d, e));
                }
                d += 1;
            }
            if n > 1 {
                out.push((n, 1));
            }
            out.sort_unstable();
        }
        out
    }

    /// True if n is prime.
    pub fn is_prime(&self, n: u64) -> bool {
        if n < 2 {
            return false;
        }
        if n <= self.limit() {
            return self.spf[n as usize] as u64 == n;
        }
        let mut d = 2u64;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }
}

static SIEVE: Lazy<Sieve> = Lazy::new(|| Sieve::new(DEFAULT_SIEVE_LIMIT));

/// Shared smallest-prime-factor sieve (limit [`DEFAULT_SIEVE_LIMIT`]).
pub fn sieve() -> &'static Sieve {
    &SIEVE
}

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization via the shared sieve.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    sieve().factorize(n)
}

/// True if n is prime.
pub fn is_prime(n: u64) -> bool {
    sieve().is_prime(n)
}

/// Primes p with lo <= p <= hi, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Euler totient phi(n) = #{1 <= k <= n : gcd(k, n) = 1}.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    Ok(phi)
}

/// Moebius function: 0 if n is not squarefree, else (-1)^(#prime factors).
pub fn mobius(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut sign = 1i64;
    for (_, e) in factorize(n) {
        if e > 1 {
            return Ok(0);
        }
        sign = -sign;
    }
    Ok(sign)
}

/// True if no square > 1 divides n.
pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(mobius(n)? != 0)
}

/// Divisor sum sigma_z(n) = sum_{d | n} d^z with complex exponent z,
/// computed multiplicatively from the factorization of n.
///
/// For a nonnegative integer exponent the result is an exact integer
/// (as long as it fits in the 2^53 mantissa).
pub fn divisor_sigma(z: Complex64, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let integer_exp = z.im == 0.0 && z.re >= 0.0 && z.re.fract() == 0.0 && z.re <= 63.0;
    let mut acc = Complex64::new(1.0, 0.0);
    for (p, e) in factorize(n) {
        let mut local = Complex64::new(1.0, 0.0);
        if integer_exp {
            let k = z.re as u32;
            let mut pw = 1f64;
            let step = (p as f64).powi(k as i32);
            for _ in 0..e {
                pw *= step;
                local += Complex64::new(pw, 0.0);
            }
        } else {
            let pz = Complex64::new(p as f64, 0.0).powc(z);
            let mut pw = Complex64::new(1.0, 0.0);
            for _ in 0..e {
                pw *= pz;
                local += pw;
            }
        }
        acc *= local;
    }
    Ok(acc)
}

/// Number-of-divisors function sigma_0(n) as an exact integer.
pub fn divisor_count(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    Ok(factorize(n).iter().map(|&(_, e)| e as u64 + 1).product())
}

/// Residues 0 <= k < n with gcd(k, n) = 1, strictly increasing.
/// For n = 1 this is [0], the single coset.
pub fn coprime_residues(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n == 1 {
        return Ok(vec![0]);
    }
    Ok((1..n).filter(|&k| gcd(k, n) == 1).collect())
}

/// Normalized Ramanujan sum by direct summation:
/// (1/phi(n)) sum over primitive residues a mod n of e(am/n).
///
/// The imaginary part vanishes up to rounding (a pairs with n - a).
pub fn ramanujan_sum_direct(n: u64, m: i64) -> Result<Complex64> {
    let residues = coprime_residues(n)?;
    let phi = residues.len() as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in residues {
        // e(am/n) with the exponent reduced mod n to keep the argument small
        let am = (a as i128 * m as i128).rem_euclid(n as i128) as f64;
        let theta = TAU * am / n as f64;
        acc += Complex64::new(theta.cos(), theta.sin());
    }
    Ok(acc / phi)
}

/// Exact value of the normalized Ramanujan sum as a rational number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamanujanValue {
    /// Numerator mu(n/g).
    pub num: i64,
    /// Denominator phi(n/g), always positive.
    pub den: u64,
}

impl RamanujanValue {
    /// The rational value as a double.
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Closed form of the normalized Ramanujan sum, exact:
/// r_n(m) = mu(n/g) / phi(n/g) with g = gcd(n, |m|), and g = n when m = 0.
pub fn ramanujan_sum_exact(n: u64, m: i64) -> Result<RamanujanValue> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    // gcd(n, 0) = n, so m = 0 (and any multiple of n) lands on g = n
    let g = gcd(n, m.unsigned_abs() % n);
    let q = n / g;
    Ok(RamanujanValue {
        num: mobius(q)?,
        den: euler_phi(q)?,
    })
}

/// Closed form of the normalized Ramanujan sum as a double.
pub fn ramanujan_sum_closed(n: u64, m: i64) -> Result<f64> {
    Ok(ramanujan_sum_exact(n, m)?.value())
}
