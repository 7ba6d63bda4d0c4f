//! Geometry of the modular surface: upper-half-plane points, integer
//! Moebius transformations, reduction to the standard fundamental domain
//! |Re z| <= 1/2, |z| >= 1 with automorphy-factor tracking, and the
//! horocycle sample set {(k/n, (k+i)/n) : gcd(k, n) = 1}.

use num_complex::Complex64;

use crate::arith::coprime_residues;
use crate::error::{Error, Result};

/// A point x + iy on the hyperbolic upper half-plane, y > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    x: f64,
    y: f64,
}

impl UpperHalfPoint {
    /// Construct a point, rejecting y <= 0 or non-finite coordinates.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(
                "UpperHalfPoint::new",
                format!("requires finite x and y > 0, got ({x}, {y})"),
            ));
        }
        Ok(UpperHalfPoint { x, y })
    }

    /// Horocycle coordinate Re z.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Height Im z.
    pub fn y(&self) -> f64 {
        self.y
    }

    /// The point as a complex number.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// The point i.
    pub fn i() -> Self {
        UpperHalfPoint { x: 0.0, y: 1.0 }
    }
}

/// An integer matrix [[a, b], [c, d]] with ad - bc = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnimodularMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl UnimodularMatrix {
    /// The identity.
    pub const IDENTITY: UnimodularMatrix = UnimodularMatrix { a: 1, b: 0, c: 0, d: 1 };

    /// The inversion S = [[0, -1], [1, 0]].
    pub const S: UnimodularMatrix = UnimodularMatrix { a: 0, b: -1, c: 1, d: 0 };

    /// The translation T = [[1, 1], [0, 1]].
    pub const T: UnimodularMatrix = UnimodularMatrix { a: 1, b: 1, c: 0, d: 1 };

    /// Construct with the determinant check ad - bc = 1.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a.checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(ad, bc)| ad.checked_sub(bc))
            != Some(1)
        {
            return Err(Error::domain(
                "UnimodularMatrix::new",
                format!("determinant of [[{a},{b}],[{c},{d}]] is not 1"),
            ));
        }
        Ok(UnimodularMatrix { a, b, c, d })
    }

    /// The translation T^k = [[1, k], [0, 1]].
    pub fn translation(k: i64) -> Self {
        UnimodularMatrix { a: 1, b: k, c: 0, d: 1 }
    }

    /// Matrix entries (a, b, c, d).
    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    /// Group inverse [[d, -b], [-c, a]].
    pub fn inverse(&self) -> Self {
        UnimodularMatrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Matrix product self * rhs.
    pub fn mul(&self, rhs: &UnimodularMatrix) -> Self {
        UnimodularMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// The automorphy factor cz + d at z.
    pub fn automorphy(&self, z: &UpperHalfPoint) -> Complex64 {
        Complex64::new(self.c as f64 * z.x + self.d as f64, self.c as f64 * z.y)
    }
}

/// Moebius action z -> (az + b)/(cz + d); the output height is
/// y / |cz + d|^2, so the result stays in the upper half-plane.
pub fn apply_moebius(gamma: &UnimodularMatrix, z: &UpperHalfPoint) -> UpperHalfPoint {
    let (a, b, c, d) = (gamma.a as f64, gamma.b as f64, gamma.c as f64, gamma.d as f64);
    let den = (c * z.x + d).powi(2) + (c * z.y).powi(2);
    let x = ((a * z.x + b) * (c * z.x + d) + a * c * z.y * z.y) / den;
    let y = z.y / den;
    UpperHalfPoint { x, y }
}

/// Outcome of reducing a point into the closed fundamental domain.
#[derive(Debug, Clone, Copy)]
pub struct ReductionResult {
    /// The representative with |Re| <= 1/2 and |z| >= 1 (up to 1e-12).
    pub reduced: UpperHalfPoint,
    /// The matrix gamma with gamma * original = reduced.
    pub gamma: UnimodularMatrix,
    /// cz + d of gamma evaluated at the original point, so that
    /// Im(reduced) = Im(original) / |automorphy|^2.
    pub automorphy: Complex64,
}

/// Reduce z to the standard fundamental domain by alternating integer
/// translations and the inversion S, accumulating the group element.
///
/// Terminates in O(log(1/y) + log(1 + |x|)) steps; an iteration guard of
/// 10 * (64 + |log2 y|) signals numerical breakdown.
pub fn reduce_to_fundamental_domain(z: &UpperHalfPoint) -> Result<ReductionResult> {
    let max_iter = 10 * (64 + z.y.log2().abs().ceil() as u64);
    let mut cur = *z;
    let mut gamma = UnimodularMatrix::IDENTITY;
    let mut iterations = 0u64;
    loop {
        let shift = cur.x.round();
        if shift != 0.0 {
            cur.x -= shift;
            gamma = UnimodularMatrix::translation(-(shift as i64)).mul(&gamma);
        }
        let norm2 = cur.x * cur.x + cur.y * cur.y;
        if norm2 >= 1.0 - 1e-15 {
            break;
        }
        // |z| < 1: apply S, which strictly increases the height
        cur = UpperHalfPoint { x: -cur.x / norm2, y: cur.y / norm2 };
        gamma = UnimodularMatrix::S.mul(&gamma);
        iterations += 1;
        if iterations > max_iter {
            return Err(Error::ReductionOverflow { iterations });
        }
    }
    // Recompute the representative in one shot from the integer matrix;
    // this is more accurate than the incrementally updated point.
    let reduced = apply_moebius(&gamma, z);
    Ok(ReductionResult {
        reduced,
        gamma,
        automorphy: gamma.automorphy(z),
    })
}

/// One primitive rational sample point of the horocycle at height 1/n.
#[derive(Debug, Clone, Copy)]
pub struct HorocycleSample {
    /// Residue k with gcd(k, n) = 1, 0 <= k < n.
    pub k: u64,
    /// Torus coordinate k/n.
    pub torus_coord: f64,
    /// The point (k + i)/n.
    pub point: UpperHalfPoint,
}

/// The sample set P(n): one point (k/n, (k+i)/n) per primitive residue k.
pub fn horocycle_points(n: u64) -> Result<Vec<HorocycleSample>> {
    let residues = coprime_residues(n)?;
    let inv_n = 1.0 / n as f64;
    let nf = n as f64;
    Ok(residues
        .into_iter()
        .map(|k| HorocycleSample {
            k,
            torus_coord: k as f64 / nf,
            point: UpperHalfPoint { x: k as f64 / nf, y: inv_n },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_in_domain(p: &UpperHalfPoint) {
        assert!(p.x.abs() <= 0.5 + 1e-12, "x = {} outside domain", p.x);
        assert!(
            p.x * p.x + p.y * p.y >= 1.0 - 1e-12,
            "|z| = {} < 1",
            (p.x * p.x + p.y * p.y).sqrt()
        );
    }

    #[test]
    fn moebius_examples() {
        let z = UpperHalfPoint::new(0.3, 0.4).unwrap();
        let w = apply_moebius(&UnimodularMatrix::IDENTITY, &z);
        assert_eq!((w.x, w.y), (0.3, 0.4));
        let i = UpperHalfPoint::i();
        let w = apply_moebius(&UnimodularMatrix::S, &i);
        assert!((w.x).abs() < 1e-15 && (w.y - 1.0).abs() < 1e-15);
        let w = apply_moebius(&UnimodularMatrix::T, &z);
        assert!((w.x - 1.3).abs() < 1e-15 && (w.y - 0.4).abs() < 1e-15);
    }

    #[test]
    fn matrix_construction() {
        assert!(UnimodularMatrix::new(2, 1, 1, 1).is_ok());
        assert!(UnimodularMatrix::new(2, 1, 1, 2).is_err());
        assert!(UpperHalfPoint::new(0.0, 0.0).is_err());
        assert!(UpperHalfPoint::new(0.0, -1.0).is_err());
        assert!(UpperHalfPoint::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn reduce_already_reduced() {
        let r = reduce_to_fundamental_domain(&UpperHalfPoint::i()).unwrap();
        assert_eq!(r.gamma, UnimodularMatrix::IDENTITY);
        assert!((r.reduced.x).abs() < 1e-15 && (r.reduced.y - 1.0).abs() < 1e-15);
        assert!((r.automorphy - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reduce_half_plus_half_i() {
        // 0.5 + 0.5i: translate to -0.5 + 0.5i (on |z| < 1... |z|^2 = 0.5),
        // invert to land at i; the height ratio fixes |automorphy|^2 = 0.5.
        let z = UpperHalfPoint::new(0.5, 0.5).unwrap();
        let r = reduce_to_fundamental_domain(&z).unwrap();
        assert_in_domain(&r.reduced);
        let via_gamma = apply_moebius(&r.gamma, &z);
        assert!((via_gamma.x - r.reduced.x).abs() < 1e-12);
        assert!((via_gamma.y - r.reduced.y).abs() < 1e-12);
        assert!((r.automorphy.norm_sqr() - z.y / r.reduced.y).abs() < 1e-12);
        assert!((r.automorphy.norm_sqr() - 0.5).abs() < 1e-12);
        assert!((r.reduced.y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_horocycle_point() {
        // (3 + i)/7 reduces to height >= sqrt(3)/2 with consistent invariants
        let z = UpperHalfPoint::new(3.0 / 7.0, 1.0 / 7.0).unwrap();
        let r = reduce_to_fundamental_domain(&z).unwrap();
        assert_in_domain(&r.reduced);
        assert!(r.reduced.y >= 3f64.sqrt() / 2.0 - 1e-12);
        assert!(r.reduced.y >= z.y - 1e-12);
        let via_gamma = apply_moebius(&r.gamma, &z);
        let rel = ((via_gamma.x - r.reduced.x).abs() + (via_gamma.y - r.reduced.y).abs()) / z.y;
        assert!(rel < 1e-9);
        assert!(
            ((z.y / r.automorphy.norm_sqr()) - r.reduced.y).abs() / r.reduced.y < 1e-9
        );
    }

    #[test]
    fn horocycle_points_examples() {
        let p1 = horocycle_points(1).unwrap();
        assert_eq!(p1.len(), 1);
        assert_eq!(p1[0].k, 0);
        assert!((p1[0].point.x).abs() < 1e-15 && (p1[0].point.y - 1.0).abs() < 1e-15);

        let p2 = horocycle_points(2).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].k, 1);
        assert_eq!((p2[0].point.x, p2[0].point.y), (0.5, 0.5));

        let p12 = horocycle_points(12).unwrap();
        assert_eq!(p12.iter().map(|s| s.k).collect::<Vec<_>>(), vec![1, 5, 7, 11]);
        for s in &p12 {
            assert_eq!(s.point.y, 1.0 / 12.0);
            assert_eq!(s.torus_coord, s.k as f64 / 12.0);
        }
    }

    #[test]
    fn automorphy_chain_rule() {
        // Points in the same orbit land on the same domain representative.
        let gammas = [
            UnimodularMatrix::new(1, 1, 0, 1).unwrap(),
            UnimodularMatrix::new(0, -1, 1, 0).unwrap(),
            UnimodularMatrix::new(2, 1, 1, 1).unwrap(),
            UnimodularMatrix::new(5, 2, 2, 1).unwrap(),
            UnimodularMatrix::new(3, -1, 1, 0).unwrap(),
        ];
        let z = UpperHalfPoint::new(0.137, 0.61).unwrap();
        let base = reduce_to_fundamental_domain(&z).unwrap().reduced;
        for g in &gammas {
            let moved = apply_moebius(g, &z);
            let r = reduce_to_fundamental_domain(&moved).unwrap().reduced;
            // boundary copies x = +-1/2 are identified
            let dxr = (r.x - base.x).abs();
            let dx = dxr.min((1.0 - dxr).abs());
            assert!(dx < 1e-8 && (r.y - base.y).abs() < 1e-8, "{r:?} vs {base:?}");
        }
    }

    proptest! {
        #[test]
        fn reduction_round_trip(
            x in -8.0f64..8.0,
            log_y in -6.0f64..1.0,
        ) {
            let y = 10f64.powf(log_y);
            let z = UpperHalfPoint::new(x, y).unwrap();
            let r = reduce_to_fundamental_domain(&z).unwrap();
            assert_in_domain(&r.reduced);
            prop_assert!(r.reduced.y >= z.y - 1e-12);
            // apply gamma^{-1} to recover z
            let back = apply_moebius(&r.gamma.inverse(), &r.reduced);
            prop_assert!((back.x - z.x).abs() <= 1e-8 * (1.0 + z.x.abs()));
            prop_assert!((back.y - z.y).abs() <= 1e-8 * z.y);
            // automorphy consistency
            let ratio = z.y / r.automorphy.norm_sqr();
            prop_assert!((ratio - r.reduced.y).abs() <= 1e-9 * r.reduced.y);
        }
    }
}
