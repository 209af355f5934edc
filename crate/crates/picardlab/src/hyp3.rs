//! Hyperbolic 3-space: the action of PSL(2, Z[i]), distance, classification
//! of elements, multipliers and axes.

use std::fmt;

use serde::Serialize;

use crate::gint::GaussianInt;
use crate::{Error, Result, C64};

/// A point `z + r j` of the upper half-space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point3 {
    pub z: C64,
    pub r: f64,
}

impl Point3 {
    pub fn new(z: C64, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::InvalidArgument("need r > 0 and finite coordinates".into()));
        }
        Ok(Self { z, r })
    }
}

/// An element of PSL(2, Z[i]) stored with a canonical sign: the first
/// nonzero entry of (a, b, c, d) has re > 0, or re = 0 and im > 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Matrix2 {
    pub a: GaussianInt,
    pub b: GaussianInt,
    pub c: GaussianInt,
    pub d: GaussianInt,
}

fn positive(z: GaussianInt) -> bool {
    z.re > 0 || (z.re == 0 && z.im > 0)
}

impl Matrix2 {
    pub fn new(a: GaussianInt, b: GaussianInt, c: GaussianInt, d: GaussianInt) -> Result<Self> {
        if a * d - b * c != GaussianInt::ONE {
            return Err(Error::InvalidArgument("determinant must be 1".into()));
        }
        Ok(Self::from_raw(a, b, c, d))
    }

    /// Canonicalizes the sign without checking the determinant.
    pub(crate) fn from_raw(a: GaussianInt, b: GaussianInt, c: GaussianInt, d: GaussianInt) -> Self {
        let m = Self { a, b, c, d };
        let lead = [a, b, c, d].into_iter().find(|z| !z.is_zero());
        match lead {
            Some(z) if !positive(z) => m.neg(),
            _ => m,
        }
    }

    pub fn from_ints(e: [(i64, i64); 4]) -> Result<Self> {
        let g = |(re, im): (i64, i64)| GaussianInt::new(re, im);
        Self::new(g(e[0]), g(e[1]), g(e[2]), g(e[3]))
    }

    pub fn identity() -> Self {
        let (o, z) = (GaussianInt::ONE, GaussianInt::ZERO);
        Self { a: o, b: z, c: z, d: o }
    }

    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn det(&self) -> GaussianInt {
        self.a * self.d - self.b * self.c
    }

    /// Trace of the stored representative; in PSL only defined up to sign.
    pub fn trace(&self) -> GaussianInt {
        self.a + self.d
    }

    /// Trace with the sign fixed by the same rule as the entries.
    pub fn canonical_trace(&self) -> GaussianInt {
        let t = self.trace();
        if t.is_zero() || positive(t) {
            t
        } else {
            -t
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_raw(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::from_raw(self.d, -self.b, -self.c, self.a)
    }

    /// `g M g^{-1}`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Largest entry norm.
    pub fn height(&self) -> i64 {
        [self.a, self.b, self.c, self.d].iter().map(|z| z.norm()).max().unwrap_or(0)
    }

    fn entries_c64(&self) -> [C64; 4] {
        [self.a.to_c64(), self.b.to_c64(), self.c.to_c64(), self.d.to_c64()]
    }
}

impl fmt::Debug for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Identity,
    Parabolic,
    Elliptic,
    Hyperbolic,
    Loxodromic,
}

impl Classification {
    /// Hyperbolic or loxodromic.
    pub fn has_axis(self) -> bool {
        matches!(self, Self::Hyperbolic | Self::Loxodromic)
    }
}

/// Action of a complex SL(2) matrix on H^3.
fn act_c(m: [C64; 4], p: Point3) -> Point3 {
    let [a, b, c, d] = m;
    let czd = c * p.z + d;
    let den = czd.norm_sqr() + c.norm_sqr() * p.r * p.r;
    let z = ((a * p.z + b) * (c.conj() * p.z.conj() + d.conj()) + a * c.conj() * p.r * p.r) / den;
    Point3 { z, r: p.r / den }
}

pub fn act(m: &Matrix2, p: Point3) -> Point3 {
    act_c(m.entries_c64(), p)
}

/// Hyperbolic distance, `cosh d = (|z-z'|^2 + r^2 + r'^2) / (2 r r')`,
/// evaluated as `2 asinh(sqrt(|z-z'|^2 + (r-r')^2) / (2 sqrt(r r')))`.
pub fn dist(p: Point3, q: Point3) -> f64 {
    let num = (p.z - q.z).norm_sqr() + (p.r - q.r).powi(2);
    2.0 * (num.sqrt() / (2.0 * (p.r * q.r).sqrt())).asinh()
}

pub fn classify(m: &Matrix2) -> Classification {
    if m.is_identity() {
        return Classification::Identity;
    }
    let t = m.trace();
    if t.im != 0 {
        return Classification::Loxodromic;
    }
    match t.re.abs() {
        2 => Classification::Parabolic,
        0 | 1 => Classification::Elliptic,
        _ => Classification::Hyperbolic,
    }
}

/// `a(T)`, `K(T) = a(T)^2` and `N(T) = |a(T)|^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Multiplier {
    pub a: C64,
    pub k: C64,
    pub n: f64,
}

/// Root of `x^2 - t x + 1` of modulus > 1.
pub fn expanding_root(t: C64) -> C64 {
    let s = (t * t - 4.0).sqrt();
    // the sign of s that adds constructively to t
    let s = if (t.conj() * s).re >= 0.0 { s } else { -s };
    (t + s) / 2.0
}

pub fn multiplier(m: &Matrix2) -> Result<Multiplier> {
    if !classify(m).has_axis() {
        return Err(Error::Regime("no multiplier: element is not hyperbolic or loxodromic".into()));
    }
    let a = expanding_root(m.trace().to_c64());
    Ok(Multiplier { a, k: a * a, n: a.norm_sqr() })
}

/// A point of the boundary `C u {inf}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Boundary {
    Finite(C64),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub fixed1: Boundary,
    pub fixed2: Boundary,
    /// top of the geodesic joining the fixed points
    pub sample: Point3,
}

pub fn axis(m: &Matrix2) -> Result<Axis> {
    if !classify(m).has_axis() {
        return Err(Error::Regime("no axis: element is not hyperbolic or loxodromic".into()));
    }
    let [a, b, c, d] = m.entries_c64();
    if m.c.is_zero() {
        // z -> (a z + b)/d fixes b/(d - a) and inf
        let z = b / (d - a);
        return Ok(Axis {
            fixed1: Boundary::Finite(z),
            fixed2: Boundary::Infinity,
            sample: Point3 { z, r: 1.0 },
        });
    }
    // c z^2 + (d - a) z - b = 0
    let disc = ((d - a) * (d - a) + 4.0 * b * c).sqrt();
    let z1 = (a - d + disc) / (2.0 * c);
    let z2 = (a - d - disc) / (2.0 * c);
    Ok(Axis {
        fixed1: Boundary::Finite(z1),
        fixed2: Boundary::Finite(z2),
        sample: Point3 { z: (z1 + z2) / 2.0, r: (z1 - z2).norm() / 2.0 },
    })
}

/// Distance from `p` to the geodesic joining the fixed points of `m`.
pub fn dist_to_axis(m: &Matrix2, p: Point3) -> Result<f64> {
    let ax = axis(m)?;
    let one = C64::new(1.0, 0.0);
    // move the axis to the vertical line over 0
    let s = match (ax.fixed1, ax.fixed2) {
        (Boundary::Finite(z1), Boundary::Finite(z2)) => {
            let k = (z1 - z2).sqrt();
            [one / k, -z1 / k, one / k, -z2 / k]
        }
        (Boundary::Finite(z1), Boundary::Infinity) | (Boundary::Infinity, Boundary::Finite(z1)) => {
            [one, -z1, C64::new(0.0, 0.0), one]
        }
        _ => unreachable!("a loxodromic element has two distinct fixed points"),
    };
    let q = act_c(s, p);
    Ok((q.z.norm() / q.r).asinh())
}

/// `(d(P, T P), log N(T))`; the first is never below the second and the two
/// agree exactly on the axis.
pub fn displacement_check(m: &Matrix2, p: Point3) -> Result<(f64, f64)> {
    let n = multiplier(m)?.n;
    Ok((dist(p, act(m, p)), n.ln()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    /// Random word in the standard generators of PSL(2, Z[i]).
    pub(crate) fn random_element(rng: &mut ChaCha8Rng, len: usize) -> Matrix2 {
        let gens = [
            Matrix2::from_ints([(0, 0), (-1, 0), (1, 0), (0, 0)]).unwrap(),
            Matrix2::from_ints([(1, 0), (1, 0), (0, 0), (1, 0)]).unwrap(),
            Matrix2::from_ints([(1, 0), (-1, 0), (0, 0), (1, 0)]).unwrap(),
            Matrix2::from_ints([(1, 0), (0, 1), (0, 0), (1, 0)]).unwrap(),
            Matrix2::from_ints([(1, 0), (0, -1), (0, 0), (1, 0)]).unwrap(),
            Matrix2::from_ints([(0, 1), (0, 0), (0, 0), (0, -1)]).unwrap(),
        ];
        let mut m = Matrix2::identity();
        for _ in 0..len {
            m = m.mul(&gens[rng.gen_range(0..gens.len())]);
        }
        m
    }

    pub(crate) fn random_axial(rng: &mut ChaCha8Rng) -> Matrix2 {
        loop {
            let m = random_element(rng, 8);
            if classify(&m).has_axis() {
                return m;
            }
        }
    }

    fn random_point(rng: &mut ChaCha8Rng) -> Point3 {
        Point3 {
            z: C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            r: rng.gen_range(0.2..3.0),
        }
    }

    #[test]
    fn canonical_sign_and_determinant() {
        let m = Matrix2::from_ints([(-1, 0), (0, 0), (0, 0), (-1, 0)]).unwrap();
        assert!(m.is_identity());
        let m = Matrix2::from_ints([(0, 0), (0, -1), (0, -1), (2, 0)]).unwrap();
        assert_eq!(m.b, g(0, 1));
        assert!(Matrix2::from_ints([(1, 0), (1, 0), (1, 0), (1, 0)]).is_err());
        assert!(Point3::new(C64::new(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn action_basics() {
        let p = Point3 { z: C64::new(0.3, -0.2), r: 0.7 };
        assert_eq!(act(&Matrix2::identity(), p), p);
        // c = 0: r* = r / |d|^2
        let m = Matrix2::from_ints([(2, 0), (0, 0), (0, 0), (0, 0)]);
        assert!(m.is_err());
        let m = Matrix2::from_ints([(0, 1), (0, 0), (0, 0), (0, -1)]).unwrap();
        let q = act(&m, Point3 { z: C64::new(0.0, 0.0), r: 1.0 });
        assert!((q.r - 1.0).abs() < 1e-15 && q.z.norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let (m1, m2) = (random_element(&mut rng, 5), random_element(&mut rng, 5));
            let p = random_point(&mut rng);
            let a = act(&m1.mul(&m2), p);
            let b = act(&m1, act(&m2, p));
            let scale = 1.0 + a.z.norm() + a.r;
            assert!((a.z - b.z).norm() < 1e-12 * scale && (a.r - b.r).abs() < 1e-12 * scale);
            assert!(a.r > 0.0);
        }
    }

    #[test]
    fn distance_properties() {
        let o = Point3 { z: C64::new(0.0, 0.0), r: 1.0 };
        let e = Point3 { z: C64::new(0.0, 0.0), r: 1f64.exp() };
        assert!((dist(o, e) - 1.0).abs() < 1e-14);
        assert_eq!(dist(e, e), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let m = random_element(&mut rng, 6);
            let (p, q) = (random_point(&mut rng), random_point(&mut rng));
            assert!((dist(p, q) - dist(q, p)).abs() < 1e-14);
            let d0 = dist(p, q);
            let d1 = dist(act(&m, p), act(&m, q));
            assert!((d0 - d1).abs() < 1e-10 * d0.max(1.0), "{d0} {d1}");
        }
    }

    #[test]
    fn classification_by_trace() {
        let hyp = Matrix2::from_ints([(2, 0), (1, 0), (1, 0), (1, 0)]).unwrap();
        assert_eq!(classify(&hyp), Classification::Hyperbolic);
        let ell = Matrix2::from_ints([(1, 0), (-1, 0), (1, 0), (0, 0)]).unwrap();
        assert_eq!(classify(&ell), Classification::Elliptic);
        let lox = Matrix2::from_ints([(1, 1), (1, 0), (-1, 0), (0, 0)]).unwrap();
        assert_eq!(lox.trace(), g(1, 1));
        assert_eq!(classify(&lox), Classification::Loxodromic);
        let par = Matrix2::from_ints([(1, 0), (1, 0), (0, 0), (1, 0)]).unwrap();
        assert_eq!(classify(&par), Classification::Parabolic);
        assert_eq!(classify(&Matrix2::identity()), Classification::Identity);
        assert!(multiplier(&ell).is_err() && axis(&par).is_err());
    }

    #[test]
    fn multipliers() {
        let hyp = Matrix2::from_ints([(2, 0), (1, 0), (1, 0), (1, 0)]).unwrap();
        let mu = multiplier(&hyp).unwrap();
        let a = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((mu.a.re - a).abs() < 1e-14 && mu.a.im.abs() < 1e-14);
        assert!((mu.n - a * a).abs() < 1e-12);
        let m = Matrix2::from_ints([(0, 2), (0, 1), (0, 1), (0, 0)]).unwrap();
        let mu = multiplier(&m).unwrap();
        let a = 1.0 + 2f64.sqrt();
        assert!((mu.a - C64::new(0.0, a)).norm() < 1e-14);
        assert!((mu.n - a * a).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let t = random_axial(&mut rng);
            let c = random_element(&mut rng, 4);
            let (m0, m1) = (multiplier(&t).unwrap(), multiplier(&t.conjugate_by(&c)).unwrap());
            assert!((m0.n - m1.n).abs() < 1e-10 * m0.n);
            assert!((m0.k - m1.k).norm() < 1e-10 * m0.n);
        }
    }

    #[test]
    fn axes() {
        let m = Matrix2::from_ints([(2, 0), (1, 0), (1, 0), (1, 0)]).unwrap();
        let ax = axis(&m).unwrap();
        if let (Boundary::Finite(z1), Boundary::Finite(z2)) = (ax.fixed1, ax.fixed2) {
            assert!((ax.sample.z - (z1 + z2) / 2.0).norm() < 1e-15);
            assert!((ax.sample.r - (z1 - z2).norm() / 2.0).abs() < 1e-15);
        } else {
            panic!("expected finite fixed points");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let t = random_axial(&mut rng);
            let p = axis(&t).unwrap().sample;
            assert!(dist_to_axis(&t, p).unwrap() < 1e-9);
            assert!(dist_to_axis(&t, act(&t, p)).unwrap() < 1e-9);
        }
    }

    #[test]
    fn displacement_on_known_axes() {
        let m = Matrix2::from_ints([(1, 0), (1, 0), (1, 0), (2, 0)]).unwrap();
        let ax = axis(&m).unwrap();
        let (d, ln) = displacement_check(&m, ax.sample).unwrap();
        assert!((d - ln).abs() < 1e-12);
        let t = Matrix2::from_ints([(2, 0), (1, 0), (1, 0), (1, 0)]).unwrap();
        let ln = multiplier(&t).unwrap().n.ln();
        assert!((ln - ((3.0 + 5f64.sqrt()) / 2.0).powi(2).ln()).abs() < 1e-14);
    }

    #[test]
    fn displacement_identity_and_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let t = random_axial(&mut rng);
            let ax = axis(&t).unwrap();
            let (d, ln) = displacement_check(&t, ax.sample).unwrap();
            assert!((d - ln).abs() < 1e-9, "{t:?}: {d} {ln}");
            let off = Point3 { z: ax.sample.z + 1.0, r: ax.sample.r };
            let (d, ln) = displacement_check(&t, off).unwrap();
            assert!(d > ln);
        }
        for _ in 0..1000 {
            let t = random_axial(&mut rng);
            let (d, ln) = displacement_check(&t, random_point(&mut rng)).unwrap();
            assert!(d >= ln - 1e-9);
        }
    }
}
