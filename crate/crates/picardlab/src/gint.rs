//! Exact arithmetic in Z[i].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::{C64, Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

pub const UNITS: [GaussianInt; 4] = [
    GaussianInt { re: 1, im: 0 },
    GaussianInt { re: 0, im: 1 },
    GaussianInt { re: -1, im: 0 },
    GaussianInt { re: 0, im: -1 },
];

impl GaussianInt {
    pub const ZERO: Self = Self { re: 0, im: 0 };
    pub const ONE: Self = Self { re: 1, im: 0 };
    pub const I: Self = Self { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    pub fn to_c64(self) -> C64 {
        C64::new(self.re as f64, self.im as f64)
    }

    pub fn abs(self) -> f64 {
        (self.norm() as f64).sqrt()
    }

    /// Multiply by i.
    pub fn rot(self) -> Self {
        Self::new(-self.im, self.re)
    }

    /// The associate with re > 0 and im >= 0 (zero maps to zero).
    pub fn canonical(self) -> Self {
        self.canonical_with_unit().0
    }

    /// `(c, u)` with `c` canonical and `self = u * c`.
    pub fn canonical_with_unit(self) -> (Self, Self) {
        if self.is_zero() {
            return (self, Self::ONE);
        }
        let mut z = self;
        // z = u * c; each rotation multiplies c by i, so u picks up -i.
        let mut u = Self::ONE;
        while !(z.re > 0 && z.im >= 0) {
            z = z.rot();
            u = u * Self::new(0, -1);
        }
        (z, u)
    }

    pub fn pow(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Quotient `self / q` rounded coordinatewise, halves toward -infinity.
    pub fn div_round(self, q: Self) -> Self {
        let n = q.norm();
        assert!(n != 0, "division by zero Gaussian integer");
        let num = self * q.conj();
        Self::new(round_half_down(num.re, n), round_half_down(num.im, n))
    }

    /// Canonical remainder `self - q * round(self / q)`.
    pub fn rem(self, q: Self) -> Self {
        self - q * self.div_round(q)
    }

    pub fn div_exact(self, q: Self) -> Option<Self> {
        let n = q.norm();
        if n == 0 {
            return None;
        }
        let num = self * q.conj();
        if num.re % n == 0 && num.im % n == 0 {
            Some(Self::new(num.re / n, num.im / n))
        } else {
            None
        }
    }

    pub fn divides(self, n: Self) -> bool {
        if self.is_zero() {
            return n.is_zero();
        }
        n.div_exact(self).is_some()
    }

    pub fn congruent(self, other: Self, q: Self) -> bool {
        q.divides(self - other)
    }

    /// Sort key used for residue systems and norm enumeration.
    pub fn order_key(self) -> (i64, i64, i64) {
        (self.norm(), self.re, self.im)
    }
}

fn round_half_down(x: i64, n: i64) -> i64 {
    // round(x/n) with ties toward -inf equals ceil((2x - n) / 2n)
    let p = 2 * x - n;
    let q = 2 * n;
    -((-p).div_euclid(q))
}

impl Ord for GaussianInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for GaussianInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, i) => write!(f, "{i}i"),
            (r, i) if i < 0 => write!(f, "{r}{i}i"),
            (r, i) => write!(f, "{r}+{i}i"),
        }
    }
}

impl std::str::FromStr for GaussianInt {
    type Err = Error;

    /// Accepts `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`, `a+i`).
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidArgument(format!("cannot parse Gaussian integer {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        let parse_im = |x: &str| -> Result<i64> {
            match x {
                "" | "+" => Ok(1),
                "-" => Ok(-1),
                _ => x.parse::<i64>().map_err(|_| bad()),
            }
        };
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not the leading one
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(k, _)| k)
                .last();
            match split {
                Some(k) => {
                    let re = body[..k].parse::<i64>().map_err(|_| bad())?;
                    Ok(Self::new(re, parse_im(&body[k..])?))
                }
                None => Ok(Self::new(0, parse_im(body)?)),
            }
        } else {
            Ok(Self::new(t.parse::<i64>().map_err(|_| bad())?, 0))
        }
    }
}

impl From<i64> for GaussianInt {
    fn from(x: i64) -> Self {
        Self::new(x, 0)
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

pub fn norm(z: GaussianInt) -> i64 {
    z.norm()
}

/// Canonical-associate gcd by the Euclidean algorithm.
pub fn gcd(a: GaussianInt, b: GaussianInt) -> Result<GaussianInt> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdUndefined);
    }
    let (mut x, mut y) = (a, b);
    while !y.is_zero() {
        let r = x.rem(y);
        x = y;
        y = r;
    }
    Ok(x.canonical())
}

/// gcd that returns 0 for (0, 0) instead of an error.
pub fn gcd0(a: GaussianInt, b: GaussianInt) -> GaussianInt {
    gcd(a, b).unwrap_or(GaussianInt::ZERO)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub unit: GaussianInt,
    pub factors: Vec<(GaussianInt, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> GaussianInt {
        self.factors
            .iter()
            .fold(self.unit, |acc, &(p, e)| acc * p.pow(e))
    }

    /// All divisors up to units, as canonical associates in sorted order.
    pub fn canonical_divisors(&self) -> Vec<GaussianInt> {
        let mut out = vec![GaussianInt::ONE];
        for &(p, e) in &self.factors {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for &d in &out {
                let mut pk = GaussianInt::ONE;
                for _ in 0..=e {
                    next.push((d * pk).canonical());
                    pk = pk * p;
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Gaussian prime above a rational prime p = 1 (mod 4), by direct search.
fn split_prime(p: i64) -> GaussianInt {
    let mut a = 1;
    loop {
        let b2 = p - a * a;
        let b = isqrt(b2);
        if b * b == b2 {
            return GaussianInt::new(a, b).canonical();
        }
        a += 1;
    }
}

fn rational_prime_factors(mut n: i64) -> Vec<i64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            ps.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

pub fn factor(n: GaussianInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let strip = |rest: &mut GaussianInt, pi: GaussianInt, factors: &mut Vec<(GaussianInt, u32)>| {
        let mut e = 0;
        while let Some(q) = rest.div_exact(pi) {
            *rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((pi, e));
        }
    };
    for p in rational_prime_factors(n.norm()) {
        if p == 2 {
            strip(&mut rest, GaussianInt::new(1, 1), &mut factors);
        } else if p % 4 == 3 {
            strip(&mut rest, GaussianInt::new(p, 0), &mut factors);
        } else {
            let pi = split_prime(p);
            strip(&mut rest, pi, &mut factors);
            strip(&mut rest, pi.conj().canonical(), &mut factors);
        }
    }
    debug_assert!(rest.is_unit());
    factors.sort();
    Ok(Factorization { unit: rest, factors })
}

/// Gaussian Moebius function (0 on non-squarefree arguments).
pub fn mobius(n: GaussianInt) -> Result<i32> {
    let f = factor(n)?;
    if !f.is_squarefree() {
        return Ok(0);
    }
    Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
}

/// `4^{-1} sum_{d | n} |d|^{2 alpha}` over all divisors including associates.
pub fn sigma_alpha(n: GaussianInt, alpha: C64) -> Result<C64> {
    let f = factor(n)?;
    Ok(sigma_from_factorization(&f, alpha))
}

pub(crate) fn sigma_from_factorization(f: &Factorization, alpha: C64) -> C64 {
    // multiplicative: product over prime powers of sum_k N(p)^{k alpha}
    f.factors
        .iter()
        .map(|&(p, e)| {
            let x = (p.norm() as f64).powc(alpha);
            let mut acc = C64::new(1.0, 0.0);
            let mut t = C64::new(1.0, 0.0);
            for _ in 0..e {
                t *= x;
                acc += t;
            }
            acc
        })
        .product()
}

trait PowC {
    fn powc(self, a: C64) -> C64;
}

impl PowC for f64 {
    fn powc(self, a: C64) -> C64 {
        (a * self.ln()).exp()
    }
}

/// A complete residue system modulo q, reduced canonically and sorted.
pub fn residue_system(q: GaussianInt) -> Result<Vec<GaussianInt>> {
    if q.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let n = q.norm();
    let b = isqrt(n) + 2;
    let mut set = std::collections::HashSet::with_capacity(n as usize);
    for re in -b..=b {
        for im in -b..=b {
            set.insert(GaussianInt::new(re, im).rem(q));
        }
    }
    let mut v: Vec<_> = set.into_iter().collect();
    v.sort();
    debug_assert_eq!(v.len() as i64, n);
    Ok(v)
}

pub fn mod_inverse(a: GaussianInt, q: GaussianInt) -> Result<GaussianInt> {
    if q.is_zero() {
        return Err(Error::ZeroArgument);
    }
    // extended Euclid: track x with x*a = r (mod q)
    let (mut r0, mut r1) = (a.rem(q), q);
    let (mut x0, mut x1) = (GaussianInt::ONE, GaussianInt::ZERO);
    if r0.is_zero() {
        if q.is_unit() {
            return Ok(GaussianInt::ZERO);
        }
        return Err(Error::NotInvertible);
    }
    while !r1.is_zero() {
        let t = r0.div_round(r1);
        (r0, r1) = (r1, r0 - t * r1);
        (x0, x1) = (x1, x0 - t * x1);
    }
    if !r0.is_unit() {
        return Err(Error::NotInvertible);
    }
    // r0 = u is a unit; x0 * a = u, so a^{-1} = x0 * u^{-1} = x0 * conj(u)
    Ok((x0 * r0.conj()).rem(q))
}

/// All nonzero z with norm(z) <= nmax, sorted by (norm, re, im).
pub fn enumerate_by_norm(nmax: i64) -> Vec<GaussianInt> {
    if nmax < 1 {
        return Vec::new();
    }
    let b = isqrt(nmax);
    let mut v = Vec::new();
    for re in -b..=b {
        for im in -b..=b {
            let z = GaussianInt::new(re, im);
            if !z.is_zero() && z.norm() <= nmax {
                v.push(z);
            }
        }
    }
    v.sort();
    v
}

/// Canonical representatives of the nonzero ideals with norm <= nmax.
pub fn canonical_by_norm(nmax: i64) -> Vec<GaussianInt> {
    let b = isqrt(nmax.max(0));
    let mut v = Vec::new();
    for re in 1..=b {
        for im in 0..=b {
            let z = GaussianInt::new(re, im);
            if z.norm() <= nmax {
                v.push(z);
            }
        }
    }
    v.sort();
    v
}

/// Residues of `base^e` modulo q by square-and-multiply.
pub fn pow_mod(base: GaussianInt, mut e: u64, q: GaussianInt) -> GaussianInt {
    let mut acc = GaussianInt::ONE.rem(q);
    let mut b = base.rem(q);
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc * b).rem(q);
        }
        b = (b * b).rem(q);
        e >>= 1;
    }
    acc
}
