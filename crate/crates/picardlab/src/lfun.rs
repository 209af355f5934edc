//! Zeta and L-functions of Q(i): the Dedekind zeta, the Epstein-Lerch
//! zeta with angular character, the L-function built from quadratic
//! congruence counts, and its decomposition through quadratic characters.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::congruence;
use crate::expsums::e_bracket;
use crate::gint::{self, factor, pow_mod, residue_system, sigma_from_factorization, Factorization, GaussianInt};
use crate::specfun::gamma::{gamma_c, rgamma, upper_incomplete_gamma};
use crate::{c, Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesParams {
    pub s: C64,
    pub truncation_norm: i64,
    pub tolerance: f64,
}

impl SeriesParams {
    pub fn new(s: C64, truncation_norm: i64, tolerance: f64) -> Result<Self> {
        if truncation_norm < 1 || !(tolerance > 0.0) {
            return Err(Error::InvalidArgument(
                "truncation_norm must be >= 1 and tolerance > 0".into(),
            ));
        }
        Ok(Self { s, truncation_norm, tolerance })
    }
}

/// Arguments of `zeta_k(s; m, xi) = sum (w/|w|)^m |w|^{-2s}`, w = n + xi.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LerchSpec {
    pub s: C64,
    pub m: i32,
    pub xi: C64,
}

// B_2, B_4, ..., B_30
const BERNOULLI: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Hurwitz zeta `sum_{k>=0} (k+a)^{-s}` by Euler-Maclaurin; s != 1, a > 0.
pub fn hurwitz_zeta(s: C64, a: f64) -> Result<C64> {
    if s == c(1.0, 0.0) {
        return Err(Error::Pole);
    }
    let n = 20 + s.norm().ceil() as usize;
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..n {
        sum += (-s * (k as f64 + a).ln()).exp();
    }
    let x = n as f64 + a;
    let lx = x.ln();
    let xs = (-s * lx).exp();
    sum += xs * x / (s - 1.0) + 0.5 * xs;
    // B_{2j}/(2j)! * s(s+1)...(s+2j-2) x^{-s-2j+1}
    let mut poch = s;
    let mut fact = 2.0;
    let mut xpow = xs / x;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let term = poch * xpow * (b / fact);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        let k = 2.0 * j as f64;
        poch = poch * (s + k + 1.0) * (s + k + 2.0);
        fact *= (k + 3.0) * (k + 4.0);
        xpow /= x * x;
    }
    Ok(sum)
}

pub fn riemann_zeta(s: C64) -> Result<C64> {
    hurwitz_zeta(s, 1.0)
}

/// Dirichlet beta `sum (-1)^k (2k+1)^{-s}`, entire.
pub fn dirichlet_beta(s: C64) -> Result<C64> {
    if s == c(1.0, 0.0) {
        return Ok(c(PI / 4.0, 0.0));
    }
    let q = (-s * 4f64.ln()).exp();
    Ok(q * (hurwitz_zeta(s, 0.25)? - hurwitz_zeta(s, 0.75)?))
}

/// `zeta_k(s) = 1/4 sum_{n != 0} |n|^{-2s} = zeta(s) beta(s)`.
pub fn dedekind_zeta(s: C64) -> Result<C64> {
    if s == c(1.0, 0.0) {
        return Err(Error::Pole);
    }
    Ok(riemann_zeta(s)? * dirichlet_beta(s)?)
}

/// Truncated lattice sum over canonical n with norm <= nmax, plus the
/// tail integral `(pi/4) nmax^{1-s}/(s-1)`. Independent of the production path.
pub fn dedekind_zeta_lattice(s: C64, nmax: i64) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    let r = (nmax as f64).sqrt() as i64 + 1;
    for a in 1..=r {
        for b in 0..=r {
            let nn = a * a + b * b;
            if nn <= nmax {
                sum += (-s * (nn as f64).ln()).exp();
            }
        }
    }
    sum + (PI / 4.0) * ((1.0 - s) * (nmax as f64).ln()).exp() / (s - 1.0)
}

/// `|zeta_k(2u) - pi^{4u-1} zeta_k(1-2u) Gamma(1-2u)/Gamma(2u)|`.
pub fn dedekind_fe_residual(u: C64) -> Result<f64> {
    let lhs = dedekind_zeta(2.0 * u)?;
    let rhs = (PI.ln() * (4.0 * u - 1.0)).exp()
        * dedekind_zeta(1.0 - 2.0 * u)?
        * gamma_c(1.0 - 2.0 * u)?
        * rgamma(2.0 * u);
    Ok((lhs - rhs).norm())
}

/// `(s-1) zeta_k(s)` by a symmetric difference around s = 1.
pub fn dedekind_residue(h: f64) -> Result<f64> {
    let a = dedekind_zeta(c(1.0 + h, 0.0))? * h;
    let b = dedekind_zeta(c(1.0 - h, 0.0))? * (-h);
    Ok(0.5 * (a + b).re)
}

fn canonical_range(nmax: i64) -> impl Iterator<Item = GaussianInt> {
    let r = (nmax as f64).sqrt() as i64 + 1;
    (1..=r).flat_map(move |a| {
        (0..=r).filter_map(move |b| {
            let z = GaussianInt::new(a, b);
            (z.norm() <= nmax).then_some(z)
        })
    })
}

/// `|sum_{n != 0, |n|^2 <= N} sigma_{ir}(n)^2 |n|^{-2s-2ir}
///   - 4 zeta_k(s+ir) zeta_k(s)^2 zeta_k(s-ir) / zeta_k(2s)|`.
pub fn sigma_series_check(s: C64, r: f64, truncation_norm: i64) -> Result<f64> {
    let ir = c(0.0, r);
    let mut lhs = C64::new(0.0, 0.0);
    for n in canonical_range(truncation_norm) {
        let f = factor(n)?;
        let sig = sigma_from_factorization(&f, ir);
        lhs += sig * sig * (-(s + ir) * (n.norm() as f64).ln()).exp();
    }
    // four associates per canonical n
    lhs *= 4.0;
    let z = dedekind_zeta(s)?;
    let rhs = 4.0 * dedekind_zeta(s + ir)? * z * z * dedekind_zeta(s - ir)? / dedekind_zeta(2.0 * s)?;
    Ok((lhs - rhs).norm())
}

fn harmonic(w: C64, m: i32) -> C64 {
    if m >= 0 {
        w.powu(m as u32)
    } else {
        w.conj().powu(m.unsigned_abs())
    }
}

fn frac_shift(xi: C64) -> (C64, bool) {
    let f = c(xi.re - xi.re.floor(), xi.im - xi.im.floor());
    (f, f.re == 0.0 && f.im == 0.0)
}

const LERCH_BOX: i64 = 9;

/// `zeta_k(s; m, xi)`, continued to all s by splitting the theta integral at 1.
pub fn lerch_zeta(spec: LerchSpec) -> Result<C64> {
    let LerchSpec { s, m, xi } = spec;
    let d = m.unsigned_abs() as f64;
    let (xi, lattice) = frac_shift(xi);
    if m == 0 && s == c(1.0, 0.0) {
        return Err(Error::Pole);
    }
    if m == 0 && lattice && s == c(0.0, 0.0) {
        return Ok(c(-1.0, 0.0));
    }
    let s1 = s + d / 2.0;
    let s2 = 1.0 - s + d / 2.0;
    let mut direct = C64::new(0.0, 0.0);
    let mut dual = C64::new(0.0, 0.0);
    for a in -LERCH_BOX..=LERCH_BOX {
        for b in -LERCH_BOX..=LERCH_BOX {
            let n = c(a as f64, b as f64);
            let w = n + xi;
            let x = PI * w.norm_sqr();
            if x > 0.0 {
                direct += harmonic(w, m) * (-s1 * x.ln()).exp() * upper_incomplete_gamma(s1, x)?;
            }
            if a != 0 || b != 0 {
                let x = PI * n.norm_sqr();
                dual += harmonic(n, m)
                    * e_bracket(n * xi.conj())
                    * (-s2 * x.ln()).exp()
                    * upper_incomplete_gamma(s2, x)?;
            }
        }
    }
    let mut lambda = direct + c(0.0, -1.0).powu(m.unsigned_abs()) * dual;
    if m == 0 {
        lambda += 1.0 / (s - 1.0);
        if lattice {
            lambda -= 1.0 / s;
        }
    }
    Ok((s1 * PI.ln()).exp() * lambda * rgamma(s1))
}

/// Smooth cutoff equal to 1 on [0, 1/2] and 0 from 1 on.
fn smooth_cutoff(t: f64) -> f64 {
    if t <= 0.5 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let x = 2.0 * (t - 0.5);
    let f = |y: f64| if y > 0.0 { (-1.0 / y).exp() } else { 0.0 };
    f(1.0 - x) / (f(1.0 - x) + f(x))
}

/// Right-hand side of the Lerch functional equation,
/// `(-i)^|m| pi^{2s-1} Gamma(1-s+|m|/2)/Gamma(s+|m|/2) sum (n/|n|)^m e[n conj(xi)] |n|^{2s-2}`,
/// with the series summed against a smooth cutoff at |n| = radius.
/// Meaningful for Re s < 0 and xi off the lattice.
pub fn lerch_fe_rhs(spec: LerchSpec, radius: f64) -> Result<C64> {
    let LerchSpec { s, m, xi } = spec;
    let d = m.unsigned_abs() as f64;
    let r = radius.ceil() as i64;
    let mut sum = C64::new(0.0, 0.0);
    for a in -r..=r {
        for b in -r..=r {
            if a == 0 && b == 0 {
                continue;
            }
            let n = c(a as f64, b as f64);
            let abs = n.norm();
            let w = smooth_cutoff(abs / radius);
            if w == 0.0 {
                continue;
            }
            let ang = harmonic(n / abs, m);
            sum += ang * e_bracket(n * xi.conj()) * ((2.0 * s - 2.0) * abs.ln()).exp() * w;
        }
    }
    let pref = c(0.0, -1.0).powu(m.unsigned_abs())
        * ((2.0 * s - 1.0) * PI.ln()).exp()
        * gamma_c(1.0 - s + d / 2.0)?
        * rgamma(s + d / 2.0);
    Ok(pref * sum)
}

/// Legendre symbol `(x / pi)` for an odd Gaussian prime pi by Euler's criterion.
fn legendre(x: GaussianInt, p: GaussianInt) -> i32 {
    let e = pow_mod(x, ((p.norm() - 1) / 2) as u64, p);
    if e.is_zero() {
        0
    } else if e.congruent(GaussianInt::ONE, p) {
        1
    } else {
        -1
    }
}

fn chi_at_prime(d: GaussianInt, p: GaussianInt) -> i32 {
    let one_plus_i = GaussianInt::new(1, 1);
    if p != one_plus_i {
        return legendre(d, p);
    }
    let four = GaussianInt::new(4, 0);
    let is_square_mod = |q: GaussianInt| {
        residue_system(q)
            .map(|rs| rs.iter().any(|&x| (x * x).congruent(d, q)))
            .unwrap_or(false)
    };
    if one_plus_i.divides(d) || !is_square_mod(four) {
        return 0;
    }
    if is_square_mod(four * one_plus_i) {
        1
    } else {
        -1
    }
}

fn chi_from_factorization(d: GaussianInt, f: &Factorization) -> i32 {
    let mut v = 1;
    for &(p, e) in &f.factors {
        let x = chi_at_prime(d, p);
        if x == 0 {
            return 0;
        }
        if e % 2 == 1 {
            v *= x;
        }
    }
    v
}

/// Quadratic character attached to D, a function of the ideal (n).
pub fn chi_d(d: GaussianInt, n: GaussianInt) -> Result<i32> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("D must be nonzero".into()));
    }
    let f = factor(n)?;
    Ok(chi_from_factorization(d, &f))
}

/// `T_l^{(D)}(s) = 1/4 sum_{d | l} chi_D(d) mu(d) |d|^{-2s} sigma_{1-2s}(l/d)`.
#[allow(non_snake_case)]
pub fn T_l_D(s: C64, l: GaussianInt, d: GaussianInt) -> Result<C64> {
    if l.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let fl = factor(l)?;
    let mut total = C64::new(0.0, 0.0);
    for dv in fl.canonical_divisors() {
        let fd = factor(dv)?;
        if !fd.is_squarefree() {
            continue;
        }
        let mu = if fd.factors.len() % 2 == 0 { 1.0 } else { -1.0 };
        let chi = chi_from_factorization(d, &fd) as f64;
        if chi == 0.0 {
            continue;
        }
        let rest = l.div_exact(dv).expect("divisor");
        let sig = gint::sigma_alpha(rest, 1.0 - 2.0 * s)?;
        total += chi * mu * (-s * (dv.norm() as f64).ln()).exp() * sig;
    }
    Ok(total)
}

/// `L(s, chi_D) = 1/4 sum_{n != 0} chi_D(n) |n|^{-2s}` truncated at norm <= qmax_norm.
pub fn l_chi(s: C64, d: GaussianInt, qmax_norm: i64) -> Result<C64> {
    let mut sum = C64::new(0.0, 0.0);
    for n in canonical_range(qmax_norm) {
        let x = chi_from_factorization(d, &factor(n)?);
        if x != 0 {
            sum += x as f64 * (-s * (n.norm() as f64).ln()).exp();
        }
    }
    Ok(sum)
}

/// Counts `#{x mod pi^e : x^2 = n mod pi^e}` for an odd prime pi.
fn odd_prime_power_roots(n: GaussianInt, p: GaussianInt, e: u32) -> u64 {
    let np = p.norm() as u64;
    if n.is_zero() {
        return np.pow(e / 2);
    }
    let mut v = 0;
    let mut rest = n;
    while let Some(q) = rest.div_exact(p) {
        rest = q;
        v += 1;
    }
    if e <= v {
        return np.pow(e / 2);
    }
    if v % 2 == 1 {
        return 0;
    }
    let lift = (1 + legendre(rest, p)) as u64;
    lift * np.pow(v / 2)
}

/// Multiplicative evaluation of the congruence count `rho_q(n)`:
/// the (1+i)-part by exhaustion, odd prime powers in closed form.
struct RhoTable {
    n: GaussianInt,
    two_part: HashMap<u32, u64>,
}

impl RhoTable {
    fn new(n: GaussianInt) -> Self {
        Self { n, two_part: HashMap::new() }
    }

    fn rho(&mut self, f: &Factorization) -> Result<u64> {
        let mut count = 1u64;
        for &(p, e) in &f.factors {
            if p == GaussianInt::new(1, 1) {
                let k = e;
                let n = self.n;
                let v = match self.two_part.get(&k) {
                    Some(&v) => v,
                    None => {
                        let v = congruence::rho(GaussianInt::new(1, 1).pow(k), n)?.count;
                        self.two_part.insert(k, v);
                        v
                    }
                };
                count *= v;
            } else {
                count *= odd_prime_power_roots(self.n, p, e);
            }
            if count == 0 {
                return Ok(0);
            }
        }
        let base = match self.two_part.get(&0) {
            Some(&v) => v,
            None => {
                let v = congruence::rho(GaussianInt::ONE, self.n)?.count;
                self.two_part.insert(0, v);
                v
            }
        };
        // an odd q still carries the factor rho_1(n) from the modulus 4
        if f.factors.iter().all(|&(p, _)| p != GaussianInt::new(1, 1)) {
            count *= base;
        }
        Ok(count)
    }
}

/// `rho_q(n)` through the multiplicative decomposition.
pub fn rho_multiplicative(q: GaussianInt, n: GaussianInt) -> Result<u64> {
    RhoTable::new(n).rho(&factor(q)?)
}

/// `L_k(s; n) = zeta_k(2s)/zeta_k(s) sum_{q != 0} rho_q(n) |q|^{-2s}`, q truncated at norm <= qmax_norm.
#[allow(non_snake_case)]
pub fn script_L(s: C64, n: GaussianInt, qmax_norm: i64) -> Result<C64> {
    let mut table = RhoTable::new(n);
    let mut sum = C64::new(0.0, 0.0);
    for q in canonical_range(qmax_norm) {
        let r = table.rho(&factor(q)?)?;
        if r != 0 {
            sum += r as f64 * (-s * (q.norm() as f64).ln()).exp();
        }
    }
    Ok(dedekind_zeta(2.0 * s)? / dedekind_zeta(s)? * 4.0 * sum)
}

pub const DECOMPOSITION_QMAX: i64 = 50_000;

/// `|L_k(s; n) - 4 T_1 L(s, chi_n)|` for n odd, squarefree, n = 1 mod 4.
pub fn decomposition_check(s: C64, n: GaussianInt) -> Result<f64> {
    decomposition_check_with(s, n, DECOMPOSITION_QMAX)
}

pub fn decomposition_check_with(s: C64, n: GaussianInt, qmax_norm: i64) -> Result<f64> {
    let one_plus_i = GaussianInt::new(1, 1);
    if n.is_zero()
        || one_plus_i.divides(n)
        || !factor(n)?.is_squarefree()
        || !n.congruent(GaussianInt::ONE, GaussianInt::new(4, 0))
    {
        return Err(Error::DExtraction);
    }
    let lhs = script_L(s, n, qmax_norm)?;
    let t = T_l_D(s, GaussianInt::ONE, n)?;
    let rhs = 4.0 * t * l_chi(s, n, qmax_norm)?;
    Ok((lhs - rhs).norm())
}
