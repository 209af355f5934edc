//! Weight functions and integral transforms of the first-moment machinery:
//! the smoothed window omega_T, the test function h(K,N,T,X;r), the
//! function psi with its Mellin transform h*, and the integrals I(n,tau,s).

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::gint::GaussianInt;
use crate::quad;
use crate::specfun::bessel::{bessel_j, bessel_k_imag, scaled_k_imag};
use crate::specfun::gamma::{ln_gamma, rgamma};
use crate::specfun::hyp2f1::hyp2f1;
use crate::{c, Error, Result, C64};

/// Parameters of `h(K,N,T,X;r)` and of the window omega_T.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightSpec {
    /// centre K
    pub k: f64,
    /// vanishing order N
    pub n: u32,
    /// dyadic scale T
    pub t: f64,
    /// Gaussian width G
    pub g: f64,
    /// oscillation scale X
    pub x: f64,
}

/// Desk-scale box; outside it cosh(pi r) growth defeats double precision.
pub const MAX_K: f64 = 20.0;
pub const MAX_N: u32 = 3;
pub const MAX_M: u32 = 20;
/// Half-width of the r-range in units of G.
pub const R_WIDTHS: f64 = 8.0;

impl WeightSpec {
    pub fn new(k: f64, n: u32, t: f64, g: f64, x: f64) -> Result<Self> {
        let w = Self { k, n, t, g, x };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.t > 0.0 && self.g > 0.0 && self.x >= 1.0) || self.n < 1 {
            return Err(Error::InvalidArgument(
                "need K, T, G > 0, X >= 1 and N >= 1".into(),
            ));
        }
        if self.k > MAX_K || self.n > MAX_N {
            return Err(Error::WeightTooWide(format!(
                "K = {} and N = {} must lie within K <= {MAX_K}, N <= {MAX_N}",
                self.k, self.n
            )));
        }
        Ok(())
    }

    /// Largest |r| carrying weight above the Gaussian tail.
    pub fn r_max(&self) -> f64 {
        self.k + R_WIDTHS * self.g
    }
}

/// `omega_T(r) = (G sqrt(pi))^{-1} int_T^{2T} exp(-(r-K)^2/G^2) dK`.
pub fn omega_t(r: f64, t: f64, g: f64) -> f64 {
    let a = (t - r) / g;
    let b = (2.0 * t - r) / g;
    // pick the erfc branch that avoids cancellation
    if a >= 0.0 {
        0.5 * (libm::erfc(a) - libm::erfc(b))
    } else if b <= 0.0 {
        0.5 * (libm::erfc(-b) - libm::erfc(-a))
    } else {
        1.0 - 0.5 * (libm::erfc(-a) + libm::erfc(b))
    }
}

/// `q_N(r) = prod_{k=1}^N (r^2+(k-1/2)^2)(r^2+k^2) / (r^2+100N^2)^{2N}`.
pub fn q_n(r: C64, n: u32) -> C64 {
    let r2 = r * r;
    let big = r2 + 100.0 * (n * n) as f64;
    let mut v = C64::new(1.0, 0.0);
    for k in 1..=n {
        let k = k as f64;
        v *= (r2 + (k - 0.5) * (k - 0.5)) * (r2 + k * k) / (big * big);
    }
    v
}

/// `h(K,N,T,X;r) = X^{ir} q_N(r) e^{-(r-K)^2/G^2} + X^{-ir} q_N(r) e^{-(r+K)^2/G^2}`.
pub fn h_weight(r: C64, w: &WeightSpec) -> C64 {
    let lx = w.x.ln();
    let i = c(0.0, 1.0);
    let g2 = w.g * w.g;
    let a = (i * r * lx - (r - w.k) * (r - w.k) / g2).exp();
    let b = (-i * r * lx - (r + w.k) * (r + w.k) / g2).exp();
    q_n(r, w.n) * (a + b)
}

fn h_real(r: f64, w: &WeightSpec) -> C64 {
    h_weight(c(r, 0.0), w)
}

/// `int exp(-p^2 x^2 + q x) dx = sqrt(pi)/p exp(q^2/(4p^2))`, Re p^2 > 0.
pub fn gaussian_integral(p: C64, q: C64) -> Result<C64> {
    let p2 = p * p;
    if p2.re <= 0.0 {
        return Err(Error::InvalidArgument("need Re(p^2) > 0".into()));
    }
    // principal branch of p with Re p > 0 is the one matching the integral
    let p = p2.sqrt();
    Ok(PI.sqrt() / p * (q * q / (4.0 * p2)).exp())
}

/// The polynomial with `int x^n exp(-x^2 + qx) dx = P_n(q) exp(q^2/4)`,
/// from `P_{n+1} = (q/2) P_n + (n/2) P_{n-1}`, `P_0 = sqrt(pi)`.
pub fn p_poly(n: u32, q: C64) -> C64 {
    let mut prev = C64::new(0.0, 0.0);
    let mut cur = C64::new(PI.sqrt(), 0.0);
    for k in 0..n {
        let next = q / 2.0 * cur + (k as f64 / 2.0) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn gaussian_moment(n: u32, q: C64) -> C64 {
    p_poly(n, q) * (q * q / 4.0).exp()
}

/// Closed forms of the two Gaussian integrals next to their quadratures.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GaussianCheck {
    pub closed_first: C64,
    pub quad_first: C64,
    pub closed_moment: C64,
    pub quad_moment: C64,
}

impl GaussianCheck {
    pub fn residual(&self) -> f64 {
        let a = (self.closed_first - self.quad_first).norm() / self.closed_first.norm().max(1.0);
        let b = (self.closed_moment - self.quad_moment).norm() / self.closed_moment.norm().max(1.0);
        a.max(b)
    }
}

fn gaussian_quadrature<F: Fn(f64) -> C64>(f: F, centre: f64, width: f64, freq: f64) -> C64 {
    let half = 12.0 * width;
    let panels = ((2.0 * half * (1.0 + freq) / 2.0).ceil() as usize).max(8);
    quad::gl_panels_c(f, centre - half, centre + half, panels)
}

pub fn gaussian_integral_oracle(p: C64, q: C64, n: u32) -> Result<GaussianCheck> {
    let closed_first = gaussian_integral(p, q)?;
    let p2 = p * p;
    let width = 1.0 / p2.re.sqrt();
    // |integrand| peaks at Re(q)/(2 Re p^2)
    let centre = q.re / (2.0 * p2.re);
    let freq = p2.im.abs() * (centre.abs() + 12.0 * width) + q.im.abs();
    let quad_first = gaussian_quadrature(|x| (-p2 * x * x + q * x).exp(), centre, width, freq);
    let closed_moment = gaussian_moment(n, q);
    let centre = q.re / 2.0 + (n as f64).sqrt();
    let quad_moment = gaussian_quadrature(
        |x| (-(x * x) + q * x).exp() * x.powi(n as i32),
        centre,
        1.0 + (n as f64).sqrt() / 3.0,
        q.im.abs(),
    );
    Ok(GaussianCheck { closed_first, quad_first, closed_moment, quad_moment })
}

/// GL nodes on [0, R] for even integrands in r, with panels narrow enough
/// for an oscillation of the given frequency.
fn half_line_nodes(rmax: f64, freq: f64) -> Vec<(f64, f64)> {
    let width = (0.5f64).min(12.0 / freq.max(1e-9));
    quad::gl_nodes(0.0, rmax, ((rmax / width).ceil() as usize).max(4))
}

fn full_line_nodes(rmax: f64, freq: f64) -> Vec<(f64, f64)> {
    let width = (0.5f64).min(12.0 / freq.max(1e-9));
    quad::gl_nodes(-rmax, rmax, ((2.0 * rmax / width).ceil() as usize).max(8))
}

fn check_box(m: u32, tau: f64, w: &WeightSpec) -> Result<()> {
    w.validate()?;
    if m > MAX_M {
        return Err(Error::WeightTooWide(format!("m = {m} exceeds {MAX_M}")));
    }
    if !(tau > 0.0 && tau < FRAC_PI_2) {
        return Err(Error::InvalidArgument("tau must lie in (0, pi/2)".into()));
    }
    Ok(())
}

/// `psi(m,tau;z) = 1/2 int r^2 h(r) cosh(pi r) J_2m(2z sin tau) K_2ir(2z cos tau) dr`.
pub fn psi(m: u32, tau: f64, z: f64, w: &WeightSpec) -> Result<C64> {
    check_box(m, tau, w)?;
    if z <= 0.0 {
        return Err(Error::InvalidArgument("z must be positive".into()));
    }
    let x = 2.0 * z * tau.cos();
    let freq = w.x.ln() + 2.0 * (x / 2.0).ln().abs() + 2.0 * (2.0 * w.r_max() + 2.0).ln();
    let mut acc = C64::new(0.0, 0.0);
    // even integrand: 1/2 int_R = int_0^inf
    for (r, wt) in half_line_nodes(w.r_max(), freq) {
        acc += wt * r * r * h_real(r, w) * scaled_k_imag(r, x)?;
    }
    Ok(acc * bessel_j(2 * m as usize, 2.0 * z * tau.sin()))
}

/// Closed form of `int_0^inf J_2m(2z sin tau) K_2ir(2z cos tau) z^{s-1} dz`:
/// `sin^{2m} tau / (4 cos^{2m+s} tau) Gamma(m+s/2+ir) Gamma(m+s/2-ir) / Gamma(1+2m)
///  F(m+s/2+ir, m+s/2-ir; 1+2m; -tan^2 tau)`, Re s > -2m.
pub fn g_mellin(m: u32, r: f64, tau: f64, s: C64) -> Result<C64> {
    let mf = m as f64;
    let a = mf + s / 2.0 + c(0.0, r);
    let b = mf + s / 2.0 - c(0.0, r);
    let (st, ct) = (tau.sin(), tau.cos());
    let pref = st.powi(2 * m as i32) / 4.0 * (-(2.0 * mf + s) * ct.ln()).exp();
    let gg = (ln_gamma(a)? + ln_gamma(b)?).exp() * rgamma(c(1.0 + 2.0 * mf, 0.0));
    Ok(pref * gg * hyp2f1(a, b, c(1.0 + 2.0 * mf, 0.0), c(-(tau.tan().powi(2)), 0.0))?)
}

/// The same Mellin transform by direct quadrature in z.
pub fn g_mellin_quadrature(m: u32, r: f64, tau: f64, s: C64) -> Result<C64> {
    let integrand = |z: f64| -> Result<C64> {
        let j = bessel_j(2 * m as usize, 2.0 * z * tau.sin());
        let k = bessel_k_imag(r, 2.0 * z * tau.cos())?;
        Ok(j * k * ((s - 1.0) * z.ln()).exp())
    };
    mellin_in_z(integrand, tau)
}

/// `int_0^inf f(z) dz` for f decaying like exp(-2 z cos tau); the part below
/// z = 1 goes through z = e^t to absorb small-z power behaviour.
fn mellin_in_z<F>(f: F, tau: f64) -> Result<C64>
where
    F: Fn(f64) -> Result<C64> + Sync,
{
    let zmax = 20.0 / tau.cos() + 2.0;
    let mut nodes: Vec<(f64, f64)> = quad::gl_nodes(-30.0, 0.0, 30)
        .into_iter()
        .map(|(t, wt)| (t.exp(), wt * t.exp()))
        .collect();
    let panels = ((zmax - 1.0) * (1.0 + 2.0 * tau.sin()) / 1.5).ceil() as usize;
    nodes.extend(quad::gl_nodes(1.0, zmax, panels.max(4)));
    let parts: Result<Vec<C64>> = nodes.par_iter().map(|&(z, wt)| Ok(f(z)? * wt)).collect();
    Ok(parts?.iter().sum())
}

/// `h*(m,tau;s)` through the cosh form,
/// `sin^{2m} tau cos(pi s/2) / (8 cos^{2m} tau) int r^2 h cosh(pi r) Gamma Gamma / Gamma(1+2m) F dr`.
pub fn h_star_def2(m: u32, tau: f64, s: C64, w: &WeightSpec) -> Result<C64> {
    Ok(psi_mellin_kernel(m, tau, s, w)? * (PI * s / 2.0).cos() * (s * tau.cos().ln()).exp())
}

/// `1/2 int r^2 h cosh(pi r) g-hat(m,r,tau;s) dr`, the Mellin transform of psi,
/// equal to `h*(m,tau;s) / (cos(pi s/2) cos^s tau)`.
pub fn psi_mellin_kernel(m: u32, tau: f64, s: C64, w: &WeightSpec) -> Result<C64> {
    check_box(m, tau, w)?;
    let mf = m as f64;
    if mf + s.re / 2.0 <= 0.0 {
        return Err(Error::Regime("cosh form needs Re s > -2m".into()));
    }
    let nodes = half_line_nodes(w.r_max(), w.x.ln() + s.im.abs());
    let parts: Result<Vec<C64>> = nodes
        .par_iter()
        .map(|&(r, wt)| {
            let a = mf + s / 2.0 + c(0.0, r);
            let b = mf + s / 2.0 - c(0.0, r);
            // cosh(pi r) Gamma(a) Gamma(b) in the log domain
            let lg = ln_gamma(a)? + ln_gamma(b)? + PI * r;
            let ch = 0.5 * (1.0 + (-2.0 * PI * r).exp());
            let f = hyp2f1(a, b, c(1.0 + 2.0 * mf, 0.0), c(-(tau.tan().powi(2)), 0.0))?;
            Ok(wt * r * r * h_real(r, w) * lg.exp() * ch * f)
        })
        .collect();
    let (st, ct) = (tau.sin(), tau.cos());
    let pref = st.powi(2 * m as i32) / 4.0 * (-(2.0 * mf + s) * ct.ln()).exp()
        * rgamma(c(1.0 + 2.0 * mf, 0.0));
    // 1/2 int_R of an even function = int_0^inf
    Ok(pref * parts?.iter().sum::<C64>())
}

/// `h*(m,tau;s) = 2 pi i (-1)^m sin^{2m} tau / (16 cos^{2m} tau)
///  int r^2 h coth(pi r) Gamma(m+s/2+ir) / (Gamma(1-m-s/2+ir) Gamma(1+2m)) F dr`.
pub fn h_star(m: u32, tau: f64, s: C64, w: &WeightSpec) -> Result<C64> {
    check_box(m, tau, w)?;
    let mf = m as f64;
    let nodes = full_line_nodes(w.r_max(), w.x.ln() + s.im.abs());
    let parts: Result<Vec<C64>> = nodes
        .par_iter()
        .map(|&(r, wt)| {
            let a = mf + s / 2.0 + c(0.0, r);
            let b = mf + s / 2.0 - c(0.0, r);
            let ratio = (ln_gamma(a)? - ln_gamma(1.0 - mf - s / 2.0 + c(0.0, r))?).exp();
            let f = hyp2f1(a, b, c(1.0 + 2.0 * mf, 0.0), c(-(tau.tan().powi(2)), 0.0))?;
            let coth = 1.0 / (PI * r).tanh();
            Ok(wt * r * r * h_real(r, w) * coth * ratio * f)
        })
        .collect();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let pref = c(0.0, 2.0 * PI) * sign * tau.tan().powi(2 * m as i32) / 16.0
        * rgamma(c(1.0 + 2.0 * mf, 0.0));
    Ok(pref * parts?.iter().sum::<C64>())
}

/// `h*(s) = int r^2 h(r) coth(pi r) Gamma(s+ir)/Gamma(1-s+ir) dr`, the transform
/// attached to the Kuznetsov kernel.
pub fn h_star_simple(s: C64, w: &WeightSpec) -> Result<C64> {
    w.validate()?;
    let nodes = full_line_nodes(w.r_max(), w.x.ln() + s.im.abs());
    let mut acc = C64::new(0.0, 0.0);
    for (r, wt) in nodes {
        let ratio = (ln_gamma(s + c(0.0, r))? - ln_gamma(1.0 - s + c(0.0, r))?).exp();
        acc += wt * r * r * h_real(r, w) / (PI * r).tanh() * ratio;
    }
    Ok(acc)
}

/// `psi` rebuilt by Mellin inversion along Re s = a, with a in (-2m, 0).
pub fn psi_by_mellin_inversion(m: u32, tau: f64, z: f64, a: f64, w: &WeightSpec) -> Result<C64> {
    check_box(m, tau, w)?;
    if !(a < 0.0 && a > -2.0 * m as f64) {
        return Err(Error::Regime("inversion line needs -2m < a < 0".into()));
    }
    // the kernel falls below 1e-13 of its peak by |t| = 45
    let tmax = 45.0;
    let nodes = quad::gl_nodes(-tmax, tmax, 30);
    let parts: Result<Vec<C64>> = nodes
        .par_iter()
        .map(|&(t, wt)| {
            let s = c(a, t);
            // h*/(cos(pi s/2) (z cos tau)^s) = kernel * z^{-s}
            Ok(wt * psi_mellin_kernel(m, tau, s, w)? * (-s * z.ln()).exp())
        })
        .collect();
    Ok(parts?.iter().sum::<C64>() / (2.0 * PI))
}

/// `|int psi(m,tau;z) z^{w-1} dz - 1/2 int r^2 h cosh g-hat dr|`, relative to the latter.
pub fn psi_mellin_check(m: u32, tau: f64, s: C64, w: &WeightSpec) -> Result<f64> {
    let direct = mellin_in_z(|z| Ok(psi(m, tau, z, w)? * ((s - 1.0) * z.ln()).exp()), tau)?;
    let closed = psi_mellin_kernel(m, tau, s, w)?;
    Ok((direct - closed).norm() / closed.norm())
}

/// `c_+-`, `x_+-` of a nonzero Gaussian integer at angle tau.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XPlusMinus {
    pub n: GaussianInt,
    pub tau: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub x_plus: f64,
    pub x_minus: f64,
}

pub fn x_pm(n: GaussianInt, tau: f64) -> Result<XPlusMinus> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let a = n.abs();
    let cv = n.to_c64().arg().cos();
    let (st, ct) = (tau.sin(), tau.cos());
    let base = 1.0 + 4.0 * st * st / (a * a);
    let cp = (base + 4.0 * st * cv / a).max(0.0).sqrt();
    let cm = (base - 4.0 * st * cv / a).max(0.0).sqrt();
    // (|n| -+ 2 sin tau)^2 +- 4|n| sin tau (1 -+ cos theta) keeps x_- accurate near |n| = 2 sin tau
    let half = n.to_c64().arg() / 2.0;
    let num = |sgn: f64| {
        if sgn > 0.0 {
            (a - 2.0 * st).powi(2) + 8.0 * a * st * half.cos().powi(2)
        } else {
            (a - 2.0 * st).powi(2) + 8.0 * a * st * half.sin().powi(2)
        }
    };
    let d = (2.0 * ct).powi(2);
    Ok(XPlusMinus {
        n,
        tau,
        c_plus: cp,
        c_minus: cm,
        x_plus: num(1.0) / d,
        x_minus: num(-1.0) / d,
    })
}

/// Which closed form of I(n, tau, s) to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IRep {
    /// `F(1-s+ir, 1-s-ir; 1; -x)`
    One,
    /// z -> 1/z connection, `F(1-s+ir, 1-s+ir; 1+2ir; -1/x)`
    Two,
}

/// Largest x_+- accepted by the first representation.
pub const REP1_X_MAX: f64 = 50.0;

pub fn i_weight(n: GaussianInt, tau: f64, s: C64, w: &WeightSpec, rep: IRep) -> Result<C64> {
    check_box(0, tau, w)?;
    if s.re >= 1.0 {
        return Err(Error::Regime("I(n, tau, s) needs Re s < 1".into()));
    }
    let xs = x_pm(n, tau)?;
    let ct = tau.cos();
    let mut total = C64::new(0.0, 0.0);
    for x in [xs.x_plus, xs.x_minus] {
        total += match rep {
            IRep::One => {
                if x > REP1_X_MAX {
                    return Err(Error::Regime(format!("x = {x} too large for the first form")));
                }
                i_rep1_branch(x, ct, s, w)?
            }
            IRep::Two => {
                if !(x > 0.0) {
                    return Err(Error::Regime("second form needs x > 0".into()));
                }
                i_rep2_branch(x, ct, s, w)?
            }
        };
    }
    Ok(total)
}

// 1/4 int r^2 h cosh Gamma(1-s-ir) Gamma(1-s+ir) / (4 cos^{2-2s}) F(..; -x) dr
fn i_rep1_branch(x: f64, ct: f64, s: C64, w: &WeightSpec) -> Result<C64> {
    let nodes = half_line_nodes(w.r_max(), w.x.ln() + s.im.abs());
    let one = c(1.0, 0.0);
    let parts: Result<Vec<C64>> = nodes
        .par_iter()
        .map(|&(r, wt)| {
            let a = one - s + c(0.0, r);
            let b = one - s - c(0.0, r);
            let lg = ln_gamma(a)? + ln_gamma(b)? + PI * r;
            let ch = 0.5 * (1.0 + (-2.0 * PI * r).exp());
            let f = hyp2f1(a, b, one, c(-x, 0.0))?;
            Ok(wt * r * r * h_real(r, w) * lg.exp() * ch * f)
        })
        .collect();
    // even in r: int_R = 2 int_0^inf
    let pref = 2.0 / 16.0 * (-(2.0 - 2.0 * s) * ct.ln()).exp();
    Ok(pref * parts?.iter().sum::<C64>())
}

// 1/(8 (x cos^2)^{1-s}) int r^2 h cosh x^{-ir} Gamma(1-s+ir) Gamma(-2ir) / Gamma(s-ir) F(..; -1/x) dr
fn i_rep2_branch(x: f64, ct: f64, s: C64, w: &WeightSpec) -> Result<C64> {
    let lx = x.ln();
    let nodes = full_line_nodes(w.r_max(), w.x.ln() + lx.abs() + s.im.abs());
    let one = c(1.0, 0.0);
    let parts: Result<Vec<C64>> = nodes
        .par_iter()
        .map(|&(r, wt)| {
            let ir = c(0.0, r);
            let a = one - s + ir;
            // r^2 Gamma(-2ir) = (ir/2) Gamma(1-2ir)
            let lg = ln_gamma(a)? + ln_gamma(one - 2.0 * ir)? - ln_gamma(s - ir)? + PI * r.abs() - ir * lx;
            let ch = 0.5 * (1.0 + (-2.0 * PI * r.abs()).exp());
            let f = hyp2f1(a, a, one + 2.0 * ir, c(-1.0 / x, 0.0))?;
            Ok(wt * ir / 2.0 * h_real(r, w) * lg.exp() * ch * f)
        })
        .collect();
    let pref = (-(one - s) * (x * ct * ct).ln()).exp() / 8.0;
    Ok(pref * parts?.iter().sum::<C64>())
}

/// `I(0,tau,s) = 1/(16 cos^{2-2s} tau) int r^2 h cosh Gamma(1-s+ir) Gamma(1-s-ir) F(..; -tan^2 tau) dr`.
pub fn i_zero(tau: f64, s: C64, w: &WeightSpec) -> Result<C64> {
    check_box(0, tau, w)?;
    // one first-form branch at x = tan^2 tau
    i_rep1_branch(tau.tan().powi(2), tau.cos(), s, w)
}

/// `I(0,tau,s) = -h*(0,tau;2-2s) / (2 cos^{2-2s} tau cos(pi s))` with h* in its coth form.
pub fn i_zero_via_h_star(tau: f64, s: C64, w: &WeightSpec) -> Result<C64> {
    let hs = h_star(0, tau, 2.0 - 2.0 * s, w)?;
    Ok(-hs / (2.0 * ((2.0 - 2.0 * s) * tau.cos().ln()).exp() * (PI * s).cos()))
}

/// Least-squares slope of log|I(n)| against log|n| for real n in the given range.
pub fn i_decay_slope(ns: &[i64], tau: f64, s: C64, w: &WeightSpec) -> Result<f64> {
    let pts: Result<Vec<(f64, f64)>> = ns
        .iter()
        .map(|&n| {
            let v = i_weight(GaussianInt::new(n, 0), tau, s, w, IRep::Two)?;
            Ok(((n as f64).ln(), v.norm().ln()))
        })
        .collect();
    Ok(fit_slope(&pts?))
}

pub(crate) fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec() -> WeightSpec {
        WeightSpec::new(5.0, 2, 10.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn omega_plateau_edge_and_tail() {
        let t: f64 = 100.0;
        let g = t.powf(0.1);
        assert!((omega_t(1.5 * t, t, g) - 1.0).abs() < 1e-6);
        assert!(omega_t(4.0 * t, t, g) < 1e-8);
        assert!((omega_t(t, t, g) - 0.5).abs() < 1e-6);
        assert!((omega_t(2.0 * t, t, g) - 0.5).abs() < 1e-6);
        assert!(omega_t(-t, t, g) < 1e-8);
    }

    #[test]
    fn omega_matches_quadrature() {
        for &(r, t, g) in &[(12.0, 10.0, 1.3), (9.5, 10.0, 2.0), (25.0, 10.0, 3.0)] {
            let q = quad::gl_panels(|k| (-(r - k) * (r - k) / (g * g)).exp(), t, 2.0 * t, 64)
                / (g * PI.sqrt());
            assert!((omega_t(r, t, g) - q).abs() < 1e-13);
        }
    }

    #[test]
    fn q_n_zero_set_and_limit() {
        for n in 1..=3u32 {
            for k in 1..=n {
                for z in [c(0.0, k as f64), c(0.0, k as f64 - 0.5)] {
                    assert!(q_n(z, n).norm() < 1e-12);
                    assert!(q_n(-z, n).norm() < 1e-12);
                }
            }
            // q_N = 1 + O(r^-2)
            let a = (q_n(c(1e3, 0.0), n) - 1.0).norm();
            let b = (q_n(c(1e4, 0.0), n) - 1.0).norm();
            assert!(b < a / 50.0 && b < 1e-2);
        }
        // at r = 100 the 100 N^2 shift still matters
        assert!((q_n(c(100.0, 0.0), 2).re - 0.855).abs() < 1e-3);
    }

    #[test]
    fn weight_zeros_and_value_at_centre() {
        let w = WeightSpec::new(4.0, 3, 10.0, 1.5, 7.0).unwrap();
        for k in 1..=3 {
            assert!(h_weight(c(0.0, k as f64), &w).norm() < 1e-12);
            assert!(h_weight(c(0.0, -(k as f64) + 0.5), &w).norm() < 1e-12);
        }
        let w1 = WeightSpec { x: 1.0, ..w };
        let v = h_weight(c(w1.k, 0.0), &w1);
        let expect = q_n(c(w1.k, 0.0), w1.n) * (1.0 + (-4.0 * w1.k * w1.k / (w1.g * w1.g)).exp());
        assert!((v - expect).norm() < 1e-15);
        assert!(WeightSpec::new(25.0, 2, 1.0, 1.0, 2.0).is_err());
    }

    proptest! {
        #[test]
        fn weight_is_even(r in -15.0f64..15.0, x in 1.0f64..50.0) {
            let w = WeightSpec::new(6.0, 2, 10.0, 1.2, x).unwrap();
            let d = (h_weight(c(r, 0.0), &w) - h_weight(c(-r, 0.0), &w)).norm();
            prop_assert!(d < 1e-12);
        }
    }

    #[test]
    fn gaussian_integrals() {
        assert!((gaussian_integral(c(1.0, 0.0), c(0.0, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-15);
        let v = gaussian_integral(c(1.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((v.re - PI.sqrt() * 1f64.exp()).abs() < 1e-14);
        assert_eq!(gaussian_moment(1, c(0.0, 0.0)), c(0.0, 0.0));
        assert!(gaussian_integral(c(1.0, 1.0), c(0.0, 0.0)).is_err());
        let panel = [
            (c(1.0, 0.0), c(0.0, 0.0), 0),
            (c(1.0, 0.0), c(2.0, 0.0), 1),
            (c(0.8, 0.3), c(1.0, -2.0), 2),
            (c(1.5, -0.4), c(-0.5, 3.0), 3),
            (c(0.6, 0.1), c(0.0, 4.0), 4),
        ];
        for (p, q, n) in panel {
            let chk = gaussian_integral_oracle(p, q, n).unwrap();
            assert!(chk.residual() < 1e-10, "{p} {q} {n}: {chk:?}");
        }
    }

    #[test]
    fn p_poly_low_degrees() {
        let q = c(0.7, -1.1);
        let sp = PI.sqrt();
        assert!((p_poly(1, q) - sp * q / 2.0).norm() < 1e-15);
        assert!((p_poly(2, q) - sp * (q * q / 4.0 + 0.5)).norm() < 1e-15);
        assert!((p_poly(3, q) - sp * (q * q * q / 8.0 + 3.0 * q / 4.0)).norm() < 1e-14);
    }

    #[test]
    fn x_pm_forms() {
        let tau = 0.7;
        let n = GaussianInt::new(5, 0);
        let x = x_pm(n, tau).unwrap();
        let d = (2.0 * tau.cos()).powi(2);
        assert!((x.x_plus - (5.0 + 2.0 * tau.sin()).powi(2) / d).abs() < 1e-12);
        assert!((x.x_minus - (5.0 - 2.0 * tau.sin()).powi(2) / d).abs() < 1e-12);
        assert!((x.x_plus - (5.0 * x.c_plus).powi(2) / d).abs() < 1e-12);
        // n = 2 on the real axis: x_- = tan^2(pi/4 - tau/2)
        for eps in [1e-2, 1e-3, 1e-4] {
            let tau = FRAC_PI_2 - eps;
            let x = x_pm(GaussianInt::new(2, 0), tau).unwrap();
            assert!((x.x_minus / (0.25 * eps * eps) - 1.0).abs() < eps);
        }
        assert!(x_pm(GaussianInt::ZERO, 0.3).is_err());
    }

    proptest! {
        #[test]
        fn x_pm_lower_bound(a in -12i64..12, b in -12i64..12, tau in 0.01f64..1.56) {
            prop_assume!(a != 0 || b != 0);
            let n = GaussianInt::new(a, b);
            let x = x_pm(n, tau).unwrap();
            let lb = ((n.abs() - 2.0 * tau.sin()) / (2.0 * tau.cos())).powi(2);
            prop_assert!(x.x_plus >= lb * (1.0 - 1e-12) - 1e-12);
            prop_assert!(x.x_minus >= lb * (1.0 - 1e-12) - 1e-12);
        }
    }

    #[test]
    fn g_mellin_closed_form_matches_quadrature() {
        for &(m, r, tau, s) in &[
            (1u32, 0.7, PI / 4.0, c(1.2, 0.0)),
            (0, 1.3, 0.5, c(0.8, 0.3)),
            (2, 2.0, 1.1, c(1.5, -0.5)),
        ] {
            let a = g_mellin(m, r, tau, s).unwrap();
            let b = g_mellin_quadrature(m, r, tau, s).unwrap();
            assert!((a - b).norm() < 1e-8 * a.norm().max(1e-3), "m={m}: {a} {b}");
        }
    }

    #[test]
    fn h_star_forms_agree() {
        let w = spec();
        for &(m, s) in &[(1u32, c(0.5, 0.0)), (0, c(0.4, 1.0)), (2, c(-0.5, 0.3))] {
            let a = h_star(m, PI / 4.0, s, &w).unwrap();
            let b = h_star_def2(m, PI / 4.0, s, &w).unwrap();
            assert!((a - b).norm() < 1e-8 * a.norm(), "m={m} s={s}: {a} {b}");
        }
    }

    #[test]
    fn h_star_vanishing() {
        let w = spec();
        let tau = PI / 4.0;
        let base = h_star(1, tau, c(0.5, 0.0), &w).unwrap().norm();
        for s in [-1.0, 1.0, 3.0] {
            let v = h_star(1, tau, c(s, 0.0), &w).unwrap().norm();
            assert!(v < 1e-6 * base, "s={s}: {v} vs {base}");
        }
        for s in [0.5, -0.5] {
            assert!(h_star_simple(c(s, 0.0), &w).unwrap().norm() < 1e-6);
        }
    }

    #[test]
    fn psi_mellin_identity() {
        let w = spec();
        let r = psi_mellin_check(1, PI / 4.0, c(1.2, 0.0), &w).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn psi_mellin_round_trip() {
        let w = spec();
        let direct = psi(1, PI / 4.0, 0.7, &w).unwrap();
        let inv = psi_by_mellin_inversion(1, PI / 4.0, 0.7, -0.5, &w).unwrap();
        assert!((direct - inv).norm() < 1e-6, "{direct} {inv}");
    }

    #[test]
    fn psi_small_z_and_large_m() {
        let w = spec();
        let tau = PI / 3.0;
        let a = psi(1, tau, 1e-3, &w).unwrap().norm();
        let b = psi(1, tau, 1e-2, &w).unwrap().norm();
        assert!((b / a).log10() > 0.1);
        let mut prev = psi(10, tau, 3.0, &w).unwrap().norm();
        for m in 11..=14 {
            let v = psi(m, tau, 3.0, &w).unwrap().norm();
            assert!(v < prev, "m={m}");
            prev = v;
        }
        assert!(matches!(psi(25, tau, 1.0, &w), Err(Error::WeightTooWide(_))));
    }

    #[test]
    fn i_representations_agree() {
        let w = spec();
        let n = GaussianInt::new(3, 2);
        let s = c(0.6, 0.2);
        let a = i_weight(n, PI / 3.0, s, &w, IRep::One).unwrap();
        let b = i_weight(n, PI / 3.0, s, &w, IRep::Two).unwrap();
        assert!((a - b).norm() < 1e-5 * a.norm(), "{a} {b}");
    }

    #[test]
    fn i_zero_two_ways() {
        let w = spec();
        let a = i_zero(PI / 4.0, c(0.6, 0.0), &w).unwrap();
        let b = i_zero_via_h_star(PI / 4.0, c(0.6, 0.0), &w).unwrap();
        assert!((a - b).norm() < 1e-6 * a.norm().max(1.0), "{a} {b}");
    }

    #[test]
    fn i_decays_in_n() {
        let w = spec();
        let ns: Vec<i64> = (3..=10).collect();
        let slope = i_decay_slope(&ns, PI / 4.0, c(0.6, 0.2), &w).unwrap();
        assert!(slope <= -(w.n as f64 + 0.5) + 0.5, "{slope}");
    }
}
