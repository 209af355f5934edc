//! The kernel `K_{ir}(u)` of the Kuznetsov formula over Q(i), its
//! transform `h-check`, and the Bessel addition identity.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use super::bessel::{bessel_j_all, jstar, scaled_k_imag};
use crate::quad;
use crate::{C64, Error, Result};

/// Quadrature nodes on tau in (0, pi/2) as `(sin tau, cos tau, weight)`.
/// Near pi/2 the substitution tau = pi/2 - e^{-y} turns the log-oscillation
/// of K_{2ir}(2|u| cos tau) into a smooth, exponentially damped integrand.
fn tau_nodes(u_abs: f64, r_abs: f64) -> Vec<(f64, f64, f64)> {
    let delta = 0.1;
    // resolve cos(2|u| sin tau) and the K oscillation
    let panels = ((FRAC_PI_2 - delta) * (2.0 * u_abs + 2.0 * r_abs + 4.0) / 3.0).ceil() as usize;
    let mut nodes: Vec<_> = quad::gl_nodes(0.0, FRAC_PI_2 - delta, panels.max(2))
        .into_iter()
        .map(|(t, w)| (t.sin(), t.cos(), w))
        .collect();
    let (y0, y1) = (-delta.ln(), 40.0);
    let ypanels = ((y1 - y0) * (2.0 * r_abs + 1.0) / 2.0).ceil() as usize;
    for (y, w) in quad::gl_nodes(y0, y1, ypanels.max(4)) {
        let e = (-y).exp();
        nodes.push((e.cos(), e.sin(), w * e));
    }
    nodes
}

/// Representation by a single tau-integral of `cos(..) K_{2ir}`.
pub fn motohashi_k_rep1(r: f64, u: C64) -> Result<C64> {
    if u.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let a = u.norm();
    let ct = u.arg().cos();
    let mut acc = 0.0;
    for (st, ctau, w) in tau_nodes(a, r.abs()) {
        acc += w * (2.0 * a * ct * st).cos() * scaled_k_imag(r, 2.0 * a * ctau)?;
    }
    Ok(C64::new(8.0 / (PI * PI) * acc, 0.0))
}

/// Jacobi-Anger series in even-order J-Bessel functions, truncated at `mmax`.
pub fn motohashi_k_rep2(r: f64, u: C64, mmax: usize) -> Result<C64> {
    if u.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let a = u.norm();
    let theta = u.arg();
    let mut moments = vec![0.0; mmax + 1];
    for (st, ctau, w) in tau_nodes(a, r.abs()) {
        let k = scaled_k_imag(r, 2.0 * a * ctau)?;
        let js = bessel_j_all(2 * mmax, 2.0 * a * st);
        for (m, mom) in moments.iter_mut().enumerate() {
            *mom += w * js[2 * m] * k;
        }
    }
    // sum* halves the m = 0 term; (u/|u|)^{2m} + (u/|u|)^{-2m} = 2 cos(2 m theta)
    let mut acc = 0.5 * 2.0 * moments[0];
    for (m, mom) in moments.iter().enumerate().skip(1) {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * 2.0 * (2.0 * m as f64 * theta).cos() * mom;
    }
    Ok(C64::new(8.0 / (PI * PI) * acc, 0.0))
}

/// `J_nu(z) = 2^{-2 nu} |z|^{2 nu} J*_nu(z) J*_nu(conj z)`.
pub fn bold_j(nu: C64, z: C64) -> C64 {
    let lead = (nu * 2.0 * (z.norm() / 2.0).ln()).exp();
    lead * jstar(nu, z) * jstar(nu, z.conj())
}

/// `K_{ir}(u) = (J_{-ir}(u) - J_{ir}(u)) / sin(pi i r)` directly; r != 0.
pub fn motohashi_k_def(r: f64, u: C64) -> Result<C64> {
    if u.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    if r == 0.0 {
        return Err(Error::Regime("definition form needs r != 0".into()));
    }
    let nu = C64::new(0.0, r);
    let num = bold_j(-nu, u) - bold_j(nu, u);
    Ok(num / C64::new(0.0, (PI * r).sinh()))
}

/// `K_{ir}(u)`; production path is the tau-integral representation.
pub fn motohashi_k(r: f64, u: C64) -> Result<C64> {
    motohashi_k_rep1(r, u)
}

/// `h-check(u) = 1/2 int K_{ir}(u) r^2 h(r) dr` for an even weight `h`
/// supported numerically in |r| <= rmax.
pub fn h_check<H>(u: C64, h: H, rmax: f64) -> Result<f64>
where
    H: Fn(f64) -> f64 + Sync,
{
    if u.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let a = u.norm();
    let ct = u.arg().cos();
    // after the r-integration the integrand is smooth in log cos(tau)
    let nodes = tau_nodes(a, 0.0);
    // h even: 1/2 int_{-R}^{R} = int_0^R
    let parts: Result<Vec<f64>> = nodes
        .par_iter()
        .map(|&(st, ctau, w)| {
            let x = 2.0 * a * ctau;
            // oscillation of K_{2ir}(x) in r has frequency about 2|log x| + 2 log(2R)
            let freq = 2.0 * (x / 2.0).ln().abs() + 2.0 * (2.0 * rmax + 2.0).ln() + 4.0;
            let panels = ((rmax * freq / 12.0).ceil() as usize).max(4);
            let mut s = 0.0;
            for (r, wr) in quad::gl_nodes(0.0, rmax, panels) {
                let hr = h(r);
                if hr != 0.0 {
                    s += wr * r * r * hr * scaled_k_imag(r, x)?;
                }
            }
            Ok(w * (2.0 * a * ct * st).cos() * s)
        })
        .collect();
    Ok(8.0 / (PI * PI) * parts?.iter().sum::<f64>())
}

/// `|LHS - RHS|` of `J_0(az)J_0(bz) + 2 sum cos(2m theta) J_2m(az) J_2m(bz)
///  = J_0(z sqrt(a^2+b^2+2ab cos theta))/2 + J_0(z sqrt(a^2+b^2-2ab cos theta))/2`.
pub fn bessel_addition_check(a: f64, b: f64, z: f64, theta: f64, mmax: usize) -> f64 {
    let ja = bessel_j_all(2 * mmax, a * z);
    let jb = bessel_j_all(2 * mmax, b * z);
    let mut lhs = ja[0] * jb[0];
    for m in 1..=mmax {
        lhs += 2.0 * (2.0 * m as f64 * theta).cos() * ja[2 * m] * jb[2 * m];
    }
    let ct = theta.cos();
    let plus = (a * a + b * b + 2.0 * a * b * ct).max(0.0).sqrt();
    let minus = (a * a + b * b - 2.0 * a * b * ct).max(0.0).sqrt();
    let rhs = 0.5 * bessel_j_all(0, z * plus)[0] + 0.5 * bessel_j_all(0, z * minus)[0];
    (lhs - rhs).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representations_agree() {
        let u = C64::from_polar(1.5, PI / 7.0);
        for &r in &[0.3, 1.0, 2.5] {
            let k1 = motohashi_k_rep1(r, u).unwrap();
            let k2 = motohashi_k_rep2(r, u, 40).unwrap();
            let kd = motohashi_k_def(r, u).unwrap();
            assert!((k1 - k2).norm() < 1e-8, "r={r}: {k1} {k2}");
            assert!((k1 - kd).norm() < 1e-8, "r={r}: {k1} {kd}");
        }
    }

    #[test]
    fn frozen_value_from_independent_evaluation() {
        // high-precision evaluation of the definition at u = 1.5 e^{i pi/7}
        let u = C64::from_polar(1.5, PI / 7.0);
        let k = motohashi_k_rep1(0.3, u).unwrap();
        assert!((k.re + 0.329_505_196_326_789).abs() < 1e-9, "{k}");
        let k = motohashi_k_rep1(1.0, u).unwrap();
        assert!((k.re + 0.157_661_299_093_675_6).abs() < 1e-9, "{k}");
    }

    #[test]
    fn real_argument_and_symmetry() {
        let u = C64::new(0.8, 0.0);
        let kd = motohashi_k_def(0.7, u).unwrap();
        assert!(kd.im.abs() < 1e-9);
        let a = motohashi_k_def(0.7, C64::new(1.1, 0.4)).unwrap();
        let b = motohashi_k_def(-0.7, C64::new(1.1, 0.4)).unwrap();
        assert!((a - b).norm() < 1e-12);
        assert!(motohashi_k(0.5, C64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn addition_identity() {
        assert!(bessel_addition_check(1.3, 0.7, 2.1, PI / 5.0, 40) < 1e-8);
        assert!(bessel_addition_check(1.3, 0.7, 2.1, FRAC_PI_2, 40) < 1e-8);
        assert!(bessel_addition_check(0.9, 0.9, 3.0, 0.0, 40) < 1e-8);
    }

    #[test]
    fn h_check_is_linear() {
        let u = C64::new(0.6, 0.3);
        let h1 = |r: f64| (-r * r).exp();
        let h2 = |r: f64| (-(r * r) / 2.0).exp() * (1.0 + r * r);
        let a = h_check(u, h1, 8.0).unwrap();
        let b = h_check(u, h2, 12.0).unwrap();
        let s = h_check(u, |r| h1(r) + h2(r), 12.0).unwrap();
        assert!((s - a - b).abs() < 1e-10);
    }

    #[test]
    fn h_check_small_and_large_argument() {
        let h = |r: f64| (-r * r).exp();
        let at = |a: f64| h_check(C64::from_polar(a, 0.4), h, 8.0).unwrap();
        let (v1, v2, v3) = (at(1e-3), at(1e-2), at(1e-1));
        let s1 = (v2.abs() / v1.abs()).log10();
        let s2 = (v3.abs() / v2.abs()).log10();
        // decay at least |u|^{3/2}; a Gaussian bump gives |u|^2 in this range
        for s in [s1, s2] {
            assert!((1.45..2.05).contains(&s), "slope {s}");
        }
        let v1 = at(1.0).abs();
        for a in [10.0, 100.0] {
            assert!(at(a).abs() < v1);
        }
    }
}
