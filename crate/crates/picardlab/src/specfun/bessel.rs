//! Bessel functions: integer-order J, imaginary-order K, and the
//! entire normalized J* of complex order.

use std::f64::consts::PI;

use super::gamma::{ln_gamma, rgamma};
use crate::quad;
use crate::{C64, Error, Result};

/// `J_0(x), ..., J_nmax(x)` for real x >= 0 by Miller's backward recurrence,
/// normalized with `J_0 + 2 sum J_{2k} = 1`.
pub fn bessel_j_all(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let start = {
        let m = (nmax as f64).max(ax);
        let s = (m + 20.0 + 6.0 * m.sqrt()) as usize;
        s + (s & 1)
    };
    let mut jp1 = 0.0;
    let mut j = 1e-300;
    let mut norm = 0.0;
    let mut vals = vec![0.0; start + 1];
    vals[start] = j;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / ax * j - jp1;
        jp1 = j;
        j = jm1;
        vals[k - 1] = j;
        if j.abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
            jp1 *= 1e-250;
            j *= 1e-250;
        }
    }
    for (k, v) in vals.iter().enumerate() {
        if k == 0 {
            norm += v;
        } else if k % 2 == 0 {
            norm += 2.0 * v;
        }
    }
    for k in 0..=nmax {
        let v = if k <= start { vals[k] / norm } else { 0.0 };
        // J_n(-x) = (-1)^n J_n(x)
        out[k] = if x < 0.0 && k % 2 == 1 { -v } else { v };
    }
    out
}

pub fn bessel_j(order: usize, x: f64) -> f64 {
    bessel_j_all(order, x)[order]
}

/// `J*_nu(z) = J_nu(z) (z/2)^{-nu} = sum_k (-z^2/4)^k / (k! Gamma(nu + k + 1))`.
pub fn jstar(nu: C64, z: C64) -> C64 {
    let w = -z * z / 4.0;
    let mut term = rgamma(nu + 1.0);
    let mut sum = term;
    let mut a = nu + 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        // 1/Gamma(nu + k + 1) = 1/Gamma(nu + k) / (nu + k)
        if a.norm() == 0.0 {
            // Gamma pole at nu + k: recompute the reciprocal directly
            term = w.powf(k) * rgamma(nu + k + 1.0) / factorial(k);
        } else {
            term = term * w / (k * a);
        }
        a += 1.0;
        sum += term;
        if k > 8.0 && term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        if k > 400.0 {
            break;
        }
    }
    sum
}

fn factorial(k: f64) -> f64 {
    (1..=k as u64).map(|x| x as f64).product()
}

/// `K_{i mu}(x) = int_0^infty exp(-x cosh t) cos(mu t) dt` by Gauss-Legendre panels.
pub fn bessel_k_imag_order(mu: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::InvalidArgument("K-Bessel argument must be positive".into()));
    }
    let tmax = (1.0 + 40.0 / x).acosh();
    let width = (0.5f64).min(2.0 * PI / mu.abs().max(1e-300));
    let panels = ((tmax / width).ceil() as usize).max(1);
    // factor e^{-x} out of the integrand to keep it O(1)
    let v = quad::gl_panels(
        |t| (-x * (t.cosh() - 1.0)).exp() * (mu * t).cos(),
        0.0,
        tmax,
        panels,
    );
    Ok(v * (-x).exp())
}

/// `K_{2ir}(x)`.
pub fn bessel_k_imag(r: f64, x: f64) -> Result<f64> {
    bessel_k_imag_order(2.0 * r, x)
}

/// `cosh(pi mu / 2) K_{i mu}(x)`, which stays O(1) where K itself is
/// exponentially small in mu.
pub fn scaled_k_imag_order(mu: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::InvalidArgument("K-Bessel argument must be positive".into()));
    }
    let m = mu.abs();
    let series = (m > 2.0 && x < 1.19 * m) || (m >= 0.1 && x < 2.0);
    if !series {
        return Ok((PI * m / 2.0).cosh() * bessel_k_imag_order(m, x)?);
    }
    // K_{i mu} = -pi Im I_{i mu}(x) / sinh(pi mu), I from its power series
    let nu = C64::new(0.0, m);
    let ln_half = (x / 2.0).ln();
    let w = x * x / 4.0;
    // exp(-pi mu / 2) (x/2)^{i mu} / Gamma(1 + i mu)
    let lead = (nu * ln_half - ln_gamma(nu + 1.0)? - PI * m / 2.0).exp();
    let mut term = lead;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term = term * w / (k * (nu + k));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm().max(1e-300) && k > w.sqrt() {
            break;
        }
        if k > 2000.0 {
            return Err(Error::Regime("I-series did not converge".into()));
        }
    }
    Ok(-PI * sum.im / (1.0 - (-PI * m).exp()))
}

/// `cosh(pi r) K_{2ir}(x)`.
pub fn scaled_k_imag(r: f64, x: f64) -> Result<f64> {
    scaled_k_imag_order(2.0 * r, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    // K_0 from its classical series: -(ln(x/2) + gamma) I_0(x) + sum (x^2/4)^k/(k!)^2 H_k
    fn k0_series(x: f64) -> f64 {
        let euler = 0.577_215_664_901_532_9;
        let w = x * x / 4.0;
        let (mut t, mut i0, mut s, mut h) = (1.0, 1.0, 0.0, 0.0);
        for k in 1..60 {
            let k = k as f64;
            t *= w / (k * k);
            h += 1.0 / k;
            i0 += t;
            s += t * h;
        }
        -((x / 2.0).ln() + euler) * i0 + s
    }

    #[test]
    fn j_values() {
        assert!((bessel_j(0, 0.0) - 1.0).abs() < 1e-15);
        for m in 1..10 {
            assert_eq!(bessel_j(2 * m, 0.0), 0.0);
        }
        assert!(bessel_j(0, 2.404_825_557_7).abs() < 1e-8);
        // J_1(1) and J_5(10) reference values
        assert!((bessel_j(1, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((bessel_j(5, 10.0) + 0.234_061_528_186_793_6).abs() < 1e-13);
    }

    #[test]
    fn j_matches_power_series() {
        for &x in &[0.3, 1.7, 4.0, 9.5] {
            let all = bessel_j_all(20, x);
            for n in 0..=20 {
                let s = jstar(C64::new(n as f64, 0.0), C64::new(x, 0.0)).re * (x / 2.0).powi(n as i32);
                assert!((all[n] - s).abs() < 1e-13, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn j_large_argument_wronskian() {
        // J_{n+1} Y_n - J_n Y_{n+1} is unavailable; use the sum rule instead
        for &x in &[30.0, 75.0, 100.0] {
            let all = bessel_j_all(140, x);
            let s: f64 = all[0] * all[0] + 2.0 * all[1..].iter().map(|v| v * v).sum::<f64>();
            assert!((s - 1.0).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn k_values() {
        let k = bessel_k_imag(0.0, 1.0).unwrap();
        assert!((k - 0.421_024_438_2).abs() < 1e-10);
        assert!((k - k0_series(1.0)).abs() < 1e-12);
        for &x in &[0.05, 0.4, 3.0] {
            assert!((bessel_k_imag(0.0, x).unwrap() - k0_series(x)).abs() < 1e-10);
        }
        let a = bessel_k_imag(1.3, 0.7).unwrap();
        let b = bessel_k_imag(-1.3, 0.7).unwrap();
        assert!((a - b).abs() < 1e-12);
        // Hankel expansion with two correction terms; order 2i gives 4 nu^2 = -16
        let (x, mu2) = (30.0f64, -16.0);
        let corr = 1.0 + (mu2 - 1.0) / (8.0 * x) + (mu2 - 1.0) * (mu2 - 9.0) / (2.0 * (8.0 * x).powi(2));
        let asym = (PI / (2.0 * x)).sqrt() * (-x).exp();
        let ratio = bessel_k_imag(1.0, x).unwrap() / asym;
        assert!((ratio - corr).abs() < 1e-3, "{ratio}");
        assert!(bessel_k_imag(1.0, 0.0).is_err());
    }

    #[test]
    fn scaled_k_agrees_with_quadrature_where_both_work() {
        for &mu in &[0.3, 1.5, 2.5, 4.0, 7.0] {
            for &x in &[0.1, 1.0, 3.0, 6.0] {
                let a = scaled_k_imag_order(mu, x).unwrap();
                let b = (PI * mu / 2.0).cosh() * bessel_k_imag_order(mu, x).unwrap();
                assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "mu={mu} x={x}: {a} {b}");
            }
        }
    }
}
