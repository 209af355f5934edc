//! Gauss hypergeometric function with complex parameters.
//!
//! Regime map:
//! - |z| small relative to the parameters: Gauss series.
//! - elsewhere off the cut [1, inf): analytic continuation of the
//!   hypergeometric ODE by Taylor steps along the ray from 0 to z.
//! - the z -> 1/z connection formula is available separately.

use super::gamma::{ln_gamma, rgamma};
use crate::{C64, Error, Result};

const MAX_TERMS: usize = 4000;

fn is_nonpos_int(c: C64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.round()
}

/// Gauss series with its first derivative and the ratio of the largest
/// term to the result, or None when it has not converged.
fn gauss_series(a: C64, b: C64, c: C64, z: C64) -> Option<(C64, C64, f64)> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = C64::new(0.0, 0.0);
    let mut big = 1.0f64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        // d/dz of t_{k+1} z^{k+1} contributes (k+1) t_{k+1} z^k
        dsum += term * ratio * (kf + 1.0);
        term = term * ratio * z;
        sum += term;
        big = big.max(term.norm());
        let shrinking = (ratio * z).norm() < 0.9;
        if term.norm() == 0.0 || (shrinking && term.norm() <= 1e-17 * sum.norm()) {
            return Some((sum, dsum, big / sum.norm().max(1e-300)));
        }
    }
    None
}

/// Largest radius where the Gauss series is used directly.
fn series_radius(a: C64, b: C64, c: C64) -> f64 {
    let p = (a.norm() * b.norm() / c.norm().max(1.0)).max(1.0);
    (0.5 / p).clamp(0.02, 0.5)
}

/// Taylor coefficients of the ODE solution about `z0` given value and slope.
fn taylor_step(a: C64, b: C64, c: C64, z0: C64, w0: C64, dw0: C64, h: C64) -> Option<(C64, C64)> {
    // z(1-z) w'' + (c - (a+b+1) z) w' - ab w = 0 expanded at z0
    let aa = z0 * (1.0 - z0);
    let bb = 1.0 - z0 * 2.0;
    let cc = c - (a + b + 1.0) * z0;
    let dd = -(a + b + 1.0);
    let ab = a * b;
    let mut ck = w0; // c_k h^k
    let mut ck1 = dw0 * h; // c_{k+1} h^{k+1}
    let mut val = ck + ck1;
    let mut der = dw0;
    let mut k = 0.0;
    let mut quiet = 0;
    for _ in 0..MAX_TERMS {
        // c_{k+2} = -[(B k(k+1) + C(k+1)) c_{k+1} + (-k(k-1) + D k - ab) c_k] / (A (k+1)(k+2))
        let x = bb * (k * (k + 1.0)) + cc * (k + 1.0);
        let y = dd * k - ab - k * (k - 1.0);
        let ck2 = -(x * ck1 * h + y * ck * h * h) / (aa * ((k + 1.0) * (k + 2.0)));
        val += ck2;
        der += ck2 * (k + 2.0) / h;
        if ck2.norm() <= 1e-17 * val.norm() && ck1.norm() <= 1e-16 * val.norm() {
            quiet += 1;
            if quiet >= 2 {
                return Some((val, der));
            }
        } else {
            quiet = 0;
        }
        ck = ck1;
        ck1 = ck2;
        k += 1.0;
    }
    None
}

/// `2F1(a, b; c; z)`.
pub fn hyp2f1(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    if is_nonpos_int(c) {
        return Err(Error::Regime("c is a nonpositive integer".into()));
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::Regime("z on the branch cut [1, inf)".into()));
    }
    if z.norm() == 0.0 || is_nonpos_int(a) || is_nonpos_int(b) {
        if let Some((v, _, _)) = gauss_series(a, b, c, z) {
            return Ok(v);
        }
    }
    let r0 = series_radius(a, b, c);
    if z.norm() <= r0 {
        return gauss_series(a, b, c, z)
            .map(|x| x.0)
            .ok_or_else(|| Error::Regime("Gauss series did not converge".into()));
    }
    let dir = z / z.norm();
    let mut z0 = dir * r0;
    let (mut w, mut dw, _) = gauss_series(a, b, c, z0)
        .ok_or_else(|| Error::Regime("Gauss series did not converge".into()))?;
    let scale = (a.norm() + b.norm() + c.norm()).max(1.0);
    let mut steps = 0;
    while (z - z0).norm() > 0.0 {
        let dist = z0.norm().min((1.0 - z0).norm());
        let hmax = dist * (0.5f64).min(4.0 / scale);
        let remaining = z - z0;
        let h = if remaining.norm() <= hmax { remaining } else { dir * hmax };
        let (nw, ndw) = taylor_step(a, b, c, z0, w, dw, h)
            .ok_or_else(|| Error::Regime("Taylor continuation did not converge".into()))?;
        w = nw;
        dw = ndw;
        z0 += h;
        steps += 1;
        if steps > 20_000 {
            return Err(Error::Regime("too many continuation steps".into()));
        }
    }
    if !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::Regime("overflow in continuation".into()));
    }
    Ok(w)
}

/// `2F1` for large |z| through the z -> 1/z connection formula.
/// Requires b - a not an integer.
pub fn hyp2f1_inverse(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    let d = b - a;
    if d.im == 0.0 && d.re == d.re.round() {
        return Err(Error::Regime("b - a is an integer".into()));
    }
    if z.im == 0.0 && z.re > 0.0 {
        return Err(Error::Regime("connection formula needs z off [0, inf)".into()));
    }
    let mz = -z;
    let term = |a: C64, b: C64| -> Result<C64> {
        // Gamma(c)Gamma(b-a)/(Gamma(b)Gamma(c-a)) (-z)^{-a} F(a, a-c+1; a-b+1; 1/z)
        let lg = ln_gamma(c)? + ln_gamma(b - a)?;
        let pref = (lg - a * mz.ln()).exp() * rgamma(b) * rgamma(c - a);
        Ok(pref * hyp2f1(a, a - c + 1.0, a - b + 1.0, 1.0 / z)?)
    };
    Ok(term(a, b)? + term(b, a)?)
}
