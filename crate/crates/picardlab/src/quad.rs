//! Fixed-node quadrature: Gauss-Legendre panels and tanh-sinh.
//!
//! Nodes are deterministic, so repeated runs give bit-identical sums.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    TanhSinh,
    GaussLegendrePanels,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub abs_tol: f64,
    pub max_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::GaussLegendrePanels,
            abs_tol: 1e-10,
            max_nodes: 4096,
        }
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(32))
}

fn gl64() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(64))
}

fn rule(order: usize) -> &'static (Vec<f64>, Vec<f64>) {
    if order > 32 {
        gl64()
    } else {
        gl32()
    }
}

/// Composite Gauss-Legendre with `panels` equal panels of 32 nodes.
pub fn gl_panels<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = rule(32);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            s += wi * f(mid + 0.5 * h * xi);
        }
        acc += 0.5 * h * s;
    }
    acc
}

pub fn gl_panels_c<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, panels: usize) -> C64 {
    let (x, w) = rule(32);
    let h = (b - a) / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let mut s = C64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(w) {
            s += f(mid + 0.5 * h * xi) * *wi;
        }
        acc += s * (0.5 * h);
    }
    acc
}

/// Nodes and weights of composite Gauss-Legendre, for callers that
/// evaluate integrands in parallel.
pub fn gl_nodes(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let (x, w) = rule(32);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * x.len());
    for p in 0..panels {
        let mid = a + h * (p as f64 + 0.5);
        for (xi, wi) in x.iter().zip(w) {
            out.push((mid + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

/// Tanh-sinh on [a, b] for integrands with endpoint singularities.
/// Halves the step until two successive levels agree to `tol`.
pub fn tanh_sinh_c<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, tol: f64) -> C64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let pi2 = std::f64::consts::FRAC_PI_2;
    let tmax = 4.0;
    let mut h = 0.5;
    // one-sided distances to the endpoints avoid cancellation near a and b
    let mut eval = |t: f64| -> C64 {
        let u = pi2 * t.sinh();
        let ch = u.cosh();
        let w = pi2 * t.cosh() / (ch * ch);
        let e = (-2.0 * u.abs()).exp();
        let d = half * 2.0 * e / (1.0 + e); // distance to the nearer endpoint
        let x = if t < 0.0 { a + d } else if t > 0.0 { b - d } else { mid };
        if d <= 0.0 || x <= a || x >= b {
            return C64::new(0.0, 0.0);
        }
        f(x) * (w * half)
    };
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= tmax {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut est = sum * h;
    for _ in 0..8 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= tmax {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let next = sum * h;
        if (next - est).norm() <= tol * next.norm().max(1.0) {
            return next;
        }
        est = next;
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((m - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn panels_integrate_smooth_functions() {
        let v = gl_panels(|x| x.sin(), 0.0, std::f64::consts::PI, 4);
        assert!((v - 2.0).abs() < 1e-14);
        let v = gl_panels(|x| (-x * x).exp(), -8.0, 8.0, 8);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let v = tanh_sinh_c(|x| C64::new(x.powf(-0.5), 0.0), 0.0, 1.0, 1e-12);
        assert!((v.re - 2.0).abs() < 1e-10, "{v}");
        // int_0^1 log(x) dx = -1
        let v = tanh_sinh_c(|x| C64::new(x.ln(), 0.0), 0.0, 1.0, 1e-12);
        assert!((v.re + 1.0).abs() < 1e-10, "{v}");
    }
}
