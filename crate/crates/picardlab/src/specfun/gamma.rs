//! Complex Gamma via the Stirling series with upward shift and reflection.

use std::f64::consts::PI;

use crate::{C64, Error, Result};

// B_{2k} / (2k (2k-1)) for k = 1..=12
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0,
];

const SHIFT: f64 = 16.0;

fn is_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `log sin(pi z)` without overflow for large |Im z|.
pub fn ln_sin_pi(z: C64) -> C64 {
    let w = z * PI;
    let i = C64::new(0.0, 1.0);
    if w.im.abs() < 1.0 {
        return w.sin().ln();
    }
    // sin w = e^{-iw}(e^{2iw} - 1)/(2i) for Im w > 0, mirrored otherwise
    if w.im > 0.0 {
        -i * w + ((i * w * 2.0).exp() - 1.0).ln() - (i * 2.0).ln()
    } else {
        i * w + (1.0 - (-i * w * 2.0).exp()).ln() - (i * 2.0).ln()
    }
}

fn ln_gamma_right(z: C64) -> C64 {
    // shift so that Re z >= SHIFT, accumulating log of the product in pieces
    let mut z = z;
    let mut acc = C64::new(0.0, 0.0);
    let mut prod = C64::new(1.0, 0.0);
    while z.re < SHIFT {
        prod *= z;
        if prod.norm() > 1e100 || prod.norm() < 1e-100 {
            acc += prod.ln();
            prod = C64::new(1.0, 0.0);
        }
        z += 1.0;
    }
    acc += prod.ln();
    let z2 = z * z;
    let mut zk = z;
    let mut series = C64::new(0.0, 0.0);
    for c in STIRLING {
        series += c / zk;
        zk *= z2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - acc
}

/// Log-Gamma on the principal sheet up to multiples of 2 pi i.
pub fn ln_gamma(z: C64) -> Result<C64> {
    if is_pole(z) {
        return Err(Error::Pole);
    }
    if z.re < 0.5 {
        Ok(PI.ln() - ln_sin_pi(z) - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

pub fn gamma_c(z: C64) -> Result<C64> {
    Ok(ln_gamma(z)?.exp())
}

/// `1/Gamma(z)`, entire; zero at the poles of Gamma.
pub fn rgamma(z: C64) -> C64 {
    if is_pole(z) {
        return C64::new(0.0, 0.0);
    }
    (-ln_gamma(z).unwrap()).exp()
}

/// Leading modulus of the Stirling approximation for Gamma(sigma + it).
pub fn stirling_modulus(sigma: f64, t: f64) -> f64 {
    (2.0 * PI).sqrt() * t.abs().powf(sigma - 0.5) * (-PI * t.abs() / 2.0).exp()
}

/// Leading term `sqrt(2 pi) exp(-z) z^{z - 1/2}`.
pub fn stirling_leading(z: C64) -> C64 {
    ((z - 0.5) * z.ln() - z).exp() * (2.0 * PI).sqrt()
}

/// Upper incomplete gamma `Gamma(a, x)` for complex a and real x > 0.
pub fn upper_incomplete_gamma(a: C64, x: f64) -> Result<C64> {
    if x <= 0.0 {
        return Err(Error::InvalidArgument("incomplete gamma needs x > 0".into()));
    }
    if x >= 1.5 || is_pole(a) {
        return incgamma_cf(a, x);
    }
    // Gamma(a) - gamma(a, x), lower part from x^a e^{-x} sum x^k / (a)_{k+1}
    let mut term = 1.0 / a;
    let mut sum = term;
    for k in 1..500 {
        term = term * x / (a + k as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    let lower = (a * x.ln() - x).exp() * sum;
    Ok(gamma_c(a)? - lower)
}

fn incgamma_cf(a: C64, x: f64) -> Result<C64> {
    // modified Lentz on the Legendre continued fraction
    let tiny = 1e-300;
    let mut b = C64::new(x + 1.0, 0.0) - a;
    let mut cc = C64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..20_000 {
        let i = i as f64;
        let an = (a - i) * i;
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = C64::new(tiny, 0.0);
        }
        cc = b + an / cc;
        if cc.norm() < tiny {
            cc = C64::new(tiny, 0.0);
        }
        d = 1.0 / d;
        let del = d * cc;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            return Ok((a * x.ln() - x).exp() * h);
        }
    }
    Err(Error::Regime("incomplete gamma continued fraction did not converge".into()))
}
