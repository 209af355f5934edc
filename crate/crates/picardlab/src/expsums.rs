//! Exponential sums over Z[i].
//!
//! Phases are reduced exactly: for integers `x` and modulus norm `n`,
//! `exp(2 pi i x / n)` is evaluated from `x mod n`.

use serde::{Deserialize, Serialize};

use crate::gint::{self, GaussianInt};
use crate::{C64, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KloostermanResult {
    pub value: C64,
    pub modulus_norm: i64,
    pub weil_bound: f64,
}

/// `e[x] = exp(2 pi i Re x)`.
pub fn e_bracket(x: C64) -> C64 {
    let t = x.re - x.re.floor();
    C64::from_polar(1.0, std::f64::consts::TAU * t)
}

/// `exp(2 pi i x / n)` for integer x, n > 0.
pub(crate) fn unit_root(x: i64, n: i64) -> C64 {
    let k = x.rem_euclid(n);
    C64::from_polar(1.0, std::f64::consts::TAU * (k as f64) / (n as f64))
}

/// `e[z / q]` for Gaussian integers, reduced exactly.
pub(crate) fn e_frac(z: GaussianInt, q: GaussianInt) -> C64 {
    unit_root((z * q.conj()).re, q.norm())
}

pub fn linear_sum(n: GaussianInt, q: GaussianInt) -> Result<C64> {
    let res = gint::residue_system(q)?;
    Ok(res.iter().map(|&a| e_frac(a * n, q)).sum())
}

/// Coprime residues modulo c paired with their inverses.
pub fn unit_residues(c: GaussianInt) -> Result<Vec<(GaussianInt, GaussianInt)>> {
    let res = gint::residue_system(c)?;
    Ok(res
        .into_iter()
        .filter_map(|a| gint::mod_inverse(a, c).ok().map(|inv| (a, inv)))
        .collect())
}

/// `S(m, n; c) = sum_{a mod c, (a,c)=1} e[(m a + n a*) / c]`.
pub fn kloosterman(m: GaussianInt, n: GaussianInt, c: GaussianInt) -> Result<KloostermanResult> {
    let units = unit_residues(c)?;
    Ok(kloosterman_with(m, n, c, &units))
}

pub(crate) fn kloosterman_with(
    m: GaussianInt,
    n: GaussianInt,
    c: GaussianInt,
    units: &[(GaussianInt, GaussianInt)],
) -> KloostermanResult {
    let value = units.iter().map(|&(a, inv)| e_frac(m * a + n * inv, c)).sum();
    KloostermanResult {
        value,
        modulus_norm: c.norm(),
        weil_bound: weil_bound(m, n, c),
    }
}

/// `|c| sigma_0(c) |(m, n, c)|`.
pub fn weil_bound(m: GaussianInt, n: GaussianInt, c: GaussianInt) -> f64 {
    let g = gint::gcd0(gint::gcd0(m, n), c);
    let s0 = gint::factor(c)
        .map(|f| f.canonical_divisors().len() as f64)
        .unwrap_or(0.0);
    c.abs() * s0 * g.abs()
}

/// `sum_{c mod q} S(c, c; q) e[n conj(c / q)]`.
pub fn twisted_csum(n: GaussianInt, q: GaussianInt) -> Result<C64> {
    let res = gint::residue_system(q)?;
    let units = unit_residues(q)?;
    let nq = q.norm();
    // e[n conj(c/q)] = exp(2 pi i Re(n conj(c) q) / N(q))
    Ok(res
        .iter()
        .map(|&c| {
            let s = kloosterman_with(c, c, q, &units).value;
            s * unit_root((n * c.conj() * q).re, nq)
        })
        .sum())
}
