//! Quadratic congruence counts by exhaustion.
//!
//! Deliberately brute force: this module is the reference that faster
//! code elsewhere is checked against.

use serde::{Deserialize, Serialize};

use crate::gint::{self, GaussianInt};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoValue {
    pub q: GaussianInt,
    pub n: GaussianInt,
    pub count: u64,
}

/// `#{x mod 2q : x^2 = n (mod 4q)}`.
pub fn rho(q: GaussianInt, n: GaussianInt) -> Result<RhoValue> {
    let two = GaussianInt::new(2, 0);
    let res = gint::residue_system(two * q)?;
    let m = two * two * q;
    let count = res.iter().filter(|&&x| m.divides(x * x - n)).count() as u64;
    Ok(RhoValue { q, n, count })
}

/// `#{a mod q : a^2 + a conj(n) + 1 = 0 (mod q)}`.
pub fn trace_congruence_count(n: GaussianInt, q: GaussianInt) -> Result<u64> {
    let res = gint::residue_system(q)?;
    let nb = n.conj();
    Ok(res
        .iter()
        .filter(|&&a| q.divides(a * a + a * nb + GaussianInt::ONE))
        .count() as u64)
}
