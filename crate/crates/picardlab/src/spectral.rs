//! Spectral parameter tables and the sums built on them: the exponential
//! sum S(T, X), its omega-smoothed dyadic version, and the explicit formula
//! for Psi(X).
//!
//! Table format: UTF-8 text, one decimal r_j per line in strictly ascending
//! order, `#` starts a comment. A comment line `# source: <text>` records
//! provenance; `# source: synthetic` marks test data and silences the check
//! against the lower bound r_1 >= sqrt(pi^2 - 1).

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::moments::omega_t;
use crate::{Error, Result, C64};

/// Lower bound for r_1 coming from lambda_1 >= pi^2.
pub fn r1_lower_bound() -> f64 {
    (std::f64::consts::PI.powi(2) - 1.0).sqrt()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SpectralTable {
    pub values: Vec<f64>,
    pub source: String,
}

impl SpectralTable {
    pub fn new(values: Vec<f64>, source: &str) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositive { line: i + 1 });
            }
            if i > 0 && v <= values[i - 1] {
                return Err(Error::NonAscending { line: i + 1 });
            }
        }
        Ok(Self { values, source: source.to_string() })
    }

    pub fn is_synthetic(&self) -> bool {
        self.source.trim().eq_ignore_ascii_case("synthetic")
    }

    /// Soft checks on real data; empty for synthetic tables.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if let Some(&r1) = self.values.first() {
            if !self.is_synthetic() && r1 < r1_lower_bound() {
                w.push(format!("r_1 = {r1} lies below sqrt(pi^2 - 1) = {:.6}", r1_lower_bound()));
            }
        }
        w
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of r_j in (lo, hi].
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.values.iter().filter(|&&r| r > lo && r <= hi).count()
    }
}

pub fn parse_table(text: &str) -> Result<SpectralTable> {
    let mut values: Vec<f64> = Vec::new();
    let mut source = String::from("unspecified");
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (body, comment) = match raw.find('#') {
            Some(k) => (&raw[..k], Some(&raw[k + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(s) = c.trim().strip_prefix("source:") {
                source = s.trim().to_string();
            }
        }
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let v: f64 = body
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("not a number: {body:?}") })?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositive { line });
        }
        if values.last().is_some_and(|&p| v <= p) {
            return Err(Error::NonAscending { line });
        }
        values.push(v);
    }
    Ok(SpectralTable { values, source })
}

pub fn load_table(path: impl AsRef<Path>) -> Result<SpectralTable> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_table(&text)
}

const CHUNK: usize = 4096;

/// Sum over chunks in parallel, then combine the chunk sums in order, so the
/// result does not depend on the thread count.
fn chunked_sum<F: Fn(f64) -> C64 + Sync>(values: &[f64], f: F) -> C64 {
    let parts: Vec<C64> = values.par_chunks(CHUNK).map(|c| c.iter().map(|&r| f(r)).sum()).collect();
    parts.into_iter().sum()
}

fn x_pow_ir(x: f64, r: f64) -> C64 {
    C64::from_polar(1.0, r * x.ln())
}

/// `S(T, X) = sum_{0 < r_j <= T} X^{i r_j}`.
pub fn spectral_exp_sum(table: &SpectralTable, t: f64, x: f64) -> C64 {
    let end = table.values.partition_point(|&r| r <= t);
    chunked_sum(&table.values[..end], |r| x_pow_ir(x, r))
}

/// `sum_j omega_T(r_j) X^{i r_j}`, a smoothed sum over (T, 2T].
pub fn smoothed_sum(table: &SpectralTable, t: f64, g: f64, x: f64) -> C64 {
    chunked_sum(&table.values, |r| omega_t(r, t, g) * x_pow_ir(x, r))
}

/// Dyadic scales `T_i = T 2^{-i}`, i = 1, 2, ..., down to the first T_i below `floor`.
pub fn dyadic_scales(t: f64, floor: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut ti = t / 2.0;
    loop {
        v.push(ti);
        if ti < floor {
            break;
        }
        ti /= 2.0;
    }
    v
}

/// Sum of the smoothed blocks over the dyadic scales of `T`; approximates S(T, X).
pub fn dyadic_sum(table: &SpectralTable, t: f64, g: f64, x: f64) -> C64 {
    let floor = table.values.first().copied().unwrap_or(1.0);
    dyadic_scales(t, floor).iter().map(|&ti| smoothed_sum(table, ti, g, x)).sum()
}

/// Sharp against dyadic-smoothed sums, with the number of r_j close enough
/// to a block edge for the smoothing to matter.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EdgeReport {
    pub sharp: C64,
    pub smoothed: C64,
    pub residual: f64,
    /// r_j within `c G sqrt(log T)` of some block edge
    pub edge_count: usize,
    pub window: f64,
    pub within_bound: bool,
}

pub fn edge_check(table: &SpectralTable, t: f64, g: f64, x: f64, c: f64) -> EdgeReport {
    let sharp = spectral_exp_sum(table, t, x);
    let smoothed = dyadic_sum(table, t, g, x);
    let floor = table.values.first().copied().unwrap_or(1.0);
    let window = c * g * t.ln().max(1.0).sqrt();
    let mut edges: Vec<f64> = dyadic_scales(t, floor);
    edges.push(t);
    let edge_count = table
        .values
        .iter()
        .filter(|&&r| edges.iter().any(|&e| (r - e).abs() <= window))
        .count();
    let residual = (sharp - smoothed).norm();
    EdgeReport {
        sharp,
        smoothed,
        residual,
        edge_count,
        window,
        within_bound: residual <= edge_count as f64 + 1e-9,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExplicitRhs {
    pub value: f64,
    /// false when T lies outside [1, sqrt(X)]
    pub in_range: bool,
}

/// `X^2/2 + 2 Re sum_{0 < r_j <= T} X^{1+ir_j} / (1 + i r_j)`.
pub fn explicit_rhs(table: &SpectralTable, t: f64, x: f64) -> ExplicitRhs {
    let end = table.values.partition_point(|&r| r <= t);
    let s = chunked_sum(&table.values[..end], |r| x * x_pow_ir(x, r) / C64::new(1.0, r));
    ExplicitRhs { value: x * x / 2.0 + 2.0 * s.re, in_range: (1.0..=x.sqrt()).contains(&t) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn synthetic(n: usize, seed: u64) -> SpectralTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = 3.5;
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            r += rng.gen_range(0.01..0.3);
            v.push(r);
        }
        SpectralTable::new(v, "synthetic").unwrap()
    }

    #[test]
    fn parsing() {
        let t = parse_table("8.5\n11.2\n").unwrap();
        assert_eq!(t.values, vec![8.5, 11.2]);
        assert!(matches!(parse_table("3.0\n2.0"), Err(Error::NonAscending { line: 2 })));
        assert!(matches!(parse_table("1.0\n-2.0"), Err(Error::NonPositive { line: 2 })));
        assert!(matches!(parse_table("1.0\nabc"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_table("").unwrap().is_empty());
        let t = parse_table("# source: synthetic\n2.0 # low\n\n5.0\n").unwrap();
        assert!(t.is_synthetic() && t.warnings().is_empty());
        let t = parse_table("# source: some table\n2.0\n").unwrap();
        assert_eq!(t.warnings().len(), 1);
        assert!(matches!(load_table("/nonexistent/table.txt"), Err(Error::Io(_))));
    }

    #[test]
    fn exp_sum_basics() {
        let empty = SpectralTable::default();
        assert_eq!(spectral_exp_sum(&empty, 10.0, 5.0), C64::new(0.0, 0.0));
        let one = SpectralTable::new(vec![4.0], "synthetic").unwrap();
        let s = spectral_exp_sum(&one, 4.0, 3.0);
        let th = 4.0 * 3f64.ln();
        assert!((s - C64::new(th.cos(), th.sin())).norm() < 1e-15);
        let tab = synthetic(5000, 1);
        let s = spectral_exp_sum(&tab, 400.0, 7.3);
        assert!(s.norm() <= tab.count_in(0.0, 400.0) as f64);
        let end = tab.values.partition_point(|&r| r <= 400.0);
        let rev: C64 = tab.values[..end].iter().rev().map(|&r| x_pow_ir(7.3, r)).sum();
        assert!((s - rev).norm() < 1e-12 * end as f64);
        // the sum of S and its conjugate is real
        assert_eq!((s + s.conj()).im, 0.0);
    }

    #[test]
    fn smoothing_limits() {
        let tab = synthetic(2000, 2);
        let (t, x) = (60.0, 11.0);
        let sharp = spectral_exp_sum(&tab, 2.0 * t, x) - spectral_exp_sum(&tab, t, x);
        let sm = smoothed_sum(&tab, t, 1e-9, x);
        assert!((sharp - sm).norm() < 1e-9);
        let single = SpectralTable::new(vec![150.0], "synthetic").unwrap();
        let g = 100f64.powf(0.1);
        let s = smoothed_sum(&single, 100.0, g, 2.0);
        assert!((s.norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn dyadic_edge_accounting() {
        let tab = synthetic(3000, 3);
        for &(t, g) in &[(200.0, 0.5), (300.0, 2.0), (128.0, 0.1)] {
            let rep = edge_check(&tab, t, g, 5.0, 3.0);
            assert!(rep.within_bound, "{rep:?}");
        }
    }

    #[test]
    fn explicit_formula_terms() {
        let empty = SpectralTable::default();
        assert_eq!(explicit_rhs(&empty, 7.0, 50.0).value, 1250.0);
        let one = SpectralTable::new(vec![6.0], "synthetic").unwrap();
        let x = 50.0;
        let v = explicit_rhs(&one, 7.0, x);
        assert!(v.in_range);
        assert!((v.value - x * x / 2.0).abs() <= 2.0 * x / 37f64.sqrt() + 1e-9);
        assert!(!explicit_rhs(&one, 20.0, x).in_range);
    }
}
