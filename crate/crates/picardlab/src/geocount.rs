//! Enumeration of hyperbolic and loxodromic elements of PSL(2, Z[i]) in a
//! height box, heuristic conjugacy classes, and the counting functions
//! pi(X), Psi(X) and E(X) = Psi(X) - X^2/2.
//!
//! Classes are found by merging elements related by a conjugator of bounded
//! height, so class counts are upper bounds; every report carries the box
//! heights and a `complete` flag set only when doubling the conjugator
//! height leaves the inventory unchanged.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::gint::{enumerate_by_norm, gcd0, GaussianInt};
use crate::hyp3::{classify, expanding_root, multiplier, Matrix2};
use crate::{Error, Result, C64};

/// All determinant-one matrices with entry norms <= `h`, sign-canonical,
/// hyperbolic or loxodromic, sorted.
pub fn enumerate_elements(h: i64) -> Vec<Matrix2> {
    enumerate_det_one(h).into_iter().filter(|m| classify(m).has_axis()).collect()
}

/// Every element of PSL(2, Z[i]) with entry norms <= `h`, sorted.
pub fn enumerate_det_one(h: i64) -> Vec<Matrix2> {
    let mut box_elems = enumerate_by_norm(h);
    box_elems.push(GaussianInt::ZERO);
    let one = GaussianInt::ONE;
    let mut out: Vec<Matrix2> = box_elems
        .par_iter()
        .flat_map_iter(|&a| {
            let mut v = Vec::new();
            if a.is_zero() {
                // bc = -1
                for &b in box_elems.iter().filter(|b| b.is_unit()) {
                    let c = -b.conj();
                    for &d in &box_elems {
                        v.push(Matrix2::from_raw(a, b, c, d));
                    }
                }
            } else {
                for &b in &box_elems {
                    for &c in &box_elems {
                        if let Some(d) = (one + b * c).div_exact(a) {
                            if d.norm() <= h {
                                v.push(Matrix2::from_raw(a, b, c, d));
                            }
                        }
                    }
                }
            }
            v
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Largest X for which the height box `h` is taken to hold a representative
/// of every class of norm <= X: the norm at which |tr|^2 reaches `h`.
pub fn certified_x(h: i64) -> f64 {
    if h < 4 {
        return 1.0;
    }
    let hf = h as f64;
    ((hf.sqrt() + (hf - 4.0).sqrt()) / 2.0).powi(2)
}

/// Exact square root in Z[i], if any.
fn gauss_sqrt(q: GaussianInt) -> Option<GaussianInt> {
    let r = q.to_c64().sqrt();
    let u = GaussianInt::new(r.re.round() as i64, r.im.round() as i64);
    (u * u == q).then_some(u)
}

/// The element `alpha I + beta T` of trace `sigma` in the centralizer of `t`,
/// if it has entries in Z[i]. The commutant of a non-scalar matrix is
/// spanned by I and T; det = 1 forces `beta^2 (4 - tr^2) = 4 - sigma^2`.
pub fn centralizer_element(t: &Matrix2, sigma: GaussianInt) -> Option<Matrix2> {
    let tau = t.trace();
    let diff = t.a - t.d;
    let g = gcd0(gcd0(t.b, t.c), diff);
    let four = GaussianInt::from(4);
    let den = four - tau * tau;
    if g.is_zero() || den.is_zero() {
        return None;
    }
    // beta = u / g with u in Z[i]
    let q = (g * g * (four - sigma * sigma)).div_exact(den)?;
    let u0 = gauss_sqrt(q)?;
    let two = GaussianInt::from(2);
    for u in [u0, -u0] {
        let ud = u * diff.div_exact(g)?;
        let (Some(a), Some(d)) = ((sigma + ud).div_exact(two), (sigma - ud).div_exact(two)) else {
            continue;
        };
        let b = u * t.b.div_exact(g)?;
        let c = u * t.c.div_exact(g)?;
        if let Ok(m) = Matrix2::new(a, b, c, d) {
            return Some(m);
        }
    }
    None
}

/// Order of the torsion subgroup of the centralizer of `t`: rotations about
/// the axis have trace 0 (order 2) or +-1 (order 3, with its inverse).
pub fn torsion_order(t: &Matrix2) -> u32 {
    let mut m = 1;
    if centralizer_element(t, GaussianInt::ZERO).is_some() {
        m += 1;
    }
    if centralizer_element(t, GaussianInt::ONE).is_some() {
        m += 2;
    }
    m
}

/// A primitive element `t0` of the centralizer with `N(t) = N(t0)^k`.
pub fn primitive_root(t: &Matrix2) -> Result<(Matrix2, u32)> {
    let a = multiplier(t)?.a;
    let ln_n = a.norm_sqr().ln();
    // smallest norm in PSL(2, Z[i]) is above 2.6, so k <= log N / log 2.6
    let kmax = (ln_n / 2.6f64.ln()).floor().max(1.0) as u32;
    for k in (2..=kmax).rev() {
        for w in 0..12 {
            let omega = C64::from_polar(1.0, std::f64::consts::PI * w as f64 / 6.0);
            let base = a * omega;
            for j in 0..k {
                let root = C64::from_polar(
                    base.norm().powf(1.0 / k as f64),
                    (base.arg() + 2.0 * std::f64::consts::PI * j as f64) / k as f64,
                );
                let s = root + 1.0 / root;
                let sigma = GaussianInt::new(s.re.round() as i64, s.im.round() as i64);
                if (sigma.to_c64() - s).norm() > 1e-6 {
                    continue;
                }
                if let Some(g) = centralizer_element(t, sigma) {
                    if classify(&g).has_axis() {
                        return Ok((g, k));
                    }
                }
            }
        }
    }
    Ok((*t, 1))
}

/// One conjugacy class found in the box.
#[derive(Clone, Debug, Serialize)]
pub struct ClassRecord {
    pub representative: Matrix2,
    pub trace: GaussianInt,
    #[serde(rename = "N_T")]
    pub n_t: f64,
    #[serde(rename = "N_T0")]
    pub n_t0: f64,
    /// `N_T = N_T0^power`
    pub power: u32,
    #[serde(rename = "m_T")]
    pub m_t: u32,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub primitive: bool,
    /// number of enumerated elements merged into the class
    pub members: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }
    fn union(&mut self, i: usize, j: usize) {
        let (a, b) = (self.find(i), self.find(j));
        // the smaller index wins, so roots are lexically least
        if a < b {
            self.0[b] = a;
        } else if b < a {
            self.0[a] = b;
        }
    }
}

/// Merge elements related by a conjugator of entry norm <= `conj_height`.
/// Input must be sorted; records come out in representative order.
pub fn conjugacy_classes(elements: &[Matrix2], conj_height: i64) -> Vec<ClassRecord> {
    let index: HashMap<Matrix2, usize> = elements.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let conjugators: Vec<Matrix2> =
        enumerate_det_one(conj_height).into_iter().filter(|g| !g.is_identity()).collect();
    let links: Vec<(usize, usize)> = elements
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, m)| {
            conjugators
                .iter()
                .filter_map(|g| index.get(&m.conjugate_by(g)).map(|&j| (i, j)))
                .filter(|&(i, j)| j < i)
                .collect::<Vec<_>>()
        })
        .collect();
    let mut uf = UnionFind((0..elements.len()).collect());
    for (i, j) in links {
        uf.union(i, j);
    }
    let mut groups: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..elements.len() {
        *groups.entry(uf.find(i)).or_default() += 1;
    }
    groups
        .into_par_iter()
        .map(|(root, members)| class_record(&elements[root], members))
        .collect()
}

fn class_record(rep: &Matrix2, members: usize) -> ClassRecord {
    let mu = multiplier(rep).expect("enumerated elements are hyperbolic or loxodromic");
    let (t0, k) = primitive_root(rep).expect("enumerated elements are hyperbolic or loxodromic");
    let n_t0 = multiplier(&t0).map(|m| m.n).unwrap_or(mu.n);
    let m_t = torsion_order(rep);
    ClassRecord {
        representative: *rep,
        trace: rep.canonical_trace(),
        n_t: mu.n,
        n_t0,
        power: k,
        m_t,
        lambda: lambda(mu.a, n_t0, m_t),
        primitive: k == 1,
        members,
    }
}

/// `Lambda(T) = log N(T0) / (m(T) |a(T) - a(T)^{-1}|^2)`.
pub fn lambda(a: C64, n_t0: f64, m_t: u32) -> f64 {
    n_t0.ln() / (m_t as f64 * (a - 1.0 / a).norm_sqr())
}

/// Counting-function report for one X.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    #[serde(rename = "X")]
    pub x: f64,
    pub pi_gamma: u64,
    pub psi_gamma: f64,
    #[serde(rename = "E_gamma")]
    pub e_gamma: f64,
    #[serde(rename = "H")]
    pub h: i64,
    pub conj_height: i64,
    pub complete: bool,
}

pub const DEFAULT_CONJ_HEIGHT: i64 = 2;

/// Classes of norm <= certified_x(h), built once and queried for many X.
#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub h: i64,
    pub conj_height: i64,
    pub x_max: f64,
    pub complete: bool,
    pub classes: Vec<ClassRecord>,
}

impl Census {
    pub fn build(h: i64, conj_height: i64) -> Result<Self> {
        if h < 1 || conj_height < 1 {
            return Err(Error::InvalidArgument("box heights must be positive".into()));
        }
        let x_max = certified_x(h);
        let elements: Vec<Matrix2> = enumerate_elements(h)
            .into_iter()
            .filter(|m| expanding_root(m.trace().to_c64()).norm_sqr() <= x_max * (1.0 + 1e-12))
            .collect();
        let classes = conjugacy_classes(&elements, conj_height);
        let doubled = conjugacy_classes(&elements, 2 * conj_height);
        let complete = inventory(&classes) == inventory(&doubled);
        Ok(Self { h, conj_height, x_max, complete, classes })
    }

    /// pi(X), Psi(X) and E(X). Psi weights each class by N(T) Lambda(T),
    /// the normalization under which Psi(X) ~ X^2/2.
    pub fn count(&self, x: f64) -> Result<CountReport> {
        if !(x > 1.0) {
            return Err(Error::InvalidArgument("X must exceed 1".into()));
        }
        if x > self.x_max * (1.0 + 1e-12) {
            return Err(Error::IncreaseH { h: self.h, x });
        }
        let mut pi = 0;
        let mut psi = 0.0;
        for c in self.classes.iter().filter(|c| c.n_t <= x) {
            if c.primitive {
                pi += 1;
            }
            psi += c.n_t * c.lambda;
        }
        Ok(CountReport {
            x,
            pi_gamma: pi,
            psi_gamma: psi,
            e_gamma: psi - x * x / 2.0,
            h: self.h,
            conj_height: self.conj_height,
            complete: self.complete,
        })
    }
}

fn inventory(classes: &[ClassRecord]) -> Vec<(Matrix2, usize)> {
    classes.iter().map(|c| (c.representative, c.members)).collect()
}

pub fn count(x: f64, h: i64) -> Result<CountReport> {
    if x > certified_x(h) * (1.0 + 1e-12) {
        return Err(Error::IncreaseH { h, x });
    }
    Census::build(h, DEFAULT_CONJ_HEIGHT)?.count(x)
}
