//! Numerical toolkit for the Picard group PSL(2, Z[i]).
//!
//! Exact Gaussian-integer arithmetic, Kloosterman sums and quadratic
//! congruences, zeta and L-functions of Q(i), special functions, the weight
//! functions of the moment machinery, hyperbolic 3-space geometry, geodesic
//! counting and spectral exponential sums.

pub mod congruence;
pub mod error;
pub mod expsums;
pub mod geocount;
pub mod gint;
pub mod hyp3;
pub mod lfun;
pub mod moments;
pub mod quad;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
pub use geocount::{ClassRecord, CountReport};
pub use gint::{Factorization, GaussianInt};
pub use hyp3::{Classification, Matrix2, Point3};
pub use lfun::{LerchSpec, SeriesParams};
pub use moments::{WeightSpec, XPlusMinus};
pub use num_complex::Complex64;
pub use quad::QuadratureSpec;
pub use spectral::SpectralTable;

pub type C64 = Complex64;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
