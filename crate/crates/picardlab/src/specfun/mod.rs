//! Special functions.

pub mod bessel;
pub mod gamma;
pub mod hyp2f1;
pub mod motohashi;

pub use bessel::{bessel_j, bessel_j_all, bessel_k_imag, jstar, scaled_k_imag};
pub use gamma::{gamma_c, ln_gamma, rgamma, upper_incomplete_gamma};
pub use hyp2f1::{hyp2f1, hyp2f1_inverse};
pub use motohashi::{
    bessel_addition_check, h_check, motohashi_k, motohashi_k_def, motohashi_k_rep1,
    motohashi_k_rep2,
};
