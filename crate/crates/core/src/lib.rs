//! Numerical model of the operator-valued Fourier transform of SL(2,R).
//!
//! The crate realizes, on finite K-type windows, the principal and
//! complementary series of SL(2,R), the standard intertwining operators and
//! their eigenvalue ratios, the topology of the unitary dual, the
//! norm-control maps that transport operator fields across the boundary
//! strata of the dual, and the resulting continuous-field model with its
//! forward and backward transforms.

pub mod config;
pub mod dual;
pub mod error;
pub mod fields;
pub mod group;
pub mod harmonics;
pub mod intertwiner;
pub mod norm_control;
pub mod operator;
pub mod principal;
pub mod quadrature;
pub mod suites;
pub mod testfn;

pub use error::{Error, Result};
