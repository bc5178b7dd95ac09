//! Weighted Grace–Szegő type convolutions, the separation classes they preserve,
//! zero-domain predicates and a randomized verification harness.

pub mod classes;
pub mod domains;
pub mod error;
pub mod harness;
pub mod herglotz;
pub mod poly;
pub mod qconv;
pub mod roots;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::{LambdaParam, Polynomial, COEFF_TOL};
