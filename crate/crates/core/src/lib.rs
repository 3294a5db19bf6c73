//! Exact arithmetic for the numerical classification of three-fold
//! divisorial contractions to points.

pub mod arith;
pub mod blowup;
pub mod classification;
pub mod cli;
pub mod covering;
pub mod dims;
pub mod error;
pub mod germ;
pub mod lattice;
pub mod poly;
pub mod rr;
pub mod singularity;
pub mod verifier;

pub use arith::Rational;
pub use error::{Error, Result};
