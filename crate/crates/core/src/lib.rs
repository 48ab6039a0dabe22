//! Exact symbolic tensor calculus for two-dimensional affine connections
//! with torsion: torsion, curvature, Ricci and covariant derivatives over an
//! exact rational-function backend or a truncated-jet numeric backend, gauge
//! actions, and classification of symmetric affine surfaces into their
//! normal-form families.

pub mod error;
pub mod catalog;
pub mod classify;
pub mod connection;
pub mod connfile;
pub mod expr;
pub mod gauge;
pub mod report;
pub mod scalar;
pub mod tensor;

pub use error::Error;
