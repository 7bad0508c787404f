//! Partition functions of vertex and edge coloring models on multigraphs,
//! the vertex-to-edge model transform, and edge reflection positivity.

pub mod connection;
pub mod erp;
pub mod error;
pub mod graph;
pub mod kempf_ness;
pub mod linalg;
pub mod models;
pub mod selftest;
pub mod szegedy;
pub mod tolerance;
pub mod wire;

pub use error::{Error, Result};
pub use num_complex::Complex64;
