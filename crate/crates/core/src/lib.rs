//! Exact potential theory and rational dynamics on the Berkovich projective
//! line over C_p, restricted to rational data.

pub mod berk_points;
pub mod capacity;
pub mod dynamics;
pub mod error;
pub mod exact_numbers;
pub mod export;
pub mod ffield;
pub mod harmonic;
pub mod kernels;
pub mod linalg;
pub mod metrized_graph;
pub mod poly;
pub mod sampling;

pub use error::{Error, Result};
