//! Exact brace calculus on Hochschild spaces of finite A∞-categories over ℚ.
//!
//! Cochains are sparse, homogeneous and truncated at an explicit weight
//! cutoff. All arithmetic is exact.

pub mod ainfinity;
pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod graded_core;
pub mod hochschild;
pub mod kgraph;
pub mod linalg;
pub mod maurer_cartan;
pub mod prelie;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;
