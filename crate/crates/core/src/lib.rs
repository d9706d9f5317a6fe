//! Exact computational algebra for eleven-dimensional Cahen-Wallach spaces:
//! Clifford machinery, Killing fields, spinor connections, geometric
//! superalgebras and the classification of their parameter space.

pub mod clifford_core;
pub mod error;
pub mod matrix;
pub mod scalar;
pub mod series;
pub mod cahen_wallach;
pub mod spinor_connection;
pub mod superalgebra;
pub mod moduli;
pub mod export;

pub use error::{Error, Result};
pub use scalar::{Field, GRat, GaussianRational, Rational, Scalar};
