//! Exact computations with KLR algebras, their cyclotomic quotients and
//! trace decategorification.

pub mod bubbles;
pub mod cartan;
pub mod current;
pub mod cyclo;
pub mod error;
pub mod graded;
pub mod hh0;
pub mod klr;
pub mod linalg;
pub mod rho;
pub mod scalar;
pub mod symfunc;

pub use error::{Error, Result};
pub use scalar::Q;
