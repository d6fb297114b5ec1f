//! Exact and certified distances from functions on the discrete hypercube
//! {-1,1}^n to Walsh tail spaces, the K-functionals that bound them, and a
//! registry of numerical checks for the underlying inequalities.

pub mod chebyshev;
pub mod config;
pub mod distance;
pub mod error;
pub mod harness;
pub mod hypercube;
pub mod kfunctional;
pub mod lp;
pub mod symmetric;

pub use error::{Error, Result};
pub use hypercube::{BooleanFunction, Capacity, FunctionData, FunctionJson, Lp, SpectralSet, Spectrum};
