//! Exact graded commutative algebra for deciding smoothness of dg-algebras
//! over a graded polynomial base: minimal resolutions, derived fibers,
//! quasi-isomorphism checks, and equivariant cohomology of homogeneous spaces.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod dga;
pub mod equivariant;
pub mod exact;
pub mod json;
pub mod module;
pub mod par;
pub mod poly;
pub mod resolution;
pub mod smoothness;
pub mod weyl;

pub use error::{Error, Result};
