//! Exact-arithmetic generalized mixed Hodge structures.
//!
//! The crate models bifiltered rational vector spaces (weight and Hodge
//! filtrations), mixed Hodge structures and their generalization carrying
//! families of semilinear and linear operators, the weight spectral sequence
//! of a smooth variety with a strict normal crossings compactification, and
//! the Ext-group machinery (one-extensions, Yoneda two-extensions, roof
//! equivalences) needed to exhibit a non-vanishing Ext² class.
//!
//! All arithmetic is exact, over ℚ and ℚ(i); there is no floating point
//! anywhere in the crate.

pub mod builders;
pub mod error;
pub mod example33;
pub mod fixtures;
pub mod ext;
pub mod gmhs;
pub mod hodge;
pub mod linalg;
pub mod sampling;
pub mod scenario;

pub use error::{Check, Error, Result, ValidationReport};
pub use linalg::{GaussRat, Matrix, Rat, Subspace};
