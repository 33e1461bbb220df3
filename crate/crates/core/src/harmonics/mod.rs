//! Spherical harmonics on ℝ^k, the operator families of the boundary
//! Laplacian on harmonic truncations and the κ intertwining map.

pub mod certificate;
pub mod dense;
pub mod ops;
pub mod poly;

pub use certificate::*;
pub use dense::{harmonic_dimension, harmonic_recursion, dimension_free_recursion, GradedSpace, HarmonicBasis, MonomialBasis};
pub use ops::*;
pub use poly::{sphere_inner, sphere_moment, sphere_volume, theta, GradedPoly};
