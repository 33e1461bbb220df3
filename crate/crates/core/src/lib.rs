//! Isospectral 2-step nilpotent metric Lie groups and their solvable
//! extensions.
//!
//! The crate builds groups from endomorphism spaces with anticommutators,
//! runs the σ- and unit-anticommutator deformations, and certifies
//! isospectrality (intertwining operators on harmonic truncations,
//! reduced-operator spectra) and non-isometry (curvature invariants on the
//! groups and on sphere-type hypersurfaces).

pub mod algebra;
pub mod endospace;
pub mod error;
pub mod harmonics;
pub mod hypersurface;
pub mod linalg;
pub mod nilgeom;
pub mod rng;
pub mod solvgeom;
pub mod spectra;

pub use error::{Error, Result};
