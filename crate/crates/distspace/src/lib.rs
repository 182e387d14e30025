//! Distance-geometry toolkit for pair-distance sets: realizability in R^d,
//! coordinate embedding, detection and construction of degenerate
//! (same-distance-multiset, non-congruent) configurations, circuit
//! diagnostics and lattice spectra.

pub mod analysis;
pub mod constructions;
pub mod degeneracy;
pub mod error;
pub mod geometry;
pub mod io;
pub mod lattice;

pub use error::{Error, Result};
pub use geometry::{
    cayley_menger_squared_volume, congruent, embed, embed_lax, free_dimension,
    gram_from_distances, pairwise_distances, realizability_check, simplex_inequality_holds,
    DistanceAssignment, DistanceMultiset, FeasibilityReport, PointConfiguration, REFERENCE_TOL,
    STRUCTURAL_TOL,
};
