//! The inhomogeneous and homogeneous bar resolutions.

mod complex;
mod paths;

use thiserror::Error;

pub use complex::{
    alt_operator, hom_inhom_isos, homotopy_operator, homotopy_terms, induced_chain_map,
    l1_operator_norm, permutations, twisted_chain_map, BarComplex,
};
pub use paths::{
    act, boundary, cone, count_paths, count_reps, hom_to_inhom, inhom_to_hom, rep_of, sign,
    BarKind, Chain, PathBasis, RepBasis,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("degree {degree} needs {count} basis paths, above the cap {cap}")]
    PathCap { degree: usize, count: u128, cap: usize },
}
