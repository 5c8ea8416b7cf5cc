//! Bounded cochain complexes, absolute and relative cohomology with exact
//! seminorms, the long exact sequence of a pair, and the standard checks.

pub mod checks;
pub mod complex;
pub mod reduced;
pub mod relative;

use thiserror::Error;

use crate::coefficients::CoefficientError;
use crate::exact::NormError;
use crate::groupoid::GroupoidError;
use crate::resolutions::ResolutionError;

pub use crate::limits::Limits;
pub use checks::{additivity_check, equivalence_invariance_check, is_equivalence, AdditivityReport, EquivalenceReport};
pub use complex::{is_cochain_map, CochainComplex, CohomologyDegree, Seminorm};
pub use reduced::{cochain_complex, cochain_complex_of_kind, cochain_norm, transport, CochainComplexDesc, ReducedBasis};
pub use relative::{
    connecting_cochain, family_cohomology, family_pair, les_of, long_exact_sequence, relative_cohomology, relative_complex,
    relative_complex_of_kind,
    FamilyCohomology, FamilyPair, LesDegree, LongExactSequence, RelativeComplexDesc, SlotCheck,
};

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("vector is not a cocycle in degree {degree}")]
    NotCocycle { degree: usize },
    #[error("degree {degree} is above the computed range (top {top})")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("restriction in degree {degree} has rank {rank}, expected {dim}")]
    RestrictionNotSurjective { degree: usize, rank: usize, dim: usize },
    #[error("family member {0} is not a subgroup")]
    NotSubgroup(usize),
    #[error("invalid equivalence witness: {0}")]
    WitnessInvalid(String),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

impl CohomologyError {
    /// Whether the failure is a resource cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            CohomologyError::Resolution(ResolutionError::PathCap { .. })
                | CohomologyError::Norm(NormError::LpTooLarge { .. })
                | CohomologyError::Norm(NormError::DimCap { .. })
                | CohomologyError::Norm(NormError::TooLarge(_))
                | CohomologyError::Coefficient(CoefficientError::Norm(NormError::DimCap { .. }))
                | CohomologyError::Coefficient(CoefficientError::Norm(NormError::TooLarge(_)))
        )
    }
}
