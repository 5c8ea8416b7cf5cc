//! Normed equivariant modules and the functors between them.

mod constructions;
mod module;

use thiserror::Error;

use crate::exact::NormError;

pub use constructions::{
    dual_module, fiber_positions, hom_module, homotopy_action, invariants, linf_module,
    normed_product, pullback, sigma_module, trivial_module, unvectorize, vectorize, Invariants,
    SigmaModule,
};
pub use module::{EquivariantMap, NormedModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoefficientError {
    #[error("modules live over different groupoids")]
    BaseMismatch,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("action axiom violated: {0}")]
    ActionAxiom(String),
    #[error("morphism {0} does not act isometrically")]
    NotIsometric(usize),
    #[error("map is not equivariant at morphism {0}")]
    NotEquivariant(usize),
    #[error(transparent)]
    Norm(#[from] NormError),
}
