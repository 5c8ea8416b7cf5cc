//! Strong resolutions, comparison maps to the standard resolution, and
//! relative-injectivity witnesses.

pub mod comparison;
pub mod injective;
pub mod resolution;

use std::sync::Arc;

use thiserror::Error;

use crate::coefficients::CoefficientError;
use crate::cohomology::CohomologyError;
use crate::exact::{NormError, PolyhedralNorm, SparseMatrix, Q};
use crate::groupoid::{FiniteGroupoid, GroupoidError};
use crate::resolutions::ResolutionError;

pub use comparison::{comparison_map, pair_comparison_map, ComparisonMap, PairComparison};
pub use injective::{verify_relative_injectivity_witness, InjectivityWitness};
pub use resolution::{
    homogeneous_pair_resolution, homogeneous_resolution, standard_pair_resolution, standard_resolution,
    AugmentedResolution, PairResolution,
};

#[derive(Debug, Error)]
pub enum HomalgError {
    #[error("resolution is not strong: {0}")]
    NotStrong(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("not a split: {0}")]
    NotSplit(String),
    #[error("target is not of standard form: {0}")]
    NotStandard(String),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

impl HomalgError {
    pub fn is_resource_cap(&self) -> bool {
        match self {
            HomalgError::Resolution(ResolutionError::PathCap { .. }) => true,
            HomalgError::Norm(e) | HomalgError::Coefficient(CoefficientError::Norm(e)) => matches!(
                e,
                NormError::LpTooLarge { .. } | NormError::DimCap { .. } | NormError::TooLarge(_)
            ),
            HomalgError::Cohomology(e) => e.is_resource_cap(),
            _ => false,
        }
    }
}

/// A normed module whose action matrices are stored sparsely; used for the
/// large cochain modules of the resolutions.
#[derive(Debug, Clone)]
pub struct SparseModule {
    pub base: Arc<FiniteGroupoid>,
    pub norms: Vec<PolyhedralNorm>,
    pub action: Vec<SparseMatrix>,
}

impl SparseModule {
    pub fn dim(&self, e: usize) -> usize {
        self.norms[e].dim()
    }

    /// Identity and composition axioms, checked exhaustively.
    pub fn audit_action(&self) -> Result<(), HomalgError> {
        let g = &self.base;
        for e in 0..g.num_objects() {
            if !self.action[g.id(e)].is_identity() {
                return Err(HomalgError::Audit(format!("identity at object {e} acts nontrivially")));
            }
        }
        for a in 0..g.num_morphisms() {
            for &b in g.fiber(g.source(a)) {
                let ab = g.compose_unchecked(a, b);
                if !self.action[a].mul(&self.action[b]).sub(&self.action[ab]).is_zero() {
                    return Err(HomalgError::Audit(format!("action not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    /// Whether every action matrix has operator norm at most 1.
    pub fn isometric_bound(&self) -> Result<bool, HomalgError> {
        let g = &self.base;
        for a in 0..g.num_morphisms() {
            let n = PolyhedralNorm::operator_norm_sparse(
                &self.action[a],
                &self.norms[g.source(a)],
                &self.norms[g.target(a)],
            )?;
            if n > Q::one() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Whether per-object maps `f_e : V_e → W_e` satisfy `ρ^W_a f_{s(a)} = f_{t(a)} ρ^V_a`.
pub fn is_equivariant(g: &FiniteGroupoid, f: &[SparseMatrix], dom: &[SparseMatrix], cod: &[SparseMatrix]) -> bool {
    (0..g.num_morphisms()).all(|a| {
        cod[a]
            .mul(&f[g.source(a)])
            .sub(&f[g.target(a)].mul(&dom[a]))
            .is_zero()
    })
}

/// Largest operator norm of the per-object components.
pub fn max_operator_norm(f: &[SparseMatrix], dom: &[PolyhedralNorm], cod: &[PolyhedralNorm]) -> Result<Q, NormError> {
    let mut best = Q::zero();
    for (e, m) in f.iter().enumerate() {
        best = best.max(PolyhedralNorm::operator_norm_sparse(m, &dom[e], &cod[e])?);
    }
    Ok(best)
}
