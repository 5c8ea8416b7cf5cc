//! Means on finite groupoids, averaging operators on the homogeneous
//! resolution, and the vanishing and mapping checks built on them.

pub mod averaging;
pub mod checks;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::coefficients::{dual_module, linf_module, trivial_module, CoefficientError, EquivariantMap, NormedModule};
use crate::cohomology::CohomologyError;
use crate::exact::{NormError, PolyhedralNorm, RationalMatrix, Q};
use crate::groupoid::{FiniteGroupoid, GroupoidError};
use crate::homalg::HomalgError;

pub use averaging::{averaging_operator, AveragingAudit, AveragingOperator};
pub use checks::{
    algebraic_mapping_theorem_check, amenable_vanishing_check, converse_amenability_probe, factorization_check,
    FactorizationReport, MappingTheoremReport, VanishingReport,
};

#[derive(Debug, Error)]
pub enum AmenabilityError {
    #[error("expected a mean with scalar coefficients")]
    NotScalar,
    #[error("mean does not match the coefficients: {0}")]
    Mismatch(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Homalg(#[from] HomalgError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

impl AmenabilityError {
    pub fn is_resource_cap(&self) -> bool {
        match self {
            AmenabilityError::Cohomology(e) => e.is_resource_cap(),
            AmenabilityError::Homalg(e) => e.is_resource_cap(),
            AmenabilityError::Norm(e) | AmenabilityError::Coefficient(CoefficientError::Norm(e)) => matches!(
                e,
                NormError::LpTooLarge { .. } | NormError::DimCap { .. } | NormError::TooLarge(_)
            ),
            _ => false,
        }
    }
}

/// An equivariant mean `m_e : ℓ∞(G, V)_e → V_e`.
#[derive(Debug, Clone)]
pub struct Mean {
    pub base: Arc<FiniteGroupoid>,
    pub coefficients: Arc<NormedModule>,
    pub linf: Arc<NormedModule>,
    /// `c_V : V → ℓ∞(G, V)`
    pub constants: EquivariantMap,
    pub components: Vec<RationalMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeanAudit {
    pub equivariant: bool,
    pub norm: Q,
    pub retraction: bool,
}

impl MeanAudit {
    pub fn passed(&self) -> bool {
        self.equivariant && self.retraction && (self.norm == Q::one() || self.norm.is_zero())
    }
}

impl Mean {
    pub fn audit(&self) -> Result<MeanAudit, AmenabilityError> {
        let g = &self.base;
        let (v, l) = (&self.coefficients, &self.linf);
        let equivariant = (0..g.num_morphisms()).all(|a| {
            v.action(a).mul(&self.components[g.source(a)]) == self.components[g.target(a)].mul(l.action(a))
        });
        let mut norm = Q::zero();
        for (e, m) in self.components.iter().enumerate() {
            norm = norm.max(PolyhedralNorm::operator_norm(m, l.norm(e), v.norm(e))?);
        }
        let retraction = self
            .components
            .iter()
            .zip(&self.constants.components)
            .all(|(m, c)| m.mul(c).is_identity());
        Ok(MeanAudit {
            equivariant,
            norm,
            retraction,
        })
    }

    /// The block of `m_e` acting on the value at fiber position `k`.
    pub fn block(&self, e: usize, k: usize) -> RationalMatrix {
        let d = self.coefficients.dim(e);
        let idx: Vec<usize> = (k * d..(k + 1) * d).collect();
        self.components[e].select_columns(&idx)
    }
}

/// The average over `t⁻¹(e)`, with scalar coefficients.
pub fn uniform_mean(g: &Arc<FiniteGroupoid>) -> Mean {
    let v = Arc::new(trivial_module(g));
    let (linf, constants) = linf_module(&v).expect("bounded functions on a finite groupoid");
    let components = (0..g.num_objects())
        .map(|e| {
            let n = g.fiber(e).len();
            let w = Q::from_int(n as i64).recip();
            RationalMatrix::from_rows(vec![vec![w; n]], n)
        })
        .collect();
    Mean {
        base: g.clone(),
        coefficients: v,
        linf,
        constants,
        components,
    }
}

/// `m_V(φ)(w) = m(g ↦ φ(g)(w))` with coefficients the dual of `v`.
pub fn dual_coefficient_mean(m: &Mean, v: &Arc<NormedModule>) -> Result<Mean, AmenabilityError> {
    if m.coefficients.dims().iter().any(|&d| d != 1) {
        return Err(AmenabilityError::NotScalar);
    }
    if *m.base != *v.base {
        return Err(AmenabilityError::Mismatch("mean and module live over different groupoids".into()));
    }
    let dual = Arc::new(dual_module(v)?);
    let (linf, constants) = linf_module(&dual)?;
    let components = (0..m.base.num_objects())
        .map(|e| {
            let d = dual.dim(e);
            let n = m.base.fiber(e).len();
            let mut c = RationalMatrix::zeros(d, n * d);
            for k in 0..n {
                let w = m.components[e].get(0, k);
                if !w.is_zero() {
                    for i in 0..d {
                        c.set(i, k * d + i, w.clone());
                    }
                }
            }
            c
        })
        .collect();
    Ok(Mean {
        base: m.base.clone(),
        coefficients: dual,
        linf,
        constants,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::GroupTable;

    #[test]
    fn uniform_means_pass_audits() {
        let z2 = GroupTable::cyclic(2);
        let groupoids = [
            FiniteGroupoid::from_group(&GroupTable::trivial()),
            FiniteGroupoid::from_group(&z2),
            FiniteGroupoid::from_group(&GroupTable::symmetric3()),
            FiniteGroupoid::blow_up(&z2, 2).unwrap(),
        ];
        for g in groupoids {
            let g = Arc::new(g);
            let m = uniform_mean(&g);
            let a = m.audit().unwrap();
            assert!(a.passed(), "{a:?}");
            assert_eq!(a.norm, Q::one());
        }
    }

    #[test]
    fn z2_mean_is_half_sum() {
        let g = Arc::new(FiniteGroupoid::from_group(&GroupTable::cyclic(2)));
        let m = uniform_mean(&g);
        assert_eq!(m.components[0], RationalMatrix::from_rows(vec![vec![Q::new(1, 2), Q::new(1, 2)]], 2));
        let bl = Arc::new(FiniteGroupoid::blow_up(&GroupTable::cyclic(2), 2).unwrap());
        let m = uniform_mean(&bl);
        assert!(m.components.iter().all(|c| c.cols() == 4 && c.row(0).iter().all(|w| *w == Q::new(1, 4))));
    }

    #[test]
    fn dual_mean_of_bounded_functions() {
        let g = Arc::new(FiniteGroupoid::from_group(&GroupTable::cyclic(2)));
        let m = uniform_mean(&g);
        let triv = Arc::new(trivial_module(&g));
        let md = dual_coefficient_mean(&m, &triv).unwrap();
        assert_eq!(md.components, m.components);
        let (l, _) = linf_module(&triv).unwrap();
        let md = dual_coefficient_mean(&m, &l).unwrap();
        assert_eq!(md.coefficients.dim(0), 2);
        let a = md.audit().unwrap();
        assert!(a.passed(), "{a:?}");
        assert_eq!(a.norm, Q::one());
        assert!(matches!(dual_coefficient_mean(&md, &l), Err(AmenabilityError::NotScalar)));
    }
}
