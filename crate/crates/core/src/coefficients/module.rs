//! Normed modules over a finite groupoid and equivariant maps between them.

use std::sync::Arc;

use crate::exact::{PolyhedralNorm, RationalMatrix, Q};
use crate::groupoid::FiniteGroupoid;

use super::CoefficientError;

/// A family of normed spaces indexed by objects, acted on isometrically:
/// `action[g]` maps the fiber at `s(g)` to the fiber at `t(g)`.
#[derive(Debug, Clone)]
pub struct NormedModule {
    pub base: Arc<FiniteGroupoid>,
    dims: Vec<usize>,
    norms: Vec<PolyhedralNorm>,
    action: Vec<RationalMatrix>,
}

impl NormedModule {
    /// Builds and audits.
    pub fn new(
        base: Arc<FiniteGroupoid>,
        norms: Vec<PolyhedralNorm>,
        action: Vec<RationalMatrix>,
    ) -> Result<Self, CoefficientError> {
        let m = Self::new_unchecked(base, norms, action)?;
        m.audit()?;
        Ok(m)
    }

    /// Builds after checking only the shapes.
    pub fn new_unchecked(
        base: Arc<FiniteGroupoid>,
        norms: Vec<PolyhedralNorm>,
        action: Vec<RationalMatrix>,
    ) -> Result<Self, CoefficientError> {
        if norms.len() != base.num_objects() {
            return Err(CoefficientError::Shape(format!(
                "{} fiber norms for {} objects",
                norms.len(),
                base.num_objects()
            )));
        }
        if action.len() != base.num_morphisms() {
            return Err(CoefficientError::Shape(format!(
                "{} action matrices for {} morphisms",
                action.len(),
                base.num_morphisms()
            )));
        }
        let dims: Vec<usize> = norms.iter().map(PolyhedralNorm::dim).collect();
        for (g, a) in action.iter().enumerate() {
            if a.rows() != dims[base.target(g)] || a.cols() != dims[base.source(g)] {
                return Err(CoefficientError::Shape(format!(
                    "action of morphism {g} is {}x{}, expected {}x{}",
                    a.rows(),
                    a.cols(),
                    dims[base.target(g)],
                    dims[base.source(g)]
                )));
            }
        }
        Ok(NormedModule {
            base,
            dims,
            norms,
            action,
        })
    }

    /// Action axioms and isometry of every `ρ_g`, exhaustively.
    pub fn audit(&self) -> Result<(), CoefficientError> {
        let g = &self.base;
        for e in 0..g.num_objects() {
            if !self.action[g.id(e)].is_identity() {
                return Err(CoefficientError::ActionAxiom(format!("identity at object {e} acts nontrivially")));
            }
        }
        for a in 0..g.num_morphisms() {
            for &b in g.fiber(g.source(a)) {
                let ab = g.compose_unchecked(a, b);
                if self.action[ab] != self.action[a].mul(&self.action[b]) {
                    return Err(CoefficientError::ActionAxiom(format!(
                        "action of {a}∘{b} is not the product of the actions"
                    )));
                }
            }
        }
        for a in 0..g.num_morphisms() {
            let n = PolyhedralNorm::operator_norm(
                &self.action[a],
                &self.norms[g.source(a)],
                &self.norms[g.target(a)],
            )?;
            // Together with invertibility this makes every ρ_g an isometry.
            if n > Q::one() {
                return Err(CoefficientError::NotIsometric(a));
            }
        }
        Ok(())
    }

    pub fn dim(&self, e: usize) -> usize {
        self.dims[e]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn norm(&self, e: usize) -> &PolyhedralNorm {
        &self.norms[e]
    }

    pub fn norms(&self) -> &[PolyhedralNorm] {
        &self.norms
    }

    pub fn action(&self, g: usize) -> &RationalMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[RationalMatrix] {
        &self.action
    }

    /// Offsets of the fibers inside the direct product of all fibers.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for d in &self.dims {
            out.push(acc);
            acc += d;
        }
        out
    }
}

/// An equivariant family of linear maps `f_e : V_e → W_e`.
#[derive(Debug, Clone)]
pub struct EquivariantMap {
    pub dom: Arc<NormedModule>,
    pub cod: Arc<NormedModule>,
    pub components: Vec<RationalMatrix>,
    /// `sup_e ‖f_e‖`
    pub norm_bound: Q,
}

impl EquivariantMap {
    /// Checks equivariance exhaustively and computes the norm bound.
    pub fn new(
        dom: Arc<NormedModule>,
        cod: Arc<NormedModule>,
        components: Vec<RationalMatrix>,
    ) -> Result<Self, CoefficientError> {
        let g = &dom.base;
        if **g != *cod.base {
            return Err(CoefficientError::BaseMismatch);
        }
        if components.len() != g.num_objects() {
            return Err(CoefficientError::Shape("one component per object required".into()));
        }
        for (e, c) in components.iter().enumerate() {
            if c.rows() != cod.dim(e) || c.cols() != dom.dim(e) {
                return Err(CoefficientError::Shape(format!("component at {e} has the wrong shape")));
            }
        }
        for a in 0..g.num_morphisms() {
            let lhs = cod.action(a).mul(&components[g.source(a)]);
            let rhs = components[g.target(a)].mul(dom.action(a));
            if lhs != rhs {
                return Err(CoefficientError::NotEquivariant(a));
            }
        }
        let mut norm_bound = Q::zero();
        for (e, c) in components.iter().enumerate() {
            norm_bound = norm_bound.max(PolyhedralNorm::operator_norm(c, dom.norm(e), cod.norm(e))?);
        }
        Ok(EquivariantMap {
            dom,
            cod,
            components,
            norm_bound,
        })
    }

    pub fn identity(v: &Arc<NormedModule>) -> Self {
        EquivariantMap {
            dom: v.clone(),
            cod: v.clone(),
            components: v.dims().iter().map(|&d| RationalMatrix::identity(d)).collect(),
            norm_bound: if v.total_dim() == 0 { Q::zero() } else { Q::one() },
        }
    }

    /// `self ∘ first`
    pub fn after(&self, first: &EquivariantMap) -> Result<EquivariantMap, CoefficientError> {
        let components = self
            .components
            .iter()
            .zip(&first.components)
            .map(|(a, b)| a.mul(b))
            .collect();
        EquivariantMap::new(first.dom.clone(), self.cod.clone(), components)
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(RationalMatrix::is_identity)
    }

    /// Whether every component is an isometry onto its image.
    pub fn is_isometric(&self) -> Result<bool, CoefficientError> {
        for (e, c) in self.components.iter().enumerate() {
            for v in self.dom.norm(e).vertices()? {
                if self.cod.norm(e).eval(&c.mul_vec(&v)) != self.dom.norm(e).eval(&v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
