//! Extensions into standard cochain modules along split injections.

use serde::Serialize;

use crate::coefficients::EquivariantMap;
use crate::exact::{PolyhedralNorm, RationalMatrix, SparseMatrix, Q};

use super::resolution::AugmentedResolution;
use super::{is_equivariant, max_operator_norm, HomalgError};

#[derive(Debug, Clone, Serialize)]
pub struct InjectivityWitness {
    /// per object, `β_e : B_e → U_e`
    #[serde(skip)]
    pub beta: Vec<SparseMatrix>,
    pub extends: bool,
    pub equivariant: bool,
    pub norm_alpha: Q,
    pub norm_beta: Q,
}

impl InjectivityWitness {
    pub fn passed(&self) -> bool {
        self.extends && self.equivariant && self.norm_beta <= self.norm_alpha
    }
}

/// Given `i : A → B` with a norm-one left inverse `σ` (not necessarily
/// equivariant) and an equivariant `α : A → U` with `U = B(C_n(G), W)` the
/// degree-`n` module of `target`, builds
/// `β(b)(g_0, …, g_n) = α(g_0·σ(g_0⁻¹·b))(g_0, …, g_n)` and audits it.
pub fn verify_relative_injectivity_witness(
    i: &EquivariantMap,
    sigma: &[RationalMatrix],
    alpha: &[SparseMatrix],
    target: &AugmentedResolution,
    n: usize,
) -> Result<InjectivityWitness, HomalgError> {
    let g = &i.dom.base;
    let (a_mod, b_mod) = (&i.dom, &i.cod);
    let bar = match &target.bar {
        Some(b) if b.kind == crate::resolutions::BarKind::Inhomogeneous && n < target.modules.len() => b,
        _ => return Err(HomalgError::NotStandard("target must be a degree of the standard resolution".into())),
    };
    if *target.groupoid != **g {
        return Err(HomalgError::NotStandard("target lives over another groupoid".into()));
    }
    let u = &target.modules[n];
    if sigma.len() != g.num_objects() || alpha.len() != g.num_objects() {
        return Err(HomalgError::Audit("one component per object required".into()));
    }
    for e in 0..g.num_objects() {
        let s = &sigma[e];
        if s.rows() != a_mod.dim(e) || s.cols() != b_mod.dim(e) || !s.mul(&i.components[e]).is_identity() {
            return Err(HomalgError::NotSplit(format!("σ∘i is not the identity at object {e}")));
        }
        if PolyhedralNorm::operator_norm(s, b_mod.norm(e), a_mod.norm(e))? > Q::one() {
            return Err(HomalgError::NotSplit(format!("σ has norm above 1 at object {e}")));
        }
        if alpha[e].rows() != u.dim(e) || alpha[e].cols() != a_mod.dim(e) {
            return Err(HomalgError::NotStandard(format!("α has the wrong shape at object {e}")));
        }
    }
    let a_act: Vec<SparseMatrix> = a_mod.actions().iter().map(RationalMatrix::to_sparse).collect();
    let b_act: Vec<SparseMatrix> = b_mod.actions().iter().map(RationalMatrix::to_sparse).collect();
    if !is_equivariant(g, alpha, &a_act, &u.action) {
        return Err(HomalgError::Audit("α is not equivariant".into()));
    }
    let conj: Vec<SparseMatrix> = (0..g.num_morphisms())
        .map(|a| {
            a_act[a]
                .mul(&sigma[g.source(a)].to_sparse())
                .mul(&b_act[g.inv(a)])
        })
        .collect();
    let basis = bar.basis(n);
    let w = &target.coefficients;
    let mut beta = Vec::new();
    for e in 0..g.num_objects() {
        let d = w.dim(e);
        let fiber = basis.fiber(e);
        let mut rows = Vec::new();
        for p in fiber.clone() {
            let local = p - fiber.start;
            let idx: Vec<usize> = (local * d..(local + 1) * d).collect();
            let block = alpha[e].select_rows(&idx).mul(&conj[basis.path(p)[0]]);
            rows.extend((0..block.rows()).map(|r| block.row(r).to_vec()));
        }
        beta.push(SparseMatrix::from_rows(b_mod.dim(e), rows));
    }
    let extends = (0..g.num_objects()).all(|e| beta[e].mul(&i.components[e].to_sparse()).sub(&alpha[e]).is_zero());
    let equivariant = is_equivariant(g, &beta, &b_act, &u.action);
    let norm_alpha = max_operator_norm(alpha, a_mod.norms(), &u.norms)?;
    let norm_beta = max_operator_norm(&beta, b_mod.norms(), &u.norms)?;
    Ok(InjectivityWitness {
        beta,
        extends,
        equivariant,
        norm_alpha,
        norm_beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::coefficients::{linf_module, trivial_module};
    use crate::groupoid::{FiniteGroupoid, GroupTable};
    use crate::homalg::resolution::standard_resolution;

    fn z2() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::from_group(&GroupTable::cyclic(2)))
    }

    #[test]
    fn identity_split_returns_alpha() {
        let g = z2();
        let v = Arc::new(trivial_module(&g));
        let target = standard_resolution(&v, 1, 1000).unwrap();
        let id = EquivariantMap::identity(&v);
        // α: R → B(C_1, R), r ↦ the constant function r
        let alpha = vec![SparseMatrix::from_triplets(4, 1, (0..4).map(|r| (r, 0, Q::one())).collect())];
        let w = verify_relative_injectivity_witness(&id, &[RationalMatrix::identity(1)], &alpha, &target, 1).unwrap();
        assert!(w.passed());
        assert_eq!(w.beta, alpha);
        let zero = vec![SparseMatrix::zeros(4, 1)];
        let w = verify_relative_injectivity_witness(&id, &[RationalMatrix::identity(1)], &zero, &target, 1).unwrap();
        assert!(w.beta[0].is_zero());
    }

    #[test]
    fn constants_into_bounded_functions() {
        let g = z2();
        let v = Arc::new(trivial_module(&g));
        let (l, c) = linf_module(&v).unwrap();
        let target = standard_resolution(&v, 1, 1000).unwrap();
        // σ = evaluation at the identity
        let pos = crate::coefficients::fiber_positions(&g)[g.id(0)];
        let mut sigma = RationalMatrix::zeros(1, l.dim(0));
        sigma.set(0, pos, Q::one());
        let alpha = vec![SparseMatrix::from_triplets(4, 1, (0..4).map(|r| (r, 0, Q::one())).collect())];
        let w = verify_relative_injectivity_witness(&c, &[sigma], &alpha, &target, 1).unwrap();
        assert!(w.passed(), "{w:?}");
        let bad = RationalMatrix::zeros(1, l.dim(0));
        assert!(matches!(
            verify_relative_injectivity_witness(&c, &[bad], &alpha, &target, 1),
            Err(HomalgError::NotSplit(_))
        ));
    }
}
