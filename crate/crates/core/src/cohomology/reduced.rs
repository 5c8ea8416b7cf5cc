//! Invariant cochains in reduced form: an equivariant cochain is stored by its
//! values on the paths with a leading identity.

use std::sync::Arc;

use crate::coefficients::NormedModule;
use crate::exact::{PolyhedralNorm, SparseMatrix, Q};
use crate::groupoid::FiniteGroupoid;
use crate::resolutions::{self, BarKind, Chain, RepBasis};

use super::complex::CochainComplex;
use super::CohomologyError;

/// Coordinates of reduced cochains: one block of `V_e` per representative
/// with leading `id_e`.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    pub groupoid: Arc<FiniteGroupoid>,
    pub module: Arc<NormedModule>,
    pub kind: BarKind,
    /// representatives in degrees `0..=n+1`
    pub reps: Vec<RepBasis>,
    /// per degree, the offset of each representative's block, plus the total
    pub offsets: Vec<Vec<usize>>,
}

/// `C^k_b(G; V)` for `k ≤ n + 1` on the representatives of the Bar resolution.
#[derive(Debug, Clone)]
pub struct CochainComplexDesc {
    pub basis: ReducedBasis,
    pub complex: CochainComplex,
}

/// Reduced cochain complex of the inhomogeneous Bar resolution up to degree `n`.
pub fn cochain_complex(v: &Arc<NormedModule>, n: usize, path_cap: usize) -> Result<CochainComplexDesc, CohomologyError> {
    cochain_complex_of_kind(v, BarKind::Inhomogeneous, n, path_cap)
}

pub fn cochain_complex_of_kind(
    v: &Arc<NormedModule>,
    kind: BarKind,
    n: usize,
    path_cap: usize,
) -> Result<CochainComplexDesc, CohomologyError> {
    let g = v.base.clone();
    let reps = (0..=n + 1)
        .map(|k| RepBasis::new(&g, kind, k, path_cap))
        .collect::<Result<Vec<_>, _>>()?;
    let offsets: Vec<Vec<usize>> = reps
        .iter()
        .map(|r| {
            let mut off = Vec::with_capacity(r.len() + 1);
            let mut acc = 0;
            off.push(0);
            for i in 0..r.len() {
                acc += v.dim(r.object(i));
                off.push(acc);
            }
            off
        })
        .collect();
    let dims: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();
    let norms = reps
        .iter()
        .map(|r| cochain_norm(v, (0..r.len()).map(|i| r.object(i))))
        .collect();
    let basis = ReducedBasis {
        groupoid: g.clone(),
        module: v.clone(),
        kind,
        reps,
        offsets,
    };
    let deltas = (0..=n)
        .map(|k| transport(&basis, k + 1, &basis, k, |p| resolutions::boundary(&g, kind, p)))
        .collect();
    Ok(CochainComplexDesc {
        basis,
        complex: CochainComplex::new(dims, deltas, norms),
    })
}

/// Supremum over the representatives of the fiber norm of the value.
pub fn cochain_norm(v: &NormedModule, objects: impl Iterator<Item = usize>) -> PolyhedralNorm {
    let parts: Vec<PolyhedralNorm> = objects.map(|e| v.norm(e).clone()).filter(|p| p.dim() > 0).collect();
    if parts.is_empty() {
        return PolyhedralNorm::linf(0);
    }
    if parts.iter().all(|p| p.dim() == 1 && p.is_l1()) {
        return PolyhedralNorm::linf(parts.len());
    }
    PolyhedralNorm::product(parts)
}

impl CochainComplexDesc {
    pub fn top_degree(&self) -> usize {
        self.complex.top_degree()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.complex.dims[k]
    }
}

impl ReducedBasis {
    pub fn dim(&self, k: usize) -> usize {
        *self.offsets[k].last().unwrap()
    }

    /// Coordinates of the block of representative `i` in degree `k`.
    pub fn block(&self, k: usize, i: usize) -> std::ops::Range<usize> {
        self.offsets[k][i]..self.offsets[k][i + 1]
    }

    /// Value of a reduced cochain on an arbitrary path: `ρ_{g_0}` applied to
    /// the value on its representative.
    pub fn evaluate(&self, k: usize, cochain: &[Q], path: &[usize]) -> Vec<Q> {
        let (g0, i) = self.reps[k].reduce(&self.groupoid, path);
        let block = &cochain[self.block(k, i)];
        self.module.action(g0).mul_vec(block)
    }
}

/// The matrix of `φ ↦ φ∘F` from reduced cochains of `col` in degree `col_deg`
/// to reduced cochains of `row` in degree `row_deg`, where `F` sends the
/// representative paths of `row` to chains in the resolution of `col`.
/// `F` must be equivariant over some groupoid map under which the module of
/// `row` is the pullback of that of `col`.
pub fn transport(
    row: &ReducedBasis,
    row_deg: usize,
    col: &ReducedBasis,
    col_deg: usize,
    image: impl Fn(&[usize]) -> Chain,
) -> SparseMatrix {
    let reps = &row.reps[row_deg];
    let col_reps = &col.reps[col_deg];
    let rows = *row.offsets[row_deg].last().unwrap();
    let cols = *col.offsets[col_deg].last().unwrap();
    let mut t = Vec::new();
    for r in 0..reps.len() {
        let r0 = row.offsets[row_deg][r];
        for (p, c) in image(reps.rep(r)) {
            if c == 0 {
                continue;
            }
            let (g0, i) = col_reps.reduce(&col.groupoid, &p);
            let a = col.module.action(g0);
            let c0 = col.offsets[col_deg][i];
            assert_eq!(a.rows(), row.offsets[row_deg][r + 1] - r0, "fiber dimension mismatch");
            let c = Q::from_int(c);
            for x in 0..a.rows() {
                for y in 0..a.cols() {
                    let v = a.get(x, y);
                    if !v.is_zero() {
                        t.push((r0 + x, c0 + y, v * &c));
                    }
                }
            }
        }
    }
    SparseMatrix::from_triplets(rows, cols, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{hom_module, invariants, linf_module, trivial_module};
    use crate::groupoid::GroupTable;
    use crate::resolutions::BarComplex;

    fn z2() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::from_group(&GroupTable::cyclic(2)))
    }

    #[test]
    fn trivial_group_alternates() {
        let g = Arc::new(FiniteGroupoid::from_group(&GroupTable::trivial()));
        let v = Arc::new(trivial_module(&g));
        let c = cochain_complex(&v, 3, 1000).unwrap();
        assert_eq!(c.complex.dims, vec![1; 5]);
        for k in 0..=3 {
            let expect = if k % 2 == 0 { Q::zero() } else { Q::one() };
            assert_eq!(c.complex.deltas[k].get(0, 0), expect);
        }
    }

    #[test]
    fn z2_dims_and_square_zero() {
        let v = Arc::new(trivial_module(&z2()));
        for kind in [BarKind::Inhomogeneous, BarKind::Homogeneous] {
            let c = cochain_complex_of_kind(&v, kind, 3, 1000).unwrap();
            assert_eq!(c.complex.dims, vec![1, 2, 4, 8, 16]);
            assert!(c.complex.squares_to_zero());
        }
    }

    #[test]
    fn empty_groupoid_is_zero() {
        let g = Arc::new(FiniteGroupoid::empty());
        let v = Arc::new(trivial_module(&g));
        let c = cochain_complex(&v, 2, 100).unwrap();
        assert!(c.complex.dims.iter().all(|&d| d == 0));
    }

    /// The reduced dimension matches the invariants of the full cochain module.
    #[test]
    fn matches_full_invariants() {
        let b = Arc::new(FiniteGroupoid::blow_up(&GroupTable::cyclic(2), 2).unwrap());
        for g in [z2(), b] {
            let v = Arc::new(trivial_module(&g));
            let (l, _) = linf_module(&v).unwrap();
            for module in [v, l] {
                let c = cochain_complex(&module, 1, 1000).unwrap();
                let bar = BarComplex::inhomogeneous(&g, 2, 1000).unwrap();
                for k in 0..=1 {
                    let ck = chain_module(&bar, k);
                    let h = hom_module(&ck, &module).unwrap();
                    assert_eq!(invariants(&h).unwrap().dim(), c.dim(k), "degree {k}");
                }
            }
        }
    }

    /// `C_k` as a module with the ℓ1 norm on each fiber.
    fn chain_module(bar: &BarComplex, k: usize) -> NormedModule {
        let g = &bar.groupoid;
        let b = bar.basis(k);
        let norms = (0..g.num_objects()).map(|e| PolyhedralNorm::l1(b.fiber(e).len())).collect();
        let action = (0..g.num_morphisms())
            .map(|a| {
                let (s, t) = (b.fiber(g.source(a)), b.fiber(g.target(a)));
                let mut m = crate::exact::RationalMatrix::zeros(t.len(), s.len());
                for i in s.clone() {
                    let j = bar.act(k, a, i);
                    m.set(j - t.start, i - s.start, Q::one());
                }
                m
            })
            .collect();
        NormedModule::new(g.clone(), norms, action).unwrap()
    }
}
