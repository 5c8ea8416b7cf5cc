//! Standard constructions of normed modules.

use std::sync::Arc;

use crate::exact::norm::Quotient;
use crate::exact::{NormError, PolyhedralNorm, RationalMatrix, SparseMatrix, Q};
use crate::groupoid::{FiniteGroupoid, GroupoidMap, Homotopy};

use super::module::{EquivariantMap, NormedModule};
use super::CoefficientError;

/// `R` with the absolute value at every object, trivial action.
pub fn trivial_module(g: &Arc<FiniteGroupoid>) -> NormedModule {
    NormedModule::new_unchecked(
        g.clone(),
        vec![PolyhedralNorm::abs(); g.num_objects()],
        vec![RationalMatrix::identity(1); g.num_morphisms()],
    )
    .expect("trivial module shapes")
}

/// `f*U`: fiber at `e` is `U_{f(e)}`, action at `a` is that of `f(a)`.
pub fn pullback(f: &GroupoidMap, u: &NormedModule) -> Result<NormedModule, CoefficientError> {
    if *f.cod != *u.base {
        return Err(CoefficientError::BaseMismatch);
    }
    NormedModule::new_unchecked(
        f.dom.clone(),
        f.objects.iter().map(|&o| u.norm(o).clone()).collect(),
        f.morphisms.iter().map(|&g| u.action(g).clone()).collect(),
    )
}

/// Bounded linear maps `V_e → W_e` with the operator norm, stored
/// column-major, acted on by `g·f = ρ^W_g ∘ f ∘ ρ^V_{g⁻¹}`.
pub fn hom_module(v: &NormedModule, w: &NormedModule) -> Result<NormedModule, CoefficientError> {
    if *v.base != *w.base {
        return Err(CoefficientError::BaseMismatch);
    }
    let g = &v.base;
    let norms = (0..g.num_objects())
        .map(|e| PolyhedralNorm::operator_norm_space(v.norm(e), w.norm(e)))
        .collect::<Result<Vec<_>, _>>()?;
    let action = (0..g.num_morphisms())
        .map(|a| v.action(g.inv(a)).transpose().kron(w.action(a)))
        .collect();
    NormedModule::new_unchecked(g.clone(), norms, action)
}

/// Column-major vectorization of a matrix.
pub fn vectorize(m: &RationalMatrix) -> Vec<Q> {
    (0..m.cols()).flat_map(|j| m.column(j)).collect()
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &[Q], rows: usize, cols: usize) -> RationalMatrix {
    let columns: Vec<Vec<Q>> = v.chunks(rows.max(1)).take(cols).map(<[Q]>::to_vec).collect();
    if rows == 0 {
        return RationalMatrix::zeros(0, cols);
    }
    RationalMatrix::from_columns(&columns, rows)
}

/// The invariant families, as a basis of the direct product of the fibers
/// together with the restricted sup norm.
#[derive(Debug, Clone)]
pub struct Invariants {
    /// columns: basis vectors in product coordinates
    pub basis: RationalMatrix,
    pub norm: PolyhedralNorm,
}

impl Invariants {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

pub fn invariants(v: &NormedModule) -> Result<Invariants, CoefficientError> {
    let g = &v.base;
    let off = v.offsets();
    let total = v.total_dim();
    let mut triplets = Vec::new();
    let mut row = 0;
    for a in 0..g.num_morphisms() {
        let (s, t) = (g.source(a), g.target(a));
        let rho = v.action(a);
        for i in 0..v.dim(t) {
            for j in 0..v.dim(s) {
                let x = rho.get(i, j);
                if !x.is_zero() {
                    triplets.push((row + i, off[s] + j, x.clone()));
                }
            }
            triplets.push((row + i, off[t] + i, -Q::one()));
        }
        row += v.dim(t);
    }
    let constraints = SparseMatrix::from_triplets(row, total, triplets);
    let kernel = constraints.kernel_basis();
    let basis = RationalMatrix::from_columns(&kernel, total);
    let product = PolyhedralNorm::product(v.norms().to_vec());
    let norm = if kernel.is_empty() {
        PolyhedralNorm::linf(0)
    } else {
        PolyhedralNorm::restricted(product, basis.clone())?
    };
    Ok(Invariants { basis, norm })
}

/// `ℓ∞(G, V)`: at `e`, functions on the morphisms with target `e` (ordered
/// by id) with values in `V_e`, sup norm, and `(g·φ)(h) = g·φ(g⁻¹h)`.
/// Also returns the inclusion of `V` as constant functions.
pub fn linf_module(v: &Arc<NormedModule>) -> Result<(Arc<NormedModule>, EquivariantMap), CoefficientError> {
    let g = v.base.clone();
    let pos = fiber_positions(&g);
    let norms: Vec<PolyhedralNorm> = (0..g.num_objects())
        .map(|e| PolyhedralNorm::product(vec![v.norm(e).clone(); g.fiber(e).len()]))
        .collect();
    let action = (0..g.num_morphisms())
        .map(|a| {
            let (s, t) = (g.source(a), g.target(a));
            let (ds, dt) = (v.dim(s), v.dim(t));
            let mut m = RationalMatrix::zeros(dt * g.fiber(t).len(), ds * g.fiber(s).len());
            let rho = v.action(a);
            let ainv = g.inv(a);
            for (k, &h) in g.fiber(t).iter().enumerate() {
                let src = pos[g.compose_unchecked(ainv, h)];
                for i in 0..dt {
                    for j in 0..ds {
                        m.set(k * dt + i, src * ds + j, rho.get(i, j).clone());
                    }
                }
            }
            m
        })
        .collect();
    let linf = Arc::new(NormedModule::new_unchecked(g.clone(), norms, action)?);
    let components = (0..g.num_objects())
        .map(|e| {
            let d = v.dim(e);
            let n = g.fiber(e).len();
            let mut m = RationalMatrix::zeros(d * n, d);
            for k in 0..n {
                for i in 0..d {
                    m.set(k * d + i, i, Q::one());
                }
            }
            m
        })
        .collect();
    let c = EquivariantMap::new(v.clone(), linf.clone(), components)?;
    Ok((linf, c))
}

/// Position of every morphism inside the fiber over its target.
pub fn fiber_positions(g: &FiniteGroupoid) -> Vec<usize> {
    let mut pos = vec![0; g.num_morphisms()];
    for e in 0..g.num_objects() {
        for (k, &h) in g.fiber(e).iter().enumerate() {
            pos[h] = k;
        }
    }
    pos
}

/// Dual spaces with dual norms and `ρ'_g = (ρ_{g⁻¹})ᵀ`.
pub fn dual_module(v: &NormedModule) -> Result<NormedModule, CoefficientError> {
    let g = &v.base;
    let norms = v
        .norms()
        .iter()
        .map(PolyhedralNorm::dual_norm)
        .collect::<Result<Vec<_>, _>>()?;
    let action = (0..g.num_morphisms())
        .map(|a| v.action(g.inv(a)).transpose())
        .collect();
    NormedModule::new(g.clone(), norms, action)
}

/// The cokernel of the constants inclusion `R → ℓ∞(G, R)` with the quotient
/// norm, realized on complements.
#[derive(Debug, Clone)]
pub struct SigmaModule {
    pub module: NormedModule,
    /// per object, quotient map from the ℓ∞ fiber
    pub projections: Vec<RationalMatrix>,
    /// per object, right inverse of the projection
    pub sections: Vec<RationalMatrix>,
}

pub fn sigma_module(g: &Arc<FiniteGroupoid>) -> Result<SigmaModule, CoefficientError> {
    let triv = Arc::new(trivial_module(g));
    let (linf, _) = linf_module(&triv)?;
    let mut norms = Vec::new();
    let mut projections = Vec::new();
    let mut sections = Vec::new();
    for e in 0..g.num_objects() {
        let q = oscillation_quotient(g.fiber(e).len())?;
        norms.push(q.norm);
        projections.push(q.projection);
        sections.push(q.section);
    }
    let action = (0..g.num_morphisms())
        .map(|a| {
            projections[g.target(a)]
                .mul(linf.action(a))
                .mul(&sections[g.source(a)])
        })
        .collect();
    let module = NormedModule::new(g.clone(), norms, action)?;
    Ok(SigmaModule {
        module,
        projections,
        sections,
    })
}

/// `ℓ∞` on `R^n` modulo the constants. The quotient norm is half the
/// oscillation, `max_{i<j} |φ_i − φ_j| / 2`, so its facets are known without
/// vertex enumeration.
pub fn oscillation_quotient(n: usize) -> Result<Quotient, NormError> {
    let ones = RationalMatrix::from_rows(vec![vec![Q::one(); n]], n);
    let projection = RationalMatrix::from_rows(ones.kernel_basis(), n);
    let q = projection.rows();
    let gram = projection.mul(&projection.transpose());
    let section = projection
        .transpose()
        .mul(&gram.inverse().expect("annihilator basis is independent"));
    if q == 0 {
        return Ok(Quotient {
            norm: PolyhedralNorm::linf(0),
            projection,
            section,
        });
    }
    let half = Q::new(1, 2);
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rows.push(
                (0..q)
                    .map(|c| &(section.get(i, c) - section.get(j, c)) * &half)
                    .collect(),
            );
        }
    }
    Ok(Quotient {
        norm: PolyhedralNorm::from_h_rep(q, rows)?,
        projection,
        section,
    })
}

/// `V∘h : from*V → to*V`, with component `ρ_{h_e}` at `e`.
pub fn homotopy_action(h: &Homotopy, v: &NormedModule) -> Result<EquivariantMap, CoefficientError> {
    let dom = Arc::new(pullback(&h.from, v)?);
    let cod = Arc::new(pullback(&h.to, v)?);
    let components = h.component.iter().map(|&m| v.action(m).clone()).collect();
    EquivariantMap::new(dom, cod, components)
}

/// Direct product with the max norm.
pub fn normed_product(parts: &[PolyhedralNorm]) -> (usize, PolyhedralNorm) {
    let n = PolyhedralNorm::product(parts.to_vec());
    (n.dim(), n)
}
