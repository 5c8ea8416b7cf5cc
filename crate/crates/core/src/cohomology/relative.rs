//! Relative cochains: the kernel of restriction to a subgroupoid.

use std::sync::Arc;

use serde::Serialize;

use crate::coefficients::{pullback, NormedModule};
use crate::exact::{PolyhedralNorm, RationalMatrix, SparseMatrix, Q};
use crate::groupoid::{FiniteGroupoid, GroupTable, GroupoidMap, GroupoidPair};

use super::complex::{CochainComplex, CohomologyDegree};
use super::reduced::{cochain_complex, cochain_complex_of_kind, cochain_norm, transport, CochainComplexDesc};
use crate::resolutions::BarKind;
use super::{CohomologyError, Limits};

#[derive(Debug, Clone)]
pub struct RelativeComplexDesc {
    pub pair: GroupoidPair,
    pub ambient: CochainComplexDesc,
    pub sub: CochainComplexDesc,
    /// per degree, restriction of ambient cochains to the sub
    pub restriction: Vec<SparseMatrix>,
    /// per degree, columns spanning the kernel of the restriction
    pub kernel_basis: Vec<SparseMatrix>,
    /// the kernel subcomplex in the coordinates of `kernel_basis`
    pub kernel: CochainComplex,
}

pub fn relative_complex(
    pair: &GroupoidPair,
    v: &Arc<NormedModule>,
    n: usize,
    limits: &Limits,
) -> Result<RelativeComplexDesc, CohomologyError> {
    relative_complex_of_kind(pair, v, BarKind::Inhomogeneous, n, limits)
}

pub fn relative_complex_of_kind(
    pair: &GroupoidPair,
    v: &Arc<NormedModule>,
    kind: BarKind,
    n: usize,
    limits: &Limits,
) -> Result<RelativeComplexDesc, CohomologyError> {
    if *v.base != *pair.ambient {
        return Err(crate::coefficients::CoefficientError::BaseMismatch.into());
    }
    let ambient = cochain_complex_of_kind(v, kind, n, limits.path_cap)?;
    let sub_module = Arc::new(pullback(&pair.inclusion, v)?);
    let sub = cochain_complex_of_kind(&sub_module, kind, n, limits.path_cap)?;
    let inc = &pair.inclusion;
    let restriction: Vec<SparseMatrix> = (0..=n + 1)
        .map(|k| {
            transport(&sub.basis, k, &ambient.basis, k, |p| {
                vec![(p.iter().map(|&a| inc.morphisms[a]).collect(), 1)]
            })
        })
        .collect();
    for (k, r) in restriction.iter().enumerate() {
        let rank = r.rank();
        if rank != r.rows() {
            return Err(CohomologyError::RestrictionNotSurjective {
                degree: k,
                rank,
                dim: r.rows(),
            });
        }
    }
    let (kernel_basis, kernel) = match coordinate_kernel(&ambient, &restriction) {
        Some(x) => x,
        None => general_kernel(&ambient, &restriction)?,
    };
    Ok(RelativeComplexDesc {
        pair: pair.clone(),
        ambient,
        sub,
        restriction,
        kernel_basis,
        kernel,
    })
}

/// When every restriction only forgets coordinates, the kernel is spanned by
/// the remaining coordinates and its norm is again a supremum over blocks.
fn coordinate_kernel(
    ambient: &CochainComplexDesc,
    restriction: &[SparseMatrix],
) -> Option<(Vec<SparseMatrix>, CochainComplex)> {
    let mut kept_all = Vec::new();
    let mut norms = Vec::new();
    for (k, r) in restriction.iter().enumerate() {
        let mut hit = vec![false; r.cols()];
        for i in 0..r.rows() {
            match r.row(i) {
                [(j, v)] if v.is_one() && !hit[*j] => hit[*j] = true,
                _ => return None,
            }
        }
        let basis = &ambient.basis;
        let mut kept = Vec::new();
        let mut objects = Vec::new();
        for i in 0..basis.reps[k].len() {
            let block = basis.block(k, i);
            if block.is_empty() {
                continue;
            }
            let h = block.clone().filter(|&c| hit[c]).count();
            if h == 0 {
                kept.extend(block);
                objects.push(basis.reps[k].object(i));
            } else if h != block.len() {
                return None;
            }
        }
        norms.push(cochain_norm(&basis.module, objects.into_iter()));
        kept_all.push(kept);
    }
    let bases: Vec<SparseMatrix> = kept_all
        .iter()
        .zip(restriction)
        .map(|(kept, r)| {
            SparseMatrix::from_triplets(
                r.cols(),
                kept.len(),
                kept.iter().enumerate().map(|(j, &i)| (i, j, Q::one())).collect(),
            )
        })
        .collect();
    let deltas = ambient
        .complex
        .deltas
        .iter()
        .enumerate()
        .map(|(k, d)| select(d, &kept_all[k + 1], &kept_all[k]))
        .collect();
    let dims = kept_all.iter().map(Vec::len).collect();
    Some((bases, CochainComplex::new(dims, deltas, norms)))
}

fn select(m: &SparseMatrix, rows: &[usize], cols: &[usize]) -> SparseMatrix {
    let mut col_pos = vec![usize::MAX; m.cols()];
    for (j, &c) in cols.iter().enumerate() {
        col_pos[c] = j;
    }
    let mut t = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        for (c, v) in m.row(r) {
            if col_pos[*c] != usize::MAX {
                t.push((i, col_pos[*c], v.clone()));
            }
        }
    }
    SparseMatrix::from_triplets(rows.len(), cols.len(), t)
}

fn general_kernel(
    ambient: &CochainComplexDesc,
    restriction: &[SparseMatrix],
) -> Result<(Vec<SparseMatrix>, CochainComplex), CohomologyError> {
    let bases: Vec<RationalMatrix> = restriction
        .iter()
        .map(|r| RationalMatrix::from_columns(&r.kernel_basis(), r.cols()))
        .collect();
    let sparse: Vec<SparseMatrix> = bases.iter().map(RationalMatrix::to_sparse).collect();
    let mut deltas = Vec::new();
    for (k, d) in ambient.complex.deltas.iter().enumerate() {
        let image = d.mul_dense(&bases[k]);
        let x = sparse[k + 1]
            .solve_many(&image)
            .expect("coboundary preserves the kernel of restriction");
        deltas.push(x.to_sparse());
    }
    let norms = bases
        .iter()
        .enumerate()
        .map(|(k, b)| {
            if b.cols() == 0 {
                Ok(PolyhedralNorm::linf(0))
            } else {
                PolyhedralNorm::restricted(ambient.complex.norms[k].clone(), b.clone())
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dims = bases.iter().map(RationalMatrix::cols).collect();
    Ok((sparse, CochainComplex::new(dims, deltas, norms)))
}

impl RelativeComplexDesc {
    pub fn top_degree(&self) -> usize {
        self.kernel.top_degree()
    }

    /// A relative cochain as an ambient cochain.
    pub fn to_ambient(&self, k: usize, z: &[Q]) -> Vec<Q> {
        self.kernel_basis[k].mul_vec(z)
    }

    /// Kernel coordinates of an ambient cochain that restricts to zero.
    pub fn from_ambient(&self, k: usize, x: &[Q]) -> Option<Vec<Q>> {
        self.kernel_basis[k].solve(x)
    }
}

pub fn relative_cohomology(r: &RelativeComplexDesc) -> Result<Vec<CohomologyDegree>, CohomologyError> {
    r.kernel.cohomology_all()
}

/// One degree of the long exact sequence
/// `H^k(G,A) → H^k(G) → H^k(A) → H^{k+1}(G,A)`.
#[derive(Debug, Clone, Serialize)]
pub struct LesDegree {
    pub degree: usize,
    pub relative: CohomologyDegree,
    pub ambient: CohomologyDegree,
    pub sub: CohomologyDegree,
    /// `H^k(G,A) → H^k(G)`
    pub j_star: RationalMatrix,
    /// `H^k(G) → H^k(A)`
    pub i_star: RationalMatrix,
    /// `H^k(A) → H^{k+1}(G,A)`, absent in the top degree
    pub connecting: Option<RationalMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlotCheck {
    pub slot: String,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LongExactSequence {
    pub degrees: Vec<LesDegree>,
    pub slots: Vec<SlotCheck>,
    /// largest observed `‖δ*[y]‖ / ‖[y]‖` over basis classes with nonzero seminorm
    pub connecting_constant: Option<Q>,
}

impl LongExactSequence {
    pub fn is_exact(&self) -> bool {
        self.slots.iter().all(|s| s.exact)
    }
}

pub fn long_exact_sequence(
    pair: &GroupoidPair,
    v: &Arc<NormedModule>,
    n: usize,
    limits: &Limits,
) -> Result<LongExactSequence, CohomologyError> {
    let r = relative_complex(pair, v, n, limits)?;
    les_of(&r, limits)
}

pub fn les_of(r: &RelativeComplexDesc, limits: &Limits) -> Result<LongExactSequence, CohomologyError> {
    let top = r.top_degree();
    let rel = r.kernel.cohomology_all()?;
    let amb = r.ambient.complex.cohomology_all()?;
    let sub = r.sub.complex.cohomology_all()?;
    let mut degrees = Vec::new();
    for k in 0..=top {
        let j_star = CochainComplex::induced_on_cohomology(&r.kernel_basis[k], &r.ambient.complex, &rel[k], &amb[k])?;
        let i_star = CochainComplex::induced_on_cohomology(&r.restriction[k], &r.sub.complex, &amb[k], &sub[k])?;
        let connecting = if k < top {
            let images = sub[k]
                .representatives
                .iter()
                .map(|y| connecting_cochain(r, k, y))
                .collect::<Vec<_>>();
            let coords = r.kernel.class_coordinates(&rel[k + 1], &images)?;
            Some(RationalMatrix::from_columns(&coords, rel[k + 1].dim))
        } else {
            None
        };
        degrees.push(LesDegree {
            degree: k,
            relative: rel[k].clone(),
            ambient: amb[k].clone(),
            sub: sub[k].clone(),
            j_star,
            i_star,
            connecting,
        });
    }
    let mut slots = Vec::new();
    for k in 0..=top {
        let d = &degrees[k];
        let incoming = if k == 0 {
            None
        } else {
            degrees[k - 1].connecting.as_ref()
        };
        slots.push(slot(format!("H^{k}(G,A)"), d.relative.dim, incoming, Some(&d.j_star)));
        slots.push(slot(format!("H^{k}(G)"), d.ambient.dim, Some(&d.j_star), Some(&d.i_star)));
        if let Some(c) = &d.connecting {
            slots.push(slot(format!("H^{k}(A)"), d.sub.dim, Some(&d.i_star), Some(c)));
        }
    }
    let connecting_constant = observed_constant(r, &degrees, limits);
    Ok(LongExactSequence {
        degrees,
        slots,
        connecting_constant,
    })
}

/// Snake construction: extend `y` by zero off the sub, apply `δ`, and read the
/// result in the kernel.
pub fn connecting_cochain(r: &RelativeComplexDesc, k: usize, y: &[Q]) -> Vec<Q> {
    let x = r.restriction[k].solve(y).expect("restriction is surjective");
    let w = r.ambient.complex.deltas[k].mul_vec(&x);
    r.from_ambient(k + 1, &w).expect("coboundary of a lift restricts to zero")
}

fn slot(name: String, dim: usize, incoming: Option<&RationalMatrix>, outgoing: Option<&RationalMatrix>) -> SlotCheck {
    let rank_in = incoming.map_or(0, RationalMatrix::rank);
    let rank_out = outgoing.map_or(0, RationalMatrix::rank);
    let composite_zero = match (incoming, outgoing) {
        (Some(p), Some(q)) => q.mul(p).is_zero(),
        _ => true,
    };
    SlotCheck {
        slot: name,
        dim,
        rank_in,
        rank_out,
        composite_zero,
        exact: composite_zero && rank_in + rank_out == dim,
    }
}

fn observed_constant(r: &RelativeComplexDesc, degrees: &[LesDegree], limits: &Limits) -> Option<Q> {
    let mut best: Option<Q> = None;
    for d in degrees.iter().filter(|d| d.connecting.is_some()) {
        let k = d.degree;
        for y in &d.sub.representatives {
            let Ok(sy) = r.sub.complex.class_seminorm(k, y, limits.lp_var_cap) else {
                continue;
            };
            if sy.value.is_zero() {
                continue;
            }
            let z = connecting_cochain(r, k, y);
            let Ok(sz) = r.kernel.class_seminorm(k + 1, &z, limits.lp_var_cap) else {
                continue;
            };
            let ratio = &sz.value / &sy.value;
            best = Some(best.map_or(ratio.clone(), |b| b.max(ratio)));
        }
    }
    best
}

/// `H^*_b(G_I, ⊔ A_i; V_I)` for a family of subgroups of a group.
#[derive(Debug, Clone)]
pub struct FamilyCohomology {
    pub blow_up: Arc<FiniteGroupoid>,
    pub pair: GroupoidPair,
    pub relative: RelativeComplexDesc,
    pub cohomology: Vec<CohomologyDegree>,
    /// per vertex `i`, the inclusion `G → G_I` at `i`
    pub vertex_inclusions: Vec<GroupoidMap>,
    /// per degree, the matrices of `H^k(G_I; V_I) → H^k(G; V)` induced by each vertex inclusion
    pub vertex_maps: Vec<Vec<RationalMatrix>>,
}

impl FamilyCohomology {
    /// Whether all vertex inclusions induce the same map in every degree.
    pub fn vertex_maps_agree(&self) -> bool {
        self.vertex_maps.iter().all(|ms| ms.windows(2).all(|w| w[0] == w[1]))
    }
}

/// `G_I` with `A_i` embedded at vertex `i`, and `V` pulled back along the
/// projection `G_I → G`.
#[derive(Debug, Clone)]
pub struct FamilyPair {
    pub group: Arc<FiniteGroupoid>,
    pub pair: GroupoidPair,
    pub module: Arc<NormedModule>,
    /// the module over the group
    pub base_module: Arc<NormedModule>,
}

/// `v` is a module over the one-object groupoid of `table`; `None` means `R`.
pub fn family_pair(
    table: &GroupTable,
    subgroups: &[Vec<usize>],
    v: Option<&Arc<NormedModule>>,
) -> Result<FamilyPair, CohomologyError> {
    for (i, a) in subgroups.iter().enumerate() {
        if !table.is_subgroup(a) {
            return Err(CohomologyError::NotSubgroup(i));
        }
    }
    let group = Arc::new(FiniteGroupoid::from_group(table));
    let v = match v {
        Some(v) => {
            if *v.base != *group {
                return Err(crate::coefficients::CoefficientError::BaseMismatch.into());
            }
            v.clone()
        }
        None => Arc::new(crate::coefficients::trivial_module(&group)),
    };
    let c = subgroups.len();
    let order = table.order();
    let gi = Arc::new(FiniteGroupoid::blow_up(table, c)?);
    let projection = GroupoidMap::new(
        gi.clone(),
        group.clone(),
        vec![0; c],
        (0..gi.num_morphisms()).map(|m| m % order).collect(),
    )?;
    let vi = Arc::new(pullback(&projection, &v)?);
    let mut morphisms: Vec<usize> = subgroups
        .iter()
        .enumerate()
        .flat_map(|(i, a)| a.iter().map(move |&x| (i, x)))
        .map(|(i, x)| gi.blow_up_id(order, i, i, x))
        .collect();
    morphisms.sort_unstable();
    let objects: Vec<usize> = (0..c).collect();
    let pair = GroupoidPair::from_subgroupoid(&gi, &objects, &morphisms)?;
    Ok(FamilyPair {
        group,
        pair,
        module: vi,
        base_module: v,
    })
}

/// Builds `G_I`, embeds `A_i` at vertex `i`, and computes relative cohomology.
/// `v` is a module over the one-object groupoid of `table`; `None` means `R`.
pub fn family_cohomology(
    table: &GroupTable,
    subgroups: &[Vec<usize>],
    v: Option<&Arc<NormedModule>>,
    n: usize,
    limits: &Limits,
) -> Result<FamilyCohomology, CohomologyError> {
    let FamilyPair {
        group,
        pair,
        module: vi,
        base_module: v,
    } = family_pair(table, subgroups, v)?;
    let gi = pair.ambient.clone();
    let c = subgroups.len();
    let order = table.order();
    let relative = relative_complex(&pair, &vi, n, limits)?;
    let cohomology = relative_cohomology(&relative)?;

    let vertex_inclusions = (0..c)
        .map(|i| {
            GroupoidMap::new(
                group.clone(),
                gi.clone(),
                vec![i],
                (0..order).map(|x| gi.blow_up_id(order, i, i, x)).collect(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let base = cochain_complex(&v, n, limits.path_cap)?;
    let h_base = base.complex.cohomology_all()?;
    let h_amb = relative.ambient.complex.cohomology_all()?;
    let mut vertex_maps = vec![Vec::new(); n + 1];
    for l in &vertex_inclusions {
        for k in 0..=n {
            let f = transport(&base.basis, k, &relative.ambient.basis, k, |p| {
                vec![(p.iter().map(|&a| l.morphisms[a]).collect(), 1)]
            });
            vertex_maps[k].push(CochainComplex::induced_on_cohomology(
                &f,
                &base.complex,
                &h_amb[k],
                &h_base[k],
            )?);
        }
    }
    Ok(FamilyCohomology {
        blow_up: gi,
        pair,
        relative,
        cohomology,
        vertex_inclusions,
        vertex_maps,
    })
}
