//! The comparison map from a strong resolution to the standard one.

use serde::Serialize;

use crate::cohomology::{
    cochain_complex, cochain_complex_of_kind, relative_complex_of_kind, CochainComplex, ReducedBasis, RelativeComplexDesc,
};
use crate::exact::echelon::SparseRow;
use crate::exact::{SparseMatrix, Q};
use crate::limits::Limits;
use crate::resolutions::{BarComplex, BarKind};

use super::resolution::{standard_pair_resolution, standard_resolution, AugmentedResolution, PairResolution};
use super::{is_equivariant, max_operator_norm, HomalgError};

/// `α^k : D^k → B(C_k(G), V)` per object, for `k ≤ n + 1`.
#[derive(Debug, Clone)]
pub struct ComparisonMap {
    pub standard: AugmentedResolution,
    /// `[k][e]`
    pub maps: Vec<Vec<SparseMatrix>>,
    pub audit: ComparisonAudit,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonAudit {
    pub equivariant: bool,
    pub cochain_map: bool,
    pub extends_identity: bool,
    /// per degree, `sup_e ‖α^k_e‖`
    pub norms: Vec<Q>,
}

impl ComparisonAudit {
    pub fn passed(&self) -> bool {
        self.equivariant && self.cochain_map && self.extends_identity && self.norms.iter().all(|n| *n <= Q::one())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoDegree {
    pub degree: usize,
    pub dim_dom: usize,
    pub dim_cod: usize,
    pub rank: usize,
}

impl IsoDegree {
    pub fn is_iso(&self) -> bool {
        self.dim_dom == self.dim_cod && self.rank == self.dim_dom
    }
}

/// `ρ^{k-1}_a ∘ s^k_{s(a)} ∘ ρ^k_{a⁻¹}`, the contraction conjugated to `t(a)`.
fn conjugated_contraction(res: &AugmentedResolution, k: usize, a: usize) -> SparseMatrix {
    let g = &res.groupoid;
    let ai = g.inv(a);
    let s = &res.contraction[k][g.source(a)];
    let left = if k == 0 {
        res.coefficients.action(a).to_sparse()
    } else {
        res.modules[k - 1].action[a].clone()
    };
    left.mul(s).mul(&res.modules[k].action[ai])
}

/// Builds `α` by `α^k(φ)(g_0, …, g_k) = α^{k-1}(g_0·s^k(g_0⁻¹·φ))(g_0g_1, g_2, …, g_k)`
/// with `α^{-1} = id_V`, and audits it.
pub fn comparison_map(res: &AugmentedResolution, path_cap: usize) -> Result<ComparisonMap, HomalgError> {
    let ra = res.audit()?;
    if !ra.contraction_identity || ra.contraction_norms.iter().any(|n| *n > Q::one()) {
        return Err(HomalgError::NotStrong(format!("{ra:?}")));
    }
    let g = res.groupoid.clone();
    let v = &res.coefficients;
    let n = res.top_degree();
    let standard = standard_resolution(v, n, path_cap)?;
    let bar = standard.bar.as_ref().expect("standard resolution has a bar complex");
    let mut maps: Vec<Vec<SparseMatrix>> = Vec::new();
    for k in 0..=n + 1 {
        let conj: Vec<SparseMatrix> = (0..g.num_morphisms()).map(|a| conjugated_contraction(res, k, a)).collect();
        let basis = bar.basis(k);
        let mut level = Vec::new();
        for e in 0..g.num_objects() {
            let d = v.dim(e);
            let fiber = basis.fiber(e);
            let mut rows: Vec<SparseRow> = Vec::with_capacity(fiber.len() * d);
            for i in fiber.clone() {
                let p = basis.path(i);
                let block = if k == 0 {
                    conj[p[0]].clone()
                } else {
                    let mut shorter = Vec::with_capacity(k);
                    shorter.push(g.compose_unchecked(p[0], p[1]));
                    shorter.extend_from_slice(&p[2..]);
                    let prev_basis = bar.basis(k - 1);
                    let j = prev_basis.idx(&shorter) - prev_basis.fiber(e).start;
                    let idx: Vec<usize> = (j * d..(j + 1) * d).collect();
                    maps[k - 1][e].select_rows(&idx).mul(&conj[p[0]])
                };
                rows.extend((0..block.rows()).map(|r| block.row(r).to_vec()));
            }
            level.push(SparseMatrix::from_rows(res.modules[k].dim(e), rows));
        }
        maps.push(level);
    }
    let audit = audit_comparison(res, &standard, &maps)?;
    Ok(ComparisonMap { standard, maps, audit })
}

fn audit_comparison(
    res: &AugmentedResolution,
    std: &AugmentedResolution,
    maps: &[Vec<SparseMatrix>],
) -> Result<ComparisonAudit, HomalgError> {
    let g = &res.groupoid;
    let n = res.top_degree();
    let mut equivariant = true;
    let mut norms = Vec::new();
    for k in 0..=n + 1 {
        equivariant &= is_equivariant(g, &maps[k], &res.modules[k].action, &std.modules[k].action);
        norms.push(max_operator_norm(&maps[k], &res.modules[k].norms, &std.modules[k].norms)?);
    }
    let mut cochain_map = true;
    let mut extends_identity = true;
    for e in 0..g.num_objects() {
        extends_identity &= maps[0][e].mul(&res.augmentation[e]).sub(&std.augmentation[e]).is_zero();
        for k in 0..=n {
            cochain_map &= std.coboundaries[k][e]
                .mul(&maps[k][e])
                .sub(&maps[k + 1][e].mul(&res.coboundaries[k][e]))
                .is_zero();
        }
    }
    Ok(ComparisonAudit {
        equivariant,
        cochain_map,
        extends_identity,
        norms,
    })
}

/// From reduced coordinates to full per-object coordinates (concatenated).
fn expand(bar: &BarComplex, reduced: &ReducedBasis, k: usize) -> SparseMatrix {
    let g = &bar.groupoid;
    let v = &reduced.module;
    let basis = bar.basis(k);
    let offsets = object_offsets(bar, &reduced.module, k);
    let mut t = Vec::new();
    for i in 0..basis.len() {
        let e = basis.fiber_of(i);
        let d = v.dim(e);
        let row = offsets[e] + (i - basis.fiber(e).start) * d;
        let (g0, r) = reduced.reps[k].reduce(g, basis.path(i));
        let rho = v.action(g0);
        let col = reduced.offsets[k][r];
        for x in 0..rho.rows() {
            for y in 0..rho.cols() {
                if !rho.get(x, y).is_zero() {
                    t.push((row + x, col + y, rho.get(x, y).clone()));
                }
            }
        }
    }
    SparseMatrix::from_triplets(offsets[g.num_objects()], reduced.dim(k), t)
}

/// Values on the representatives, from full per-object coordinates.
fn restrict_to_reps(bar: &BarComplex, reduced: &ReducedBasis, k: usize) -> SparseMatrix {
    let v = &reduced.module;
    let basis = bar.basis(k);
    let offsets = object_offsets(bar, v, k);
    let mut t = Vec::new();
    for r in 0..reduced.reps[k].len() {
        let i = basis.idx(reduced.reps[k].rep(r));
        let e = basis.fiber_of(i);
        let d = v.dim(e);
        let col = offsets[e] + (i - basis.fiber(e).start) * d;
        for x in 0..d {
            t.push((reduced.offsets[k][r] + x, col + x, Q::one()));
        }
    }
    SparseMatrix::from_triplets(reduced.dim(k), offsets[bar.groupoid.num_objects()], t)
}

fn object_offsets(bar: &BarComplex, v: &crate::coefficients::NormedModule, k: usize) -> Vec<usize> {
    let mut out = vec![0];
    for e in 0..bar.groupoid.num_objects() {
        let last = *out.last().unwrap();
        out.push(last + bar.basis(k).fiber(e).len() * v.dim(e));
    }
    out
}

fn block_diag(blocks: &[SparseMatrix]) -> SparseMatrix {
    let rows: usize = blocks.iter().map(SparseMatrix::rows).sum();
    let cols: usize = blocks.iter().map(SparseMatrix::cols).sum();
    let mut t = Vec::new();
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for i in 0..b.rows() {
            t.extend(b.row(i).iter().map(|(j, v)| (r0 + i, c0 + j, v.clone())));
        }
        r0 += b.rows();
        c0 += b.cols();
    }
    SparseMatrix::from_triplets(rows, cols, t)
}

impl ComparisonMap {
    /// `α^k` on invariant cochains, in reduced coordinates.
    pub fn reduced(&self, res: &AugmentedResolution, dom: &ReducedBasis, cod: &ReducedBasis, k: usize) -> SparseMatrix {
        let rb = res.bar.as_ref().expect("resolution built on a bar complex");
        let sb = self.standard.bar.as_ref().unwrap();
        let full = block_diag(&self.maps[k]);
        restrict_to_reps(sb, cod, k).mul(&full).mul(&expand(rb, dom, k))
    }

    /// Ranks of `H^k(D^{*G}) → H^k_b(G; V)` for `k ≤ n`.
    pub fn cohomology_iso(&self, res: &AugmentedResolution, path_cap: usize) -> Result<Vec<IsoDegree>, HomalgError> {
        let kind = res.kind().ok_or_else(|| HomalgError::NotStandard("no bar complex".into()))?;
        let n = res.top_degree();
        let v = &res.coefficients;
        let dom = cochain_complex_of_kind(v, kind, n, path_cap)?;
        let cod = cochain_complex(v, n, path_cap)?;
        let mut out = Vec::new();
        for k in 0..=n {
            let f = self.reduced(res, &dom.basis, &cod.basis, k);
            let hd = dom.complex.cohomology(k)?;
            let hc = cod.complex.cohomology(k)?;
            let m = CochainComplex::induced_on_cohomology(&f, &cod.complex, &hd, &hc)?;
            out.push(IsoDegree {
                degree: k,
                dim_dom: hd.dim,
                dim_cod: hc.dim,
                rank: m.rank(),
            });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct PairComparison {
    pub ambient: ComparisonMap,
    pub sub: ComparisonMap,
    pub commutes: bool,
    pub kernel_iso: Vec<IsoDegree>,
    /// `(‖z‖, ‖α z‖)` for sampled relative classes
    pub seminorm_samples: Vec<(Q, Q)>,
}

impl PairComparison {
    pub fn passed(&self) -> bool {
        self.ambient.audit.passed()
            && self.sub.audit.passed()
            && self.commutes
            && self.kernel_iso.iter().all(IsoDegree::is_iso)
            && self.seminorm_samples.iter().all(|(a, b)| b <= a)
    }
}

/// Comparison maps of both halves of a pair resolution, checked against the
/// restriction of the standard pair resolution; the induced map on kernel
/// cohomology is compared with relative bounded cohomology.
pub fn pair_comparison_map(res: &PairResolution, limits: &Limits, samples: usize) -> Result<PairComparison, HomalgError> {
    let pa = res.audit()?;
    if !pa.passed() {
        return Err(HomalgError::Audit(format!("pair resolution: {pa:?}")));
    }
    let n = res.ambient.top_degree();
    let v = &res.ambient.coefficients;
    let ambient = comparison_map(&res.ambient, limits.path_cap)?;
    let sub = comparison_map(&res.sub, limits.path_cap)?;
    let std_pair = standard_pair_resolution(&res.pair, v, n, limits.path_cap)?;
    let inc = &res.pair.inclusion;
    let mut commutes = true;
    for k in 0..=n + 1 {
        for x in 0..res.pair.sub.num_objects() {
            let e = inc.objects[x];
            commutes &= std_pair.connecting[k][x]
                .mul(&ambient.maps[k][e])
                .sub(&sub.maps[k][x].mul(&res.connecting[k][x]))
                .is_zero();
        }
    }
    let kind = res.ambient.kind().ok_or_else(|| HomalgError::NotStandard("no bar complex".into()))?;
    let dom = relative_complex_of_kind(&res.pair, v, kind, n, limits)?;
    let cod = relative_complex_of_kind(&res.pair, v, BarKind::Inhomogeneous, n, limits)?;
    let mut kernel_iso = Vec::new();
    let mut seminorm_samples = Vec::new();
    for k in 0..=n {
        let f = ambient.reduced(&res.ambient, &dom.ambient.basis, &cod.ambient.basis, k);
        let hd = dom.kernel.cohomology(k)?;
        let hc = cod.kernel.cohomology(k)?;
        let images: Vec<Vec<Q>> = hd.representatives.iter().map(|z| kernel_image(&dom, &cod, &f, k, z)).collect();
        let coords = cod.kernel.class_coordinates(&hc, &images)?;
        let m = crate::exact::RationalMatrix::from_columns(&coords, hc.dim);
        kernel_iso.push(IsoDegree {
            degree: k,
            dim_dom: hd.dim,
            dim_cod: hc.dim,
            rank: m.rank(),
        });
        for (z, w) in hd.representatives.iter().zip(&images) {
            if seminorm_samples.len() >= samples {
                break;
            }
            let a = dom.kernel.class_seminorm(k, z, limits.lp_var_cap)?.value;
            let b = cod.kernel.class_seminorm(k, w, limits.lp_var_cap)?.value;
            seminorm_samples.push((a, b));
        }
    }
    Ok(PairComparison {
        ambient,
        sub,
        commutes,
        kernel_iso,
        seminorm_samples,
    })
}

fn kernel_image(dom: &RelativeComplexDesc, cod: &RelativeComplexDesc, f: &SparseMatrix, k: usize, z: &[Q]) -> Vec<Q> {
    let y = f.mul_vec(&dom.to_ambient(k, z));
    cod.from_ambient(k, &y).expect("comparison map preserves relative cochains")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::coefficients::{linf_module, trivial_module};
    use crate::groupoid::{FiniteGroupoid, GroupTable, GroupoidPair};
    use crate::homalg::resolution::{homogeneous_pair_resolution, homogeneous_resolution};

    #[test]
    fn standard_self_comparison_is_identity_on_cohomology() {
        let g = Arc::new(FiniteGroupoid::from_group(&GroupTable::cyclic(2)));
        let (v, _) = linf_module(&Arc::new(trivial_module(&g))).unwrap();
        let res = standard_resolution(&v, 2, 5000).unwrap();
        let c = comparison_map(&res, 5000).unwrap();
        assert!(c.audit.passed(), "{:?}", c.audit);
        let cod = cochain_complex(&v, 2, 5000).unwrap();
        for k in 0..=2 {
            let f = c.reduced(&res, &cod.basis, &cod.basis, k);
            let h = cod.complex.cohomology(k).unwrap();
            let m = CochainComplex::induced_on_cohomology(&f, &cod.complex, &h, &h).unwrap();
            assert!(m.is_identity() || h.dim == 0);
        }
    }

    #[test]
    fn homogeneous_comparison_is_iso() {
        let b = Arc::new(FiniteGroupoid::blow_up(&GroupTable::cyclic(2), 2).unwrap());
        let z3 = Arc::new(FiniteGroupoid::from_group(&GroupTable::cyclic(3)));
        for g in [b, z3] {
            let v = Arc::new(trivial_module(&g));
            let res = homogeneous_resolution(&v, 2, 5000).unwrap();
            let c = comparison_map(&res, 5000).unwrap();
            assert!(c.audit.passed(), "{:?}", c.audit);
            let iso = c.cohomology_iso(&res, 5000).unwrap();
            assert!(iso.iter().all(IsoDegree::is_iso), "{iso:?}");
        }
    }

    #[test]
    fn homogeneous_pair_comparison() {
        let b = Arc::new(FiniteGroupoid::blow_up(&GroupTable::cyclic(2), 2).unwrap());
        let ids: Vec<usize> = (0..2).map(|e| b.id(e)).collect();
        let pair = GroupoidPair::from_subgroupoid(&b, &[0, 1], &ids).unwrap();
        let v = Arc::new(trivial_module(&b));
        let res = homogeneous_pair_resolution(&pair, &v, 1, 5000).unwrap();
        let pc = pair_comparison_map(&res, &Limits::default(), 3).unwrap();
        assert!(pc.passed());
        assert_eq!(pc.kernel_iso[1].dim_dom, 1);
        assert!(!pc.seminorm_samples.is_empty());
    }
}
