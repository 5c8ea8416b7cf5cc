//! Augmented resolutions of a coefficient module, with contractions.

use std::sync::Arc;

use serde::Serialize;

use crate::coefficients::{pullback, NormedModule};
use crate::cohomology::cochain_norm;
use crate::exact::{PolyhedralNorm, SparseMatrix, Q};
use crate::groupoid::{FiniteGroupoid, GroupoidPair};
use crate::resolutions::{self, BarComplex, BarKind};

use super::{is_equivariant, HomalgError, SparseModule};

/// `0 → V → D^0 → D^1 → ⋯ → D^{n+1}` with per-object contraction maps
/// `s^k : D^k → D^{k-1}` (`s^0 : D^0 → V`).
#[derive(Debug, Clone)]
pub struct AugmentedResolution {
    pub groupoid: Arc<FiniteGroupoid>,
    pub coefficients: Arc<NormedModule>,
    /// `D^0 … D^{n+1}`
    pub modules: Vec<SparseModule>,
    /// per object, `V_e → D^0_e`
    pub augmentation: Vec<SparseMatrix>,
    /// `[k][e]`: `D^k_e → D^{k+1}_e` for `k ≤ n`
    pub coboundaries: Vec<Vec<SparseMatrix>>,
    /// `[k][e]`: `D^k_e → D^{k-1}_e` for `k ≤ n + 1`
    pub contraction: Vec<Vec<SparseMatrix>>,
    /// the bar resolution the modules are functions on, when there is one
    pub bar: Option<BarComplex>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolutionAudit {
    pub equivariant: bool,
    pub cochain: bool,
    pub contraction_identity: bool,
    /// per degree, the largest norm of `s^k_e`
    pub contraction_norms: Vec<Q>,
}

impl ResolutionAudit {
    pub fn passed(&self) -> bool {
        self.equivariant
            && self.cochain
            && self.contraction_identity
            && self.contraction_norms.iter().all(|n| *n <= Q::one())
    }
}

/// `D^k = B(C_k(G), V)`, the standard resolution.
pub fn standard_resolution(v: &Arc<NormedModule>, n: usize, path_cap: usize) -> Result<AugmentedResolution, HomalgError> {
    let bar = BarComplex::inhomogeneous(&v.base, n + 1, path_cap)?;
    Ok(from_bar(bar, v))
}

/// `D^k = B(L_k(G), V)` with the cone contraction.
pub fn homogeneous_resolution(v: &Arc<NormedModule>, n: usize, path_cap: usize) -> Result<AugmentedResolution, HomalgError> {
    let bar = BarComplex::homogeneous(&v.base, n + 1, path_cap)?;
    Ok(from_bar(bar, v))
}

fn identity_block(t: &mut Vec<(usize, usize, Q)>, row: usize, col: usize, dim: usize, c: &Q) {
    for x in 0..dim {
        t.push((row + x, col + x, c.clone()));
    }
}

/// Cochains on a bar resolution with values in `v`, stored per object as
/// column-major `dim V_e × |paths into e|` matrices.
fn from_bar(bar: BarComplex, v: &Arc<NormedModule>) -> AugmentedResolution {
    let g = bar.groupoid.clone();
    let top = bar.max_degree();
    let objects = g.num_objects();
    let dv = |e: usize| v.dim(e);
    let modules: Vec<SparseModule> = (0..=top)
        .map(|k| {
            let b = bar.basis(k);
            let norms = (0..objects)
                .map(|e| cochain_norm(v, std::iter::repeat(e).take(b.fiber(e).len())))
                .collect();
            let action = (0..g.num_morphisms())
                .map(|a| {
                    let (s, t) = (g.source(a), g.target(a));
                    let (fs, ft) = (b.fiber(s), b.fiber(t));
                    let rho = v.action(a);
                    let mut trip = Vec::new();
                    for i in fs.clone() {
                        let j = bar.act(k, a, i);
                        let (r0, c0) = ((j - ft.start) * dv(t), (i - fs.start) * dv(s));
                        for x in 0..rho.rows() {
                            for y in 0..rho.cols() {
                                if !rho.get(x, y).is_zero() {
                                    trip.push((r0 + x, c0 + y, rho.get(x, y).clone()));
                                }
                            }
                        }
                    }
                    SparseMatrix::from_triplets(ft.len() * dv(t), fs.len() * dv(s), trip)
                })
                .collect();
            SparseModule {
                base: g.clone(),
                norms,
                action,
            }
        })
        .collect();
    let one = Q::one();
    let augmentation = (0..objects)
        .map(|e| {
            let f = bar.basis(0).fiber(e);
            let mut t = Vec::new();
            for p in 0..f.len() {
                identity_block(&mut t, p * dv(e), 0, dv(e), &one);
            }
            SparseMatrix::from_triplets(f.len() * dv(e), dv(e), t)
        })
        .collect();
    let coboundaries = (0..top)
        .map(|k| {
            let (lo, hi) = (bar.basis(k), bar.basis(k + 1));
            (0..objects)
                .map(|e| {
                    let (fl, fh) = (lo.fiber(e), hi.fiber(e));
                    let mut t = Vec::new();
                    for q in fh.clone() {
                        for (p, c) in resolutions::boundary(&g, bar.kind, hi.path(q)) {
                            let p = lo.idx(&p);
                            identity_block(&mut t, (q - fh.start) * dv(e), (p - fl.start) * dv(e), dv(e), &Q::from_int(c));
                        }
                    }
                    SparseMatrix::from_triplets(fh.len() * dv(e), fl.len() * dv(e), t)
                })
                .collect()
        })
        .collect();
    let contraction = (0..=top)
        .map(|k| {
            (0..objects)
                .map(|e| {
                    let hi = bar.basis(k);
                    let fh = hi.fiber(e);
                    let mut t = Vec::new();
                    if k == 0 {
                        let p = hi.idx(&[g.id(e)]);
                        identity_block(&mut t, 0, (p - fh.start) * dv(e), dv(e), &one);
                        return SparseMatrix::from_triplets(dv(e), fh.len() * dv(e), t);
                    }
                    let lo = bar.basis(k - 1);
                    let fl = lo.fiber(e);
                    for p in fl.clone() {
                        let q = hi.idx(&resolutions::cone(&g, lo.path(p)));
                        identity_block(&mut t, (p - fl.start) * dv(e), (q - fh.start) * dv(e), dv(e), &one);
                    }
                    SparseMatrix::from_triplets(fl.len() * dv(e), fh.len() * dv(e), t)
                })
                .collect()
        })
        .collect();
    AugmentedResolution {
        groupoid: g,
        coefficients: v.clone(),
        modules,
        augmentation,
        coboundaries,
        contraction,
        bar: Some(bar),
    }
}

fn coefficient_actions(v: &NormedModule) -> Vec<SparseMatrix> {
    v.actions().iter().map(|m| m.to_sparse()).collect()
}

impl AugmentedResolution {
    /// Highest degree `n` with both `δ^n` and the contraction identity on `D^n`.
    pub fn top_degree(&self) -> usize {
        self.modules.len() - 2
    }

    pub fn kind(&self) -> Option<BarKind> {
        self.bar.as_ref().map(|b| b.kind)
    }

    pub fn audit(&self) -> Result<ResolutionAudit, HomalgError> {
        let g = &self.groupoid;
        let n = self.top_degree();
        let va = coefficient_actions(&self.coefficients);
        let mut equivariant = is_equivariant(g, &self.augmentation, &va, &self.modules[0].action);
        for k in 0..=n {
            equivariant &= is_equivariant(g, &self.coboundaries[k], &self.modules[k].action, &self.modules[k + 1].action);
        }
        let mut cochain = true;
        for e in 0..g.num_objects() {
            cochain &= self.coboundaries[0][e].mul(&self.augmentation[e]).is_zero();
            for k in 1..=n {
                cochain &= self.coboundaries[k][e].mul(&self.coboundaries[k - 1][e]).is_zero();
            }
        }
        let mut contraction_identity = true;
        for e in 0..g.num_objects() {
            let s = |k: usize| &self.contraction[k][e];
            let d = |k: usize| &self.coboundaries[k][e];
            contraction_identity &= s(0).mul(&self.augmentation[e]).is_identity();
            contraction_identity &= self.augmentation[e].mul(s(0)).add(&s(1).mul(d(0))).is_identity();
            for k in 1..=n {
                contraction_identity &= d(k - 1).mul(s(k)).add(&s(k + 1).mul(d(k))).is_identity();
            }
        }
        let mut contraction_norms = Vec::new();
        for k in 0..=n + 1 {
            let mut best = Q::zero();
            for e in 0..g.num_objects() {
                let cod = if k == 0 {
                    self.coefficients.norm(e)
                } else {
                    &self.modules[k - 1].norms[e]
                };
                best = best.max(PolyhedralNorm::operator_norm_sparse(
                    &self.contraction[k][e],
                    &self.modules[k].norms[e],
                    cod,
                )?);
            }
            contraction_norms.push(best);
        }
        Ok(ResolutionAudit {
            equivariant,
            cochain,
            contraction_identity,
            contraction_norms,
        })
    }
}

/// Resolutions over `G` and `A` with a cochain map `φ` from the first to
/// the second, lying over the inclusion.
#[derive(Debug, Clone)]
pub struct PairResolution {
    pub pair: GroupoidPair,
    pub ambient: AugmentedResolution,
    pub sub: AugmentedResolution,
    /// `[k][a]`: `D^k_{i(a)} → D'^k_a`
    pub connecting: Vec<Vec<SparseMatrix>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairAudit {
    pub ambient: ResolutionAudit,
    pub sub: ResolutionAudit,
    pub equivariant: bool,
    pub commutes_with_coboundary: bool,
    pub commutes_with_augmentation: bool,
    pub commutes_with_contraction: bool,
}

impl PairAudit {
    pub fn passed(&self) -> bool {
        self.ambient.passed()
            && self.sub.passed()
            && self.equivariant
            && self.commutes_with_coboundary
            && self.commutes_with_augmentation
            && self.commutes_with_contraction
    }
}

pub fn standard_pair_resolution(
    pair: &GroupoidPair,
    v: &Arc<NormedModule>,
    n: usize,
    path_cap: usize,
) -> Result<PairResolution, HomalgError> {
    let ambient = standard_resolution(v, n, path_cap)?;
    let sub_v = Arc::new(pullback(&pair.inclusion, v)?);
    let sub = standard_resolution(&sub_v, n, path_cap)?;
    Ok(restriction_pair(pair, ambient, sub))
}

pub fn homogeneous_pair_resolution(
    pair: &GroupoidPair,
    v: &Arc<NormedModule>,
    n: usize,
    path_cap: usize,
) -> Result<PairResolution, HomalgError> {
    let ambient = homogeneous_resolution(v, n, path_cap)?;
    let sub_v = Arc::new(pullback(&pair.inclusion, v)?);
    let sub = homogeneous_resolution(&sub_v, n, path_cap)?;
    Ok(restriction_pair(pair, ambient, sub))
}

/// `φ` = restriction of functions to the paths of the subgroupoid.
fn restriction_pair(pair: &GroupoidPair, ambient: AugmentedResolution, sub: AugmentedResolution) -> PairResolution {
    let inc = &pair.inclusion;
    let (ab, sb) = (ambient.bar.as_ref().unwrap(), sub.bar.as_ref().unwrap());
    let v = &sub.coefficients;
    let connecting = (0..ambient.modules.len())
        .map(|k| {
            (0..pair.sub.num_objects())
                .map(|a| {
                    let e = inc.objects[a];
                    let d = v.dim(a);
                    let (fs, fa) = (sb.basis(k).fiber(a), ab.basis(k).fiber(e));
                    let mut t = Vec::new();
                    for p in fs.clone() {
                        let image: Vec<usize> = sb.basis(k).path(p).iter().map(|&x| inc.morphisms[x]).collect();
                        let q = ab.basis(k).idx(&image);
                        identity_block(&mut t, (p - fs.start) * d, (q - fa.start) * d, d, &Q::one());
                    }
                    SparseMatrix::from_triplets(fs.len() * d, fa.len() * d, t)
                })
                .collect()
        })
        .collect();
    PairResolution {
        pair: pair.clone(),
        ambient,
        sub,
        connecting,
    }
}

impl PairResolution {
    pub fn audit(&self) -> Result<PairAudit, HomalgError> {
        let a = &self.pair.sub;
        let inc = &self.pair.inclusion;
        let n = self.ambient.top_degree();
        let phi = &self.connecting;
        let mut equivariant = true;
        for k in 0..=n + 1 {
            for b in 0..a.num_morphisms() {
                let lhs = phi[k][a.target(b)].mul(&self.ambient.modules[k].action[inc.morphisms[b]]);
                let rhs = self.sub.modules[k].action[b].mul(&phi[k][a.source(b)]);
                equivariant &= lhs.sub(&rhs).is_zero();
            }
        }
        let mut commutes_with_coboundary = true;
        let mut commutes_with_augmentation = true;
        let mut commutes_with_contraction = true;
        for x in 0..a.num_objects() {
            let e = inc.objects[x];
            commutes_with_augmentation &= phi[0][x]
                .mul(&self.ambient.augmentation[e])
                .sub(&self.sub.augmentation[x])
                .is_zero();
            for k in 0..=n {
                commutes_with_coboundary &= phi[k + 1][x]
                    .mul(&self.ambient.coboundaries[k][e])
                    .sub(&self.sub.coboundaries[k][x].mul(&phi[k][x]))
                    .is_zero();
            }
            commutes_with_contraction &= self.ambient.contraction[0][e]
                .sub(&self.sub.contraction[0][x].mul(&phi[0][x]))
                .is_zero();
            for k in 1..=n + 1 {
                commutes_with_contraction &= phi[k - 1][x]
                    .mul(&self.ambient.contraction[k][e])
                    .sub(&self.sub.contraction[k][x].mul(&phi[k][x]))
                    .is_zero();
            }
        }
        Ok(PairAudit {
            ambient: self.ambient.audit()?,
            sub: self.sub.audit()?,
            equivariant,
            commutes_with_coboundary,
            commutes_with_augmentation,
            commutes_with_contraction,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{linf_module, trivial_module};
    use crate::groupoid::GroupTable;

    fn group(t: GroupTable) -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::from_group(&t))
    }

    #[test]
    fn degree_zero_contraction_evaluates_at_identity() {
        let g = group(GroupTable::cyclic(2));
        let v = Arc::new(trivial_module(&g));
        let r = standard_resolution(&v, 1, 1000).unwrap();
        let s0 = r.contraction[0][0].to_dense();
        let b = r.bar.as_ref().unwrap().basis(0);
        let id = b.idx(&[g.id(0)]);
        assert_eq!(s0.rows(), 1);
        for j in 0..s0.cols() {
            assert_eq!(*s0.get(0, j), if j == id { Q::one() } else { Q::zero() });
        }
    }

    #[test]
    fn standard_and_homogeneous_audits() {
        for (g, n) in [(group(GroupTable::cyclic(3)), 2), (group(GroupTable::cyclic(2)), 2)] {
            let v = Arc::new(trivial_module(&g));
            let (l, _) = linf_module(&v).unwrap();
            for m in [v, l] {
                let s = standard_resolution(&m, n, 5000).unwrap();
                let a = s.audit().unwrap();
                assert!(a.passed(), "{a:?}");
                let h = homogeneous_resolution(&m, n, 5000).unwrap();
                let a = h.audit().unwrap();
                assert!(a.passed(), "{a:?}");
            }
        }
    }

    #[test]
    fn pair_audits() {
        let b = Arc::new(FiniteGroupoid::blow_up(&GroupTable::cyclic(2), 2).unwrap());
        let ids: Vec<usize> = (0..2).map(|e| b.id(e)).collect();
        let pair = GroupoidPair::from_subgroupoid(&b, &[0, 1], &ids).unwrap();
        let v = Arc::new(trivial_module(&b));
        for r in [
            standard_pair_resolution(&pair, &v, 1, 5000).unwrap(),
            homogeneous_pair_resolution(&pair, &v, 1, 5000).unwrap(),
        ] {
            let a = r.audit().unwrap();
            assert!(a.passed(), "{a:?}");
        }
    }
}
