//! Slot-wise averaging over a subgroupoid on the homogeneous resolution.

use std::collections::HashMap;

use serde::Serialize;

use crate::exact::{PolyhedralNorm, RationalMatrix, SparseMatrix, Q};
use crate::groupoid::GroupoidPair;
use crate::homalg::{is_equivariant, AugmentedResolution};
use crate::resolutions::BarKind;

use super::{AmenabilityError, Mean};

/// `Φ^k_i` on `D^k` for every degree of the resolution, and the composites
/// `A^k = Φ^k_0 ∘ ⋯ ∘ Φ^k_k` below the top degree, per object.
#[derive(Debug, Clone)]
pub struct AveragingOperator {
    pub pair: GroupoidPair,
    pub resolution: AugmentedResolution,
    /// `[k][i][e]`
    pub slots: Vec<Vec<Vec<SparseMatrix>>>,
    /// `[k][e]`, `k` below the top degree
    pub maps: Vec<Vec<SparseMatrix>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AveragingAudit {
    /// per degree, the largest norm of `A^k_e`
    pub norms: Vec<Q>,
    pub equivariant: bool,
    pub cochain_map: bool,
    pub extends_identity: bool,
    pub face_relations: bool,
    /// only computed when the sub is everything
    pub constant_on_fibers: Option<bool>,
}

impl AveragingAudit {
    pub fn passed(&self) -> bool {
        self.norms.iter().all(|n| *n <= Q::one())
            && self.equivariant
            && self.cochain_map
            && self.extends_identity
            && self.face_relations
            && self.constant_on_fibers != Some(false)
    }
}

/// Builds the averaging operators of `mean` (a mean on `pair.sub` whose
/// coefficients are those of `res` pulled back) on every degree of `res`,
/// which must be a homogeneous resolution over `pair.ambient`.
pub fn averaging_operator(
    pair: &GroupoidPair,
    mean: &Mean,
    res: &AugmentedResolution,
) -> Result<AveragingOperator, AmenabilityError> {
    let g = &pair.ambient;
    let bar = match (&res.bar, res.kind()) {
        (Some(b), Some(BarKind::Homogeneous)) => b,
        _ => return Err(AmenabilityError::Mismatch("a homogeneous resolution is required".into())),
    };
    if *res.groupoid != **g || *mean.base != *pair.sub {
        return Err(AmenabilityError::Mismatch("groupoids do not match the pair".into()));
    }
    let inc = &pair.inclusion;
    let v = &res.coefficients;
    for (x, &e) in inc.objects.iter().enumerate() {
        if mean.coefficients.dim(x) != v.dim(e) {
            return Err(AmenabilityError::Mismatch(format!("coefficient dimension differs at sub object {x}")));
        }
    }
    let mut sub_of = vec![None; g.num_objects()];
    for (x, &e) in inc.objects.iter().enumerate() {
        sub_of[e] = Some(x);
    }
    let blocks: Vec<Vec<RationalMatrix>> = (0..pair.sub.num_objects())
        .map(|x| (0..pair.sub.fiber(x).len()).map(|k| mean.block(x, k)).collect())
        .collect();
    let mut conj: HashMap<(usize, usize), RationalMatrix> = HashMap::new();
    let mut slots = Vec::new();
    for k in 0..=bar.max_degree() {
        let basis = bar.basis(k);
        let mut per_slot = Vec::new();
        for i in 0..=k {
            let mut per_object = Vec::new();
            for e in 0..g.num_objects() {
                let d = v.dim(e);
                let fiber = basis.fiber(e);
                let mut t = Vec::new();
                for p in fiber.clone() {
                    let path = basis.path(p);
                    let l = p - fiber.start;
                    let gi = path[i];
                    let Some(x) = sub_of[g.source(gi)] else {
                        for r in 0..d {
                            t.push((l * d + r, l * d + r, Q::one()));
                        }
                        continue;
                    };
                    for (kpos, &a) in pair.sub.fiber(x).iter().enumerate() {
                        let m = conj.entry((gi, kpos)).or_insert_with(|| {
                            v.action(gi).mul(&blocks[x][kpos]).mul(v.action(g.inv(gi)))
                        });
                        let mut q = path.to_vec();
                        q[i] = g.compose_unchecked(gi, inc.morphisms[a]);
                        let lq = basis.idx(&q) - fiber.start;
                        for r in 0..d {
                            for c in 0..d {
                                let w = m.get(r, c);
                                if !w.is_zero() {
                                    t.push((l * d + r, lq * d + c, w.clone()));
                                }
                            }
                        }
                    }
                }
                per_object.push(SparseMatrix::from_triplets(fiber.len() * d, fiber.len() * d, t));
            }
            per_slot.push(per_object);
        }
        slots.push(per_slot);
    }
    let top = slots.len() - 1;
    let maps = (0..top)
        .map(|k| {
            (0..g.num_objects())
                .map(|e| apply_slots(&slots[k], e, SparseMatrix::identity(slots[k][0][e].cols())))
                .collect()
        })
        .collect();
    Ok(AveragingOperator {
        pair: pair.clone(),
        resolution: res.clone(),
        slots,
        maps,
    })
}

/// `Φ_0 ∘ ⋯ ∘ Φ_k ∘ m` at object `e`, applied right to left.
fn apply_slots(slots: &[Vec<SparseMatrix>], e: usize, m: SparseMatrix) -> SparseMatrix {
    slots.iter().rev().fold(m, |acc, s| s[e].mul(&acc))
}

impl AveragingOperator {
    /// Highest degree carrying the slot operators; `A` is built below it.
    pub fn top_degree(&self) -> usize {
        self.slots.len() - 1
    }

    /// The `i`-th coface `D^{k-1} → D^k`, `(δ_i φ)(g_0, …, g_k) = φ(…, ĝ_i, …)`.
    pub fn face(&self, k: usize, i: usize) -> Vec<SparseMatrix> {
        let res = &self.resolution;
        let bar = res.bar.as_ref().expect("homogeneous");
        let (lo, hi) = (bar.basis(k - 1), bar.basis(k));
        (0..res.groupoid.num_objects())
            .map(|e| {
                let d = res.coefficients.dim(e);
                let (fl, fh) = (lo.fiber(e), hi.fiber(e));
                let mut t = Vec::new();
                for q in fh.clone() {
                    let mut p = hi.path(q).to_vec();
                    p.remove(i);
                    let lp = lo.idx(&p) - fl.start;
                    for r in 0..d {
                        t.push(((q - fh.start) * d + r, lp * d + r, Q::one()));
                    }
                }
                SparseMatrix::from_triplets(fh.len() * d, fl.len() * d, t)
            })
            .collect()
    }

    pub fn audit(&self) -> Result<AveragingAudit, AmenabilityError> {
        let res = &self.resolution;
        let g = &res.groupoid;
        let objects = g.num_objects();
        let mut norms = Vec::new();
        for (k, a) in self.maps.iter().enumerate() {
            let m = &res.modules[k];
            let mut best = Q::zero();
            for e in 0..objects {
                best = best.max(PolyhedralNorm::operator_norm_sparse(&a[e], &m.norms[e], &m.norms[e])?);
            }
            norms.push(best);
        }
        let equivariant = self
            .maps
            .iter()
            .enumerate()
            .all(|(k, a)| is_equivariant(g, a, &res.modules[k].action, &res.modules[k].action));
        let cochain_map = (0..self.top_degree()).all(|k| {
            (0..objects).all(|e| {
                let d = &res.coboundaries[k][e];
                d.mul(&self.maps[k][e])
                    .sub(&apply_slots(&self.slots[k + 1], e, d.clone()))
                    .is_zero()
            })
        });
        let extends_identity =
            (0..objects).all(|e| self.maps[0][e].mul(&res.augmentation[e]).sub(&res.augmentation[e]).is_zero());
        let mut face_relations = true;
        'outer: for k in 1..=self.top_degree() {
            for i in 0..=k {
                let face = self.face(k, i);
                for j in 0..=k {
                    for e in 0..objects {
                        let lhs = self.slots[k][j][e].mul(&face[e]);
                        let rhs = match i.cmp(&j) {
                            std::cmp::Ordering::Greater => face[e].mul(&self.slots[k - 1][j][e]),
                            std::cmp::Ordering::Less => face[e].mul(&self.slots[k - 1][j - 1][e]),
                            std::cmp::Ordering::Equal => face[e].clone(),
                        };
                        if !lhs.sub(&rhs).is_zero() {
                            face_relations = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        let full = self.pair.sub.num_morphisms() == g.num_morphisms();
        let constant_on_fibers = full.then(|| self.constant_on_fibers());
        Ok(AveragingAudit {
            norms,
            equivariant,
            cochain_map,
            extends_identity,
            face_relations,
            constant_on_fibers,
        })
    }

    /// Whether every `A^k(φ)` takes the same value on all tuples with a
    /// common target, i.e. all row blocks of `A^k_e` coincide.
    pub fn constant_on_fibers(&self) -> bool {
        let res = &self.resolution;
        self.maps.iter().all(|a| {
            (0..res.groupoid.num_objects()).all(|e| {
                let d = res.coefficients.dim(e);
                let m = &a[e];
                let paths = if d == 0 { 0 } else { m.rows() / d };
                (1..paths).all(|l| (0..d).all(|r| m.row(l * d + r) == m.row(r)))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::amenability::uniform_mean;
    use crate::coefficients::trivial_module;
    use crate::groupoid::{FiniteGroupoid, GroupTable};
    use crate::homalg::homogeneous_resolution;

    fn setup(pair: &GroupoidPair, n: usize) -> AveragingOperator {
        let v = Arc::new(trivial_module(&pair.ambient));
        let res = homogeneous_resolution(&v, n, 5000).unwrap();
        let m = uniform_mean(&pair.sub);
        averaging_operator(pair, &m, &res).unwrap()
    }

    #[test]
    fn full_sub_averages_everything() {
        let g = Arc::new(FiniteGroupoid::from_group(&GroupTable::cyclic(2)));
        let op = setup(&GroupoidPair::full(&g), 1);
        let audit = op.audit().unwrap();
        assert!(audit.passed(), "{audit:?}");
        assert_eq!(audit.constant_on_fibers, Some(true));
        let h = Q::new(1, 2);
        let expected = RationalMatrix::from_rows(vec![vec![h.clone(), h.clone()], vec![h.clone(), h]], 2);
        assert_eq!(op.maps[0][0].to_dense(), expected);
    }

    #[test]
    fn empty_sub_is_identity() {
        let g = Arc::new(FiniteGroupoid::from_group(&GroupTable::cyclic(3)));
        let op = setup(&GroupoidPair::empty_sub(&g), 2);
        assert!(op.maps.iter().all(|a| a.iter().all(SparseMatrix::is_identity)));
        assert!(op.audit().unwrap().passed());
    }

    #[test]
    fn vertex_subgroups_of_blow_up() {
        let z2 = GroupTable::cyclic(2);
        let b = Arc::new(FiniteGroupoid::blow_up(&z2, 2).unwrap());
        let pair = GroupoidPair::from_subgroupoid(&b, &[0], &b.vertex_group(0)).unwrap();
        let op = setup(&pair, 1);
        let audit = op.audit().unwrap();
        assert!(audit.passed(), "{audit:?}");
        assert_eq!(audit.constant_on_fibers, None);
    }
}
