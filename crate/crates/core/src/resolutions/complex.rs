//! Chain-level matrices of the bar resolutions.

use std::sync::Arc;

use crate::exact::{Q, SparseMatrix};
use crate::groupoid::{FiniteGroupoid, GroupoidMap, Homotopy};

use super::paths::{self, act, BarKind, Chain, PathBasis};
use super::ResolutionError;

/// A bar resolution built through a fixed degree.
#[derive(Debug, Clone)]
pub struct BarComplex {
    pub groupoid: Arc<FiniteGroupoid>,
    pub kind: BarKind,
    bases: Vec<PathBasis>,
}

impl BarComplex {
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        kind: BarKind,
        max_degree: usize,
        cap: usize,
    ) -> Result<Self, ResolutionError> {
        let bases = (0..=max_degree)
            .map(|n| PathBasis::new(&groupoid, kind, n, cap))
            .collect::<Result<_, _>>()?;
        Ok(BarComplex {
            groupoid,
            kind,
            bases,
        })
    }

    pub fn inhomogeneous(g: &Arc<FiniteGroupoid>, max_degree: usize, cap: usize) -> Result<Self, ResolutionError> {
        Self::new(g.clone(), BarKind::Inhomogeneous, max_degree, cap)
    }

    pub fn homogeneous(g: &Arc<FiniteGroupoid>, max_degree: usize, cap: usize) -> Result<Self, ResolutionError> {
        Self::new(g.clone(), BarKind::Homogeneous, max_degree, cap)
    }

    pub fn max_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, n: usize) -> &PathBasis {
        &self.bases[n]
    }

    fn chain_matrix(&self, rows: &PathBasis, cols: &PathBasis, f: impl Fn(&[usize]) -> Chain) -> SparseMatrix {
        chain_matrix(rows, cols, f)
    }

    /// `∂_n : C_n → C_{n-1}` for `n ≥ 1`.
    pub fn boundary(&self, n: usize) -> SparseMatrix {
        assert!(n >= 1 && n <= self.max_degree());
        let g = &self.groupoid;
        self.chain_matrix(&self.bases[n - 1], &self.bases[n], |p| paths::boundary(g, self.kind, p))
    }

    /// `ε : C_0 → ⊕_e R`, every basis path to 1 at its fiber.
    pub fn augmentation(&self) -> SparseMatrix {
        let b = &self.bases[0];
        SparseMatrix::from_triplets(
            self.groupoid.num_objects(),
            b.len(),
            (0..b.len()).map(|i| (b.fiber_of(i), i, Q::one())).collect(),
        )
    }

    /// `s_{-1} : ⊕_e R → C_0`, `e ↦ id_e`.
    pub fn contraction_base(&self) -> SparseMatrix {
        let g = &self.groupoid;
        let b = &self.bases[0];
        SparseMatrix::from_triplets(
            b.len(),
            g.num_objects(),
            (0..g.num_objects()).map(|e| (b.idx(&[g.id(e)]), e, Q::one())).collect(),
        )
    }

    /// `s_n : C_n → C_{n+1}`.
    pub fn contraction(&self, n: usize) -> SparseMatrix {
        assert!(n < self.max_degree());
        let g = &self.groupoid;
        self.chain_matrix(&self.bases[n + 1], &self.bases[n], |p| vec![(paths::cone(g, p), 1)])
    }

    /// Index of `ρ_a` applied to basis path `i` of degree `n`.
    pub fn act(&self, n: usize, a: usize, i: usize) -> usize {
        let p = act(&self.groupoid, self.kind, a, self.bases[n].path(i));
        self.bases[n].idx(&p)
    }

    /// Whether `m : C_n(self) → C_k(cod)` commutes with the actions along
    /// `f` (the identity when `f` is `None`).
    pub fn is_equivariant(&self, n: usize, m: &SparseMatrix, cod: &BarComplex, k: usize, f: Option<&GroupoidMap>) -> bool {
        let g = &self.groupoid;
        let mt = m.transpose();
        let dom = &self.bases[n];
        for a in 0..g.num_morphisms() {
            let fa = f.map_or(a, |f| f.morphisms[a]);
            for i in dom.fiber(g.source(a)) {
                let j = self.act(n, a, i);
                // m(ρ_a x_i) = ρ_{f(a)} m(x_i)
                let mut lhs: Vec<(usize, Q)> = mt.row(j).to_vec();
                let mut rhs: Vec<(usize, Q)> = mt
                    .row(i)
                    .iter()
                    .map(|(r, v)| (cod.act(k, fa, *r), v.clone()))
                    .collect();
                lhs.sort_by_key(|x| x.0);
                rhs.sort_by_key(|x| x.0);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn chain_matrix(rows: &PathBasis, cols: &PathBasis, f: impl Fn(&[usize]) -> Chain) -> SparseMatrix {
    let mut t = Vec::new();
    for (j, p) in cols.paths().iter().enumerate() {
        for (q, c) in f(p) {
            t.push((rows.idx(&q), j, Q::from_int(c)));
        }
    }
    SparseMatrix::from_triplets(rows.len(), cols.len(), t)
}

/// Operator norm of a map between ℓ1-normed path spaces: the largest ℓ1
/// norm of the image of a basis path.
pub fn l1_operator_norm(m: &SparseMatrix) -> Q {
    let mt = m.transpose();
    (0..mt.rows())
        .map(|j| mt.row(j).iter().map(|(_, v)| v.abs()).sum::<Q>())
        .max()
        .unwrap_or_else(Q::zero)
}

/// The two translation maps in degree `n`: inhomogeneous to homogeneous and back.
pub fn hom_inhom_isos(inhom: &BarComplex, hom: &BarComplex, n: usize) -> (SparseMatrix, SparseMatrix) {
    let g = &inhom.groupoid;
    let to_hom = chain_matrix(hom.basis(n), inhom.basis(n), |p| vec![(paths::inhom_to_hom(g, p), 1)]);
    let to_inhom = chain_matrix(inhom.basis(n), hom.basis(n), |p| vec![(paths::hom_to_inhom(g, p), 1)]);
    (to_hom, to_inhom)
}

/// `C_n(f)`: apply `f` to every entry.
pub fn induced_chain_map(f: &GroupoidMap, dom: &BarComplex, cod: &BarComplex, n: usize) -> SparseMatrix {
    chain_matrix(cod.basis(n), dom.basis(n), |p| {
        vec![(p.iter().map(|&a| f.morphisms[a]).collect(), 1)]
    })
}

/// The summands `s^i` of the homotopy operator of `h : from ⇒ to`, on
/// inhomogeneous paths: `(to(g_0), …, to(g_i), h_{s(g_i)}, from(g_{i+1}), …, from(g_n))`.
/// Returns `Σ_i (-1)^{i+1} s^i`, which satisfies
/// `∂s + s∂ = C(to) − h·C(from)`.
pub fn homotopy_terms(h: &Homotopy, path: &[usize]) -> Chain {
    let d = &h.from.dom;
    let n = path.len() - 1;
    (0..=n)
        .map(|i| {
            let mut p = Vec::with_capacity(n + 2);
            p.extend(path[..=i].iter().map(|&a| h.to.morphisms[a]));
            p.push(h.component[d.source(path[i])]);
            p.extend(path[i + 1..].iter().map(|&a| h.from.morphisms[a]));
            (p, -paths::sign(i))
        })
        .collect()
}

/// Homotopy operator `C_n(G) → C_{n+1}(H)` (inhomogeneous resolutions).
pub fn homotopy_operator(h: &Homotopy, dom: &BarComplex, cod: &BarComplex, n: usize) -> SparseMatrix {
    assert_eq!(dom.kind, BarKind::Inhomogeneous);
    chain_matrix(cod.basis(n + 1), dom.basis(n), |p| homotopy_terms(h, p))
}

/// `h·C_n(from)`: apply `from`, then act by `h` on the leading entry.
pub fn twisted_chain_map(h: &Homotopy, dom: &BarComplex, cod: &BarComplex, n: usize) -> SparseMatrix {
    let c = &h.from.cod;
    let d = &h.from.dom;
    chain_matrix(cod.basis(n), dom.basis(n), |p| {
        let mut q: Vec<usize> = p.iter().map(|&a| h.from.morphisms[a]).collect();
        q[0] = c.compose_unchecked(h.component[d.target(p[0])], q[0]);
        vec![(q, 1)]
    })
}

/// `Alt_n` on the homogeneous resolution, `(1/(n+1)!) Σ_σ sgn(σ) σ·(g_0, …, g_n)`.
pub fn alt_operator(hom: &BarComplex, n: usize) -> SparseMatrix {
    assert_eq!(hom.kind, BarKind::Homogeneous);
    let perms = permutations(n + 1);
    let scale = Q::inv_factorial(n + 1);
    let b = hom.basis(n);
    let mut t = Vec::new();
    for (j, p) in b.paths().iter().enumerate() {
        for (perm, sg) in &perms {
            let q: Vec<usize> = perm.iter().map(|&k| p[k]).collect();
            t.push((b.idx(&q), j, &scale * &Q::from_int(*sg)));
        }
    }
    SparseMatrix::from_triplets(b.len(), b.len(), t)
}

/// All permutations of `0..k` with their signs.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            (p, paths::sign(inversions))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi, PolyhedralNorm};
    use crate::groupoid::{skeleton_retraction, GroupTable};

    const CAP: usize = 20_000;

    fn fixtures() -> Vec<Arc<FiniteGroupoid>> {
        let z2 = GroupTable::cyclic(2);
        vec![
            Arc::new(FiniteGroupoid::from_group(&GroupTable::trivial())),
            Arc::new(FiniteGroupoid::from_group(&z2)),
            Arc::new(FiniteGroupoid::from_group(&GroupTable::cyclic(3))),
            Arc::new(FiniteGroupoid::blow_up(&z2, 2).unwrap()),
            Arc::new(FiniteGroupoid::action_groupoid(&z2, &[vec![0, 1], vec![1, 0]]).unwrap()),
        ]
    }

    #[test]
    fn boundary_squares_to_zero() {
        for g in fixtures() {
            for kind in [BarKind::Inhomogeneous, BarKind::Homogeneous] {
                let c = BarComplex::new(g.clone(), kind, 3, CAP).unwrap();
                assert!(c.augmentation().mul(&c.boundary(1)).is_zero());
                for n in 2..=3 {
                    assert!(c.boundary(n - 1).mul(&c.boundary(n)).is_zero());
                }
                for n in 1..=3 {
                    assert!(l1_operator_norm(&c.boundary(n)) <= Q::from(n + 1));
                    assert!(c.is_equivariant(n, &c.boundary(n), &c, n - 1, None));
                }
            }
        }
    }

    #[test]
    fn z2_degree_one_boundary() {
        let g = &fixtures()[1];
        let c = BarComplex::inhomogeneous(g, 1, CAP).unwrap();
        assert_eq!(c.basis(1).len(), 4);
        let d = c.boundary(1);
        // ∂(a, a) = (a·a) − (a) = (1) − (a)
        let j = c.basis(1).idx(&[1, 1]);
        assert_eq!(d.get(c.basis(0).idx(&[0]), j), qi(1));
        assert_eq!(d.get(c.basis(0).idx(&[1]), j), qi(-1));
        let h = BarComplex::homogeneous(g, 1, CAP).unwrap();
        let dh = h.boundary(1);
        let j = h.basis(1).idx(&[0, 1]);
        assert_eq!(dh.get(h.basis(0).idx(&[1]), j), qi(1));
        assert_eq!(dh.get(h.basis(0).idx(&[0]), j), qi(-1));
    }

    #[test]
    fn contraction_identities() {
        for g in fixtures() {
            for kind in [BarKind::Inhomogeneous, BarKind::Homogeneous] {
                let c = BarComplex::new(g.clone(), kind, 3, CAP).unwrap();
                let n0 = c.basis(0).len();
                let lhs0 = c.boundary(1).mul(&c.contraction(0)).add(&c.contraction_base().mul(&c.augmentation()));
                assert!(lhs0.sub(&SparseMatrix::identity(n0)).is_zero());
                assert!(c.augmentation().mul(&c.contraction_base()).is_identity());
                for n in 1..3 {
                    let lhs = c.boundary(n + 1).mul(&c.contraction(n)).add(&c.contraction(n - 1).mul(&c.boundary(n)));
                    assert!(lhs.is_identity());
                    assert_eq!(l1_operator_norm(&c.contraction(n)), qi(1));
                }
            }
        }
    }

    #[test]
    fn translation_isos() {
        for g in fixtures() {
            let i = BarComplex::inhomogeneous(&g, 3, CAP).unwrap();
            let h = BarComplex::homogeneous(&g, 3, CAP).unwrap();
            for n in 0..=3 {
                let (a, b) = hom_inhom_isos(&i, &h, n);
                assert!(a.mul(&b).is_identity() && b.mul(&a).is_identity());
                assert_eq!(l1_operator_norm(&a), qi(1));
                assert_eq!(l1_operator_norm(&b), qi(1));
                assert!(i.is_equivariant(n, &a, &h, n, None));
                if n >= 1 {
                    let (a1, _) = hom_inhom_isos(&i, &h, n - 1);
                    assert!(h.boundary(n).mul(&a).sub(&a1.mul(&i.boundary(n))).is_zero());
                }
            }
            // the homogeneous cone is the transported contraction
            for n in 0..3 {
                let (a, b) = hom_inhom_isos(&i, &h, n);
                let (a1, _) = hom_inhom_isos(&i, &h, n + 1);
                assert_eq!(a1.mul(&i.contraction(n)).mul(&b).to_dense(), h.contraction(n).to_dense());
                let _ = a;
            }
        }
        let z2 = &fixtures()[1];
        let i = BarComplex::inhomogeneous(z2, 1, CAP).unwrap();
        let h = BarComplex::homogeneous(z2, 1, CAP).unwrap();
        let (a, _) = hom_inhom_isos(&i, &h, 1);
        assert_eq!(a.get(h.basis(1).idx(&[1, 0]), i.basis(1).idx(&[1, 1])), qi(1));
    }

    #[test]
    fn operator_norm_matches_lp() {
        let g = &fixtures()[1];
        let c = BarComplex::inhomogeneous(g, 2, CAP).unwrap();
        let d = c.boundary(2).to_dense();
        let lp = PolyhedralNorm::operator_norm_lp(
            &d,
            &PolyhedralNorm::l1(d.cols()),
            &PolyhedralNorm::l1(d.rows()),
        )
        .unwrap();
        assert_eq!(lp, l1_operator_norm(&c.boundary(2)));
    }

    #[test]
    fn induced_maps() {
        let fx = fixtures();
        let b = &fx[3];
        let r = skeleton_retraction(b, None).unwrap();
        let cb = BarComplex::inhomogeneous(b, 2, CAP).unwrap();
        let cs = BarComplex::inhomogeneous(&r.skeleton, 2, CAP).unwrap();
        for n in 0..=2 {
            let inc = induced_chain_map(&r.include, &cs, &cb, n);
            let proj = induced_chain_map(&r.project, &cb, &cs, n);
            assert!(proj.mul(&inc).is_identity());
            assert!(l1_operator_norm(&inc) <= qi(1));
            assert!(cs.is_equivariant(n, &inc, &cb, n, Some(&r.include)));
            assert!(cb.is_equivariant(n, &proj, &cs, n, Some(&r.project)));
            // the retraction hits every basis path
            let pt = proj.transpose();
            assert!((0..pt.rows()).all(|i| !pt.row(i).is_empty()));
            if n >= 1 {
                assert!(cb.boundary(n).mul(&inc).sub(&induced_chain_map(&r.include, &cs, &cb, n - 1).mul(&cs.boundary(n))).is_zero());
            }
        }
    }

    #[test]
    fn homotopy_operator_identity() {
        let fx = fixtures();
        for g in [&fx[3], &fx[4], &fx[1]] {
            let r = skeleton_retraction(g, None).unwrap();
            let h = &r.homotopy;
            let c = BarComplex::inhomogeneous(g, 3, CAP).unwrap();
            for n in 0..=2 {
                let s = homotopy_operator(h, &c, &c, n);
                let mut lhs = c.boundary(n + 1).mul(&s);
                if n >= 1 {
                    lhs = lhs.add(&homotopy_operator(h, &c, &c, n - 1).mul(&c.boundary(n)));
                }
                let rhs = induced_chain_map(&h.to, &c, &c, n).sub(&twisted_chain_map(h, &c, &c, n));
                assert_eq!(lhs.to_dense(), rhs.to_dense());
                assert!(l1_operator_norm(&s) <= Q::from(n + 1));
            }
        }
    }

    #[test]
    fn identity_homotopy_gives_null_homotopy_of_zero() {
        let g = &fixtures()[2];
        let id = GroupoidMap::identity(g);
        let h = Homotopy::identity(&id);
        let c = BarComplex::inhomogeneous(g, 3, CAP).unwrap();
        for n in 1..=2 {
            let lhs = c.boundary(n + 1).mul(&homotopy_operator(&h, &c, &c, n)).add(&homotopy_operator(&h, &c, &c, n - 1).mul(&c.boundary(n)));
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn alt_properties() {
        for g in fixtures() {
            let h = BarComplex::homogeneous(&g, 3, CAP).unwrap();
            assert!(alt_operator(&h, 0).is_identity());
            for n in 1..=3 {
                let a = alt_operator(&h, n);
                assert_eq!(a.mul(&a).to_dense(), a.to_dense());
                assert!(l1_operator_norm(&a) <= qi(1));
                assert!(h.is_equivariant(n, &a, &h, n, None));
                let a1 = alt_operator(&h, n - 1);
                assert!(h.boundary(n).mul(&a).sub(&a1.mul(&h.boundary(n))).is_zero());
            }
        }
        let z2 = &fixtures()[1];
        let h = BarComplex::homogeneous(z2, 1, CAP).unwrap();
        let a = alt_operator(&h, 1);
        let j = h.basis(1).idx(&[0, 1]);
        assert_eq!(a.get(j, j), q(1, 2));
        assert_eq!(a.get(h.basis(1).idx(&[1, 0]), j), q(-1, 2));
    }
}
