//! Finite-dimensional normed cochain complexes and their cohomology.

use serde::Serialize;

use crate::exact::echelon::{Echelon, SparseRow};
use crate::exact::norm::sparsify;
use crate::exact::{PolyhedralNorm, RationalMatrix, SparseMatrix, Q};

use super::CohomologyError;

/// Cochain spaces `C^0 … C^top` with coboundaries `δ^k : C^k → C^{k+1}`
/// for `k < top` and a norm on each space.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    pub dims: Vec<usize>,
    pub deltas: Vec<SparseMatrix>,
    pub norms: Vec<PolyhedralNorm>,
}

/// One degree of cohomology with chosen representatives.
#[derive(Debug, Clone, Serialize)]
pub struct CohomologyDegree {
    pub degree: usize,
    pub dim: usize,
    pub cocycle_dim: usize,
    pub coboundary_rank: usize,
    /// cocycles whose classes form a basis
    pub representatives: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Seminorm {
    pub value: Q,
    /// `u` with `‖z − δu‖` equal to the value
    pub witness: Vec<Q>,
}

impl CochainComplex {
    pub fn new(dims: Vec<usize>, deltas: Vec<SparseMatrix>, norms: Vec<PolyhedralNorm>) -> Self {
        assert_eq!(deltas.len() + 1, dims.len());
        assert_eq!(norms.len(), dims.len());
        for (k, d) in deltas.iter().enumerate() {
            assert_eq!((d.rows(), d.cols()), (dims[k + 1], dims[k]), "coboundary {k} has the wrong shape");
        }
        CochainComplex { dims, deltas, norms }
    }

    /// Highest degree whose cohomology can be computed.
    pub fn top_degree(&self) -> usize {
        self.dims.len().saturating_sub(2)
    }

    /// Whether every `δ^{k+1} δ^k` vanishes.
    pub fn squares_to_zero(&self) -> bool {
        self.deltas.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    pub fn delta(&self, k: usize) -> &SparseMatrix {
        &self.deltas[k]
    }

    fn check_degree(&self, k: usize) -> Result<(), CohomologyError> {
        if k > self.top_degree() || self.dims.len() < 2 {
            return Err(CohomologyError::DegreeOutOfRange {
                degree: k,
                top: self.top_degree(),
            });
        }
        Ok(())
    }

    pub fn is_cocycle(&self, k: usize, z: &[Q]) -> bool {
        self.deltas[k].mul_vec(z).iter().all(Q::is_zero)
    }

    /// `H^k`: kernel basis reduced modulo the image of `δ^{k-1}`, keeping the
    /// kernel vectors that add a new pivot.
    pub fn cohomology(&self, k: usize) -> Result<CohomologyDegree, CohomologyError> {
        self.check_degree(k)?;
        let kernel = self.deltas[k].kernel_basis();
        let mut e = Echelon::new(self.dims[k]);
        let mut coboundary_rank = 0;
        if k > 0 {
            let dt = self.deltas[k - 1].transpose();
            for i in 0..dt.rows() {
                if e.insert(dt.row(i)).is_some() {
                    coboundary_rank += 1;
                }
            }
        }
        let mut representatives = Vec::new();
        for v in &kernel {
            if e.insert(&sparsify(v)).is_some() {
                representatives.push(v.clone());
            }
        }
        Ok(CohomologyDegree {
            degree: k,
            dim: representatives.len(),
            cocycle_dim: kernel.len(),
            coboundary_rank,
            representatives,
        })
    }

    pub fn cohomology_all(&self) -> Result<Vec<CohomologyDegree>, CohomologyError> {
        if self.dims.len() < 2 {
            return Ok(Vec::new());
        }
        (0..=self.top_degree()).map(|k| self.cohomology(k)).collect()
    }

    /// Coordinates of the classes of the cocycles `zs` in the basis given
    /// by `h.representatives`.
    pub fn class_coordinates(&self, h: &CohomologyDegree, zs: &[Vec<Q>]) -> Result<Vec<Vec<Q>>, CohomologyError> {
        let k = h.degree;
        let n = self.dims[k];
        let nreps = h.representatives.len();
        if zs.is_empty() {
            return Ok(Vec::new());
        }
        for z in zs {
            if z.len() != n || !self.is_cocycle(k, z) {
                return Err(CohomologyError::NotCocycle { degree: k });
            }
        }
        if nreps == 0 {
            return Ok(vec![Vec::new(); zs.len()]);
        }
        // Columns: representatives, then the coboundaries.
        let mut rows: Vec<SparseRow> = vec![Vec::new(); n];
        for (j, r) in h.representatives.iter().enumerate() {
            for (i, v) in r.iter().enumerate() {
                if !v.is_zero() {
                    rows[i].push((j, v.clone()));
                }
            }
        }
        let mut ncols = nreps;
        if k > 0 {
            let d = &self.deltas[k - 1];
            for (i, row) in rows.iter_mut().enumerate() {
                row.extend(d.row(i).iter().map(|(j, v)| (j + nreps, v.clone())));
            }
            ncols += d.cols();
        }
        let m = SparseMatrix::from_rows(ncols, rows);
        let rhs = RationalMatrix::from_columns(zs, n);
        let (x, ok) = m.solve_columns(&rhs);
        if ok.iter().any(|o| !o) {
            return Err(CohomologyError::NotCocycle { degree: k });
        }
        Ok((0..zs.len())
            .map(|c| (0..nreps).map(|i| x.get(i, c).clone()).collect())
            .collect())
    }

    /// Whether `z` is a coboundary; if so returns a preimage.
    pub fn coboundary_preimage(&self, k: usize, z: &[Q]) -> Option<Vec<Q>> {
        if k == 0 {
            return z.iter().all(Q::is_zero).then(Vec::new);
        }
        self.deltas[k - 1].solve(z)
    }

    /// `inf_u ‖z − δu‖` for a cocycle `z` of degree `k`, exactly.
    pub fn class_seminorm(&self, k: usize, z: &[Q], lp_var_cap: usize) -> Result<Seminorm, CohomologyError> {
        if z.len() != self.dims[k] || (k < self.deltas.len() && !self.is_cocycle(k, z)) {
            return Err(CohomologyError::NotCocycle { degree: k });
        }
        if k == 0 {
            return Ok(Seminorm {
                value: self.norms[0].eval(z),
                witness: Vec::new(),
            });
        }
        if let Some(u) = self.coboundary_preimage(k, z) {
            return Ok(Seminorm {
                value: Q::zero(),
                witness: u,
            });
        }
        let (value, witness) = self.norms[k].min_distance(z, &self.deltas[k - 1], lp_var_cap)?;
        Ok(Seminorm { value, witness })
    }

    /// Matrix of the map induced on cohomology by a cochain map `f : self → other`
    /// in degree `k`, in the chosen bases.
    pub fn induced_on_cohomology(
        f: &SparseMatrix,
        other: &CochainComplex,
        h_dom: &CohomologyDegree,
        h_cod: &CohomologyDegree,
    ) -> Result<RationalMatrix, CohomologyError> {
        let images: Vec<Vec<Q>> = h_dom.representatives.iter().map(|z| f.mul_vec(z)).collect();
        let coords = other.class_coordinates(h_cod, &images)?;
        Ok(RationalMatrix::from_columns(&coords, h_cod.dim))
    }
}

/// Whether `f : a → b` commutes with the coboundaries in degrees `0..=top`.
pub fn is_cochain_map(a: &CochainComplex, b: &CochainComplex, f: &[SparseMatrix]) -> bool {
    let top = a.deltas.len().min(b.deltas.len()).min(f.len().saturating_sub(1));
    (0..top).all(|k| b.deltas[k].mul(&f[k]).sub(&f[k + 1].mul(&a.deltas[k])).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qi;

    fn interval() -> CochainComplex {
        // C^0 = R^2 --(x,y) ↦ y−x--> C^1 = R --0--> C^2 = 0
        CochainComplex::new(
            vec![2, 1, 0],
            vec![
                SparseMatrix::from_triplets(1, 2, vec![(0, 0, qi(-1)), (0, 1, qi(1))]),
                SparseMatrix::zeros(0, 1),
            ],
            vec![PolyhedralNorm::linf(2), PolyhedralNorm::linf(1), PolyhedralNorm::linf(0)],
        )
    }

    #[test]
    fn interval_cohomology() {
        let c = interval();
        assert!(c.squares_to_zero());
        let h0 = c.cohomology(0).unwrap();
        assert_eq!(h0.dim, 1);
        let h1 = c.cohomology(1).unwrap();
        assert_eq!(h1.dim, 0);
        let s = c.class_seminorm(1, &[qi(3)], 10).unwrap();
        assert_eq!(s.value, qi(0));
        assert_eq!(c.deltas[0].mul_vec(&s.witness), vec![qi(3)]);
        assert!(matches!(
            c.class_seminorm(0, &[qi(1), qi(0)], 10),
            Err(CohomologyError::NotCocycle { .. })
        ));
        let coords = c.class_coordinates(&h0, &[vec![qi(5), qi(5)]]).unwrap();
        assert_eq!(coords[0].len(), 1);
        assert!(c.cohomology(2).is_err());
    }

    #[test]
    fn nontrivial_seminorm_by_lp() {
        // C^0 = R --1 ↦ (1,1)--> C^1 = R^2 (ℓ∞) --0--> 0; class of (1,0) has norm 1/2
        let c = CochainComplex::new(
            vec![1, 2, 0],
            vec![
                SparseMatrix::from_triplets(2, 1, vec![(0, 0, qi(1)), (1, 0, qi(1))]),
                SparseMatrix::zeros(0, 2),
            ],
            vec![PolyhedralNorm::linf(1), PolyhedralNorm::linf(2), PolyhedralNorm::linf(0)],
        );
        let h1 = c.cohomology(1).unwrap();
        assert_eq!(h1.dim, 1);
        let s = c.class_seminorm(1, &[qi(1), qi(0)], 10).unwrap();
        assert_eq!(s.value, crate::exact::q(1, 2));
    }
}
