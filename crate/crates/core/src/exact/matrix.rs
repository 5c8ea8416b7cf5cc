//! Dense and sparse exact matrices.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::echelon::{kernel_from_rref, Echelon, SparseRow};
use super::rational::Q;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        RationalMatrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_columns(columns: &[Vec<Q>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Q::from_int(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Q) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `v^T M`
    pub fn vec_mul(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.rows, v.len(), "dimension mismatch in vector-matrix product");
        let mut out = vec![Q::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, a) in self.row(i).iter().enumerate() {
                if !a.is_zero() {
                    out[j] += vi * a;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RationalMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RationalMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, f: &Q) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Q::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &RationalMatrix) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(blocks: &[RationalMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect(), self.cols)
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let rows = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: rows,
        }
    }

    fn echelon(&self) -> Echelon {
        self.to_sparse().echelon()
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{v : Mv = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        self.to_sparse().kernel_basis()
    }

    /// Basis of the column space, taken as the original columns at the pivot
    /// positions of the reduced row echelon form.
    pub fn image_basis(&self) -> Vec<Vec<Q>> {
        let e = self.echelon();
        e.pivot_columns().into_iter().map(|j| self.column(j)).collect()
    }

    /// Some solution of `Mx = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        self.to_sparse().solve(b)
    }

    pub fn inverse(&self) -> Option<RationalMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let sol = self.to_sparse().solve_many(&RationalMatrix::identity(self.rows))?;
        Some(sol)
    }
}

/// Row-compressed sparse matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix {}x{} nnz={}", self.rows, self.cols, self.nnz())
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, Q::one())]).collect(),
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: Vec<(usize, usize, Q)>) -> Self {
        let mut buckets: Vec<Vec<(usize, Q)>> = vec![Vec::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet out of range");
            buckets[i].push((j, v));
        }
        let data = buckets.into_iter().map(normalize_row).collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseRow>) -> Self {
        SparseMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().map(normalize_row).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, Q)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(p) => self.data[i][p].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn to_dense(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows, self.cols);
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut buckets: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r {
                buckets[*j].push((i, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data: buckets,
        }
    }

    pub fn mul(&self, other: &SparseMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut acc = vec![Q::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        let data = self
            .data
            .iter()
            .map(|r| {
                for (k, a) in r {
                    for (j, b) in &other.data[*k] {
                        if !mark[*j] {
                            mark[*j] = true;
                            touched.push(*j);
                        }
                        acc[*j] += a * b;
                    }
                }
                touched.sort_unstable();
                let row: SparseRow = touched
                    .iter()
                    .filter(|&&j| !acc[j].is_zero())
                    .map(|&j| (j, acc[j].clone()))
                    .collect();
                for &j in &touched {
                    acc[j] = Q::zero();
                    mark[j] = false;
                }
                touched.clear();
                row
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn mul_dense(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows());
        let mut out = RationalMatrix::zeros(self.rows, other.cols());
        for (i, r) in self.data.iter().enumerate() {
            for (k, a) in r {
                for j in 0..other.cols() {
                    let b = other.get(*k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(j, _)| !v[*j].is_zero())
                    .map(|(j, a)| a * &v[*j])
                    .sum()
            })
            .collect()
    }

    /// `v^T M`
    pub fn vec_mul(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![Q::zero(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            for (j, a) in r {
                out[*j] += &v[i] * a;
            }
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> Self {
        self.axpy(other, &Q::one())
    }

    pub fn sub(&self, other: &SparseMatrix) -> Self {
        self.axpy(other, &-Q::one())
    }

    /// `self + f * other`
    pub fn axpy(&self, other: &SparseMatrix, f: &Q) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| super::echelon::axpy_sparse(a, b, f))
                .collect(),
        }
    }

    pub fn scale(&self, f: &Q) -> Self {
        if f.is_zero() {
            return SparseMatrix::zeros(self.rows, self.cols);
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(j, v)| (*j, v * f)).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1.is_one())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        SparseMatrix {
            rows: idx.len(),
            cols: self.cols,
            data: idx.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::from_rows(self.cols, self.data.iter())
    }

    pub fn rank(&self) -> usize {
        // Row rank equals column rank; eliminate along the shorter side.
        if self.cols > self.rows * 2 {
            self.transpose().echelon().rank()
        } else {
            self.echelon().rank()
        }
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let mut e = self.echelon();
        e.reduce_fully();
        kernel_from_rref(&e)
    }

    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let rhs = RationalMatrix::from_columns(&[b.to_vec()], self.rows);
        self.solve_many(&rhs).map(|x| x.column(0))
    }

    /// Solves `M X = B` column by column; `None` if any column is inconsistent.
    pub fn solve_many(&self, b: &RationalMatrix) -> Option<RationalMatrix> {
        let (x, ok) = self.solve_columns(b);
        if ok.iter().all(|&o| o) {
            Some(x)
        } else {
            None
        }
    }

    /// Solves `M X = B`; returns the solutions (garbage where inconsistent)
    /// together with a per-column consistency flag.
    pub fn solve_columns(&self, b: &RationalMatrix) -> (RationalMatrix, Vec<bool>) {
        assert_eq!(b.rows(), self.rows, "right-hand side has wrong length");
        let n = self.cols;
        let k = b.cols();
        let mut e = Echelon::new(n + k);
        for i in 0..self.rows {
            let mut row = self.data[i].clone();
            for j in 0..k {
                let v = b.get(i, j);
                if !v.is_zero() {
                    row.push((n + j, v.clone()));
                }
            }
            e.insert(&row);
        }
        e.reduce_fully();
        let mut ok = vec![true; k];
        let mut x = RationalMatrix::zeros(n, k);
        for (&pc, row) in &e.pivots {
            if pc >= n {
                for (j, v) in row {
                    if *j >= n && !v.is_zero() {
                        ok[j - n] = false;
                    }
                }
                continue;
            }
            for (j, v) in row {
                if *j >= n {
                    x.set(pc, j - n, v.clone());
                }
            }
        }
        (x, ok)
    }
}

fn normalize_row(mut r: Vec<(usize, Q)>) -> SparseRow {
    r.sort_by_key(|(j, _)| *j);
    let mut out: SparseRow = Vec::with_capacity(r.len());
    for (j, v) in r {
        match out.last_mut() {
            Some((lj, lv)) if *lj == j => *lv += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Basis of `{v : Mv = 0}`.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Q>> {
    m.kernel_basis()
}

/// Basis of the column space of `m`.
pub fn image_basis(m: &RationalMatrix) -> Vec<Vec<Q>> {
    m.image_basis()
}

/// Indices of a maximal linearly independent subfamily, scanning in order.
pub fn independent_subfamily(vectors: &[Vec<Q>], dim: usize) -> Vec<usize> {
    let mut e = Echelon::new(dim);
    let mut chosen = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let row: SparseRow = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x.clone()))
            .collect();
        if e.insert(&row).is_some() {
            chosen.push(i);
        }
    }
    chosen
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len(), "dot product of different lengths");
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

pub fn vec_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[Q], f: &Q) -> Vec<Q> {
    a.iter().map(|x| x * f).collect()
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(Q::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{q, qi};
    use proptest::prelude::*;

    #[test]
    fn zero_one_by_one_kernel() {
        let m = RationalMatrix::zeros(1, 1);
        assert_eq!(m.kernel_basis(), vec![vec![qi(1)]]);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(RationalMatrix::identity(2).kernel_basis().is_empty());
    }

    #[test]
    fn zero_matrix_has_empty_image() {
        assert!(RationalMatrix::zeros(3, 4).image_basis().is_empty());
    }

    #[test]
    fn identity_image_is_full() {
        let b = RationalMatrix::identity(4).image_basis();
        assert_eq!(b.len(), 4);
        assert_eq!(independent_subfamily(&b, 4).len(), 4);
    }

    #[test]
    fn rank_two_product() {
        let a = RationalMatrix::from_i64(&[&[1, 2], &[0, 1], &[3, -1], &[2, 2]]);
        let b = RationalMatrix::from_rows(
            vec![
                vec![qi(1), q(1, 2), qi(0), qi(3), qi(-2), qi(1)],
                vec![qi(0), qi(1), q(2, 3), qi(1), qi(1), qi(-1)],
            ],
            6,
        );
        let m = a.mul(&b);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.image_basis().len(), 2);
        assert_eq!(m.kernel_basis().len(), 4);
    }

    #[test]
    fn solve_and_inconsistency() {
        let m = RationalMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(m.solve(&[qi(1), qi(3)]).is_none());
        let x = m.solve(&[qi(1), qi(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![qi(1), qi(2)]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = RationalMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(RationalMatrix::from_i64(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn sparse_product_matches_dense() {
        let a = RationalMatrix::from_i64(&[&[1, 0, 2], &[0, -1, 0]]);
        let b = RationalMatrix::from_i64(&[&[1, 1], &[2, 0], &[0, 3]]);
        assert_eq!(a.to_sparse().mul(&b.to_sparse()).to_dense(), a.mul(&b));
        assert_eq!(a.to_sparse().transpose().to_dense(), a.transpose());
    }

    fn arb_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
                RationalMatrix::from_rows(
                    v.chunks(c).map(|row| row.iter().map(|&x| qi(x)).collect()).collect(),
                    c,
                )
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.len() + m.image_basis().len(), m.cols());
            for v in &k {
                prop_assert!(is_zero_vec(&m.mul_vec(v)));
            }
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn solve_reproduces_rhs(m in arb_matrix(), seed in proptest::collection::vec(-4i64..=4, 6)) {
            let x: Vec<Q> = seed.iter().take(m.cols()).map(|&s| qi(s)).chain(std::iter::repeat(Q::zero())).take(m.cols()).collect();
            let b = m.mul_vec(&x);
            let y = m.solve(&b).expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&y), b);
        }
    }
}
