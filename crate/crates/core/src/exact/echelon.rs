//! Exact reduced row echelon form over sparse rows.
//!
//! Rows are fed in one at a time and reduced against the pivots found so
//! far; the pivot of a row is its leftmost surviving nonzero column. After
//! all rows are in, a back-substitution pass produces the reduced form.
//! The pivot rule is fixed, so results are deterministic.

use std::collections::BTreeMap;

use super::rational::Q;

/// A sparse row: strictly increasing column indices, no explicit zeros.
pub type SparseRow = Vec<(usize, Q)>;

#[derive(Debug, Clone)]
pub struct Echelon {
    pub cols: usize,
    /// pivot column -> reduced row with a 1 in the pivot column
    pub pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Reduces `row` against the current pivots. Returns the remainder in
    /// dense form (zero iff the row was in the span).
    fn reduce_dense(&self, row: &[(usize, Q)]) -> Vec<Q> {
        let mut acc = vec![Q::zero(); self.cols];
        for (c, v) in row {
            acc[*c] = v.clone();
        }
        for c in 0..self.cols {
            if acc[c].is_zero() {
                continue;
            }
            if let Some(p) = self.pivots.get(&c) {
                let f = acc[c].clone();
                for (j, v) in p {
                    acc[*j] -= &f * v;
                }
            }
        }
        acc
    }

    /// Inserts a row. Returns the new pivot column, or `None` if the row was
    /// already in the span of the inserted rows.
    pub fn insert(&mut self, row: &[(usize, Q)]) -> Option<usize> {
        let acc = self.reduce_dense(row);
        let lead = acc.iter().position(|v| !v.is_zero())?;
        let inv = acc[lead].recip();
        let normalized: SparseRow = acc
            .into_iter()
            .enumerate()
            .skip(lead)
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v * &inv))
            .collect();
        self.pivots.insert(lead, normalized);
        Some(lead)
    }

    pub fn contains(&self, row: &[(usize, Q)]) -> bool {
        self.reduce_dense(row).iter().all(Q::is_zero)
    }

    /// Back-substitution: clears every pivot column from all other rows.
    pub fn reduce_fully(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        for (idx, &pc) in cols.iter().enumerate().rev() {
            let prow = self.pivots[&pc].clone();
            for &oc in &cols[..idx] {
                let row = self.pivots.get_mut(&oc).unwrap();
                let f = match row.binary_search_by_key(&pc, |(j, _)| *j) {
                    Ok(pos) => row[pos].1.clone(),
                    Err(_) => continue,
                };
                *row = axpy_sparse(row, &prow, &(-f));
            }
        }
    }

    pub fn from_rows<'a, I>(cols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseRow>,
    {
        let mut e = Echelon::new(cols);
        for r in rows {
            e.insert(r);
        }
        e
    }
}

/// `a + f * b` for sparse rows.
pub fn axpy_sparse(a: &[(usize, Q)], b: &[(usize, Q)], f: &Q) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = f * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + &(f * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Kernel basis of the row space described by a fully reduced echelon form:
/// one vector per free column, with a 1 in that column.
pub fn kernel_from_rref(e: &Echelon) -> Vec<Vec<Q>> {
    let mut basis = Vec::new();
    for free in 0..e.cols {
        if e.pivots.contains_key(&free) {
            continue;
        }
        let mut v = vec![Q::zero(); e.cols];
        v[free] = Q::one();
        for (&pc, row) in &e.pivots {
            if let Ok(pos) = row.binary_search_by_key(&free, |(j, _)| *j) {
                v[pc] = -&row[pos].1;
            }
        }
        basis.push(v);
    }
    basis
}
