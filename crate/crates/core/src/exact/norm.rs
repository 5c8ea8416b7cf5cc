//! Polyhedral norms.
//!
//! A norm is stored structurally (ℓ1, ℓ∞, products, sums, subspace
//! restrictions) when that is possible, and as an explicit symmetric
//! polytope otherwise. Conversions between facet and vertex descriptions
//! are brute force and refuse dimensions above [`DIM_CAP`].

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use super::echelon::SparseRow;
use super::lp::{solve_lp, LpOutcome, LpProblem, Relation, Sense, VarDomain};
use super::matrix::{dot, independent_subfamily, RationalMatrix, SparseMatrix};
use super::rational::Q;

/// Largest dimension for which facet/vertex conversions are attempted.
pub const DIM_CAP: usize = 6;
/// Largest number of row subsets examined during vertex enumeration.
const ENUMERATION_BUDGET: u128 = 400_000;
/// Largest number of explicit facets or vertices materialized at once.
const EXPLICIT_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate norm: facet functionals span only {rank} of {dim} dimensions")]
    Degenerate { rank: usize, dim: usize },
    #[error("dimension {dim} exceeds the polyhedral conversion cap {cap}")]
    DimCap { dim: usize, cap: usize },
    #[error("polyhedral description too large ({0})")]
    TooLarge(String),
    #[error("subspace vector of length {got} does not live in dimension {dim}")]
    NotContained { dim: usize, got: usize },
    #[error("linear program has {vars} variables, above the cap {cap}")]
    LpTooLarge { vars: usize, cap: usize },
    #[error("linear program failed unexpectedly: {0}")]
    Lp(String),
}

#[derive(Debug)]
enum Kind {
    L1,
    LInf,
    Facets {
        h_rep: Vec<Vec<Q>>,
        v_rep: OnceLock<Result<Vec<Vec<Q>>, NormError>>,
    },
    Product(Vec<PolyhedralNorm>),
    Sum(Vec<PolyhedralNorm>),
    /// Norm of `c` is `inner(E c)`; `E` has full column rank.
    Restricted {
        inner: PolyhedralNorm,
        embedding: RationalMatrix,
    },
}

/// An exact norm whose unit ball is a centrally symmetric polytope.
#[derive(Debug, Clone)]
pub struct PolyhedralNorm {
    dim: usize,
    kind: Arc<Kind>,
}

impl PolyhedralNorm {
    pub fn l1(dim: usize) -> Self {
        PolyhedralNorm {
            dim,
            kind: Arc::new(Kind::L1),
        }
    }

    pub fn linf(dim: usize) -> Self {
        PolyhedralNorm {
            dim,
            kind: Arc::new(Kind::LInf),
        }
    }

    /// Absolute value on the real line.
    pub fn abs() -> Self {
        Self::linf(1)
    }

    /// `norm(v) = max_i |a_i·v|`. The rows must span the dual space.
    pub fn from_h_rep(dim: usize, rows: Vec<Vec<Q>>) -> Result<Self, NormError> {
        for r in &rows {
            if r.len() != dim {
                return Err(NormError::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
        }
        let rank = independent_subfamily(&rows, dim).len();
        if rank < dim {
            return Err(NormError::Degenerate { rank, dim });
        }
        Ok(PolyhedralNorm {
            dim,
            kind: Arc::new(Kind::Facets {
                h_rep: dedupe_up_to_sign(rows),
                v_rep: OnceLock::new(),
            }),
        })
    }

    /// Norm whose unit ball is the symmetric convex hull of `points`.
    pub fn from_v_rep(dim: usize, points: Vec<Vec<Q>>) -> Result<Self, NormError> {
        for p in &points {
            if p.len() != dim {
                return Err(NormError::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        let rank = independent_subfamily(&points, dim).len();
        if rank < dim {
            return Err(NormError::Degenerate { rank, dim });
        }
        let points = dedupe_up_to_sign(points);
        // Facets of the hull are the vertices of its polar.
        let h_rep = symmetric_vertices(&points, dim)?;
        let v_rep = OnceLock::new();
        let _ = v_rep.set(symmetric_vertices(&h_rep, dim));
        Ok(PolyhedralNorm {
            dim,
            kind: Arc::new(Kind::Facets { h_rep, v_rep }),
        })
    }

    /// Direct product with the max norm.
    pub fn product(parts: Vec<PolyhedralNorm>) -> Self {
        let dim = parts.iter().map(|p| p.dim).sum();
        PolyhedralNorm {
            dim,
            kind: Arc::new(Kind::Product(parts)),
        }
    }

    /// Direct sum with the ℓ1-combination of the parts.
    pub fn sum(parts: Vec<PolyhedralNorm>) -> Self {
        let dim = parts.iter().map(|p| p.dim).sum();
        PolyhedralNorm {
            dim,
            kind: Arc::new(Kind::Sum(parts)),
        }
    }

    /// The norm `c ↦ inner(E c)` on the column space coordinates of `E`.
    pub fn restricted(inner: PolyhedralNorm, embedding: RationalMatrix) -> Result<Self, NormError> {
        if embedding.rows() != inner.dim {
            return Err(NormError::DimensionMismatch {
                expected: inner.dim,
                got: embedding.rows(),
            });
        }
        if embedding.rank() != embedding.cols() {
            return Err(NormError::Degenerate {
                rank: embedding.rank(),
                dim: embedding.cols(),
            });
        }
        Ok(PolyhedralNorm {
            dim: embedding.cols(),
            kind: Arc::new(Kind::Restricted { inner, embedding }),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn describe(&self) -> String {
        match &*self.kind {
            Kind::L1 => format!("l1({})", self.dim),
            Kind::LInf => format!("linf({})", self.dim),
            Kind::Facets { h_rep, .. } => format!("facets({}, {} rows)", self.dim, h_rep.len()),
            Kind::Product(p) => format!("product[{}]", p.iter().map(|x| x.describe()).collect::<Vec<_>>().join(", ")),
            Kind::Sum(p) => format!("sum[{}]", p.iter().map(|x| x.describe()).collect::<Vec<_>>().join(", ")),
            Kind::Restricted { inner, .. } => format!("restricted({} of {})", self.dim, inner.describe()),
        }
    }

    pub fn is_l1(&self) -> bool {
        matches!(&*self.kind, Kind::L1) || self.dim <= 1 && matches!(&*self.kind, Kind::LInf)
    }

    /// Checked evaluation.
    pub fn norm_eval(&self, v: &[Q]) -> Result<Q, NormError> {
        if v.len() != self.dim {
            return Err(NormError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(self.eval(v))
    }

    /// Evaluation; panics on a dimension mismatch.
    pub fn eval(&self, v: &[Q]) -> Q {
        assert_eq!(v.len(), self.dim, "norm evaluated on vector of wrong length");
        match &*self.kind {
            Kind::L1 => v.iter().map(Q::abs).sum(),
            Kind::LInf => v.iter().map(Q::abs).max().unwrap_or_else(Q::zero),
            Kind::Facets { h_rep, .. } => h_rep
                .iter()
                .map(|a| dot(a, v).abs())
                .max()
                .unwrap_or_else(Q::zero),
            Kind::Product(parts) => blocks(parts, v)
                .map(|(p, b)| p.eval(b))
                .max()
                .unwrap_or_else(Q::zero),
            Kind::Sum(parts) => blocks(parts, v).map(|(p, b)| p.eval(b)).sum(),
            Kind::Restricted { inner, embedding } => inner.eval(&embedding.mul_vec(v)),
        }
    }

    /// Support function `sup { w·x : ‖x‖ ≤ 1 }`, i.e. the dual norm of `w`.
    pub fn support(&self, w: &[Q]) -> Result<Q, NormError> {
        if w.len() != self.dim {
            return Err(NormError::DimensionMismatch {
                expected: self.dim,
                got: w.len(),
            });
        }
        Ok(match &*self.kind {
            Kind::L1 => w.iter().map(Q::abs).max().unwrap_or_else(Q::zero),
            Kind::LInf => w.iter().map(Q::abs).sum(),
            Kind::Facets { .. } => {
                let verts = self.vertices()?;
                verts
                    .iter()
                    .map(|x| dot(w, x).abs())
                    .max()
                    .unwrap_or_else(Q::zero)
            }
            Kind::Product(parts) => {
                let mut s = Q::zero();
                for (p, b) in blocks(parts, w) {
                    s += p.support(b)?;
                }
                s
            }
            Kind::Sum(parts) => {
                let mut s = Q::zero();
                for (p, b) in blocks(parts, w) {
                    s = s.max(p.support(b)?);
                }
                s
            }
            Kind::Restricted { .. } => self.support_lp(w)?,
        })
    }

    /// Support function computed by linear programming over the facet rows.
    pub fn support_lp(&self, w: &[Q]) -> Result<Q, NormError> {
        let rows = self.h_rows()?;
        let mut p = LpProblem::new(Sense::Maximize, w.to_vec())
            .with_domains(vec![VarDomain::Free; self.dim]);
        for r in &rows {
            let dense = densify(r, self.dim);
            p.push(dense.clone(), Relation::Le, Q::one());
            p.push(dense.iter().map(|x| -x).collect(), Relation::Le, Q::one());
        }
        match solve_lp(&p) {
            LpOutcome::Optimal { value, .. } => Ok(value),
            o => Err(NormError::Lp(format!("{o:?}"))),
        }
    }

    /// Facet functionals: `norm(v) = max |a·v|` over the returned rows.
    pub fn h_rows(&self) -> Result<Vec<SparseRow>, NormError> {
        Ok(match &*self.kind {
            Kind::L1 => {
                if self.dim > 16 {
                    return Err(NormError::TooLarge(format!("l1 facets in dimension {}", self.dim)));
                }
                // Sign vectors with a leading +1; the rest follow by symmetry.
                let d = self.dim;
                if d == 0 {
                    return Ok(Vec::new());
                }
                (0..1u64 << (d - 1))
                    .map(|mask| {
                        (0..d)
                            .map(|i| {
                                let neg = i > 0 && (mask >> (i - 1)) & 1 == 1;
                                (i, if neg { -Q::one() } else { Q::one() })
                            })
                            .collect()
                    })
                    .collect()
            }
            Kind::LInf => (0..self.dim).map(|i| vec![(i, Q::one())]).collect(),
            Kind::Facets { h_rep, .. } => h_rep.iter().map(|r| sparsify(r)).collect(),
            Kind::Product(parts) => {
                let mut out = Vec::new();
                let mut off = 0;
                for p in parts {
                    for r in p.h_rows()? {
                        out.push(r.into_iter().map(|(j, v)| (j + off, v)).collect());
                    }
                    off += p.dim;
                }
                out
            }
            Kind::Sum(parts) => {
                let mut acc: Vec<SparseRow> = vec![Vec::new()];
                let mut off = 0;
                for p in parts {
                    let rows = p.h_rows()?;
                    if acc.len().saturating_mul(rows.len() * 2) > EXPLICIT_CAP {
                        return Err(NormError::TooLarge("facets of a sum norm".into()));
                    }
                    let mut next = Vec::new();
                    for a in &acc {
                        for r in &rows {
                            for sign in [Q::one(), -Q::one()] {
                                let mut row = a.clone();
                                row.extend(r.iter().map(|(j, v)| (j + off, v * &sign)));
                                next.push(row);
                            }
                        }
                    }
                    if !rows.is_empty() {
                        acc = next;
                    }
                    off += p.dim;
                }
                dedupe_sparse_up_to_sign(acc)
            }
            Kind::Restricted { inner, embedding } => {
                let rows = inner.h_rows()?;
                let dense: Vec<Vec<Q>> = rows
                    .iter()
                    .map(|r| {
                        let mut out = vec![Q::zero(); self.dim];
                        for (i, a) in r {
                            for (j, o) in out.iter_mut().enumerate() {
                                let e = embedding.get(*i, j);
                                if !e.is_zero() {
                                    *o += a * e;
                                }
                            }
                        }
                        out
                    })
                    .collect();
                dedupe_up_to_sign(dense).iter().map(|r| sparsify(r)).collect()
            }
        })
    }

    /// Vertices of the unit ball (one per antipodal pair).
    pub fn vertices(&self) -> Result<Vec<Vec<Q>>, NormError> {
        match &*self.kind {
            Kind::L1 => Ok((0..self.dim)
                .map(|i| {
                    let mut e = vec![Q::zero(); self.dim];
                    e[i] = Q::one();
                    e
                })
                .collect()),
            Kind::LInf => Ok(self
                .h_rows_l1_like()?
                .into_iter()
                .map(|r| densify(&r, self.dim))
                .collect()),
            Kind::Facets { h_rep, v_rep } => v_rep
                .get_or_init(|| symmetric_vertices(h_rep, self.dim))
                .clone(),
            Kind::Sum(parts) => {
                let mut out = Vec::new();
                let mut off = 0;
                for p in parts {
                    for v in p.vertices()? {
                        let mut full = vec![Q::zero(); self.dim];
                        full[off..off + p.dim].clone_from_slice(&v);
                        out.push(full);
                    }
                    off += p.dim;
                }
                Ok(out)
            }
            Kind::Product(parts) => {
                let mut acc: Vec<Vec<Q>> = vec![Vec::new()];
                for p in parts {
                    let vs = p.vertices()?;
                    if acc.len().saturating_mul(vs.len() * 2) > EXPLICIT_CAP {
                        return Err(NormError::TooLarge("vertices of a product norm".into()));
                    }
                    let mut next = Vec::new();
                    for a in &acc {
                        for v in &vs {
                            for sign in [Q::one(), -Q::one()] {
                                let mut row = a.clone();
                                row.extend(v.iter().map(|x| x * &sign));
                                next.push(row);
                            }
                        }
                    }
                    if p.dim > 0 {
                        acc = next;
                    }
                }
                Ok(dedupe_up_to_sign(acc))
            }
            Kind::Restricted { .. } => {
                let rows: Vec<Vec<Q>> = self
                    .h_rows()?
                    .iter()
                    .map(|r| densify(r, self.dim))
                    .collect();
                symmetric_vertices(&rows, self.dim)
            }
        }
    }

    fn h_rows_l1_like(&self) -> Result<Vec<SparseRow>, NormError> {
        PolyhedralNorm::l1(self.dim).h_rows()
    }

    /// The dual norm; its unit ball is the polar of this one.
    pub fn dual_norm(&self) -> Result<PolyhedralNorm, NormError> {
        Ok(match &*self.kind {
            Kind::L1 => PolyhedralNorm::linf(self.dim),
            Kind::LInf => PolyhedralNorm::l1(self.dim),
            Kind::Product(parts) => PolyhedralNorm::sum(
                parts.iter().map(|p| p.dual_norm()).collect::<Result<_, _>>()?,
            ),
            Kind::Sum(parts) => PolyhedralNorm::product(
                parts.iter().map(|p| p.dual_norm()).collect::<Result<_, _>>()?,
            ),
            Kind::Facets { h_rep, .. } => {
                let verts = self.vertices()?;
                let v_rep = OnceLock::new();
                let _ = v_rep.set(Ok(h_rep.clone()));
                PolyhedralNorm {
                    dim: self.dim,
                    kind: Arc::new(Kind::Facets { h_rep: verts, v_rep }),
                }
            }
            Kind::Restricted { .. } => {
                let rows = self.h_rows()?.iter().map(|r| densify(r, self.dim)).collect();
                PolyhedralNorm::from_h_rep(self.dim, rows)?.dual_norm()?
            }
        })
    }

    /// Quotient of this norm by the span of `subspace`.
    pub fn quotient_norm(&self, subspace: &[Vec<Q>]) -> Result<Quotient, NormError> {
        for w in subspace {
            if w.len() != self.dim {
                return Err(NormError::NotContained {
                    dim: self.dim,
                    got: w.len(),
                });
            }
        }
        let w = RationalMatrix::from_rows(subspace.to_vec(), self.dim);
        // Rows of the projection span the annihilator of the subspace.
        let ann = w.kernel_basis();
        let projection = RationalMatrix::from_rows(ann, self.dim);
        let qdim = projection.rows();
        let gram = projection.mul(&projection.transpose());
        let section = projection
            .transpose()
            .mul(&gram.inverse().expect("annihilator basis is independent"));
        if qdim == self.dim {
            return Ok(Quotient {
                norm: self.clone(),
                projection,
                section,
            });
        }
        if qdim == 0 {
            return Ok(Quotient {
                norm: PolyhedralNorm::linf(0),
                projection,
                section,
            });
        }
        if self.dim > DIM_CAP + 1 {
            return Err(NormError::DimCap {
                dim: self.dim,
                cap: DIM_CAP + 1,
            });
        }
        let pts: Vec<Vec<Q>> = self
            .vertices()?
            .iter()
            .map(|v| projection.mul_vec(v))
            .collect();
        Ok(Quotient {
            norm: PolyhedralNorm::from_v_rep(qdim, pts)?,
            projection,
            section,
        })
    }

    /// Operator norm of `t : (R^dom.dim, dom) → (R^cod.dim, cod)`.
    pub fn operator_norm(t: &RationalMatrix, dom: &PolyhedralNorm, cod: &PolyhedralNorm) -> Result<Q, NormError> {
        check_shape(t.rows(), t.cols(), dom, cod)?;
        if dom.is_l1() {
            return Ok((0..t.cols())
                .map(|j| cod.eval(&t.column(j)))
                .max()
                .unwrap_or_else(Q::zero));
        }
        let tt = t.transpose();
        let mut best = Q::zero();
        for a in cod.h_rows()? {
            let w = tt.mul_vec(&densify(&a, cod.dim));
            best = best.max(dom.support(&w)?);
        }
        Ok(best)
    }

    /// Operator norm of a sparse map.
    pub fn operator_norm_sparse(t: &SparseMatrix, dom: &PolyhedralNorm, cod: &PolyhedralNorm) -> Result<Q, NormError> {
        check_shape(t.rows(), t.cols(), dom, cod)?;
        if dom.is_l1() {
            let tt = t.transpose();
            return Ok((0..tt.rows())
                .map(|j| cod.eval(&densify(tt.row(j), cod.dim)))
                .max()
                .unwrap_or_else(Q::zero));
        }
        let tt = t.transpose();
        let mut best = Q::zero();
        for a in cod.h_rows()? {
            let w = tt.mul_vec(&densify(&a, cod.dim));
            best = best.max(dom.support(&w)?);
        }
        Ok(best)
    }

    /// Operator norm by one LP per codomain facet. Slow; used as a
    /// cross-check of [`PolyhedralNorm::operator_norm`].
    pub fn operator_norm_lp(t: &RationalMatrix, dom: &PolyhedralNorm, cod: &PolyhedralNorm) -> Result<Q, NormError> {
        check_shape(t.rows(), t.cols(), dom, cod)?;
        let tt = t.transpose();
        let mut best = Q::zero();
        for a in cod.h_rows()? {
            let w = tt.mul_vec(&densify(&a, cod.dim));
            best = best.max(dom.support_lp(&w)?);
        }
        Ok(best)
    }

    /// Norm on linear maps `R^dom.dim → R^cod.dim`, stored column-major
    /// (entry `(i, j)` at index `j * cod.dim + i`), with the operator norm.
    pub fn operator_norm_space(dom: &PolyhedralNorm, cod: &PolyhedralNorm) -> Result<PolyhedralNorm, NormError> {
        if dom.is_l1() {
            return Ok(PolyhedralNorm::product(vec![cod.clone(); dom.dim]));
        }
        if dom.dim * cod.dim > DIM_CAP * DIM_CAP {
            return Err(NormError::DimCap {
                dim: dom.dim * cod.dim,
                cap: DIM_CAP * DIM_CAP,
            });
        }
        let verts = dom.vertices()?;
        let rows = cod.h_rows()?;
        let mut h = Vec::with_capacity(verts.len() * rows.len());
        for v in &verts {
            for a in &rows {
                let a = densify(a, cod.dim);
                let mut r = Vec::with_capacity(dom.dim * cod.dim);
                for vj in v {
                    for ai in &a {
                        r.push(vj * ai);
                    }
                }
                h.push(r);
            }
        }
        let d = dom.dim * cod.dim;
        if d == 0 {
            return Ok(PolyhedralNorm::linf(0));
        }
        Ok(PolyhedralNorm {
            dim: d,
            kind: Arc::new(Kind::Facets {
                h_rep: dedupe_up_to_sign(h),
                v_rep: OnceLock::new(),
            }),
        })
    }

    /// Exact `min_u ‖z − B u‖` together with a minimizer.
    pub fn min_distance(&self, z: &[Q], b: &SparseMatrix, var_cap: usize) -> Result<(Q, Vec<Q>), NormError> {
        if z.len() != self.dim || b.rows() != self.dim {
            return Err(NormError::DimensionMismatch {
                expected: self.dim,
                got: z.len(),
            });
        }
        if let Kind::Restricted { inner, embedding } = &*self.kind {
            let e = embedding.to_sparse();
            return inner.min_distance(&embedding.mul_vec(z), &e.mul(b), var_cap);
        }
        let r = b.cols();
        if r + 1 > var_cap {
            return Err(NormError::LpTooLarge { vars: r + 1, cap: var_cap });
        }
        if r == 0 {
            return Ok((self.eval(z), Vec::new()));
        }
        let mut obj = vec![Q::zero(); r + 1];
        obj[r] = Q::one();
        let mut domains = vec![VarDomain::Free; r];
        domains.push(VarDomain::NonNeg);
        let mut p = LpProblem::new(Sense::Minimize, obj).with_domains(domains);
        let bt = b.transpose();
        for a in self.h_rows()? {
            let az = a.iter().map(|(j, v)| v * &z[*j]).sum::<Q>();
            let ab = bt.mul_vec(&densify(&a, self.dim));
            // a·z − (aB)u ≤ t and −(a·z − (aB)u) ≤ t
            let mut lo: Vec<Q> = ab.iter().map(|x| -x).collect();
            lo.push(-Q::one());
            p.push(lo, Relation::Le, -&az);
            let mut hi = ab;
            hi.push(-Q::one());
            p.push(hi, Relation::Le, az);
        }
        match solve_lp(&p) {
            LpOutcome::Optimal { value, mut witness } => {
                witness.truncate(r);
                Ok((value, witness))
            }
            o => Err(NormError::Lp(format!("{o:?}"))),
        }
    }

    /// Exact comparison of two norms on a sample of vectors.
    pub fn agrees_on(&self, other: &PolyhedralNorm, sample: &[Vec<Q>]) -> bool {
        self.dim == other.dim && sample.iter().all(|v| self.eval(v) == other.eval(v))
    }
}

/// A quotient norm realized on the coordinates of a complement.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub norm: PolyhedralNorm,
    /// `q × d`, kernel = the subspace
    pub projection: RationalMatrix,
    /// `d × q`, right inverse of the projection
    pub section: RationalMatrix,
}

impl Quotient {
    /// Norm of the class of `v`.
    pub fn eval_class(&self, v: &[Q]) -> Q {
        self.norm.eval(&self.projection.mul_vec(v))
    }
}

fn check_shape(rows: usize, cols: usize, dom: &PolyhedralNorm, cod: &PolyhedralNorm) -> Result<(), NormError> {
    if cols != dom.dim {
        return Err(NormError::DimensionMismatch {
            expected: dom.dim,
            got: cols,
        });
    }
    if rows != cod.dim {
        return Err(NormError::DimensionMismatch {
            expected: cod.dim,
            got: rows,
        });
    }
    Ok(())
}

fn blocks<'a>(parts: &'a [PolyhedralNorm], v: &'a [Q]) -> impl Iterator<Item = (&'a PolyhedralNorm, &'a [Q])> {
    let mut off = 0;
    parts.iter().map(move |p| {
        let b = &v[off..off + p.dim];
        off += p.dim;
        (p, b)
    })
}

pub fn densify(r: &[(usize, Q)], dim: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); dim];
    for (j, v) in r {
        out[*j] = v.clone();
    }
    out
}

pub fn sparsify(v: &[Q]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| (j, x.clone()))
        .collect()
}

/// Canonical sign: first nonzero entry positive.
fn canonical_sign(mut v: Vec<Q>) -> Vec<Q> {
    if let Some(f) = v.iter().find(|x| !x.is_zero()) {
        if f.is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
    v
}

fn dedupe_up_to_sign(rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for r in rows {
        if r.iter().all(Q::is_zero) {
            continue;
        }
        let c = canonical_sign(r);
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out
}

fn dedupe_sparse_up_to_sign(rows: Vec<SparseRow>) -> Vec<SparseRow> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mut r in rows {
        r.sort_by_key(|(j, _)| *j);
        r.retain(|(_, v)| !v.is_zero());
        if r.is_empty() {
            continue;
        }
        if r[0].1.is_negative() {
            for (_, v) in r.iter_mut() {
                *v = -&*v;
            }
        }
        if seen.insert(r.clone()) {
            out.push(r);
        }
    }
    out
}

/// Vertices (one per antipodal pair) of `{x : |r·x| ≤ 1 for every row r}`,
/// found by solving every nonsingular `dim × dim` subsystem with every sign
/// pattern. The polytope must be bounded, i.e. the rows must span.
pub fn symmetric_vertices(rows: &[Vec<Q>], dim: usize) -> Result<Vec<Vec<Q>>, NormError> {
    if dim > DIM_CAP {
        return Err(NormError::DimCap { dim, cap: DIM_CAP });
    }
    if dim == 0 {
        return Ok(Vec::new());
    }
    let rows = dedupe_up_to_sign(rows.to_vec());
    let rank = independent_subfamily(&rows, dim).len();
    if rank < dim {
        return Err(NormError::Degenerate { rank, dim });
    }
    let m = rows.len();
    let subsets = binomial(m as u128, dim as u128);
    if subsets > ENUMERATION_BUDGET {
        return Err(NormError::TooLarge(format!(
            "{subsets} candidate subsystems for vertex enumeration"
        )));
    }
    let mut found = std::collections::BTreeSet::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    loop {
        let sub = RationalMatrix::from_rows(idx.iter().map(|&i| rows[i].clone()).collect(), dim);
        if let Some(inv) = sub.inverse() {
            // Fix the first sign to +1: antipodal vertices are identified.
            for mask in 0..(1u64 << (dim - 1)) {
                let s: Vec<Q> = (0..dim)
                    .map(|i| {
                        if i > 0 && (mask >> (i - 1)) & 1 == 1 {
                            -Q::one()
                        } else {
                            Q::one()
                        }
                    })
                    .collect();
                let x = inv.mul_vec(&s);
                if rows.iter().all(|r| dot(r, &x).abs() <= Q::one()) {
                    found.insert(canonical_sign(x));
                }
            }
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(found.into_iter().collect());
            }
            i -= 1;
            if idx[i] < m - dim + i {
                idx[i] += 1;
                for k in i + 1..dim {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
