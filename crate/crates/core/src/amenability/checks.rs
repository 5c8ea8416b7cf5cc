//! Vanishing with dual coefficients, the factorization through the kernel
//! complex, the mapping theorem and the converse probe.

use std::sync::Arc;

use serde::Serialize;

use crate::coefficients::{dual_module, pullback, sigma_module, NormedModule};
use crate::cohomology::{cochain_complex, relative_complex, CochainComplex, Limits};
use crate::exact::{PolyhedralNorm, SparseMatrix, Q};
use crate::groupoid::{FiniteGroupoid, GroupoidPair};
use crate::homalg::{homogeneous_pair_resolution, is_equivariant};
use crate::resolutions::alt_operator;

use super::averaging::{averaging_operator, AveragingAudit};
use super::{dual_coefficient_mean, uniform_mean, AmenabilityError, MeanAudit};

#[derive(Debug, Clone, Serialize)]
pub struct VanishingReport {
    /// `dim H^k` for `k = 0..=n`; degree 0 is informational
    pub dims: Vec<usize>,
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        self.dims.iter().skip(1).all(|&d| d == 0)
    }
}

/// `H^k_b(G; V')` for `1 ≤ k ≤ n` with `V'` the dual of `v`.
pub fn amenable_vanishing_check(
    v: &Arc<NormedModule>,
    n: usize,
    limits: &Limits,
) -> Result<VanishingReport, AmenabilityError> {
    let dual = Arc::new(dual_module(v)?);
    let c = cochain_complex(&dual, n, limits.path_cap)?;
    let dims = c.complex.cohomology_all()?.iter().map(|h| h.dim).collect();
    Ok(VanishingReport { dims })
}

/// `H^1_b(G; (ΣR)')`, which vanishes exactly when `G` is amenable.
pub fn converse_amenability_probe(g: &Arc<FiniteGroupoid>, limits: &Limits) -> Result<VanishingReport, AmenabilityError> {
    let sigma = Arc::new(sigma_module(g)?.module);
    amenable_vanishing_check(&sigma, 1, limits)
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationDegree {
    pub degree: usize,
    /// `‖Alt ∘ A‖`
    pub norm: Q,
    pub equivariant: bool,
    /// restriction to the sub kills `Alt ∘ A` (degree 0: not required)
    pub restricts_to_zero: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    pub mean: MeanAudit,
    pub averaging: AveragingAudit,
    pub degrees: Vec<FactorizationDegree>,
    pub extends_identity: bool,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.mean.passed()
            && self.averaging.passed()
            && self.extends_identity
            && self
                .degrees
                .iter()
                .all(|d| d.norm <= Q::one() && d.equivariant && (d.degree == 0 || d.restricts_to_zero))
    }
}

/// Builds `Alt ∘ A_A` on the homogeneous resolution of `V'` (the dual of
/// `v`) in degrees `0..=n` and checks that restricting to the sub kills it
/// in positive degrees.
pub fn factorization_check(
    pair: &GroupoidPair,
    v: &Arc<NormedModule>,
    n: usize,
    limits: &Limits,
) -> Result<FactorizationReport, AmenabilityError> {
    let dual = Arc::new(dual_module(v)?);
    let sub_v = Arc::new(pullback(&pair.inclusion, v)?);
    let mean = dual_coefficient_mean(&uniform_mean(&pair.sub), &sub_v)?;
    let mean_audit = mean.audit()?;
    let pres = homogeneous_pair_resolution(pair, &dual, n, limits.path_cap)?;
    let op = averaging_operator(pair, &mean, &pres.ambient)?;
    let averaging = op.audit()?;
    let res = &pres.ambient;
    let bar = res.bar.as_ref().expect("homogeneous");
    let g = &pair.ambient;
    let objects = g.num_objects();
    let mut degrees = Vec::new();
    let mut extends_identity = true;
    for k in 0..=n {
        let chain = alt_operator(bar, k).transpose();
        let basis = bar.basis(k);
        let composite: Vec<SparseMatrix> = (0..objects)
            .map(|e| {
                let d = dual.dim(e);
                let f = basis.fiber(e);
                let mut t = Vec::new();
                for p in f.clone() {
                    for (q, c) in chain.row(p) {
                        for r in 0..d {
                            t.push(((p - f.start) * d + r, (q - f.start) * d + r, c.clone()));
                        }
                    }
                }
                SparseMatrix::from_triplets(f.len() * d, f.len() * d, t).mul(&op.maps[k][e])
            })
            .collect();
        let m = &res.modules[k];
        let mut norm = Q::zero();
        for e in 0..objects {
            norm = norm.max(PolyhedralNorm::operator_norm_sparse(&composite[e], &m.norms[e], &m.norms[e])?);
        }
        let equivariant = is_equivariant(g, &composite, &m.action, &m.action);
        if k == 0 {
            extends_identity = (0..objects)
                .all(|e| composite[e].mul(&res.augmentation[e]).sub(&res.augmentation[e]).is_zero());
        }
        let restricts_to_zero = pair
            .inclusion
            .objects
            .iter()
            .enumerate()
            .all(|(x, &e)| pres.connecting[k][x].mul(&composite[e]).is_zero());
        degrees.push(FactorizationDegree {
            degree: k,
            norm,
            equivariant,
            restricts_to_zero,
        });
    }
    Ok(FactorizationReport {
        mean: mean_audit,
        averaging,
        degrees,
        extends_identity,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MappingDegree {
    pub degree: usize,
    pub dim_relative: usize,
    pub dim_ambient: usize,
    pub rank: usize,
    pub seminorms_relative: Vec<Q>,
    pub seminorms_ambient: Vec<Q>,
    pub isomorphism: bool,
    pub isometric: bool,
    /// whether this degree is within the range the statement covers
    pub asserted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MappingTheoremReport {
    pub degrees: Vec<MappingDegree>,
}

impl MappingTheoremReport {
    pub fn passed(&self) -> bool {
        self.degrees
            .iter()
            .filter(|d| d.asserted)
            .all(|d| d.isomorphism && d.isometric)
    }
}

/// `H^k(j*) : H^k_b(G, A; V') → H^k_b(G; V')` for `1 ≤ k ≤ n`, with `V'`
/// the dual of `v`; asserted to be an isometric isomorphism for `k ≥ 2`.
pub fn algebraic_mapping_theorem_check(
    pair: &GroupoidPair,
    v: &Arc<NormedModule>,
    n: usize,
    limits: &Limits,
) -> Result<MappingTheoremReport, AmenabilityError> {
    let dual = Arc::new(dual_module(v)?);
    let r = relative_complex(pair, &dual, n, limits)?;
    let mut degrees = Vec::new();
    for k in 1..=n {
        let h_rel = r.kernel.cohomology(k)?;
        let h_amb = r.ambient.complex.cohomology(k)?;
        let j = &r.kernel_basis[k];
        let m = CochainComplex::induced_on_cohomology(j, &r.ambient.complex, &h_rel, &h_amb)?;
        let rank = m.rank();
        let mut seminorms_relative = Vec::new();
        let mut seminorms_ambient = Vec::new();
        for z in &h_rel.representatives {
            seminorms_relative.push(r.kernel.class_seminorm(k, z, limits.lp_var_cap)?.value);
            seminorms_ambient.push(r.ambient.complex.class_seminorm(k, &j.mul_vec(z), limits.lp_var_cap)?.value);
        }
        degrees.push(MappingDegree {
            degree: k,
            dim_relative: h_rel.dim,
            dim_ambient: h_amb.dim,
            rank,
            isomorphism: h_rel.dim == h_amb.dim && rank == h_amb.dim,
            isometric: seminorms_relative == seminorms_ambient,
            seminorms_relative,
            seminorms_ambient,
            asserted: k >= 2,
        });
    }
    Ok(MappingTheoremReport { degrees })
}
