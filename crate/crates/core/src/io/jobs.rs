//! Job execution and report assembly.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::amenability::{
    algebraic_mapping_theorem_check, amenable_vanishing_check, converse_amenability_probe, dual_coefficient_mean,
    factorization_check, uniform_mean, AmenabilityError,
};
use crate::coefficients::{invariants, CoefficientError};
use crate::cohomology::{
    additivity_check, cochain_complex, cochain_complex_of_kind, equivalence_invariance_check, les_of,
    relative_cohomology, relative_complex, CochainComplex, CohomologyDegree, CohomologyError, Limits,
};
use crate::exact::matrix::vec_sub;
use crate::exact::{NormError, Q};
use crate::groupoid::{skeleton_retraction, GroupoidError};
use crate::homalg::{comparison_map, homogeneous_resolution, standard_resolution, HomalgError};
use crate::resolutions::{hom_inhom_isos, l1_operator_norm, BarComplex, BarKind, ResolutionError};

use super::{JobSpec, NamedPair, Workspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JobKind {
    Cohomology,
    Relative,
    Les,
    Seminorm,
    Additivity,
    Equivalence,
    AmenableVanishing,
    MappingTheorem,
    Factorization,
    Resolutions,
    Comparison,
    Means,
    VerifyAll,
}

const ALL: [JobKind; 13] = [
    JobKind::Resolutions,
    JobKind::Cohomology,
    JobKind::Seminorm,
    JobKind::Relative,
    JobKind::Les,
    JobKind::Additivity,
    JobKind::Equivalence,
    JobKind::Comparison,
    JobKind::Means,
    JobKind::AmenableVanishing,
    JobKind::Factorization,
    JobKind::MappingTheorem,
    JobKind::VerifyAll,
];

impl JobKind {
    pub fn name(self) -> &'static str {
        match self {
            JobKind::Cohomology => "cohomology",
            JobKind::Relative => "relative",
            JobKind::Les => "les",
            JobKind::Seminorm => "seminorm",
            JobKind::Additivity => "additivity",
            JobKind::Equivalence => "equivalence",
            JobKind::AmenableVanishing => "amenable-vanishing",
            JobKind::MappingTheorem => "mapping-theorem",
            JobKind::Factorization => "factorization",
            JobKind::Resolutions => "resolutions",
            JobKind::Comparison => "comparison",
            JobKind::Means => "means",
            JobKind::VerifyAll => "verify-all",
        }
    }

    pub fn uses_pair(self) -> bool {
        matches!(
            self,
            JobKind::Relative | JobKind::Les | JobKind::MappingTheorem | JobKind::Factorization
        )
    }

    /// Degree used when the job does not name one.
    pub fn default_degree(self, degree: usize) -> usize {
        match self {
            JobKind::Factorization | JobKind::Comparison | JobKind::Equivalence => degree.min(2),
            JobKind::Means => 0,
            _ => degree,
        }
    }
}

impl fmt::Display for JobKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for JobKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ALL.iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown job {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Cap,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct JobReport {
    pub job: String,
    pub target: String,
    pub degree: usize,
    pub status: Status,
    pub assertions: Vec<Assertion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub data: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub workspace: String,
    pub limits: Limits,
    pub passed: bool,
    pub jobs: Vec<JobReport>,
}

impl Report {
    /// 0 pass, 1 assertion failure, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        if self.jobs.iter().any(|j| matches!(j.status, Status::Fail | Status::Error)) {
            1
        } else if self.jobs.iter().any(|j| j.status == Status::Cap) {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

struct Failure {
    message: String,
    cap: bool,
}

macro_rules! failure_from {
    ($($t:ty => $cap:expr),* $(,)?) => {
        $(impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                let f: fn(&$t) -> bool = $cap;
                Failure { cap: f(&e), message: e.to_string() }
            }
        })*
    };
}

fn norm_cap(e: &NormError) -> bool {
    matches!(e, NormError::LpTooLarge { .. } | NormError::DimCap { .. } | NormError::TooLarge(_))
}

failure_from! {
    CohomologyError => |e| e.is_resource_cap(),
    HomalgError => |e| e.is_resource_cap(),
    AmenabilityError => |e| e.is_resource_cap(),
    ResolutionError => |_| true,
    NormError => norm_cap,
    CoefficientError => |e| matches!(e, CoefficientError::Norm(n) if norm_cap(n)),
    GroupoidError => |_| false,
}

type Outcome = Result<(Vec<Assertion>, Value), Failure>;

fn check(out: &mut Vec<Assertion>, name: impl Into<String>, passed: bool) {
    out.push(Assertion {
        name: name.into(),
        passed,
    });
}

struct Unit<'a> {
    kind: JobKind,
    pair: Option<&'a NamedPair>,
    degree: usize,
}

/// Runs the selected job (or the workspace's own job list, or everything when
/// the list is empty) and assembles the report in job order.
pub fn run_workspace(ws: &Workspace, selection: Option<JobKind>, limits: &Limits) -> Report {
    let specs = match selection {
        Some(k) => vec![JobSpec {
            job: k.name().into(),
            pair: None,
            degree: None,
        }],
        None if ws.jobs.is_empty() => vec![JobSpec {
            job: JobKind::VerifyAll.name().into(),
            pair: None,
            degree: None,
        }],
        None => ws.jobs.clone(),
    };
    let jobs: Vec<JobReport> = specs.iter().flat_map(|s| run_job(ws, s, limits)).collect();
    Report {
        workspace: ws.name.clone(),
        limits: *limits,
        passed: jobs.iter().all(|j| j.status == Status::Pass),
        jobs,
    }
}

/// Expands one job spec (verify-all and pair-less pair jobs fan out) and runs
/// the pieces concurrently; the result order is fixed.
pub fn run_job(ws: &Workspace, spec: &JobSpec, limits: &Limits) -> Vec<JobReport> {
    let kind: JobKind = match spec.job.parse() {
        Ok(k) => k,
        Err(e) => {
            return vec![JobReport {
                job: spec.job.clone(),
                target: ws.name.clone(),
                degree: 0,
                status: Status::Error,
                assertions: Vec::new(),
                error: Some(e),
                data: Value::Null,
            }]
        }
    };
    let kinds: Vec<JobKind> = if kind == JobKind::VerifyAll {
        ALL.iter().copied().filter(|&k| k != JobKind::VerifyAll).collect()
    } else {
        vec![kind]
    };
    let mut units = Vec::new();
    for k in kinds {
        let degree = spec.degree.unwrap_or_else(|| k.default_degree(limits.degree));
        if k.uses_pair() {
            for p in &ws.pairs {
                if spec.pair.as_ref().map_or(true, |n| *n == p.name) {
                    units.push(Unit {
                        kind: k,
                        pair: Some(p),
                        degree,
                    });
                }
            }
        } else {
            units.push(Unit {
                kind: k,
                pair: None,
                degree,
            });
        }
    }
    units.par_iter().map(|u| run_unit(ws, u, limits)).collect()
}

fn run_unit(ws: &Workspace, u: &Unit, limits: &Limits) -> JobReport {
    let n = u.degree;
    let outcome = match (u.kind, u.pair) {
        (JobKind::Cohomology, _) => cohomology(ws, n, limits),
        (JobKind::Seminorm, _) => seminorm(ws, n, limits),
        (JobKind::Additivity, _) => additivity(ws, n, limits),
        (JobKind::Equivalence, _) => equivalence(ws, n, limits),
        (JobKind::AmenableVanishing, _) => vanishing(ws, n, limits),
        (JobKind::Resolutions, _) => resolutions(ws, n, limits),
        (JobKind::Comparison, _) => comparison(ws, n, limits),
        (JobKind::Means, _) => means(ws),
        (JobKind::Relative, Some(p)) => relative(p, n, limits),
        (JobKind::Les, Some(p)) => les(p, n, limits),
        (JobKind::MappingTheorem, Some(p)) => mapping(p, n, limits),
        (JobKind::Factorization, Some(p)) => factorization(p, n, limits),
        _ => Err(Failure {
            message: "job needs a pair".into(),
            cap: false,
        }),
    };
    let target = match u.pair {
        Some(p) => format!("{}/{}", ws.name, p.name),
        None => ws.name.clone(),
    };
    let (status, assertions, error, data) = match outcome {
        Ok((a, d)) => {
            let s = if a.iter().all(|x| x.passed) {
                Status::Pass
            } else {
                Status::Fail
            };
            (s, a, None, d)
        }
        Err(f) => (
            if f.cap { Status::Cap } else { Status::Error },
            Vec::new(),
            Some(f.message),
            Value::Null,
        ),
    };
    JobReport {
        job: u.kind.name().into(),
        target,
        degree: n,
        status,
        assertions,
        error,
        data,
    }
}

fn dims(hs: &[CohomologyDegree]) -> Vec<usize> {
    hs.iter().map(|h| h.dim).collect()
}

fn cohomology(ws: &Workspace, n: usize, limits: &Limits) -> Outcome {
    let c = cochain_complex(&ws.module, n, limits.path_cap)?;
    let hs = c.complex.cohomology_all()?;
    let inv = invariants(&ws.module)?.dim();
    let mut a = Vec::new();
    check(&mut a, "coboundary squares to zero", c.complex.squares_to_zero());
    check(&mut a, "H^0 has the dimension of the invariants", hs[0].dim == inv);
    Ok((a, json!({ "dims": dims(&hs), "invariants": inv, "degrees": hs })))
}

/// Class seminorms of every basis class, with witnesses re-evaluated.
fn classes(c: &CochainComplex, hs: &[CohomologyDegree], limits: &Limits, a: &mut Vec<Assertion>) -> Result<Value, Failure> {
    let mut out = Vec::new();
    for h in hs {
        let k = h.degree;
        let mut items = Vec::new();
        for z in &h.representatives {
            let s = c.class_seminorm(k, z, limits.lp_var_cap)?;
            let residual = if k == 0 {
                z.clone()
            } else {
                vec_sub(z, &c.deltas[k - 1].mul_vec(&s.witness))
            };
            check(a, format!("witness attains the seminorm in degree {k}"), c.norms[k].eval(&residual) == s.value);
            items.push(json!({ "representative": z, "seminorm": s.value, "witness": s.witness }));
        }
        out.push(json!({ "degree": k, "classes": items }));
    }
    Ok(Value::Array(out))
}

fn seminorm(ws: &Workspace, n: usize, limits: &Limits) -> Outcome {
    let c = cochain_complex(&ws.module, n, limits.path_cap)?;
    let hs = c.complex.cohomology_all()?;
    let mut a = Vec::new();
    let data = classes(&c.complex, &hs, limits, &mut a)?;
    Ok((a, json!({ "dims": dims(&hs), "degrees": data })))
}

fn relative(p: &NamedPair, n: usize, limits: &Limits) -> Outcome {
    let r = relative_complex(&p.pair, &p.module, n, limits)?;
    let hs = relative_cohomology(&r)?;
    let mut a = Vec::new();
    check(&mut a, "kernel complex squares to zero", r.kernel.squares_to_zero());
    let vanish = hs.iter().all(|h| {
        h.representatives.iter().all(|z| {
            let x = r.to_ambient(h.degree, z);
            r.restriction[h.degree].mul_vec(&x).iter().all(Q::is_zero)
        })
    });
    check(&mut a, "relative classes restrict to zero", vanish);
    let data = classes(&r.kernel, &hs, limits, &mut a)?;
    Ok((a, json!({ "dims": dims(&hs), "degrees": data })))
}

fn les(p: &NamedPair, n: usize, limits: &Limits) -> Outcome {
    let r = relative_complex(&p.pair, &p.module, n, limits)?;
    let l = les_of(&r, limits)?;
    let mut a = Vec::new();
    for s in &l.slots {
        check(&mut a, format!("exact at {}", s.slot), s.exact);
    }
    let table: Vec<Value> = l
        .degrees
        .iter()
        .map(|d| json!({ "degree": d.degree, "relative": d.relative.dim, "ambient": d.ambient.dim, "sub": d.sub.dim }))
        .collect();
    Ok((a, json!({ "dims": table, "slots": l.slots, "connecting_constant": l.connecting_constant })))
}

fn additivity(ws: &Workspace, n: usize, limits: &Limits) -> Outcome {
    let r = additivity_check(&ws.module, n, limits)?;
    let mut a = Vec::new();
    for d in &r.degrees {
        check(&mut a, format!("dims add up in degree {}", d.degree), d.dims_match);
        check(&mut a, format!("seminorms are the product in degree {}", d.degree), d.seminorms_match);
    }
    Ok((a, serde_json::to_value(&r).expect("serializes")))
}

fn equivalence(ws: &Workspace, n: usize, limits: &Limits) -> Outcome {
    let ret = skeleton_retraction(&ws.groupoid, None)?;
    let r = equivalence_invariance_check(&ret.include, &ws.module, n, limits)?;
    let mut a = Vec::new();
    for d in &r.degrees {
        check(&mut a, format!("isomorphism in degree {}", d.degree), d.isomorphism);
        check(&mut a, format!("isometric in degree {}", d.degree), d.isometric);
    }
    Ok((a, json!({ "skeleton_objects": ret.skeleton.num_objects(), "degrees": r.degrees })))
}

fn vanishing(ws: &Workspace, n: usize, limits: &Limits) -> Outcome {
    let r = amenable_vanishing_check(&ws.module, n, limits)?;
    let probe = converse_amenability_probe(&ws.groupoid, limits)?;
    let mut a = Vec::new();
    for (k, d) in r.dims.iter().enumerate().skip(1) {
        check(&mut a, format!("dual coefficients vanish in degree {k}"), *d == 0);
    }
    check(&mut a, "converse probe vanishes", probe.passed());
    Ok((a, json!({ "dims": r.dims, "probe_dims": probe.dims })))
}

fn mapping(p: &NamedPair, n: usize, limits: &Limits) -> Outcome {
    let r = algebraic_mapping_theorem_check(&p.pair, &p.module, n, limits)?;
    let mut a = Vec::new();
    for d in r.degrees.iter().filter(|d| d.asserted) {
        check(&mut a, format!("isomorphism in degree {}", d.degree), d.isomorphism);
        check(&mut a, format!("isometric in degree {}", d.degree), d.isometric);
    }
    Ok((a, serde_json::to_value(&r).expect("serializes")))
}

fn factorization(p: &NamedPair, n: usize, limits: &Limits) -> Outcome {
    let r = factorization_check(&p.pair, &p.module, n, limits)?;
    let mut a = Vec::new();
    check(&mut a, "mean audit", r.mean.passed());
    check(&mut a, "averaging operator audit", r.averaging.passed());
    check(&mut a, "alternation of the average extends the identity", r.extends_identity);
    for d in &r.degrees {
        check(&mut a, format!("norm at most 1 in degree {}", d.degree), d.norm <= Q::one());
        check(&mut a, format!("equivariant in degree {}", d.degree), d.equivariant);
        if d.degree > 0 {
            check(&mut a, format!("restriction vanishes in degree {}", d.degree), d.restricts_to_zero);
        }
    }
    Ok((a, serde_json::to_value(&r).expect("serializes")))
}

fn resolutions(ws: &Workspace, n: usize, limits: &Limits) -> Outcome {
    let g = &ws.groupoid;
    let mut a = Vec::new();
    let mut bars = Vec::new();
    for kind in [BarKind::Inhomogeneous, BarKind::Homogeneous] {
        let c = BarComplex::new(g.clone(), kind, n, limits.path_cap)?;
        let label = match kind {
            BarKind::Inhomogeneous => "inhomogeneous",
            BarKind::Homogeneous => "homogeneous",
        };
        let dd = (2..=n).all(|k| c.boundary(k - 1).mul(&c.boundary(k)).is_zero());
        check(&mut a, format!("{label} boundary squares to zero"), dd);
        if n >= 1 {
            let base = c
                .boundary(1)
                .mul(&c.contraction(0))
                .add(&c.contraction_base().mul(&c.augmentation()));
            let mut ok = base.is_identity() && c.augmentation().mul(&c.contraction_base()).is_identity();
            let mut norms = vec![l1_operator_norm(&c.contraction(0))];
            for k in 1..n {
                let h = c.boundary(k + 1).mul(&c.contraction(k)).add(&c.contraction(k - 1).mul(&c.boundary(k)));
                ok &= h.is_identity();
                norms.push(l1_operator_norm(&c.contraction(k)));
            }
            check(&mut a, format!("{label} contraction identities"), ok);
            check(&mut a, format!("{label} contraction norms at most 1"), norms.iter().all(|x| *x <= Q::one()));
        }
        if n >= 1 {
            let cc = cochain_complex_of_kind(&ws.module, kind, n - 1, limits.path_cap)?;
            check(&mut a, format!("{label} coboundary squares to zero"), cc.complex.squares_to_zero());
        }
        bars.push(c);
    }
    let mut iso = true;
    for k in 0..=n {
        let (to_hom, to_inhom) = hom_inhom_isos(&bars[0], &bars[1], k);
        iso &= to_hom.mul(&to_inhom).is_identity()
            && to_inhom.mul(&to_hom).is_identity()
            && l1_operator_norm(&to_hom) == Q::one()
            && l1_operator_norm(&to_inhom) == Q::one();
    }
    check(&mut a, "translations are inverse isometries", iso);
    let audit = if n >= 1 {
        let res = standard_resolution(&ws.module, n - 1, limits.path_cap)?;
        let au = res.audit()?;
        check(&mut a, "standard resolution audit", au.passed());
        serde_json::to_value(&au).expect("serializes")
    } else {
        Value::Null
    };
    let sizes: Vec<Vec<usize>> = bars
        .iter()
        .map(|b| (0..=n).map(|k| b.basis(k).len()).collect())
        .collect();
    Ok((a, json!({ "basis_sizes": { "inhomogeneous": sizes[0], "homogeneous": sizes[1] }, "standard": audit })))
}

fn comparison(ws: &Workspace, n: usize, limits: &Limits) -> Outcome {
    let res = homogeneous_resolution(&ws.module, n, limits.path_cap)?;
    let cm = comparison_map(&res, limits.path_cap)?;
    let iso = cm.cohomology_iso(&res, limits.path_cap)?;
    let mut a = Vec::new();
    check(&mut a, "comparison map audit", cm.audit.passed());
    for d in &iso {
        check(&mut a, format!("isomorphism in degree {}", d.degree), d.is_iso());
    }
    Ok((a, json!({ "audit": cm.audit, "cohomology": iso })))
}

fn means(ws: &Workspace) -> Outcome {
    let m = uniform_mean(&ws.groupoid);
    let au = m.audit()?;
    let dm = dual_coefficient_mean(&m, &ws.module)?;
    let ad = dm.audit()?;
    let mut a = Vec::new();
    check(&mut a, "uniform mean audit", au.passed() && au.norm == Q::one());
    check(&mut a, "dual coefficient mean audit", ad.passed());
    Ok((a, json!({ "uniform": au, "dual": ad })))
}
