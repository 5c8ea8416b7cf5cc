//! Acceptance suite: one line per criterion, exact checks only.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use bcgroupoid::amenability::{
    algebraic_mapping_theorem_check, amenable_vanishing_check, dual_coefficient_mean, factorization_check,
    uniform_mean,
};
use bcgroupoid::coefficients::{dual_module, linf_module, trivial_module};
use bcgroupoid::cohomology::{
    additivity_check, cochain_complex, cochain_complex_of_kind, equivalence_invariance_check, les_of,
    relative_cohomology, relative_complex,
};
use bcgroupoid::exact::{PolyhedralNorm, RationalMatrix, SparseMatrix, Q};
use bcgroupoid::groupoid::{skeleton_retraction, FiniteGroupoid, GroupTable};
use bcgroupoid::homalg::{comparison_map, homogeneous_resolution, standard_resolution};
use bcgroupoid::io::{run_workspace, Workspace};
use bcgroupoid::resolutions::{
    hom_inhom_isos, homotopy_operator, induced_chain_map, twisted_chain_map, BarComplex, BarKind,
};
use bcgroupoid::Limits;
use serde_json::Value;

use common::{all_fixtures, brute_min_distance, fixture, invariant_dim};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn lim() -> Limits {
    Limits::default()
}

const KINDS: [(BarKind, &str); 2] = [(BarKind::Inhomogeneous, "inhomogeneous"), (BarKind::Homogeneous, "homogeneous")];

/// max column sum of absolute values
fn l1_columns(m: &SparseMatrix) -> Q {
    let t = m.transpose();
    (0..t.rows())
        .map(|j| t.row(j).iter().map(|(_, v)| v.abs()).sum::<Q>())
        .max()
        .unwrap_or_else(Q::zero)
}

fn l1_norm_exact(m: &SparseMatrix) -> Result<Q, String> {
    let v = PolyhedralNorm::operator_norm_sparse(m, &PolyhedralNorm::l1(m.cols()), &PolyhedralNorm::l1(m.rows()))
        .map_err(err)?;
    ensure(v == l1_columns(m), || format!("operator norm {v} disagrees with the column-sum oracle"))?;
    Ok(v)
}

fn chain_axioms() -> Outcome {
    let fx = all_fixtures();
    ensure(fx.len() >= 10, || format!("only {} fixtures", fx.len()))?;
    for ws in &fx {
        for (kind, label) in KINDS {
            let c = BarComplex::new(ws.groupoid.clone(), kind, 3, lim().path_cap).map_err(err)?;
            for k in 2..=3 {
                ensure(c.boundary(k - 1).mul(&c.boundary(k)).is_zero(), || {
                    format!("{}: {label} ∂∂ ≠ 0 in degree {k}", ws.name)
                })?;
            }
            let cc = cochain_complex_of_kind(&ws.module, kind, 3, lim().path_cap).map_err(err)?;
            ensure(cc.complex.deltas.len() >= 3, || format!("{}: {label} cochains stop early", ws.name))?;
            ensure(cc.complex.squares_to_zero(), || format!("{}: {label} δδ ≠ 0", ws.name))?;
        }
    }
    Ok(format!("{} groupoids, both resolutions, degrees ≤ 3", fx.len()))
}

fn contractions() -> Outcome {
    let fx = all_fixtures();
    let mut largest = Q::zero();
    for ws in &fx {
        for (kind, label) in KINDS {
            let c = BarComplex::new(ws.groupoid.clone(), kind, 3, lim().path_cap).map_err(err)?;
            let base = c.boundary(1).mul(&c.contraction(0)).add(&c.contraction_base().mul(&c.augmentation()));
            ensure(base.is_identity() && c.augmentation().mul(&c.contraction_base()).is_identity(), || {
                format!("{}: {label} contraction fails in degree 0", ws.name)
            })?;
            for k in 1..3 {
                let h = c.boundary(k + 1).mul(&c.contraction(k)).add(&c.contraction(k - 1).mul(&c.boundary(k)));
                ensure(h.is_identity(), || format!("{}: {label} contraction fails in degree {k}", ws.name))?;
            }
            for k in 0..3 {
                let n = l1_norm_exact(&c.contraction(k))?;
                ensure(n <= Q::one(), || format!("{}: {label} ‖s_{k}‖ = {n}", ws.name))?;
                largest = largest.max(n);
            }
        }
        let res = standard_resolution(&ws.module, 2, lim().path_cap).map_err(err)?;
        let a = res.audit().map_err(err)?;
        ensure(a.passed(), || format!("{}: cochain contraction audit {a:?}", ws.name))?;
        for n in &a.contraction_norms {
            largest = largest.max(n.clone());
        }
    }
    Ok(format!("{} fixtures, largest contraction norm {largest}", fx.len()))
}

fn translations() -> Outcome {
    let fx = all_fixtures();
    for ws in &fx {
        let inhom = BarComplex::inhomogeneous(&ws.groupoid, 3, lim().path_cap).map_err(err)?;
        let hom = BarComplex::homogeneous(&ws.groupoid, 3, lim().path_cap).map_err(err)?;
        let mut below: Option<SparseMatrix> = None;
        for k in 0..=3 {
            let (to_hom, to_inhom) = hom_inhom_isos(&inhom, &hom, k);
            ensure(to_hom.mul(&to_inhom).is_identity() && to_inhom.mul(&to_hom).is_identity(), || {
                format!("{}: translations not inverse in degree {k}", ws.name)
            })?;
            for m in [&to_hom, &to_inhom] {
                let n = l1_norm_exact(m)?;
                ensure(n == Q::one(), || format!("{}: translation norm {n} in degree {k}", ws.name))?;
            }
            if let Some(prev) = &below {
                let lhs = hom.boundary(k).mul(&to_hom);
                let rhs = prev.mul(&inhom.boundary(k));
                ensure(lhs.sub(&rhs).is_zero(), || format!("{}: not a chain map in degree {k}", ws.name))?;
            }
            below = Some(to_hom);
        }
    }
    Ok(format!("{} fixtures, degrees ≤ 3", fx.len()))
}

fn homotopy() -> Outcome {
    for name in ["blowup_z2", "swap"] {
        let ws = fixture(name);
        let r = skeleton_retraction(&ws.groupoid, None).map_err(err)?;
        let h = &r.homotopy;
        let c = BarComplex::inhomogeneous(&ws.groupoid, 3, lim().path_cap).map_err(err)?;
        for n in 0..=2 {
            let mut lhs = c.boundary(n + 1).mul(&homotopy_operator(h, &c, &c, n));
            if n >= 1 {
                lhs = lhs.add(&homotopy_operator(h, &c, &c, n - 1).mul(&c.boundary(n)));
            }
            let rhs = induced_chain_map(&h.to, &c, &c, n).sub(&twisted_chain_map(h, &c, &c, n));
            ensure(lhs.sub(&rhs).is_zero(), || format!("{name}: identity fails in degree {n}"))?;
            ensure(!rhs.is_zero() || n == 0, || format!("{name}: vacuous in degree {n}"))?;
        }
    }
    Ok("blow-up of Z/2 and swap action groupoid, degrees ≤ 2".into())
}

fn vanishing() -> Outcome {
    let groups = [
        ("Z/2", GroupTable::cyclic(2)),
        ("Z/3", GroupTable::cyclic(3)),
        ("Z/4", GroupTable::cyclic(4)),
        ("Z/2×Z/2", GroupTable::klein()),
        ("S3", GroupTable::symmetric3()),
    ];
    let mut done = Vec::new();
    for (name, t) in &groups {
        let g = Arc::new(FiniteGroupoid::from_group(t));
        let v = Arc::new(trivial_module(&g));
        let r = amenable_vanishing_check(&v, 3, &lim()).map_err(err)?;
        ensure(r.dims.len() == 4 && r.passed(), || format!("{name}: dims {:?}", r.dims))?;
        if t.order() <= 3 {
            let (l, _) = linf_module(&v).map_err(err)?;
            let r = amenable_vanishing_check(&l, 2, &lim()).map_err(err)?;
            ensure(r.passed(), || format!("{name}: bounded-function dual dims {:?}", r.dims))?;
        }
        done.push(*name);
    }
    Ok(format!("H^1..3 = 0 for {}", done.join(", ")))
}

fn invariants_in_degree_zero() -> Outcome {
    let fx = all_fixtures();
    let mut union_dim = None;
    for ws in &fx {
        let c = cochain_complex(&ws.module, 1, lim().path_cap).map_err(err)?;
        let h0 = c.complex.cohomology(0).map_err(err)?.dim;
        let inv = invariant_dim(&ws.module);
        ensure(h0 == inv, || format!("{}: H^0 {h0} vs invariants {inv}", ws.name))?;
        if ws.name == "discrete3" {
            union_dim = Some(h0);
        }
    }
    ensure(union_dim == Some(3), || format!("three-component fixture gives {union_dim:?}"))?;
    Ok(format!("{} fixtures; three components give 3", fx.len()))
}

/// `dim H^1(G,A)` from `coker(H^0 G → H^0 A) ⊕ ker(H^1 G → H^1 A)`.
fn les_oracle(r: &bcgroupoid::cohomology::RelativeComplexDesc) -> Result<usize, String> {
    let amb = &r.ambient.complex;
    let sub = &r.sub.complex;
    let a0 = amb.cohomology(0).map_err(err)?;
    let s0 = sub.cohomology(0).map_err(err)?;
    let images: Vec<Vec<Q>> = a0.representatives.iter().map(|z| r.restriction[0].mul_vec(z)).collect();
    let rank0 = RationalMatrix::from_columns(&images, sub.dims[0]).rank();
    let a1 = amb.cohomology(1).map_err(err)?;
    let s1 = sub.cohomology(1).map_err(err)?;
    let images: Vec<Vec<Q>> = a1.representatives.iter().map(|z| r.restriction[1].mul_vec(z)).collect();
    let coords = sub.class_coordinates(&s1, &images).map_err(err)?;
    let rank1 = RationalMatrix::from_columns(&coords, s1.dim).rank();
    Ok((s0.dim - rank0) + (a1.dim - rank1))
}

fn relative_nonvanishing() -> Outcome {
    let ws = fixture("z2");
    let mut notes = Vec::new();
    for (pair, k) in [("two-trivial", 2usize), ("three-trivial", 3)] {
        let p = ws.pairs.iter().find(|p| p.name == pair).ok_or_else(|| format!("missing pair {pair}"))?;
        let r = relative_complex(&p.pair, &p.module, 2, &lim()).map_err(err)?;
        let hs = relative_cohomology(&r).map_err(err)?;
        let oracle = les_oracle(&r)?;
        ensure(hs[1].dim == k - 1 && oracle == k - 1, || {
            format!("{pair}: kernel complex {} vs LES {oracle}, expected {}", hs[1].dim, k - 1)
        })?;
        let rows: Vec<Vec<Q>> = r.ambient.complex.norms[1]
            .h_rows()
            .map_err(err)?
            .iter()
            .map(|a| {
                let mut d = vec![Q::zero(); r.ambient.complex.dims[1]];
                for (j, v) in a {
                    d[*j] = v.clone();
                }
                r.kernel_basis[1].vec_mul(&d)
            })
            .collect();
        let b = r.kernel.deltas[0].to_dense();
        for z in &hs[1].representatives {
            let s = r.kernel.class_seminorm(1, z, lim().lp_var_cap).map_err(err)?;
            let brute = brute_min_distance(&rows, z, &b);
            ensure(s.value == brute, || format!("{pair}: LP {} vs brute force {brute}", s.value))?;
            ensure(!s.value.is_zero(), || format!("{pair}: class has seminorm 0"))?;
            notes.push(format!("{pair} ‖·‖ = {}", s.value));
        }
    }
    Ok(format!("dims 1 and 2; {}", notes.join(", ")))
}

fn les_exactness() -> Outcome {
    let cases = [("z2", "two-trivial"), ("blowup_z2", "vertex-trivial"), ("z4", "z2-and-trivial")];
    let mut slots = 0;
    for (f, pair) in cases {
        let ws = fixture(f);
        let p = ws.pairs.iter().find(|p| p.name == pair).ok_or_else(|| format!("missing pair {pair}"))?;
        let r = relative_complex(&p.pair, &p.module, 3, &lim()).map_err(err)?;
        let l = les_of(&r, &lim()).map_err(err)?;
        ensure(l.is_exact(), || format!("{f}/{pair}: library reports a non-exact slot"))?;
        ensure(l.degrees.len() == 4, || format!("{f}/{pair}: {} degrees", l.degrees.len()))?;
        // (incoming, outgoing, dim) per slot
        let mut check = |name: String, inc: Option<&RationalMatrix>, out: Option<&RationalMatrix>, dim: usize| {
            let rank_in = inc.map_or(0, RationalMatrix::rank);
            let rank_out = out.map_or(0, RationalMatrix::rank);
            let zero = match (inc, out) {
                (Some(i), Some(o)) => o.mul(i).is_zero(),
                _ => true,
            };
            slots += 1;
            ensure(zero && rank_in == dim - rank_out, || {
                format!("{f}/{pair}: {name} im {rank_in} ker {}", dim - rank_out)
            })
        };
        for (k, d) in l.degrees.iter().enumerate() {
            let prev = if k == 0 { None } else { l.degrees[k - 1].connecting.as_ref() };
            check(format!("H^{k}(G,A)"), prev, Some(&d.j_star), d.relative.dim)?;
            check(format!("H^{k}(G)"), Some(&d.j_star), Some(&d.i_star), d.ambient.dim)?;
            if let Some(c) = &d.connecting {
                check(format!("H^{k}(A)"), Some(&d.i_star), Some(c), d.sub.dim)?;
            }
        }
    }
    Ok(format!("3 pairs, {slots} slots through degree 3"))
}

fn additivity() -> Outcome {
    let ws = fixture("z2_z3_union");
    let r = additivity_check(&ws.module, 3, &lim()).map_err(err)?;
    ensure(r.components == 2 && r.passed(), || format!("report {r:?}"))?;
    let mut expected = vec![0usize; 4];
    for t in [GroupTable::cyclic(2), GroupTable::cyclic(3)] {
        let g = Arc::new(FiniteGroupoid::from_group(&t));
        let c = cochain_complex(&Arc::new(trivial_module(&g)), 3, lim().path_cap).map_err(err)?;
        for (k, h) in c.complex.cohomology_all().map_err(err)?.iter().enumerate() {
            expected[k] += h.dim;
        }
    }
    let got: Vec<usize> = r.degrees.iter().map(|d| d.dim).collect();
    ensure(got == expected, || format!("union dims {got:?}, separate sum {expected:?}"))?;
    Ok(format!("dims {got:?}"))
}

fn cohomology_dims(ws: &Workspace, n: usize) -> Result<Vec<usize>, String> {
    let c = cochain_complex(&ws.module, n, lim().path_cap).map_err(err)?;
    Ok(c.complex.cohomology_all().map_err(err)?.iter().map(|h| h.dim).collect())
}

fn equivalence() -> Outcome {
    let z2 = Arc::new(FiniteGroupoid::from_group(&GroupTable::cyclic(2)));
    let one = Arc::new(FiniteGroupoid::from_group(&GroupTable::trivial()));
    for (name, small) in [("blowup_z2", z2), ("swap", one)] {
        let ws = fixture(name);
        let ret = skeleton_retraction(&ws.groupoid, None).map_err(err)?;
        let r = equivalence_invariance_check(&ret.include, &ws.module, 2, &lim()).map_err(err)?;
        ensure(r.passed() && r.degrees.len() == 3, || format!("{name}: {r:?}"))?;
        let big = cohomology_dims(&ws, 2)?;
        let c = cochain_complex(&Arc::new(trivial_module(&small)), 2, lim().path_cap).map_err(err)?;
        let dims: Vec<usize> = c.complex.cohomology_all().map_err(err)?.iter().map(|h| h.dim).collect();
        ensure(big == dims, || format!("{name}: {big:?} vs {dims:?}"))?;
        for d in &r.degrees {
            ensure(d.seminorms_dom == d.seminorms_cod, || format!("{name}: seminorms differ in degree {}", d.degree))?;
        }
    }
    Ok("blow-up vs Z/2, swap vs trivial group, degrees ≤ 2".into())
}

fn comparison() -> Outcome {
    let fx = all_fixtures();
    for ws in &fx {
        let res = homogeneous_resolution(&ws.module, 2, lim().path_cap).map_err(err)?;
        let cm = comparison_map(&res, lim().path_cap).map_err(err)?;
        ensure(cm.audit.passed(), || format!("{}: audit {:?}", ws.name, cm.audit))?;
        let iso = cm.cohomology_iso(&res, lim().path_cap).map_err(err)?;
        ensure(iso.len() == 3 && iso.iter().all(|d| d.is_iso()), || format!("{}: {iso:?}", ws.name))?;
    }
    Ok(format!("{} fixtures, degrees ≤ 2", fx.len()))
}

fn means() -> Outcome {
    let fx = all_fixtures();
    for ws in &fx {
        let m = uniform_mean(&ws.groupoid);
        let a = m.audit().map_err(err)?;
        ensure(a.passed() && a.norm == Q::one(), || format!("{}: uniform {a:?}", ws.name))?;
        let dm = dual_coefficient_mean(&m, &ws.module).map_err(err)?;
        let a = dm.audit().map_err(err)?;
        ensure(a.passed() && a.norm == Q::one(), || format!("{}: dual {a:?}", ws.name))?;
        let dual = dual_module(&ws.module).map_err(err)?;
        ensure(dm.coefficients.dims() == dual.dims(), || format!("{}: dual mean has wrong coefficients", ws.name))?;
    }
    Ok(format!("{} fixtures", fx.len()))
}

fn factorization() -> Outcome {
    let cases = [
        ("z2", "full"),
        ("z2", "two-trivial"),
        ("blowup_z2", "vertex-trivial"),
        ("blowup_z2", "vertex-group"),
    ];
    for (f, pair) in cases {
        let ws = fixture(f);
        let p = ws.pairs.iter().find(|p| p.name == pair).ok_or_else(|| format!("missing pair {pair}"))?;
        let r = factorization_check(&p.pair, &p.module, 2, &lim()).map_err(err)?;
        ensure(r.passed(), || format!("{f}/{pair}: {r:?}"))?;
        for n in 1..=2 {
            ensure(r.degrees.iter().any(|d| d.degree == n && d.restricts_to_zero), || {
                format!("{f}/{pair}: restriction nonzero in degree {n}")
            })?;
        }
    }
    Ok("4 pairs including (G,G), degrees 1 and 2".into())
}

fn mapping_theorem() -> Outcome {
    let mut pairs = 0;
    for ws in all_fixtures() {
        for p in &ws.pairs {
            let r = algebraic_mapping_theorem_check(&p.pair, &p.module, 3, &lim()).map_err(err)?;
            for d in r.degrees.iter().filter(|d| d.degree >= 2) {
                ensure(d.asserted && d.isomorphism && d.isometric, || format!("{}/{}: {d:?}", ws.name, p.name))?;
                ensure(d.dim_relative == 0 && d.dim_ambient == 0, || {
                    format!("{}/{}: degree {} dims {} {}", ws.name, p.name, d.degree, d.dim_relative, d.dim_ambient)
                })?;
            }
            pairs += 1;
        }
    }
    let ws = fixture("z2");
    for (pair, k) in [("two-trivial", 2usize), ("three-trivial", 3)] {
        let p = ws.pairs.iter().find(|p| p.name == pair).ok_or_else(|| format!("missing pair {pair}"))?;
        let r = algebraic_mapping_theorem_check(&p.pair, &p.module, 3, &lim()).map_err(err)?;
        let d1 = &r.degrees[0];
        ensure(d1.degree == 1 && d1.dim_relative == k - 1 && !d1.asserted && !d1.isomorphism, || {
            format!("{pair}: degree 1 {d1:?}")
        })?;
        ensure(r.passed(), || format!("{pair}: out-of-range degree leaks into the verdict"))?;
    }
    Ok(format!("{pairs} pairs, degrees 2 and 3; degree 1 relative classes left unasserted"))
}

fn integers_only(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_u64() || n.is_i64(),
        Value::Array(a) => a.iter().all(integers_only),
        Value::Object(o) => o.values().all(integers_only),
        _ => true,
    }
}

fn determinism() -> Outcome {
    let fx = all_fixtures();
    let mut bytes = 0;
    for ws in &fx {
        let a = run_workspace(ws, None, &lim());
        let b = run_workspace(ws, None, &lim());
        let (ja, jb) = (a.to_json(), b.to_json());
        ensure(ja == jb, || format!("{}: reports differ", ws.name))?;
        ensure(a.exit_code() == 0, || format!("{}: exit code {}", ws.name, a.exit_code()))?;
        let parsed: Value = serde_json::from_str(&ja).map_err(err)?;
        ensure(integers_only(&parsed), || format!("{}: non-integer number in report", ws.name))?;
        bytes += ja.len();
    }
    Ok(format!("{} fixtures, {bytes} bytes identical", fx.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("chain complex axioms", chain_axioms),
        ("contraction identities", contractions),
        ("homogeneous and inhomogeneous translations", translations),
        ("homotopy operator", homotopy),
        ("vanishing with dual coefficients", vanishing),
        ("degree zero is the invariants", invariants_in_degree_zero),
        ("relative nonvanishing", relative_nonvanishing),
        ("long exact sequence", les_exactness),
        ("additivity over components", additivity),
        ("equivalence invariance", equivalence),
        ("comparison map", comparison),
        ("mean axioms", means),
        ("factorization through the kernel complex", factorization),
        ("mapping theorem", mapping_theorem),
        ("determinism", determinism),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if filter.as_ref().is_some_and(|f| !name.contains(f.as_str()) && *f != n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        match out {
            Ok(detail) => println!("criterion {n:>2} PASS {name} ({detail}) [{ms} ms]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL {name}: {why} [{ms} ms]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
