#![allow(dead_code)]

use std::path::PathBuf;

use bcgroupoid::coefficients::NormedModule;
use bcgroupoid::exact::{RationalMatrix, Q};
use bcgroupoid::io::{load_workspace, Workspace};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> Workspace {
    let path = fixtures_dir().join(format!("{name}.json"));
    load_workspace(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every bundled fixture, in file-name order.
pub fn all_fixtures() -> Vec<Workspace> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixtures_dir())
        .expect("fixtures directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| load_workspace(p).unwrap_or_else(|e| panic!("{}: {e}", p.display())))
        .collect()
}

/// `dim` of the fixed families `ρ_g v_{s(g)} = v_{t(g)}`, from the stacked
/// equations.
pub fn invariant_dim(v: &NormedModule) -> usize {
    let g = &v.base;
    let off = v.offsets();
    let total = v.total_dim();
    let mut rows = Vec::new();
    for a in 0..g.num_morphisms() {
        let (s, t) = (g.source(a), g.target(a));
        let m = v.action(a);
        for i in 0..m.rows() {
            let mut r = vec![Q::zero(); total];
            for j in 0..m.cols() {
                r[off[s] + j] = &r[off[s] + j] + m.get(i, j);
            }
            r[off[t] + i] = &r[off[t] + i] - &Q::one();
            rows.push(r);
        }
    }
    total - RationalMatrix::from_rows(rows, total).rank()
}

/// `min_u max_i |a_i·(z − Bu)|` by enumerating the vertices of the epigraph
/// LP. Only usable when the rows and the columns of `b` are few.
pub fn brute_min_distance(rows: &[Vec<Q>], z: &[Q], b: &RationalMatrix) -> Q {
    let mut kept: Vec<Vec<Q>> = Vec::new();
    for j in 0..b.cols() {
        let mut trial = kept.clone();
        trial.push(b.column(j));
        if RationalMatrix::from_columns(&trial, b.rows()).rank() == trial.len() {
            kept = trial;
        }
    }
    let r = kept.len();
    let basis = RationalMatrix::from_columns(&kept, b.rows());
    // c·(u, t) ≤ d
    let mut cons: Vec<(Vec<Q>, Q)> = Vec::new();
    for a in rows {
        let s: Q = a.iter().zip(z).map(|(x, y)| x * y).sum();
        let w = basis.vec_mul(a);
        let mut lo: Vec<Q> = w.iter().map(|x| -x).collect();
        lo.push(-Q::one());
        cons.push((lo, -&s));
        let mut hi = w;
        hi.push(-Q::one());
        cons.push((hi, s));
    }
    let mut best: Option<Q> = None;
    let mut pick = Vec::new();
    choose(&cons, r + 1, 0, &mut pick, &mut |idx| {
        let m = RationalMatrix::from_rows(idx.iter().map(|&i| cons[i].0.clone()).collect(), r + 1);
        if m.rank() < r + 1 {
            return;
        }
        let rhs: Vec<Q> = idx.iter().map(|&i| cons[i].1.clone()).collect();
        let x = m.solve(&rhs).expect("square system of full rank");
        let feasible = cons
            .iter()
            .all(|(c, d)| c.iter().zip(&x).map(|(p, q)| p * q).sum::<Q>() <= *d);
        if feasible && best.as_ref().map_or(true, |v| x[r] < *v) {
            best = Some(x[r].clone());
        }
    });
    best.expect("a bounded LP has an optimal vertex")
}

fn choose<T>(items: &[T], k: usize, from: usize, pick: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in from..items.len() {
        pick.push(i);
        choose(items, k, i + 1, pick, f);
        pick.pop();
    }
}
