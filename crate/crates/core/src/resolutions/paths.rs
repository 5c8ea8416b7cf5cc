//! Bases of the two bar resolutions and the path-level formulas.

use std::collections::HashMap;
use std::ops::Range;

use serde::Serialize;

use crate::groupoid::FiniteGroupoid;

use super::ResolutionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BarKind {
    /// composable paths `(g_0, …, g_n)` with `s(g_i) = t(g_{i+1})`
    Inhomogeneous,
    /// tuples `(g_0, …, g_n)` with a common target
    Homogeneous,
}

/// A signed formal combination of paths.
pub type Chain = Vec<(Vec<usize>, i64)>;

/// All paths of one degree, grouped by the fiber `t(g_0)` and ordered
/// lexicographically inside each fiber.
#[derive(Debug, Clone)]
pub struct PathBasis {
    pub kind: BarKind,
    pub degree: usize,
    paths: Vec<Vec<usize>>,
    fiber_start: Vec<usize>,
    index: HashMap<u128, usize>,
    radix: u128,
}

pub(crate) fn path_key(path: &[usize], radix: u128) -> u128 {
    path.iter().fold(0u128, |acc, &g| acc * radix + g as u128)
}

/// Number of degree-`n` paths of each kind, per fiber.
pub fn count_paths(g: &FiniteGroupoid, kind: BarKind, degree: usize) -> Vec<u128> {
    match kind {
        BarKind::Homogeneous => (0..g.num_objects())
            .map(|e| (g.fiber(e).len() as u128).saturating_pow(degree as u32 + 1))
            .collect(),
        BarKind::Inhomogeneous => {
            // c[x] = number of paths of the current length with target x
            let mut c: Vec<u128> = (0..g.num_objects()).map(|e| g.fiber(e).len() as u128).collect();
            for _ in 0..degree {
                c = (0..g.num_objects())
                    .map(|x| {
                        g.fiber(x)
                            .iter()
                            .map(|&h| c[g.source(h)])
                            .fold(0u128, u128::saturating_add)
                    })
                    .collect();
            }
            c
        }
    }
}

impl PathBasis {
    pub fn new(g: &FiniteGroupoid, kind: BarKind, degree: usize, cap: usize) -> Result<Self, ResolutionError> {
        let count: u128 = count_paths(g, kind, degree).iter().sum();
        if count > cap as u128 {
            return Err(ResolutionError::PathCap {
                degree,
                count,
                cap,
            });
        }
        let mut paths = Vec::with_capacity(count as usize);
        let mut fiber_start = Vec::with_capacity(g.num_objects() + 1);
        for e in 0..g.num_objects() {
            fiber_start.push(paths.len());
            let mut cur = Vec::with_capacity(degree + 1);
            enumerate(g, kind, degree, e, &mut cur, &mut paths);
        }
        fiber_start.push(paths.len());
        Ok(Self::from_paths(g, kind, degree, paths, fiber_start))
    }

    fn from_paths(
        g: &FiniteGroupoid,
        kind: BarKind,
        degree: usize,
        paths: Vec<Vec<usize>>,
        fiber_start: Vec<usize>,
    ) -> Self {
        let radix = g.num_morphisms().max(1) as u128;
        let index = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (path_key(p, radix), i))
            .collect();
        PathBasis {
            kind,
            degree,
            paths,
            fiber_start,
            index,
            radix,
        }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn path(&self, i: usize) -> &[usize] {
        &self.paths[i]
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    pub fn index_of(&self, path: &[usize]) -> Option<usize> {
        self.index.get(&path_key(path, self.radix)).copied()
    }

    /// Panics if `path` is not in the basis.
    pub fn idx(&self, path: &[usize]) -> usize {
        self.index_of(path)
            .unwrap_or_else(|| panic!("path {path:?} missing from degree {} basis", self.degree))
    }

    pub fn fiber(&self, e: usize) -> Range<usize> {
        self.fiber_start[e]..self.fiber_start[e + 1]
    }

    pub fn fiber_of(&self, i: usize) -> usize {
        self.fiber_start.partition_point(|&s| s <= i) - 1
    }
}

fn enumerate(
    g: &FiniteGroupoid,
    kind: BarKind,
    degree: usize,
    e: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == degree + 1 {
        out.push(cur.clone());
        return;
    }
    let next_target = match (kind, cur.last()) {
        (_, None) => e,
        (BarKind::Inhomogeneous, Some(&last)) => g.source(last),
        (BarKind::Homogeneous, Some(_)) => e,
    };
    for &h in g.fiber(next_target) {
        cur.push(h);
        enumerate(g, kind, degree, e, cur, out);
        cur.pop();
    }
}

/// Orbit representatives: the paths whose leading entry is an identity.
/// Every path is `ρ_{g_0}` applied to exactly one of them.
#[derive(Debug, Clone)]
pub struct RepBasis {
    pub kind: BarKind,
    pub degree: usize,
    reps: Vec<Vec<usize>>,
    /// object `e` with leading entry `id_e`
    objects: Vec<usize>,
    index: HashMap<u128, usize>,
    radix: u128,
}

/// Number of orbit representatives in degree `n`.
pub fn count_reps(g: &FiniteGroupoid, kind: BarKind, degree: usize) -> u128 {
    if degree == 0 {
        return g.num_objects() as u128;
    }
    match kind {
        BarKind::Inhomogeneous => count_paths(g, kind, degree - 1).iter().sum(),
        BarKind::Homogeneous => (0..g.num_objects())
            .map(|e| (g.fiber(e).len() as u128).saturating_pow(degree as u32))
            .sum(),
    }
}

impl RepBasis {
    pub fn new(g: &FiniteGroupoid, kind: BarKind, degree: usize, cap: usize) -> Result<Self, ResolutionError> {
        let count = count_reps(g, kind, degree);
        if count > cap as u128 {
            return Err(ResolutionError::PathCap {
                degree,
                count,
                cap,
            });
        }
        let mut reps = Vec::with_capacity(count as usize);
        let mut objects = Vec::with_capacity(count as usize);
        for e in 0..g.num_objects() {
            let mut cur = vec![g.id(e)];
            let before = reps.len();
            enumerate(g, kind, degree, e, &mut cur, &mut reps);
            objects.extend(std::iter::repeat(e).take(reps.len() - before));
        }
        let radix = g.num_morphisms().max(1) as u128;
        let index = reps
            .iter()
            .enumerate()
            .map(|(i, p)| (path_key(p, radix), i))
            .collect();
        Ok(RepBasis {
            kind,
            degree,
            reps,
            objects,
            index,
            radix,
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, i: usize) -> &[usize] {
        &self.reps[i]
    }

    pub fn reps(&self) -> &[Vec<usize>] {
        &self.reps
    }

    /// The object whose identity leads representative `i`.
    pub fn object(&self, i: usize) -> usize {
        self.objects[i]
    }

    pub fn index_of(&self, rep: &[usize]) -> Option<usize> {
        self.index.get(&path_key(rep, self.radix)).copied()
    }

    /// Writes `path = ρ_{g_0}(rep)`; returns `(g_0, index of rep)`.
    pub fn reduce(&self, g: &FiniteGroupoid, path: &[usize]) -> (usize, usize) {
        let g0 = path[0];
        let rep = rep_of(g, self.kind, path);
        let i = self
            .index_of(&rep)
            .unwrap_or_else(|| panic!("representative {rep:?} missing from degree {}", self.degree));
        (g0, i)
    }
}

/// The representative with leading identity in the orbit of `path`.
pub fn rep_of(g: &FiniteGroupoid, kind: BarKind, path: &[usize]) -> Vec<usize> {
    let g0 = path[0];
    let mut rep = Vec::with_capacity(path.len());
    rep.push(g.id(g.source(g0)));
    match kind {
        BarKind::Inhomogeneous => rep.extend_from_slice(&path[1..]),
        BarKind::Homogeneous => {
            let gi = g.inv(g0);
            rep.extend(path[1..].iter().map(|&h| g.compose_unchecked(gi, h)));
        }
    }
    rep
}

/// `ρ_a(path)`; needs `s(a) = t(g_0)`.
pub fn act(g: &FiniteGroupoid, kind: BarKind, a: usize, path: &[usize]) -> Vec<usize> {
    match kind {
        BarKind::Inhomogeneous => {
            let mut out = path.to_vec();
            out[0] = g.compose_unchecked(a, path[0]);
            out
        }
        BarKind::Homogeneous => path.iter().map(|&h| g.compose_unchecked(a, h)).collect(),
    }
}

/// The boundary of a path of degree ≥ 1.
pub fn boundary(g: &FiniteGroupoid, kind: BarKind, path: &[usize]) -> Chain {
    let n = path.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    match kind {
        BarKind::Inhomogeneous => {
            for i in 0..n {
                let mut p = Vec::with_capacity(n);
                p.extend_from_slice(&path[..i]);
                p.push(g.compose_unchecked(path[i], path[i + 1]));
                p.extend_from_slice(&path[i + 2..]);
                out.push((p, sign(i)));
            }
            out.push((path[..n].to_vec(), sign(n)));
        }
        BarKind::Homogeneous => {
            for i in 0..=n {
                let mut p = path.to_vec();
                p.remove(i);
                out.push((p, sign(i)));
            }
        }
    }
    out
}

/// The chain contraction: `(g_0, …, g_n) ↦ (id_{t(g_0)}, g_0, …, g_n)` in the
/// inhomogeneous case and the cone `(id_e, g_0, …, g_n)` in the homogeneous one.
pub fn cone(g: &FiniteGroupoid, path: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(path.len() + 1);
    out.push(g.id(g.target(path[0])));
    out.extend_from_slice(path);
    out
}

pub fn sign(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(g_0, …, g_n) ↦ (g_0, g_0g_1, …, g_0⋯g_n)`
pub fn inhom_to_hom(g: &FiniteGroupoid, path: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(path.len());
    let mut acc = path[0];
    out.push(acc);
    for &h in &path[1..] {
        acc = g.compose_unchecked(acc, h);
        out.push(acc);
    }
    out
}

/// `(g_0, …, g_n) ↦ (g_0, g_0⁻¹g_1, …, g_{n-1}⁻¹g_n)`
pub fn hom_to_inhom(g: &FiniteGroupoid, path: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(path.len());
    out.push(path[0]);
    for w in path.windows(2) {
        out.push(g.compose_unchecked(g.inv(w[0]), w[1]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::GroupTable;

    #[test]
    fn counts() {
        let z2 = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
        assert_eq!(PathBasis::new(&z2, BarKind::Inhomogeneous, 1, 100).unwrap().len(), 4);
        let b = FiniteGroupoid::blow_up(&GroupTable::cyclic(2), 2).unwrap();
        let p2 = PathBasis::new(&b, BarKind::Inhomogeneous, 2, 1000).unwrap();
        assert_eq!(p2.fiber(0).len(), 64);
        assert_eq!(p2.fiber(1).len(), 64);
        let z3 = FiniteGroupoid::from_group(&GroupTable::cyclic(3));
        assert_eq!(PathBasis::new(&z3, BarKind::Homogeneous, 2, 100).unwrap().len(), 27);
        assert!(matches!(
            PathBasis::new(&z3, BarKind::Homogeneous, 5, 100),
            Err(ResolutionError::PathCap { .. })
        ));
    }

    #[test]
    fn lexicographic_within_fibers() {
        let b = FiniteGroupoid::blow_up(&GroupTable::cyclic(2), 2).unwrap();
        for kind in [BarKind::Inhomogeneous, BarKind::Homogeneous] {
            let p = PathBasis::new(&b, kind, 2, 1000).unwrap();
            for e in 0..2 {
                let r = p.fiber(e);
                assert!(p.paths()[r.clone()].windows(2).all(|w| w[0] < w[1]));
                for i in r {
                    assert_eq!(p.fiber_of(i), e);
                    assert_eq!(b.target(p.path(i)[0]), e);
                }
            }
        }
    }

    #[test]
    fn reps_reconstruct_paths() {
        let b = FiniteGroupoid::blow_up(&GroupTable::cyclic(2), 2).unwrap();
        for kind in [BarKind::Inhomogeneous, BarKind::Homogeneous] {
            let p = PathBasis::new(&b, kind, 2, 1000).unwrap();
            let r = RepBasis::new(&b, kind, 2, 1000).unwrap();
            assert_eq!(r.len() as u128, count_reps(&b, kind, 2));
            for path in p.paths() {
                let (g0, i) = r.reduce(&b, path);
                assert_eq!(act(&b, kind, g0, r.rep(i)), *path);
            }
        }
    }

    #[test]
    fn iso_formulas() {
        let z2 = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
        assert_eq!(inhom_to_hom(&z2, &[1, 1]), vec![1, 0]);
        assert_eq!(hom_to_inhom(&z2, &[1, 0]), vec![1, 1]);
    }
}
