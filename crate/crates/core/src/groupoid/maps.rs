//! Groupoid maps, homotopies, pairs and skeleta.

use std::sync::Arc;

use super::core::FiniteGroupoid;
use super::GroupoidError;

/// A functor between finite groupoids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMap {
    pub dom: Arc<FiniteGroupoid>,
    pub cod: Arc<FiniteGroupoid>,
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl GroupoidMap {
    /// Checks functoriality exhaustively.
    pub fn new(
        dom: Arc<FiniteGroupoid>,
        cod: Arc<FiniteGroupoid>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        let f = GroupoidMap {
            dom,
            cod,
            objects,
            morphisms,
        };
        f.audit()?;
        Ok(f)
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        GroupoidMap {
            dom: g.clone(),
            cod: g.clone(),
            objects: (0..g.num_objects()).collect(),
            morphisms: (0..g.num_morphisms()).collect(),
        }
    }

    pub fn audit(&self) -> Result<(), GroupoidError> {
        let (d, c) = (&self.dom, &self.cod);
        let bad = |m: String| Err(GroupoidError::MapViolation(m));
        if self.objects.len() != d.num_objects() || self.morphisms.len() != d.num_morphisms() {
            return bad("map tables have the wrong size".into());
        }
        if self.objects.iter().any(|&o| o >= c.num_objects())
            || self.morphisms.iter().any(|&g| g >= c.num_morphisms())
        {
            return bad("map lands outside the codomain".into());
        }
        for g in 0..d.num_morphisms() {
            let fg = self.morphisms[g];
            if c.source(fg) != self.objects[d.source(g)] || c.target(fg) != self.objects[d.target(g)] {
                return bad(format!("morphism {g} is sent to a morphism with the wrong endpoints"));
            }
        }
        for e in 0..d.num_objects() {
            if self.morphisms[d.id(e)] != c.id(self.objects[e]) {
                return bad(format!("identity of object {e} is not preserved"));
            }
        }
        for g in 0..d.num_morphisms() {
            for &h in d.fiber(d.source(g)) {
                let gh = d.compose_unchecked(g, h);
                if self.morphisms[gh] != c.compose_unchecked(self.morphisms[g], self.morphisms[h]) {
                    return bad(format!("composition {g}∘{h} is not preserved"));
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`
    pub fn after(&self, first: &GroupoidMap) -> GroupoidMap {
        assert!(Arc::ptr_eq(&first.cod, &self.dom) || *first.cod == *self.dom, "maps are not composable");
        GroupoidMap {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            objects: first.objects.iter().map(|&o| self.objects[o]).collect(),
            morphisms: first.morphisms.iter().map(|&g| self.morphisms[g]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        distinct(&self.objects) && distinct(&self.morphisms)
    }

    pub fn is_surjective(&self) -> bool {
        let mut o = vec![false; self.cod.num_objects()];
        self.objects.iter().for_each(|&x| o[x] = true);
        let mut m = vec![false; self.cod.num_morphisms()];
        self.morphisms.iter().for_each(|&x| m[x] = true);
        o.into_iter().all(|b| b) && m.into_iter().all(|b| b)
    }

    pub fn is_identity(&self) -> bool {
        *self.dom == *self.cod
            && self.objects.iter().enumerate().all(|(i, &o)| i == o)
            && self.morphisms.iter().enumerate().all(|(i, &g)| i == g)
    }
}

fn distinct(xs: &[usize]) -> bool {
    let mut s = xs.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

/// A natural transformation `h : from ⇒ to`, with `h_e : from(e) → to(e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homotopy {
    pub from: GroupoidMap,
    pub to: GroupoidMap,
    pub component: Vec<usize>,
}

impl Homotopy {
    pub fn new(from: GroupoidMap, to: GroupoidMap, component: Vec<usize>) -> Result<Self, GroupoidError> {
        let h = Homotopy { from, to, component };
        h.audit()?;
        Ok(h)
    }

    pub fn identity(f: &GroupoidMap) -> Self {
        Homotopy {
            from: f.clone(),
            to: f.clone(),
            component: f.objects.iter().map(|&o| f.cod.id(o)).collect(),
        }
    }

    pub fn audit(&self) -> Result<(), GroupoidError> {
        let bad = |m: String| Err(GroupoidError::HomotopyViolation(m));
        if *self.from.dom != *self.to.dom || *self.from.cod != *self.to.cod {
            return bad("maps have different domains or codomains".into());
        }
        let (d, c) = (&self.from.dom, &self.from.cod);
        if self.component.len() != d.num_objects() {
            return bad("one component per object required".into());
        }
        for e in 0..d.num_objects() {
            let h = self.component[e];
            if h >= c.num_morphisms()
                || c.source(h) != self.from.objects[e]
                || c.target(h) != self.to.objects[e]
            {
                return bad(format!("component at {e} does not go from f(e) to g(e)"));
            }
        }
        for g in 0..d.num_morphisms() {
            let lhs = c.compose_unchecked(self.component[d.target(g)], self.from.morphisms[g]);
            let rhs = c.compose_unchecked(self.to.morphisms[g], self.component[d.source(g)]);
            if lhs != rhs {
                return bad(format!("naturality fails at morphism {g}"));
            }
        }
        Ok(())
    }

    /// The inverse homotopy `to ⇒ from`.
    pub fn inverse(&self) -> Homotopy {
        Homotopy {
            from: self.to.clone(),
            to: self.from.clone(),
            component: self.component.iter().map(|&h| self.from.cod.inv(h)).collect(),
        }
    }
}

/// A groupoid with an injectively included subgroupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidPair {
    pub ambient: Arc<FiniteGroupoid>,
    pub sub: Arc<FiniteGroupoid>,
    pub inclusion: GroupoidMap,
}

impl GroupoidPair {
    pub fn new(inclusion: GroupoidMap) -> Result<Self, GroupoidError> {
        inclusion.audit()?;
        if !inclusion.is_injective() {
            return Err(GroupoidError::NotInjective);
        }
        Ok(GroupoidPair {
            ambient: inclusion.cod.clone(),
            sub: inclusion.dom.clone(),
            inclusion,
        })
    }

    /// Pair from a closed set of objects and morphisms of `ambient`.
    pub fn from_subgroupoid(
        ambient: &Arc<FiniteGroupoid>,
        objects: &[usize],
        morphisms: &[usize],
    ) -> Result<Self, GroupoidError> {
        let (sub, obj, mor) = ambient.subgroupoid(objects, morphisms)?;
        Self::new(GroupoidMap::new(Arc::new(sub), ambient.clone(), obj, mor)?)
    }

    /// `(G, G)`
    pub fn full(ambient: &Arc<FiniteGroupoid>) -> Self {
        Self::new(GroupoidMap::identity(ambient)).expect("identity is injective")
    }

    /// `(G, ∅)`
    pub fn empty_sub(ambient: &Arc<FiniteGroupoid>) -> Self {
        Self::from_subgroupoid(ambient, &[], &[]).expect("empty subgroupoid")
    }

    /// The full subgroupoid on `objects`.
    pub fn full_on(ambient: &Arc<FiniteGroupoid>, objects: &[usize]) -> Result<Self, GroupoidError> {
        let mut objects = objects.to_vec();
        objects.sort_unstable();
        let mors = ambient.morphisms_among(&objects);
        Self::from_subgroupoid(ambient, &objects, &mors)
    }
}

/// A connected component as a full subgroupoid.
#[derive(Debug, Clone)]
pub struct Component {
    pub objects: Vec<usize>,
    pub subgroupoid: Arc<FiniteGroupoid>,
    pub inclusion: GroupoidMap,
}

pub fn connected_components(g: &Arc<FiniteGroupoid>) -> Vec<Component> {
    g.component_partition()
        .into_iter()
        .map(|objects| {
            let pair = GroupoidPair::full_on(g, &objects).expect("components are full subgroupoids");
            Component {
                objects,
                subgroupoid: pair.sub,
                inclusion: pair.inclusion,
            }
        })
        .collect()
}

/// `include ∘ project = id` on the skeleton, and `homotopy : include ∘ project ⇒ id_G`.
#[derive(Debug, Clone)]
pub struct Retraction {
    pub skeleton: Arc<FiniteGroupoid>,
    pub include: GroupoidMap,
    pub project: GroupoidMap,
    pub homotopy: Homotopy,
}

/// Retraction onto the full subgroupoid on one object per component. With no
/// explicit choice the lowest object of each component is used.
pub fn skeleton_retraction(g: &Arc<FiniteGroupoid>, choice: Option<&[usize]>) -> Result<Retraction, GroupoidError> {
    let parts = g.component_partition();
    let chosen: Vec<usize> = match choice {
        None => parts.iter().map(|p| p[0]).collect(),
        Some(c) => {
            if c.len() != parts.len() {
                return Err(GroupoidError::InvalidChoice(format!(
                    "{} objects chosen for {} components",
                    c.len(),
                    parts.len()
                )));
            }
            let mut out = Vec::new();
            for p in &parts {
                let hits: Vec<usize> = c.iter().copied().filter(|o| p.contains(o)).collect();
                if hits.len() != 1 {
                    return Err(GroupoidError::InvalidChoice(format!(
                        "component {:?} has {} chosen objects",
                        p,
                        hits.len()
                    )));
                }
                out.push(hits[0]);
            }
            out
        }
    };
    let mut rep = vec![0; g.num_objects()];
    for (p, &c) in parts.iter().zip(&chosen) {
        for &o in p {
            rep[o] = c;
        }
    }
    // k_x : x → rep(x), lowest id, identity at the chosen objects
    let k: Vec<usize> = (0..g.num_objects())
        .map(|x| {
            if rep[x] == x {
                g.id(x)
            } else {
                g.hom(x, rep[x])[0]
            }
        })
        .collect();
    let mut skel_objects = chosen.clone();
    skel_objects.sort_unstable();
    let pair = GroupoidPair::full_on(g, &skel_objects)?;
    let skeleton = pair.sub.clone();
    let include = pair.inclusion.clone();
    let mut obj_pos = vec![usize::MAX; g.num_objects()];
    for (i, &o) in include.objects.iter().enumerate() {
        obj_pos[o] = i;
    }
    let mut mor_pos = vec![usize::MAX; g.num_morphisms()];
    for (i, &m) in include.morphisms.iter().enumerate() {
        mor_pos[m] = i;
    }
    let proj_objects: Vec<usize> = (0..g.num_objects()).map(|x| obj_pos[rep[x]]).collect();
    let proj_morphisms: Vec<usize> = (0..g.num_morphisms())
        .map(|m| {
            let (x, y) = (g.source(m), g.target(m));
            let conj = g.compose_unchecked(g.compose_unchecked(k[y], m), g.inv(k[x]));
            mor_pos[conj]
        })
        .collect();
    let project = GroupoidMap::new(g.clone(), skeleton.clone(), proj_objects, proj_morphisms)?;
    let ip = include.after(&project);
    let homotopy = Homotopy::new(ip, GroupoidMap::identity(g), k.iter().map(|&m| g.inv(m)).collect())?;
    Ok(Retraction {
        skeleton,
        include,
        project,
        homotopy,
    })
}

/// Whether every component of `h` at a sub-object lies in the codomain's
/// subgroupoid.
pub fn check_relative_homotopy(h: &Homotopy, pair_dom: &GroupoidPair, pair_cod: &GroupoidPair) -> bool {
    let in_sub: std::collections::BTreeSet<usize> = pair_cod.inclusion.morphisms.iter().copied().collect();
    pair_dom
        .inclusion
        .objects
        .iter()
        .all(|&a| in_sub.contains(&h.component[a]))
}
