//! Finite groupoids with dense integer ids.

use super::group::GroupTable;
use super::GroupoidError;

const UNDEFINED: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    num_objects: usize,
    source: Vec<usize>,
    target: Vec<usize>,
    /// row-major `m × m`; entry `(g, h)` is `g∘h` or `UNDEFINED`
    compose: Vec<usize>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    /// morphisms with target `e`, ascending
    into: Vec<Vec<usize>>,
}

impl FiniteGroupoid {
    /// Builds a groupoid from raw tables and checks every axiom exhaustively.
    /// `compose[g][h]` must be `Some` exactly when `s(g) = t(h)`.
    pub fn from_parts(
        num_objects: usize,
        source: Vec<usize>,
        target: Vec<usize>,
        compose: Vec<Vec<Option<usize>>>,
        identity: Vec<usize>,
        inverse: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        let m = source.len();
        let bad = |msg: String| Err(GroupoidError::Axiom(msg));
        if target.len() != m || compose.len() != m || inverse.len() != m {
            return bad("table sizes disagree with the number of morphisms".into());
        }
        if identity.len() != num_objects {
            return bad("one identity per object required".into());
        }
        for g in 0..m {
            if source[g] >= num_objects || target[g] >= num_objects {
                return bad(format!("morphism {g} has an endpoint outside the object set"));
            }
            if compose[g].len() != m {
                return bad(format!("composition row {g} has the wrong length"));
            }
        }
        let mut flat = vec![UNDEFINED; m * m];
        for g in 0..m {
            for h in 0..m {
                match (compose[g][h], source[g] == target[h]) {
                    (Some(k), true) => {
                        if k >= m {
                            return bad(format!("{g}∘{h} = {k} is not a morphism"));
                        }
                        if source[k] != source[h] || target[k] != target[g] {
                            return bad(format!("{g}∘{h} = {k} has the wrong endpoints"));
                        }
                        flat[g * m + h] = k;
                    }
                    (None, true) => return bad(format!("{g}∘{h} is composable but undefined")),
                    (Some(_), false) => return bad(format!("{g}∘{h} is defined but not composable")),
                    (None, false) => {}
                }
            }
        }
        for (e, &i) in identity.iter().enumerate() {
            if i >= m || source[i] != e || target[i] != e {
                return bad(format!("identity of object {e} is not a loop at {e}"));
            }
        }
        let gr = FiniteGroupoid {
            num_objects,
            into: Self::fibers(num_objects, &target),
            source,
            target,
            compose: flat,
            identity,
            inverse,
        };
        for g in 0..m {
            if gr.compose(gr.identity[gr.target[g]], g) != Some(g)
                || gr.compose(g, gr.identity[gr.source[g]]) != Some(g)
            {
                return bad(format!("identities are not units for morphism {g}"));
            }
            let gi = gr.inverse[g];
            if gi >= m {
                return Err(GroupoidError::MissingInverse(g));
            }
            if gr.compose(g, gi) != Some(gr.identity[gr.target[g]])
                || gr.compose(gi, g) != Some(gr.identity[gr.source[g]])
            {
                return Err(GroupoidError::MissingInverse(g));
            }
        }
        for a in 0..m {
            for b in gr.into[gr.source[a]].iter().copied() {
                let ab = gr.compose_unchecked(a, b);
                for &c in &gr.into[gr.source[b]] {
                    if gr.compose_unchecked(ab, c) != gr.compose_unchecked(a, gr.compose_unchecked(b, c)) {
                        return Err(GroupoidError::NonAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(gr)
    }

    fn fibers(num_objects: usize, target: &[usize]) -> Vec<Vec<usize>> {
        let mut into = vec![Vec::new(); num_objects];
        for (g, &t) in target.iter().enumerate() {
            into[t].push(g);
        }
        into
    }

    /// Builds from an endpoint description and a total rule for composable
    /// pairs; identities and inverses are found by search.
    pub fn from_rule(
        num_objects: usize,
        source: Vec<usize>,
        target: Vec<usize>,
        rule: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupoidError> {
        let m = source.len();
        let compose: Vec<Vec<Option<usize>>> = (0..m)
            .map(|g| {
                (0..m)
                    .map(|h| (source[g] == target[h]).then(|| rule(g, h)))
                    .collect()
            })
            .collect();
        let mut identity = Vec::with_capacity(num_objects);
        for e in 0..num_objects {
            let id = (0..m)
                .find(|&i| {
                    source[i] == e
                        && target[i] == e
                        && (0..m).all(|g| {
                            (target[g] != e || compose[i][g] == Some(g))
                                && (source[g] != e || compose[g][i] == Some(g))
                        })
                })
                .ok_or_else(|| GroupoidError::Axiom(format!("object {e} has no identity")))?;
            identity.push(id);
        }
        let inverse = (0..m)
            .map(|g| {
                (0..m)
                    .find(|&k| {
                        compose[g][k] == Some(identity[target[g]])
                            && compose[k][g] == Some(identity[source[g]])
                    })
                    .unwrap_or(usize::MAX)
            })
            .collect();
        Self::from_parts(num_objects, source, target, compose, identity, inverse)
    }

    pub fn empty() -> Self {
        FiniteGroupoid {
            num_objects: 0,
            source: Vec::new(),
            target: Vec::new(),
            compose: Vec::new(),
            identity: Vec::new(),
            inverse: Vec::new(),
            into: Vec::new(),
        }
    }

    /// One object, one morphism per group element (same ids).
    pub fn from_group(g: &GroupTable) -> Self {
        let n = g.order();
        Self::from_rule(1, vec![0; n], vec![0; n], |a, b| g.mul(a, b))
            .expect("a group is a one-object groupoid")
    }

    /// Validates `table` as a group first.
    pub fn from_group_table(table: Vec<Vec<usize>>) -> Result<Self, GroupoidError> {
        Ok(Self::from_group(&GroupTable::new(table)?))
    }

    /// Parts are laid out consecutively: objects and morphisms of part `k`
    /// are shifted by the totals of the earlier parts.
    pub fn disjoint_union(parts: &[&FiniteGroupoid]) -> Self {
        let mut source = Vec::new();
        let mut target = Vec::new();
        let mut identity = Vec::new();
        let mut inverse = Vec::new();
        let mut offsets = Vec::new();
        let (mut ob, mut mo) = (0, 0);
        for p in parts {
            offsets.push((ob, mo));
            source.extend(p.source.iter().map(|x| x + ob));
            target.extend(p.target.iter().map(|x| x + ob));
            identity.extend(p.identity.iter().map(|x| x + mo));
            inverse.extend(p.inverse.iter().map(|x| x + mo));
            ob += p.num_objects;
            mo += p.num_morphisms();
        }
        let mut compose = vec![UNDEFINED; mo * mo];
        for (p, &(_, off)) in parts.iter().zip(&offsets) {
            let pm = p.num_morphisms();
            for g in 0..pm {
                for h in 0..pm {
                    let k = p.compose[g * pm + h];
                    if k != UNDEFINED {
                        compose[(g + off) * mo + h + off] = k + off;
                    }
                }
            }
        }
        FiniteGroupoid {
            num_objects: ob,
            into: Self::fibers(ob, &target),
            source,
            target,
            compose,
            identity,
            inverse,
        }
    }

    /// `action[g][x]` is `g·x`. Morphism `(x, g) : x → g·x` has id
    /// `x * |G| + g`; `(g·x, h)∘(x, g) = (x, hg)`.
    pub fn action_groupoid(g: &GroupTable, action: &[Vec<usize>]) -> Result<Self, GroupoidError> {
        let n = g.order();
        if action.len() != n {
            return Err(GroupoidError::ActionViolation(format!(
                "action table has {} rows, group has {n} elements",
                action.len()
            )));
        }
        let points = action.first().map_or(0, Vec::len);
        for (a, row) in action.iter().enumerate() {
            if row.len() != points || row.iter().any(|&y| y >= points) {
                return Err(GroupoidError::ActionViolation(format!("row {a} is not a map of the point set")));
            }
        }
        for x in 0..points {
            if action[g.identity()][x] != x {
                return Err(GroupoidError::ActionViolation(format!("identity moves point {x}")));
            }
            for a in 0..n {
                for b in 0..n {
                    if action[g.mul(a, b)][x] != action[a][action[b][x]] {
                        return Err(GroupoidError::ActionViolation(format!(
                            "({a}·{b})·{x} differs from {a}·({b}·{x})"
                        )));
                    }
                }
            }
        }
        let m = points * n;
        let source: Vec<usize> = (0..m).map(|k| k / n).collect();
        let target: Vec<usize> = (0..m).map(|k| action[k % n][k / n]).collect();
        Self::from_rule(points, source, target, |later, first| {
            let (x, gf) = (first / n, first % n);
            let hl = later % n;
            x * n + g.mul(hl, gf)
        })
    }

    /// Objects `0..c`; morphism `(t, s, g) : s → t` has id `(t * c + s) * |G| + g`.
    pub fn blow_up(g: &GroupTable, c: usize) -> Result<Self, GroupoidError> {
        if c == 0 {
            return Err(GroupoidError::EmptyObjectSet);
        }
        let n = g.order();
        let m = c * c * n;
        let source: Vec<usize> = (0..m).map(|k| (k / n) % c).collect();
        let target: Vec<usize> = (0..m).map(|k| k / n / c).collect();
        Self::from_rule(c, source, target, |a, b| {
            let (t, ga) = (a / n / c, a % n);
            let (r, gb) = ((b / n) % c, b % n);
            (t * c + r) * n + g.mul(ga, gb)
        })
    }

    pub fn blow_up_id(&self, group_order: usize, t: usize, s: usize, g: usize) -> usize {
        (t * self.num_objects + s) * group_order + g
    }

    pub fn num_objects(&self) -> usize {
        self.num_objects
    }

    pub fn num_morphisms(&self) -> usize {
        self.source.len()
    }

    pub fn source(&self, g: usize) -> usize {
        self.source[g]
    }

    pub fn target(&self, g: usize) -> usize {
        self.target[g]
    }

    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        let k = self.compose[g * self.num_morphisms() + h];
        (k != UNDEFINED).then_some(k)
    }

    /// Panics unless `s(g) = t(h)`.
    pub fn compose_unchecked(&self, g: usize, h: usize) -> usize {
        let k = self.compose[g * self.num_morphisms() + h];
        assert!(k != UNDEFINED, "composing non-composable morphisms {g} and {h}");
        k
    }

    pub fn id(&self, e: usize) -> usize {
        self.identity[e]
    }

    pub fn is_identity(&self, g: usize) -> bool {
        self.identity[self.source[g]] == g
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// Morphisms with target `e`, ascending.
    pub fn fiber(&self, e: usize) -> &[usize] {
        &self.into[e]
    }

    pub fn hom(&self, from: usize, to: usize) -> Vec<usize> {
        self.into[to]
            .iter()
            .copied()
            .filter(|&g| self.source[g] == from)
            .collect()
    }

    pub fn vertex_group(&self, e: usize) -> Vec<usize> {
        self.hom(e, e)
    }

    /// Partition of the objects into connected components, each part
    /// ascending, parts ordered by their least object.
    pub fn component_partition(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.num_objects];
        let mut parts = Vec::new();
        for start in 0..self.num_objects {
            if comp[start] != usize::MAX {
                continue;
            }
            let idx = parts.len();
            let mut part = vec![];
            let mut stack = vec![start];
            comp[start] = idx;
            while let Some(x) = stack.pop() {
                part.push(x);
                for g in self.fiber(x) {
                    let y = self.source[*g];
                    if comp[y] == usize::MAX {
                        comp[y] = idx;
                        stack.push(y);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.component_partition().len() <= 1
    }

    /// Morphisms between the given objects.
    pub fn morphisms_among(&self, objects: &[usize]) -> Vec<usize> {
        let set: std::collections::BTreeSet<usize> = objects.iter().copied().collect();
        (0..self.num_morphisms())
            .filter(|&g| set.contains(&self.source[g]) && set.contains(&self.target[g]))
            .collect()
    }

    /// The subgroupoid on the given objects and morphisms. Objects and
    /// morphisms are renumbered in the order given. Closure is checked.
    pub fn subgroupoid(
        &self,
        objects: &[usize],
        morphisms: &[usize],
    ) -> Result<(FiniteGroupoid, Vec<usize>, Vec<usize>), GroupoidError> {
        let mut obj_pos = vec![usize::MAX; self.num_objects];
        for (i, &o) in objects.iter().enumerate() {
            if o >= self.num_objects || obj_pos[o] != usize::MAX {
                return Err(GroupoidError::NotSubgroupoid(format!("object {o} is invalid or repeated")));
            }
            obj_pos[o] = i;
        }
        let mut mor_pos = vec![usize::MAX; self.num_morphisms()];
        for (i, &g) in morphisms.iter().enumerate() {
            if g >= self.num_morphisms() || mor_pos[g] != usize::MAX {
                return Err(GroupoidError::NotSubgroupoid(format!("morphism {g} is invalid or repeated")));
            }
            if obj_pos[self.source[g]] == usize::MAX || obj_pos[self.target[g]] == usize::MAX {
                return Err(GroupoidError::NotSubgroupoid(format!("morphism {g} leaves the object set")));
            }
            mor_pos[g] = i;
        }
        for &o in objects {
            if mor_pos[self.identity[o]] == usize::MAX {
                return Err(GroupoidError::NotSubgroupoid(format!("identity of {o} missing")));
            }
        }
        for &g in morphisms {
            if mor_pos[self.inverse[g]] == usize::MAX {
                return Err(GroupoidError::NotSubgroupoid(format!("inverse of {g} missing")));
            }
            for &h in morphisms {
                if let Some(k) = self.compose(g, h) {
                    if mor_pos[k] == usize::MAX {
                        return Err(GroupoidError::NotSubgroupoid(format!("{g}∘{h} missing")));
                    }
                }
            }
        }
        let k = morphisms.len();
        let source = morphisms.iter().map(|&g| obj_pos[self.source[g]]).collect::<Vec<_>>();
        let target = morphisms.iter().map(|&g| obj_pos[self.target[g]]).collect::<Vec<_>>();
        let mut compose = vec![UNDEFINED; k * k];
        for (i, &g) in morphisms.iter().enumerate() {
            for (j, &h) in morphisms.iter().enumerate() {
                if let Some(c) = self.compose(g, h) {
                    compose[i * k + j] = mor_pos[c];
                }
            }
        }
        let sub = FiniteGroupoid {
            num_objects: objects.len(),
            into: Self::fibers(objects.len(), &target),
            source,
            target,
            compose,
            identity: objects.iter().map(|&o| mor_pos[self.identity[o]]).collect(),
            inverse: morphisms.iter().map(|&g| mor_pos[self.inverse[g]]).collect(),
        };
        Ok((sub, objects.to_vec(), morphisms.to_vec()))
    }

    /// Re-checks every axiom by enumeration.
    pub fn audit(&self) -> Result<(), GroupoidError> {
        let m = self.num_morphisms();
        let compose = (0..m)
            .map(|g| (0..m).map(|h| self.compose(g, h)).collect())
            .collect();
        Self::from_parts(
            self.num_objects,
            self.source.clone(),
            self.target.clone(),
            compose,
            self.identity.clone(),
            self.inverse.clone(),
        )
        .map(|_| ())
    }
}
