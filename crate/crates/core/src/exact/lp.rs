//! Exact two-phase simplex over the rationals.
//!
//! Dense tableau, Bland's rule for both the entering and the leaving
//! variable. Every outcome carries a certificate that can be checked
//! independently: a primal witness, a Farkas multiplier vector, or a ray.

use serde::Serialize;

use super::matrix::dot;
use super::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VarDomain {
    NonNeg,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
    pub domains: Vec<VarDomain>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LpOutcome {
    Optimal { value: Q, witness: Vec<Q> },
    /// Multipliers `y` (one per constraint, `y_i <= 0` on `<=` rows and
    /// `y_i >= 0` on `>=` rows) with `w = Σ y_i a_i` satisfying `w_j <= 0`
    /// on non-negative variables, `w_j = 0` on free ones, and `y·b > 0`.
    Infeasible { certificate: Vec<Q> },
    /// A feasible point and a direction along which the objective improves
    /// without bound.
    Unbounded { point: Vec<Q>, ray: Vec<Q> },
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Q> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<Q>) -> Self {
        let n = objective.len();
        LpProblem {
            sense,
            objective,
            constraints: Vec::new(),
            domains: vec![VarDomain::NonNeg; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn with_domains(mut self, domains: Vec<VarDomain>) -> Self {
        assert_eq!(domains.len(), self.objective.len());
        self.domains = domains;
        self
    }

    pub fn push(&mut self, coeffs: Vec<Q>, relation: Relation, rhs: Q) {
        assert_eq!(coeffs.len(), self.objective.len(), "constraint length mismatch");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Checks primal feasibility of `x` exactly.
    pub fn is_feasible(&self, x: &[Q]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let domains_ok = self
            .domains
            .iter()
            .zip(x)
            .all(|(d, v)| *d == VarDomain::Free || !v.is_negative());
        domains_ok
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    pub fn objective_at(&self, x: &[Q]) -> Q {
        dot(&self.objective, x)
    }

    /// Verifies a Farkas certificate as documented on [`LpOutcome::Infeasible`].
    pub fn is_infeasibility_certificate(&self, y: &[Q]) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        let signs_ok = self.constraints.iter().zip(y).all(|(c, yi)| match c.relation {
            Relation::Le => !yi.is_positive(),
            Relation::Ge => !yi.is_negative(),
            Relation::Eq => true,
        });
        let mut w = vec![Q::zero(); self.num_vars()];
        let mut yb = Q::zero();
        for (c, yi) in self.constraints.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (wj, a) in w.iter_mut().zip(&c.coeffs) {
                *wj += yi * a;
            }
            yb += yi * &c.rhs;
        }
        let w_ok = self.domains.iter().zip(&w).all(|(d, wj)| match d {
            VarDomain::NonNeg => !wj.is_positive(),
            VarDomain::Free => wj.is_zero(),
        });
        signs_ok && w_ok && yb.is_positive()
    }

    /// Verifies an unboundedness certificate.
    pub fn is_unbounded_certificate(&self, point: &[Q], ray: &[Q]) -> bool {
        if !self.is_feasible(point) || ray.len() != self.num_vars() {
            return false;
        }
        let dom_ok = self
            .domains
            .iter()
            .zip(ray)
            .all(|(d, r)| *d == VarDomain::Free || !r.is_negative());
        let rows_ok = self.constraints.iter().all(|c| {
            let a = dot(&c.coeffs, ray);
            match c.relation {
                Relation::Le => !a.is_positive(),
                Relation::Eq => a.is_zero(),
                Relation::Ge => !a.is_negative(),
            }
        });
        let gain = dot(&self.objective, ray);
        let improves = match self.sense {
            Sense::Minimize => gain.is_negative(),
            Sense::Maximize => gain.is_positive(),
        };
        dom_ok && rows_ok && improves
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    /// reduced costs, last entry = minus the objective value
    obj: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Q {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                self.obj[j] -= &f * &prow[j];
            }
        }
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    fn set_objective(&mut self, costs: &[Q]) {
        let mut obj: Vec<Q> = costs.to_vec();
        obj.push(Q::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[r].iter().enumerate() {
                if !v.is_zero() {
                    obj[j] -= cb * v;
                }
            }
        }
        self.obj = obj;
    }

    /// Runs Bland's rule over the columns allowed by `allowed`. Returns the
    /// unbounded entering column if one is found.
    fn run(&mut self, allowed: &[bool]) -> Option<usize> {
        loop {
            let entering = (0..self.ncols).find(|&j| allowed[j] && self.obj[j].is_negative());
            let Some(c) = entering else {
                return None;
            };
            let mut best: Option<(usize, Q)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return Some(c),
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn basic_values(&self) -> Vec<Q> {
        let mut x = vec![Q::zero(); self.ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(r).clone();
        }
        x
    }
}

/// Solves `p` exactly.
pub fn solve_lp(p: &LpProblem) -> LpOutcome {
    let n = p.num_vars();
    let m = p.constraints.len();

    // Column layout: structural columns (free variables split in two), then
    // one slack/surplus per inequality row, then artificials.
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut next = 0;
    for d in &p.domains {
        match d {
            VarDomain::NonNeg => {
                col_of.push((next, None));
                next += 1;
            }
            VarDomain::Free => {
                col_of.push((next, Some(next + 1)));
                next += 2;
            }
        }
    }
    let nstruct = next;

    // Normalize rows to non-negative right-hand sides.
    let mut flips = Vec::with_capacity(m);
    let mut rels = Vec::with_capacity(m);
    for c in &p.constraints {
        let flip = c.rhs.is_negative();
        flips.push(flip);
        rels.push(match (c.relation, flip) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (r, _) => r,
        });
    }
    let nslack = rels.iter().filter(|r| **r != Relation::Eq).count();
    let nart = rels.iter().filter(|r| **r != Relation::Le).count();
    let ncols = nstruct + nslack + nart;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    // per row: (column that started as the unit vector e_i, its phase-one cost)
    let mut unit_col = Vec::with_capacity(m);
    let mut is_art = vec![false; ncols];
    let (mut s_next, mut a_next) = (nstruct, nstruct + nslack);
    for (i, c) in p.constraints.iter().enumerate() {
        let sgn = if flips[i] { -Q::one() } else { Q::one() };
        let mut row = vec![Q::zero(); ncols + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let v = a * &sgn;
            let (pc, nc) = col_of[j];
            if let Some(nc) = nc {
                row[nc] = -&v;
            }
            row[pc] = v;
        }
        row[ncols] = &c.rhs * &sgn;
        match rels[i] {
            Relation::Le => {
                row[s_next] = Q::one();
                basis.push(s_next);
                unit_col.push((s_next, Q::zero()));
                s_next += 1;
            }
            Relation::Ge => {
                row[s_next] = -Q::one();
                s_next += 1;
                row[a_next] = Q::one();
                is_art[a_next] = true;
                basis.push(a_next);
                unit_col.push((a_next, Q::one()));
                a_next += 1;
            }
            Relation::Eq => {
                row[a_next] = Q::one();
                is_art[a_next] = true;
                basis.push(a_next);
                unit_col.push((a_next, Q::one()));
                a_next += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        ncols,
    };

    if nart > 0 {
        let costs: Vec<Q> = (0..ncols)
            .map(|j| if is_art[j] { Q::one() } else { Q::zero() })
            .collect();
        t.set_objective(&costs);
        let all = vec![true; ncols];
        // Phase one is bounded below by zero, so no ray can appear.
        let _ = t.run(&all);
        let value = -&t.obj[ncols];
        if value.is_positive() {
            // Dual multipliers from the reduced costs of the unit columns.
            let certificate = (0..m)
                .map(|i| {
                    let (col, cost) = &unit_col[i];
                    let pi = cost - &t.obj[*col];
                    if flips[i] {
                        -pi
                    } else {
                        pi
                    }
                })
                .collect();
            return LpOutcome::Infeasible { certificate };
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if !is_art[t.basis[r]] {
                continue;
            }
            if let Some(c) = (0..ncols).find(|&j| !is_art[j] && !t.rows[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }

    let mut costs = vec![Q::zero(); ncols];
    for (j, c) in p.objective.iter().enumerate() {
        let c = match p.sense {
            Sense::Minimize => c.clone(),
            Sense::Maximize => -c,
        };
        let (pc, nc) = col_of[j];
        if let Some(nc) = nc {
            costs[nc] = -&c;
        }
        costs[pc] = c;
    }
    t.set_objective(&costs);
    let allowed: Vec<bool> = is_art.iter().map(|a| !a).collect();
    let unbounded = t.run(&allowed);

    let to_original = |x: &[Q]| -> Vec<Q> {
        col_of
            .iter()
            .map(|(pc, nc)| match nc {
                Some(nc) => &x[*pc] - &x[*nc],
                None => x[*pc].clone(),
            })
            .collect()
    };
    let point = to_original(&t.basic_values());

    if let Some(c) = unbounded {
        let mut dir = vec![Q::zero(); ncols];
        dir[c] = Q::one();
        for (r, &b) in t.basis.iter().enumerate() {
            dir[b] = -&t.rows[r][c];
        }
        return LpOutcome::Unbounded {
            point,
            ray: to_original(&dir),
        };
    }
    let value = p.objective_at(&point);
    LpOutcome::Optimal {
        value,
        witness: point,
    }
}
