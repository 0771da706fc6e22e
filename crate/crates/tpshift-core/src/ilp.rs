//! Small exact integer programs: bounded integer variables, linear
//! constraints, depth-first branch and bound with bounds propagation.

use crate::error::{Error, Result};

pub type VarId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(VarId, i64)>,
    pub relation: Relation,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IlpInstance {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<(VarId, i64)>,
}

/// Linear expression `Σ c·x + constant`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinExpr {
    pub terms: Vec<(VarId, i64)>,
    pub constant: i64,
}

impl LinExpr {
    pub fn constant(c: i64) -> Self {
        LinExpr {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn var(v: VarId) -> Self {
        LinExpr {
            terms: vec![(v, 1)],
            constant: 0,
        }
    }

    pub fn plus(mut self, other: &LinExpr) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self.constant += other.constant;
        self
    }

    pub fn minus(mut self, other: &LinExpr) -> Self {
        self.terms.extend(other.terms.iter().map(|&(v, c)| (v, -c)));
        self.constant -= other.constant;
        self
    }

    pub fn offset(mut self, c: i64) -> Self {
        self.constant += c;
        self
    }
}

impl IlpInstance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lo: i64, hi: i64) -> VarId {
        self.variables.push(Variable {
            name: name.into(),
            lo,
            hi,
        });
        self.variables.len() - 1
    }

    pub fn add_constraint(&mut self, terms: Vec<(VarId, i64)>, relation: Relation, rhs: i64) {
        self.constraints.push(Constraint {
            terms,
            relation,
            rhs,
        });
    }

    /// Adds `lhs (relation) rhs` for two expressions.
    pub fn relate(&mut self, lhs: &LinExpr, relation: Relation, rhs: &LinExpr) {
        let diff = lhs.clone().minus(rhs);
        self.add_constraint(diff.terms, relation, -diff.constant);
    }

    pub fn bounds(&self, e: &LinExpr) -> (i64, i64) {
        e.terms
            .iter()
            .fold((e.constant, e.constant), |(lo, hi), &(v, c)| {
                let (a, b) = (c * self.variables[v].lo, c * self.variables[v].hi);
                (lo + a.min(b), hi + a.max(b))
            })
    }

    /// Fresh variable pinned to `max(0, e)` by a big-M encoding sized from
    /// the current variable bounds.
    pub fn max0(&mut self, name: &str, e: &LinExpr) -> LinExpr {
        let (lo, hi) = self.bounds(e);
        if hi <= 0 {
            return LinExpr::constant(0);
        }
        if lo >= 0 {
            return e.clone();
        }
        let z = LinExpr::var(self.add_var(name, 0, hi));
        let y = self.add_var(format!("{name}?"), 0, 1);
        self.relate(&z, Relation::Ge, e);
        // y = 0 forces z = 0; y = 1 forces z <= e
        self.relate(
            &z,
            Relation::Le,
            &LinExpr {
                terms: vec![(y, hi)],
                constant: 0,
            },
        );
        self.relate(
            &z,
            Relation::Le,
            &e.clone().plus(&LinExpr {
                terms: vec![(y, lo)],
                constant: -lo,
            }),
        );
        z
    }

    pub fn evaluate(&self, assignment: &[i64], terms: &[(VarId, i64)]) -> i64 {
        terms.iter().map(|&(v, c)| c * assignment[v]).sum()
    }

    pub fn is_feasible(&self, assignment: &[i64]) -> bool {
        assignment.len() == self.variables.len()
            && self
                .variables
                .iter()
                .zip(assignment)
                .all(|(v, &x)| v.lo <= x && x <= v.hi)
            && self.constraints.iter().all(|c| {
                let lhs = self.evaluate(assignment, &c.terms);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }
}

pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

/// Minimizes the objective; returns the optimum and the lexicographically
/// smallest optimal assignment, or `None` when infeasible.
pub fn solve_min(inst: &IlpInstance) -> Result<Option<(i64, Vec<i64>)>> {
    solve_min_limited(inst, DEFAULT_NODE_LIMIT)
}

pub fn solve_min_limited(inst: &IlpInstance, node_limit: u64) -> Result<Option<(i64, Vec<i64>)>> {
    let rows = normalize(inst);
    let mut solver = Search {
        rows: &rows,
        objective: &inst.objective,
        nodes: 0,
        node_limit,
    };
    let lo: Vec<i64> = inst.variables.iter().map(|v| v.lo).collect();
    let hi: Vec<i64> = inst.variables.iter().map(|v| v.hi).collect();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(None);
    }

    let mut best: Option<i64> = None;
    solver.optimize(lo.clone(), hi.clone(), &mut best)?;
    let Some(value) = best else { return Ok(None) };

    // pin the optimum, then take the first feasible point in index order
    let mut pinned = rows.clone();
    pinned.push(Row {
        terms: inst.objective.clone(),
        rhs: value,
    });
    pinned.push(Row {
        terms: inst.objective.iter().map(|&(v, c)| (v, -c)).collect(),
        rhs: -value,
    });
    let mut solver = Search {
        rows: &pinned,
        objective: &inst.objective,
        nodes: 0,
        node_limit,
    };
    let point = solver.first_lex(lo, hi)?.expect("optimum is attainable");
    debug_assert!(inst.is_feasible(&point));
    Ok(Some((value, point)))
}

/// `Σ c·x <= rhs`
#[derive(Clone, Debug)]
struct Row {
    terms: Vec<(VarId, i64)>,
    rhs: i64,
}

fn normalize(inst: &IlpInstance) -> Vec<Row> {
    let mut rows = Vec::new();
    for c in &inst.constraints {
        let neg = || Row {
            terms: c.terms.iter().map(|&(v, a)| (v, -a)).collect(),
            rhs: -c.rhs,
        };
        match c.relation {
            Relation::Le => rows.push(Row {
                terms: c.terms.clone(),
                rhs: c.rhs,
            }),
            Relation::Ge => rows.push(neg()),
            Relation::Eq => {
                rows.push(Row {
                    terms: c.terms.clone(),
                    rhs: c.rhs,
                });
                rows.push(neg());
            }
        }
    }
    rows
}

struct Search<'a> {
    rows: &'a [Row],
    objective: &'a [(VarId, i64)],
    nodes: u64,
    node_limit: u64,
}

fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::ResourceLimit {
                what: "integer program search nodes",
                needed: self.nodes as u128,
                limit: self.node_limit as u128,
            });
        }
        Ok(())
    }

    /// Bounds tightening to a fixpoint; false on infeasibility.
    fn propagate(&self, lo: &mut [i64], hi: &mut [i64]) -> bool {
        loop {
            let mut changed = false;
            for row in self.rows {
                let min_act: i64 = row
                    .terms
                    .iter()
                    .map(|&(v, c)| if c > 0 { c * lo[v] } else { c * hi[v] })
                    .sum();
                if min_act > row.rhs {
                    return false;
                }
                for &(v, c) in &row.terms {
                    if c == 0 {
                        continue;
                    }
                    let own = if c > 0 { c * lo[v] } else { c * hi[v] };
                    let room = row.rhs - (min_act - own);
                    if c > 0 {
                        let nh = div_floor(room, c);
                        if nh < hi[v] {
                            hi[v] = nh;
                            changed = true;
                        }
                    } else {
                        let nl = div_ceil(room, c);
                        if nl > lo[v] {
                            lo[v] = nl;
                            changed = true;
                        }
                    }
                    if lo[v] > hi[v] {
                        return false;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn lower_bound(&self, lo: &[i64], hi: &[i64]) -> i64 {
        self.objective
            .iter()
            .map(|&(v, c)| if c > 0 { c * lo[v] } else { c * hi[v] })
            .sum()
    }

    fn optimize(
        &mut self,
        mut lo: Vec<i64>,
        mut hi: Vec<i64>,
        best: &mut Option<i64>,
    ) -> Result<()> {
        self.tick()?;
        if !self.propagate(&mut lo, &mut hi) {
            return Ok(());
        }
        let bound = self.lower_bound(&lo, &hi);
        if best.is_some_and(|b| bound >= b) {
            return Ok(());
        }
        // smallest open domain first
        let open = (0..lo.len())
            .filter(|&v| lo[v] < hi[v])
            .min_by_key(|&v| (hi[v] - lo[v], v));
        let Some(v) = open else {
            *best = Some(bound);
            return Ok(());
        };
        for (l, h) in split(lo[v], hi[v]) {
            let (mut lo2, mut hi2) = (lo.clone(), hi.clone());
            lo2[v] = l;
            hi2[v] = h;
            self.optimize(lo2, hi2, best)?;
        }
        Ok(())
    }

    fn first_lex(&mut self, mut lo: Vec<i64>, mut hi: Vec<i64>) -> Result<Option<Vec<i64>>> {
        self.tick()?;
        if !self.propagate(&mut lo, &mut hi) {
            return Ok(None);
        }
        let Some(v) = (0..lo.len()).find(|&v| lo[v] < hi[v]) else {
            return Ok(Some(lo));
        };
        for (l, h) in split(lo[v], hi[v]) {
            let (mut lo2, mut hi2) = (lo.clone(), hi.clone());
            lo2[v] = l;
            hi2[v] = h;
            if let Some(x) = self.first_lex(lo2, hi2)? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

/// Ascending sub-ranges: single values for small domains, halves otherwise.
fn split(lo: i64, hi: i64) -> Vec<(i64, i64)> {
    if hi - lo < 8 {
        (lo..=hi).map(|x| (x, x)).collect()
    } else {
        let mid = lo + (hi - lo) / 2;
        vec![(lo, mid), (mid + 1, hi)]
    }
}
