//! Guess-and-place solvers parameterized by budget and path count.
//!
//! Both solvers guess a switch-path tree and the shift amounts on its paths,
//! then walk the tree from the root, placing every switch at the earliest
//! vertex compatible with the guess. The general solver additionally guesses
//! how much delay and advance reaches each switch vertex, the order of the
//! switches off each path, and the original label difference at each switch.

use crate::budgeted::{finish, merge_ops, BudgetedSolution, Distributions, SolverConfig};
use crate::error::Result;
use crate::graph::{Mode, PathId, ShiftOperation, TemporalKPathGraph, VertexId};
use crate::par::{self, Score};
use crate::switch::{
    enumerate_spts, svs_suffix_mask, Positions, Switch, SwitchPathTree, SwitchVertexSet,
};

/// Guessed quantities for one non-root path `Q` with parent `P`. Advances are
/// negative, as in the shift amounts they describe.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GuessTuple {
    /// Delay on the edge of `Q` leaving the switch vertex.
    pub delta: i64,
    /// Delay of `P` arriving at the edge entering the switch vertex.
    pub d_out: i64,
    /// Total advance acting on that edge of `P`.
    pub a_out: i64,
    /// Part of `a_out` propagated from later switches off `P`.
    pub a_in: i64,
    /// Advance arriving on `Q`'s outgoing edge from switches off `Q`.
    pub phi_in: i64,
    /// Original label of `Q`'s outgoing edge minus that of `P`'s incoming edge.
    pub ell: i64,
}

impl GuessTuple {
    pub fn alpha(&self) -> i64 {
        self.a_out - self.a_in
    }

    /// Range, sign and non-collision constraints of a single tuple.
    pub fn is_consistent(&self, b: i64) -> bool {
        (0..=b).contains(&self.delta)
            && (0..=b).contains(&self.d_out)
            && (-b..=0).contains(&self.a_out)
            && (-b..=0).contains(&self.a_in)
            && (-b..=0).contains(&self.phi_in)
            && self.alpha() <= 0
            && (self.d_out == 0 || self.a_out == 0)
            && (self.delta == 0 || self.phi_in == 0)
    }

    /// Whether the switch is temporal once the guessed shifts are in place.
    pub fn is_temporal(&self) -> bool {
        self.d_out + self.a_out < self.ell + self.delta + self.phi_in
    }
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    /// Edge of the parent entering the vertex.
    c: usize,
    /// Edge of the child leaving the vertex.
    j: usize,
    ell: i64,
    v: VertexId,
}

struct Ctx<'a> {
    g: &'a TemporalKPathGraph,
    s: VertexId,
    root: PathId,
    source_edge: usize,
    /// `cands[p][q]`: possible switch vertices from `p` to `q`, by parent edge.
    cands: Vec<Vec<Vec<Candidate>>>,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a TemporalKPathGraph, s: VertexId) -> Self {
        let pos = Positions::new(g);
        let k = g.k();
        let cands = (0..k)
            .map(|p| {
                (0..k)
                    .map(|q| {
                        if p == q {
                            return Vec::new();
                        }
                        let (pp, qq) = (g.path(p), g.path(q));
                        (1..pp.vertices().len())
                            .filter_map(|r| {
                                let v = pp.vertices()[r];
                                let j = pos.get(q, v).filter(|&j| j < qq.edge_count())?;
                                Some(Candidate {
                                    c: r - 1,
                                    j,
                                    ell: qq.labels()[j] - pp.labels()[r - 1],
                                    v,
                                })
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let root = g.source_path();
        let source_edge = g.path(root).position(s).unwrap_or(0);
        Ctx {
            g,
            s,
            root,
            source_edge,
            cands,
        }
    }

    fn slack(&self, p: PathId, i: usize, j: usize) -> i64 {
        self.g.path(p).edge_slack(i, j)
    }

    fn label(&self, p: PathId, e: usize) -> i64 {
        self.g.path(p).labels()[e]
    }

    fn score(
        &self,
        switches: Vec<Switch>,
        ops: Vec<ShiftOperation>,
    ) -> (Score, (Vec<ShiftOperation>, SwitchVertexSet)) {
        let svs = SwitchVertexSet::new(switches);
        let reach = svs_suffix_mask(self.g, &svs, self.s)
            .iter()
            .filter(|&&x| x)
            .count();
        let ops = merge_ops(ops);
        (
            Score::new(reach, crate::graph::total_cost(&ops)),
            (ops, svs),
        )
    }
}

fn conclude(
    ctx: &Ctx<'_>,
    best: Option<(usize, Score, (Vec<ShiftOperation>, SwitchVertexSet))>,
) -> Result<BudgetedSolution> {
    let (ops, svs) = match best {
        Some((_, _, found)) => found,
        None => (Vec::new(), SwitchVertexSet::empty()),
    };
    finish(ctx.g, ctx.s, ops, Some(svs))
}

/// Tree members other than the root, ascending.
fn members(t: &SwitchPathTree) -> Vec<PathId> {
    (0..t.k())
        .filter(|&p| p != t.root() && t.contains(p))
        .collect()
}

pub fn solve_fpt_delay(g: &TemporalKPathGraph, s: VertexId, b: u64) -> Result<BudgetedSolution> {
    solve_fpt_delay_with(g, s, b, &SolverConfig::default())
}

pub fn solve_fpt_delay_with(
    g: &TemporalKPathGraph,
    s: VertexId,
    b: u64,
    cfg: &SolverConfig,
) -> Result<BudgetedSolution> {
    let ctx = Ctx::new(g, s);
    let trees: Vec<SwitchPathTree> = enumerate_spts(g.k(), ctx.root, true).collect();
    let items = trees.iter().enumerate().flat_map(|(ti, t)| {
        let m = members(t);
        Distributions::new(m.len(), b).map(move |amounts| {
            let mut delta = vec![0i64; t.k()];
            for (&p, &a) in m.iter().zip(&amounts) {
                delta[p] = a as i64;
            }
            (ti, delta)
        })
    });
    let best = par::best_over(cfg.exec, items, |(ti, delta)| {
        delay_greedy(&ctx, &trees[*ti], delta)
    });
    conclude(&ctx, best)
}

/// Places each tree edge at the earliest vertex of the child path whose
/// switch is temporal after the guessed delays.
fn delay_greedy(
    ctx: &Ctx<'_>,
    t: &SwitchPathTree,
    delta: &[i64],
) -> Option<(Score, (Vec<ShiftOperation>, SwitchVertexSet))> {
    let mut onto = vec![None; t.k()];
    onto[ctx.root] = Some(ctx.source_edge);
    let mut switches = Vec::new();
    let mut ops = Vec::new();
    for p in t.bfs_order() {
        let o = onto[p]?;
        for q in t.children(p) {
            let best = ctx.cands[p][q]
                .iter()
                .filter(|cd| cd.c >= o)
                .filter(|cd| {
                    let arriving = (delta[p] - ctx.slack(p, o, cd.c)).max(0);
                    ctx.label(p, cd.c) + arriving < ctx.label(q, cd.j) + delta[q]
                })
                .min_by_key(|cd| cd.j)?;
            onto[q] = Some(best.j);
            switches.push(Switch::new(best.v, p, q));
            ops.push(ShiftOperation::new(q, best.j, delta[q]));
        }
    }
    Some(ctx.score(switches, ops))
}

pub fn solve_fpt_general(
    g: &TemporalKPathGraph,
    s: VertexId,
    b: u64,
    mode: Mode,
) -> Result<BudgetedSolution> {
    solve_fpt_general_with(g, s, b, mode, &SolverConfig::default())
}

pub fn solve_fpt_general_with(
    g: &TemporalKPathGraph,
    s: VertexId,
    b: u64,
    mode: Mode,
    cfg: &SolverConfig,
) -> Result<BudgetedSolution> {
    let ctx = Ctx::new(g, s);
    let trees: Vec<SwitchPathTree> = enumerate_spts(g.k(), ctx.root, true).collect();
    let items = trees.iter().enumerate().flat_map(move |(ti, t)| {
        let m = members(t);
        let orders = child_orders(t);
        let kinds = usize::from(mode.allows_delay()) + usize::from(mode.allows_advance());
        orders.into_iter().flat_map(move |children| {
            let m = m.clone();
            Distributions::new(m.len() * kinds, b).map(move |amounts| {
                let mut delta = vec![0i64; t.k()];
                let mut alpha = vec![0i64; t.k()];
                let mut it = amounts.iter();
                for &p in &m {
                    if mode.allows_delay() {
                        delta[p] = *it.next().expect("slot") as i64;
                    }
                    if mode.allows_advance() {
                        alpha[p] = *it.next().expect("slot") as i64;
                    }
                }
                (ti, children.clone(), delta, alpha)
            })
        })
    });
    let best = par::best_over(cfg.exec, items, |(ti, children, delta, alpha)| {
        Placement::new(
            &ctx,
            &trees[*ti],
            children.clone(),
            delta.clone(),
            alpha.clone(),
        )
        .run()
    });
    conclude(&ctx, best)
}

/// Every combination of child orders, one permutation per path.
fn child_orders(t: &SwitchPathTree) -> Vec<Vec<Vec<PathId>>> {
    let mut combos: Vec<Vec<Vec<PathId>>> = vec![vec![Vec::new(); t.k()]];
    for p in 0..t.k() {
        let kids = t.children(p);
        let perms = permutations(&kids);
        combos = combos
            .into_iter()
            .flat_map(|c| {
                perms.iter().map(move |perm| {
                    let mut c = c.clone();
                    c[p] = perm.clone();
                    c
                })
            })
            .collect();
    }
    combos
}

fn permutations(items: &[PathId]) -> Vec<Vec<PathId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Propagation guesses for one switch off a parent path, magnitudes only.
#[derive(Clone, Copy, Debug, Default)]
struct ChildGuess {
    d: i64,
    a_in: i64,
    a_out: i64,
    phi: i64,
    ell: i64,
}

/// Depth-first search over the propagation guesses of one
/// (tree, child orders, amounts) choice, placing switches path by path.
struct Placement<'c, 'g> {
    ctx: &'c Ctx<'g>,
    order: Vec<PathId>,
    children: Vec<Vec<PathId>>,
    delta: Vec<i64>,
    alpha: Vec<i64>,
    /// Upper bound on the advance that can come back to a path's onto edge.
    child_alpha: Vec<i64>,
    onto: Vec<Option<usize>>,
    phi: Vec<i64>,
    switch_at: Vec<Option<(Candidate, PathId)>>,
    ceiling: usize,
    best: Option<(Score, (Vec<ShiftOperation>, SwitchVertexSet))>,
}

impl<'c, 'g> Placement<'c, 'g> {
    fn new(
        ctx: &'c Ctx<'g>,
        t: &SwitchPathTree,
        children: Vec<Vec<PathId>>,
        delta: Vec<i64>,
        alpha: Vec<i64>,
    ) -> Self {
        let k = t.k();
        let child_alpha = (0..k)
            .map(|p| children[p].iter().map(|&q| alpha[q]).sum())
            .collect();
        let mut on_tree = vec![false; ctx.g.vertex_count()];
        for p in (0..k).filter(|&p| t.contains(p)) {
            for v in ctx.g.path(p).vertices() {
                on_tree[v.index()] = true;
            }
        }
        on_tree[ctx.s.index()] = true;
        let mut onto = vec![None; k];
        onto[ctx.root] = Some(ctx.source_edge);
        Placement {
            ctx,
            order: t.bfs_order(),
            children,
            delta,
            alpha,
            child_alpha,
            onto,
            phi: vec![0; k],
            switch_at: vec![None; k],
            ceiling: on_tree.iter().filter(|&&x| x).count(),
            best: None,
        }
    }

    fn run(mut self) -> Option<(Score, (Vec<ShiftOperation>, SwitchVertexSet))> {
        self.visit(0);
        self.best
    }

    fn done(&self) -> bool {
        self.best
            .as_ref()
            .is_some_and(|(s, _)| s.reach >= self.ceiling)
    }

    fn visit(&mut self, idx: usize) {
        if self.done() {
            return;
        }
        let Some(&p) = self.order.get(idx) else {
            self.record();
            return;
        };
        let m = self.children[p].len();
        if m == 0 {
            self.visit(idx + 1);
            return;
        }
        let mut guess = vec![ChildGuess::default(); m];
        self.guess_advance(idx, p, m - 1, &mut guess);
    }

    /// Advance chain, right to left: what each switch sends further left.
    fn guess_advance(&mut self, idx: usize, p: PathId, i: usize, guess: &mut [ChildGuess]) {
        let q = self.children[p][i];
        let max_in = if i + 1 == guess.len() {
            0
        } else {
            guess[i + 1].a_out
        };
        for a_in in 0..=max_in {
            guess[i].a_in = a_in;
            guess[i].a_out = self.alpha[q] + a_in;
            if i == 0 {
                self.guess_delay(idx, p, 0, guess);
            } else {
                self.guess_advance(idx, p, i - 1, guess);
            }
            if self.done() {
                return;
            }
        }
    }

    /// Delay chain, left to right: what reaches each switch vertex.
    fn guess_delay(&mut self, idx: usize, p: PathId, i: usize, guess: &mut [ChildGuess]) {
        if i == 0 && p != self.ctx.root && self.phi[p] > guess[0].a_out {
            return;
        }
        let max_d = if i == 0 {
            if p == self.ctx.root {
                0
            } else {
                self.delta[p]
            }
        } else {
            guess[i - 1].d
        };
        for d in 0..=max_d {
            if d > 0 && guess[i].a_out > 0 {
                break;
            }
            guess[i].d = d;
            if i + 1 == guess.len() {
                self.guess_switch(idx, p, 0, guess);
            } else {
                self.guess_delay(idx, p, i + 1, guess);
            }
            if self.done() {
                return;
            }
        }
    }

    /// Advance returning to each child's onto edge, and the label difference.
    fn guess_switch(&mut self, idx: usize, p: PathId, i: usize, guess: &mut [ChildGuess]) {
        if i == guess.len() {
            self.place(idx, p, guess);
            return;
        }
        let q = self.children[p][i];
        let o = self.onto[p].expect("parent placed");
        let max_phi = if self.delta[q] > 0 {
            0
        } else {
            self.child_alpha[q]
        };
        let mut ells: Vec<i64> = self.ctx.cands[p][q]
            .iter()
            .filter(|cd| cd.c >= o)
            .map(|cd| cd.ell)
            .collect();
        ells.sort_unstable();
        ells.dedup();
        for phi in 0..=max_phi {
            guess[i].phi = phi;
            for &ell in &ells {
                let g = &guess[i];
                let tuple = GuessTuple {
                    delta: self.delta[q],
                    d_out: g.d,
                    a_out: -g.a_out,
                    a_in: -g.a_in,
                    phi_in: -phi,
                    ell,
                };
                if !tuple.is_temporal() {
                    continue;
                }
                guess[i].ell = ell;
                self.guess_switch(idx, p, i + 1, guess);
                if self.done() {
                    return;
                }
            }
        }
    }

    /// Places the switches off `p` batch by batch; a batch is a maximal run
    /// of siblings tied to their predecessor by an exact distance.
    fn place(&mut self, idx: usize, p: PathId, guess: &[ChildGuess]) {
        let ctx = self.ctx;
        let kids = self.children[p].clone();
        let m = kids.len();
        let o = self.onto[p].expect("parent placed");
        // distance from the predecessor (the onto edge for the first child)
        let link = |i: usize| -> (bool, i64) {
            if i == 0 {
                let t = self.delta[p] - guess[0].d + guess[0].a_out - self.phi[p];
                (false, if p == ctx.root { i64::MIN } else { t })
            } else {
                let exact = guess[i].d > 0 || guess[i - 1].a_in > 0;
                (
                    exact,
                    (guess[i - 1].d - guess[i].d) + (guess[i].a_out - guess[i - 1].a_in),
                )
            }
        };
        let fits = |i: usize, prev: usize, cd: &Candidate| -> bool {
            if cd.ell != guess[i].ell || cd.c < prev {
                return false;
            }
            let (exact, t) = link(i);
            let s = ctx.slack(p, prev, cd.c);
            if exact {
                s == t
            } else {
                s >= t
            }
        };
        let mut placed: Vec<Candidate> = Vec::with_capacity(m);
        let mut i = 0;
        while i < m {
            let mut end = i + 1;
            while end < m && link(end).0 {
                end += 1;
            }
            let prev = if i == 0 { o } else { placed[i - 1].c };
            let mut batch = None;
            for head in ctx.cands[p][kids[i]].iter().filter(|cd| fits(i, prev, cd)) {
                let mut run = vec![*head];
                for (k, &kid) in kids.iter().enumerate().take(end).skip(i + 1) {
                    let last = run.last().expect("non-empty").c;
                    match ctx.cands[p][kid].iter().find(|cd| fits(k, last, cd)) {
                        Some(cd) => run.push(*cd),
                        None => break,
                    }
                }
                if run.len() == end - i {
                    batch = Some(run);
                    break;
                }
            }
            let Some(run) = batch else { return };
            placed.extend(run);
            i = end;
        }

        let saved: Vec<_> = kids
            .iter()
            .map(|&q| (self.onto[q], self.phi[q], self.switch_at[q]))
            .collect();
        for (k, &q) in kids.iter().enumerate() {
            self.onto[q] = Some(placed[k].j);
            self.phi[q] = guess[k].phi;
            self.switch_at[q] = Some((placed[k], p));
        }
        self.visit(idx + 1);
        for (&q, (o, phi, sw)) in kids.iter().zip(saved) {
            self.onto[q] = o;
            self.phi[q] = phi;
            self.switch_at[q] = sw;
        }
    }

    fn record(&mut self) {
        let mut switches = Vec::new();
        let mut ops = Vec::new();
        for (q, at) in self.switch_at.iter().enumerate() {
            if let Some((cd, p)) = at {
                switches.push(Switch::new(cd.v, *p, q));
                ops.push(ShiftOperation::new(q, cd.j, self.delta[q]));
                ops.push(ShiftOperation::new(*p, cd.c, -self.alpha[q]));
            }
        }
        let found = self.ctx.score(switches, ops);
        if self.best.as_ref().is_none_or(|(s, _)| found.0 > *s) {
            self.best = Some(found);
        }
    }
}
