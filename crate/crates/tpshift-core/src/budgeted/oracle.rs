use crate::budgeted::{finish, merge_ops, BudgetedSolution, Distributions, SolverConfig};
use crate::error::{Error, Result};
use crate::graph::{total_cost, Mode, PathId, ShiftOperation, TemporalKPathGraph, VertexId};
use crate::par::{self, Score};

pub const DEFAULT_STATE_LIMIT: u128 = 10_000_000;

fn slots(g: &TemporalKPathGraph, mode: Mode) -> Vec<(PathId, usize, i64)> {
    let mut out = Vec::new();
    for (p, path) in g.paths().iter().enumerate() {
        for e in 0..path.edge_count() {
            if mode.allows_delay() {
                out.push((p, e, 1));
            }
            if mode.allows_advance() {
                out.push((p, e, -1));
            }
        }
    }
    out
}

fn binomial(n: u128, r: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Number of budget distributions the oracle visits.
pub fn oracle_state_count(g: &TemporalKPathGraph, b: u64, mode: Mode) -> u128 {
    let n = slots(g, mode).len() as u128;
    binomial(n + b as u128, (b as u128).min(n + b as u128))
}

/// Every mode-respecting multiset of at most `b` unit shifts, as canonical
/// operation sequences, in enumeration order.
pub fn assignments(
    g: &TemporalKPathGraph,
    b: u64,
    mode: Mode,
) -> impl Iterator<Item = Vec<ShiftOperation>> + Send {
    let slots = slots(g, mode);
    let n = slots.len();
    Distributions::new(n, b).map(move |amounts| to_ops(&slots, &amounts))
}

fn to_ops(slots: &[(PathId, usize, i64)], amounts: &[u64]) -> Vec<ShiftOperation> {
    merge_ops(
        slots
            .iter()
            .zip(amounts)
            .filter(|(_, &a)| a > 0)
            .map(|(&(p, e, sign), &a)| ShiftOperation::new(p, e, sign * a as i64)),
    )
}

pub fn solve_xp_by_b(
    g: &TemporalKPathGraph,
    s: VertexId,
    b: u64,
    mode: Mode,
) -> Result<BudgetedSolution> {
    solve_xp_by_b_with(g, s, b, mode, &SolverConfig::default())
}

pub fn solve_xp_by_b_with(
    g: &TemporalKPathGraph,
    s: VertexId,
    b: u64,
    mode: Mode,
    cfg: &SolverConfig,
) -> Result<BudgetedSolution> {
    let needed = oracle_state_count(g, b, mode);
    if needed > cfg.limit_states {
        return Err(Error::ResourceLimit {
            what: "oracle states",
            needed,
            limit: cfg.limit_states,
        });
    }
    let slots = slots(g, mode);
    let states = Distributions::new(slots.len(), b);
    let best = par::best_over(cfg.exec, states, |amounts| {
        let ops = to_ops(&slots, amounts);
        let (shifted, _) = g.apply_sequence(&ops).ok()?;
        let reach = shifted.reach_count(s).ok()?;
        Some((Score::new(reach, total_cost(&ops)), ops))
    });
    let (_, _, ops) = best.expect("the empty distribution is always evaluated");
    finish(g, s, ops, None)
}
