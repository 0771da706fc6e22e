//! Budgeted reachability maximization: brute-force oracle, SVS enumeration
//! with integer programming, and the greedy guess-based algorithms.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::{total_cost, Mode, ShiftOperation, TemporalKPathGraph, VertexId};
use crate::par::Exec;
use crate::switch::{SwitchVertexSet, DEFAULT_SVS_LIMIT};

mod fpt;
mod oracle;
mod xpk;

pub use fpt::{
    solve_fpt_delay, solve_fpt_delay_with, solve_fpt_general, solve_fpt_general_with, GuessTuple,
};
pub use oracle::{
    assignments, oracle_state_count, solve_xp_by_b, solve_xp_by_b_with, DEFAULT_STATE_LIMIT,
};
pub use xpk::{
    min_cost_for_svs, solve_fixed_spt, solve_fixed_spt_with, solve_xp_by_k, solve_xp_by_k_with,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetedSolution {
    pub ops: Vec<ShiftOperation>,
    pub cost: u64,
    pub reached: BTreeSet<VertexId>,
    pub witness_svs: Option<SwitchVertexSet>,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub exec: Exec,
    pub limit_states: u128,
    pub limit_svs: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            exec: Exec::default(),
            limit_states: DEFAULT_STATE_LIMIT,
            limit_svs: DEFAULT_SVS_LIMIT,
        }
    }
}

impl SolverConfig {
    pub fn sequential() -> Self {
        SolverConfig {
            exec: Exec::Sequential,
            ..Self::default()
        }
    }
}

/// Sorts operations into the order used everywhere: per path, delays by
/// increasing edge index, then advances by decreasing edge index.
pub fn canonical_order(ops: &mut [ShiftOperation]) {
    ops.sort_by_key(|op| {
        let phase = usize::from(op.delta < 0);
        let edge = if op.delta < 0 {
            usize::MAX - op.edge_index
        } else {
            op.edge_index
        };
        (op.path, phase, edge)
    });
}

/// Merges operations with the same edge and sign, drops no-ops, and orders
/// the result canonically.
pub fn merge_ops(ops: impl IntoIterator<Item = ShiftOperation>) -> Vec<ShiftOperation> {
    let mut merged: Vec<ShiftOperation> = Vec::new();
    for op in ops.into_iter().filter(|op| op.delta != 0) {
        match merged.iter_mut().find(|m| {
            m.path == op.path && m.edge_index == op.edge_index && (m.delta > 0) == (op.delta > 0)
        }) {
            Some(m) => m.delta += op.delta,
            None => merged.push(op),
        }
    }
    canonical_order(&mut merged);
    merged
}

fn finish(
    g: &TemporalKPathGraph,
    s: VertexId,
    ops: Vec<ShiftOperation>,
    witness_svs: Option<SwitchVertexSet>,
) -> Result<BudgetedSolution> {
    let (shifted, _) = g.apply_sequence(&ops)?;
    let reached = shifted.reach_set(s)?;
    Ok(BudgetedSolution {
        cost: total_cost(&ops),
        ops,
        reached,
        witness_svs,
    })
}

/// Amount vectors with sum at most `b`, lexicographic with the first slot most
/// significant.
pub(crate) struct Distributions {
    amounts: Vec<u64>,
    b: u64,
    started: bool,
    done: bool,
}

impl Distributions {
    pub(crate) fn new(n: usize, b: u64) -> Self {
        Distributions {
            amounts: vec![0; n],
            b,
            started: false,
            done: false,
        }
    }
}

impl Iterator for Distributions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.amounts.clone());
        }
        let mut prefix = 0;
        let mut last_open = None;
        for (i, &a) in self.amounts.iter().enumerate() {
            prefix += a;
            if prefix < self.b {
                last_open = Some(i);
            }
        }
        match last_open {
            None => {
                self.done = true;
                None
            }
            Some(i) => {
                self.amounts[i] += 1;
                self.amounts[i + 1..].iter_mut().for_each(|a| *a = 0);
                Some(self.amounts.clone())
            }
        }
    }
}

pub fn mode_respected(ops: &[ShiftOperation], mode: Mode) -> bool {
    ops.iter().all(|op| mode.allows(op.delta))
}
