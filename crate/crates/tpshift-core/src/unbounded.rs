//! Path temporalization with unlimited relabeling.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::{Label, TemporalKPathGraph, VertexId};
use crate::par;
use crate::switch::{
    enumerate_spts, svs_suffix_mask, Positions, Switch, SwitchPathTree, SwitchVertexSet,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Temporalization {
    pub labels: Vec<Vec<Label>>,
    pub reached: BTreeSet<VertexId>,
    pub spt: SwitchPathTree,
    pub svs: SwitchVertexSet,
}

/// Greedy SVS for a fixed tree: each tree edge switches at the first vertex of
/// the child path that the parent path reaches. Labels are ignored.
pub fn best_svs_for_spt(
    g: &TemporalKPathGraph,
    s: VertexId,
    spt: &SwitchPathTree,
) -> Option<SwitchVertexSet> {
    let pos = Positions::new(g);
    let mut entry: Vec<Option<usize>> = vec![None; g.k()];
    entry[spt.root()] = Some(pos.get(spt.root(), s)?);
    let mut switches = Vec::new();
    let mut queue = VecDeque::from([spt.root()]);
    while let Some(p) = queue.pop_front() {
        let e = entry[p]?;
        for q in spt.children(p) {
            let to = g.path(q);
            let j = (0..to.edge_count())
                .find(|&j| pos.get(p, to.vertices()[j]).is_some_and(|r| r > e))?;
            entry[q] = Some(j);
            switches.push(Switch::new(to.vertices()[j], p, q));
            queue.push_back(q);
        }
    }
    Some(SwitchVertexSet::new(switches))
}

pub fn solve_mrpt(g: &TemporalKPathGraph, s: VertexId) -> Temporalization {
    solve_mrpt_with(g, s, par::Exec::default())
}

pub fn solve_mrpt_with(g: &TemporalKPathGraph, s: VertexId, exec: par::Exec) -> Temporalization {
    let trees: Vec<SwitchPathTree> = enumerate_spts(g.k(), g.source_path(), true).collect();
    let best = par::best_by(exec, trees.len(), |i| {
        let svs = best_svs_for_spt(g, s, &trees[i])?;
        let size = svs_suffix_mask(g, &svs, s).iter().filter(|&&b| b).count();
        Some((par::Score::new(size, 0), svs))
    });
    // the root-only tree is always feasible
    let (idx, _, svs) = best.expect("some tree admits a switch-vertex-set");
    let spt = trees[idx].clone();
    let m = g.edge_count() as i64 + 1;
    let labels: Vec<Vec<Label>> = (0..g.k())
        .map(|p| {
            let d = spt.depth(p).unwrap_or(0) as i64;
            (0..g.path(p).edge_count() as i64)
                .map(|i| d * m + i)
                .collect()
        })
        .collect();
    let relabeled = g
        .with_labeling(&labels)
        .expect("labeling has the graph's shape");
    let reached = relabeled.reach_set(s).expect("source is a vertex");
    Temporalization {
        labels,
        reached,
        spt,
        svs,
    }
}
