use std::collections::BTreeMap;

use crate::budgeted::{finish, merge_ops, BudgetedSolution, SolverConfig};
use crate::error::{Error, Result};
use crate::graph::{Mode, PathId, ShiftOperation, TemporalKPathGraph, VertexId};
use crate::ilp::{solve_min, IlpInstance, LinExpr, Relation, VarId};
use crate::par;
use crate::switch::{
    enumerate_svss_limited, is_valid_svs, svs_suffix_mask, tree_reach_mask, SwitchPathTree,
    SwitchVertexSet,
};

/// Decision variables of one path: its delay (at the edge leaving the switch
/// onto it) and its advances (at edges entering switches off it).
struct PathModel {
    delay: Option<(usize, VarId)>,
    advances: Vec<(usize, VarId)>,
    final_label: BTreeMap<usize, LinExpr>,
}

/// Models one delay followed by back-to-front advances on `path`, exactly as
/// they act when applied in canonical order, and returns the final labels of
/// the anchor edges.
fn model_path(
    ilp: &mut IlpInstance,
    g: &TemporalKPathGraph,
    path: PathId,
    onto_edge: Option<usize>,
    off_edges: &[usize],
    mode: Mode,
    b: i64,
) -> PathModel {
    let p = g.path(path);
    let mut anchors: Vec<usize> = off_edges.to_vec();
    anchors.extend(onto_edge);
    anchors.sort_unstable();
    anchors.dedup();

    let delay = match onto_edge {
        Some(o) if mode.allows_delay() => Some((o, ilp.add_var(format!("d{path}"), 0, b))),
        _ => None,
    };
    let delay_at: Vec<LinExpr> = anchors
        .iter()
        .map(|&r| match delay {
            Some((o, d)) => ilp.max0(
                &format!("D{path}.{r}"),
                &LinExpr::var(d).offset(-p.edge_slack(o, r)),
            ),
            None => LinExpr::constant(0),
        })
        .collect();
    let mut advances = Vec::new();
    let alpha: Vec<LinExpr> = anchors
        .iter()
        .map(|&r| {
            if mode.allows_advance() && off_edges.contains(&r) {
                let a = ilp.add_var(format!("a{path}.{r}"), 0, b);
                advances.push((r, a));
                LinExpr::var(a)
            } else {
                LinExpr::constant(0)
            }
        })
        .collect();

    // total advance acting on each anchor, right to left
    let n = anchors.len();
    let mut total: Vec<LinExpr> = vec![LinExpr::default(); n];
    for i in (0..n).rev() {
        let arriving = if i + 1 < n {
            let gap = p.edge_slack(anchors[i], anchors[i + 1]);
            let e = total[i + 1]
                .clone()
                .offset(-gap)
                .minus(&delay_at[i + 1])
                .plus(&delay_at[i]);
            ilp.max0(&format!("A{path}.{}", anchors[i]), &e)
        } else {
            LinExpr::constant(0)
        };
        total[i] = alpha[i].clone().plus(&arriving);
    }
    let final_label = anchors
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            (
                r,
                LinExpr::constant(p.labels()[r])
                    .plus(&delay_at[i])
                    .minus(&total[i]),
            )
        })
        .collect();
    PathModel {
        delay,
        advances,
        final_label,
    }
}

/// Cheapest canonical shift making every switch of `svs` temporal, if one
/// fits in budget `b`.
pub fn min_cost_for_svs(
    g: &TemporalKPathGraph,
    svs: &SwitchVertexSet,
    mode: Mode,
    b: u64,
) -> Result<Option<(u64, Vec<ShiftOperation>)>> {
    if !is_valid_svs(g, svs) {
        return Err(Error::Contract("switch-vertex-set is not valid".into()));
    }
    let bi = i64::try_from(b).map_err(|_| Error::Parameter("budget too large".into()))?;
    let mut ilp = IlpInstance::new();
    let mut models: Vec<Option<PathModel>> = Vec::with_capacity(g.k());
    for path in 0..g.k() {
        let onto = svs
            .onto(path)
            .map(|sw| g.path(path).position(sw.vertex).expect("valid switch"));
        let off: Vec<usize> = svs
            .switches()
            .iter()
            .filter(|sw| sw.from == path)
            .map(|sw| g.path(path).position(sw.vertex).expect("valid switch") - 1)
            .collect();
        models.push(
            (onto.is_some() || !off.is_empty())
                .then(|| model_path(&mut ilp, g, path, onto, &off, mode, bi)),
        );
    }
    for sw in svs.switches() {
        let ein = g.path(sw.from).position(sw.vertex).expect("valid switch") - 1;
        let eout = g.path(sw.to).position(sw.vertex).expect("valid switch");
        let lhs = models[sw.from].as_ref().expect("modelled").final_label[&ein]
            .clone()
            .offset(1);
        let rhs = &models[sw.to].as_ref().expect("modelled").final_label[&eout];
        ilp.relate(&lhs, Relation::Le, rhs);
    }
    let spend: Vec<(VarId, i64)> = models
        .iter()
        .flatten()
        .flat_map(|m| {
            m.delay
                .iter()
                .map(|&(_, v)| v)
                .chain(m.advances.iter().map(|&(_, v)| v))
        })
        .map(|v| (v, 1))
        .collect();
    ilp.add_constraint(spend.clone(), Relation::Le, bi);
    ilp.objective = spend;

    let Some((value, x)) = solve_min(&ilp)? else {
        return Ok(None);
    };
    let mut ops = Vec::new();
    for (path, m) in models.iter().enumerate() {
        let Some(m) = m else { continue };
        if let Some((o, d)) = m.delay {
            ops.push(ShiftOperation::new(path, o, x[d]));
        }
        for &(r, a) in &m.advances {
            ops.push(ShiftOperation::new(path, r, -x[a]));
        }
    }
    Ok(Some((value as u64, merge_ops(ops))))
}

pub fn solve_xp_by_k(
    g: &TemporalKPathGraph,
    s: VertexId,
    b: u64,
    mode: Mode,
) -> Result<BudgetedSolution> {
    solve_xp_by_k_with(g, s, b, mode, &SolverConfig::default())
}

pub fn solve_xp_by_k_with(
    g: &TemporalKPathGraph,
    s: VertexId,
    b: u64,
    mode: Mode,
    cfg: &SolverConfig,
) -> Result<BudgetedSolution> {
    let svss = enumerate_svss_limited(g, cfg.limit_svs)?;
    let (ops, svs) = best_affordable(g, s, b, mode, cfg, svss)?;
    finish(g, s, ops, Some(svs))
}

/// As [`solve_xp_by_k`], restricted to switch-vertex-sets whose switches all
/// follow edges of `spt`; reports the tree-respecting reach.
pub fn solve_fixed_spt(
    g: &TemporalKPathGraph,
    s: VertexId,
    b: u64,
    mode: Mode,
    spt: &SwitchPathTree,
) -> Result<BudgetedSolution> {
    solve_fixed_spt_with(g, s, b, mode, spt, &SolverConfig::default())
}

pub fn solve_fixed_spt_with(
    g: &TemporalKPathGraph,
    s: VertexId,
    b: u64,
    mode: Mode,
    spt: &SwitchPathTree,
    cfg: &SolverConfig,
) -> Result<BudgetedSolution> {
    if spt.k() != g.k() || spt.root() != g.source_path() {
        return Err(Error::Parameter(
            "tree must span the graph's paths and be rooted at the source path".into(),
        ));
    }
    let svss: Vec<SwitchVertexSet> = enumerate_svss_limited(g, cfg.limit_svs)?
        .into_iter()
        .filter(|v| {
            v.switches()
                .iter()
                .all(|sw| spt.parent(sw.to) == Some(sw.from))
        })
        .collect();
    let (ops, svs) = best_affordable(g, s, b, mode, cfg, svss)?;
    let (shifted, cost) = g.apply_sequence(&ops)?;
    let reached = crate::graph::mask_to_set(&tree_reach_mask(&shifted, spt));
    Ok(BudgetedSolution {
        ops,
        cost,
        reached,
        witness_svs: Some(svs),
    })
}

/// Largest suffix union among the candidates affordable within `b`; ties to
/// lower cost, then to the earlier candidate.
fn best_affordable(
    g: &TemporalKPathGraph,
    s: VertexId,
    b: u64,
    mode: Mode,
    cfg: &SolverConfig,
    svss: Vec<SwitchVertexSet>,
) -> Result<(Vec<ShiftOperation>, SwitchVertexSet)> {
    let sizes: Vec<usize> = svss
        .iter()
        .map(|v| svs_suffix_mask(g, v, s).iter().filter(|&&x| x).count())
        .collect();
    let mut levels: Vec<usize> = sizes.clone();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();
    for level in levels {
        let group: Vec<usize> = (0..svss.len()).filter(|&i| sizes[i] == level).collect();
        let costs = par::map_indexed(cfg.exec, group.len(), |j| {
            min_cost_for_svs(g, &svss[group[j]], mode, b)
        });
        let mut best: Option<(usize, u64, Vec<ShiftOperation>)> = None;
        for (j, c) in costs.into_iter().enumerate() {
            if let Some((cost, ops)) = c? {
                if best.as_ref().is_none_or(|(_, bc, _)| cost < *bc) {
                    best = Some((group[j], cost, ops));
                }
            }
        }
        if let Some((i, _, ops)) = best {
            return Ok((ops, svss[i].clone()));
        }
    }
    Err(Error::Contract(
        "the empty switch-vertex-set is always affordable".into(),
    ))
}
