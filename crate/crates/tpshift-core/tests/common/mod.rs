#![allow(dead_code)]

use std::collections::BTreeSet;

use tpshift_core::instances::gen_random;
use tpshift_core::{PathId, Switch, SwitchVertexSet, TemporalKPathGraph, VertexId};

/// Small seeded instances: k in {2, 3}, at most 10 vertices, lifetime at most 12.
pub fn suite(count: u64) -> Vec<TemporalKPathGraph> {
    (0..count)
        .map(|seed| {
            let k = 2 + (seed % 2) as usize;
            let n = if k == 2 {
                3 + (seed / 2 % 3) as usize
            } else {
                3
            };
            let lifetime = (n as i64 + (seed % 7) as i64).min(12);
            gen_random(k, n, lifetime, 0.7, seed).expect("valid parameters")
        })
        .collect()
}

#[derive(Clone, Copy)]
struct Edge {
    path: PathId,
    idx: usize,
    from: VertexId,
    to: VertexId,
    label: i64,
}

fn edges(g: &TemporalKPathGraph) -> Vec<Edge> {
    let mut out = Vec::new();
    for (p, path) in g.paths().iter().enumerate() {
        for i in 0..path.edge_count() {
            out.push(Edge {
                path: p,
                idx: i,
                from: path.vertices()[i],
                to: path.vertices()[i + 1],
                label: path.labels()[i],
            });
        }
    }
    out
}

/// Which consecutive edge pairs a walk may use.
pub enum Rule<'a> {
    Any,
    /// Each base path is used in at most one contiguous stretch.
    OneSegment,
    /// Path changes only at switches of the set; starts on the source path.
    Respecting(&'a SwitchVertexSet),
}

/// Vertices reachable from `s` by exhaustive search over temporal walks;
/// simple paths only, except under [`Rule::Respecting`].
pub fn brute_reach(g: &TemporalKPathGraph, s: VertexId, rule: Rule<'_>) -> BTreeSet<VertexId> {
    let es = edges(g);
    let mut reached = BTreeSet::from([s]);
    let mut visited = vec![false; g.vertex_count()];
    visited[s.index()] = true;
    let mut used = vec![false; g.k()];
    for e in es.iter().filter(|e| e.from == s) {
        if let Rule::Respecting(_) = rule {
            if e.path != g.source_path() {
                continue;
            }
        }
        walk(&es, *e, &rule, &mut visited, &mut used, &mut reached);
    }
    reached
}

fn walk(
    es: &[Edge],
    e: Edge,
    rule: &Rule<'_>,
    visited: &mut Vec<bool>,
    used: &mut Vec<bool>,
    reached: &mut BTreeSet<VertexId>,
) {
    // respecting walks may revisit a vertex they cannot switch at
    if visited[e.to.index()] && !matches!(rule, Rule::Respecting(_)) {
        return;
    }
    let was_visited = visited[e.to.index()];
    let fresh = !used[e.path];
    used[e.path] = true;
    visited[e.to.index()] = true;
    reached.insert(e.to);
    for n in es.iter().filter(|n| n.from == e.to && n.label > e.label) {
        let ok = match rule {
            Rule::Any => true,
            Rule::OneSegment => n.path == e.path || !used[n.path],
            Rule::Respecting(svs) => {
                (n.path == e.path && n.idx == e.idx + 1)
                    || svs.switches().contains(&Switch::new(e.to, e.path, n.path))
            }
        };
        if ok {
            walk(es, *n, rule, visited, used, reached);
        }
    }
    visited[e.to.index()] = was_visited;
    if fresh {
        used[e.path] = false;
    }
}

/// Every switch-vertex-set, by filtering subsets of all structural triples
/// against the definition.
pub fn naive_svss(g: &TemporalKPathGraph) -> Vec<BTreeSet<Switch>> {
    let root = g.source_path();
    let mut triples = Vec::new();
    for v in 0..g.vertex_count() as u32 {
        let v = VertexId(v);
        for from in 0..g.k() {
            for to in 0..g.k() {
                let (pf, pt) = (g.path(from).position(v), g.path(to).position(v));
                if let (Some(pf), Some(pt)) = (pf, pt) {
                    if from != to && pf >= 1 && pt + 1 < g.path(to).vertices().len() {
                        triples.push(Switch::new(v, from, to));
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    subsets(&triples, 0, g.k() - 1, &mut chosen, &mut |set| {
        if satisfies_definition(g, root, set) {
            out.push(set.iter().copied().collect());
        }
    });
    out
}

fn subsets(
    items: &[Switch],
    start: usize,
    room: usize,
    chosen: &mut Vec<Switch>,
    f: &mut dyn FnMut(&[Switch]),
) {
    f(chosen);
    if room == 0 {
        return;
    }
    for i in start..items.len() {
        chosen.push(items[i]);
        subsets(items, i + 1, room - 1, chosen, f);
        chosen.pop();
    }
}

fn satisfies_definition(g: &TemporalKPathGraph, root: PathId, set: &[Switch]) -> bool {
    // at most one switch onto each path, none onto the root
    for (i, a) in set.iter().enumerate() {
        if a.to == root || set[i + 1..].iter().any(|b| b.to == a.to) {
            return false;
        }
    }
    // onto a path strictly before leaving it
    for off in set {
        let pos = g.path(off.from).position(off.vertex).unwrap();
        let entry = if off.from == root {
            g.path(root).position(g.source()).unwrap()
        } else {
            match set.iter().find(|on| on.to == off.from) {
                Some(on) => g.path(off.from).position(on.vertex).unwrap(),
                None => return false,
            }
        };
        if pos <= entry {
            return false;
        }
    }
    // transitions form a tree rooted at the source path
    set.iter().all(|sw| {
        let mut cur = sw.from;
        for _ in 0..=set.len() {
            if cur == root {
                return true;
            }
            cur = set
                .iter()
                .find(|on| on.to == cur)
                .map(|on| on.from)
                .unwrap_or(cur);
        }
        false
    })
}
