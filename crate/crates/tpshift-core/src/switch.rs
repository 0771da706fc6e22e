//! Switches, switch-vertex-sets (SVS) and switch-path-trees (SPT).

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{mask_to_set, PathId, TemporalKPathGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Switch {
    pub vertex: VertexId,
    pub from: PathId,
    pub to: PathId,
}

impl Switch {
    pub fn new(vertex: VertexId, from: PathId, to: PathId) -> Self {
        Switch { vertex, from, to }
    }
}

/// Vertex positions on every path, for constant-time lookups.
#[derive(Clone, Debug)]
pub struct Positions {
    table: Vec<Vec<Option<u32>>>,
}

impl Positions {
    pub fn new(g: &TemporalKPathGraph) -> Self {
        let table = g
            .paths()
            .iter()
            .map(|p| {
                let mut row = vec![None; g.vertex_count()];
                for (i, v) in p.vertices().iter().enumerate() {
                    row[v.index()] = Some(i as u32);
                }
                row
            })
            .collect();
        Positions { table }
    }

    pub fn get(&self, path: PathId, v: VertexId) -> Option<usize> {
        self.table[path][v.index()].map(|x| x as usize)
    }
}

fn structural(g: &TemporalKPathGraph, sw: &Switch) -> Option<(usize, usize)> {
    if sw.from == sw.to || sw.from >= g.k() || sw.to >= g.k() {
        return None;
    }
    let pf = g.path(sw.from).position(sw.vertex)?;
    let to = g.path(sw.to);
    let pt = to.position(sw.vertex)?;
    (pf >= 1 && pt + 1 < to.vertices().len()).then_some((pf - 1, pt))
}

/// Edge of `from` entering the switch vertex and edge of `to` leaving it.
pub fn switch_edges(g: &TemporalKPathGraph, sw: &Switch) -> Result<(usize, usize)> {
    structural(g, sw).ok_or_else(|| Error::InvalidSwitch {
        vertex: g.name(sw.vertex).to_string(),
        from: sw.from,
        to: sw.to,
    })
}

pub fn is_temporal_switch(g: &TemporalKPathGraph, sw: &Switch) -> Result<bool> {
    let (ein, eout) = switch_edges(g, sw)?;
    Ok(g.path(sw.from).labels()[ein] < g.path(sw.to).labels()[eout])
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SwitchVertexSet {
    switches: Vec<Switch>,
}

impl SwitchVertexSet {
    pub fn new(mut switches: Vec<Switch>) -> Self {
        switches.sort_by_key(|s| (s.to, s.from, s.vertex));
        SwitchVertexSet { switches }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn switches(&self) -> &[Switch] {
        &self.switches
    }

    pub fn len(&self) -> usize {
        self.switches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.switches.is_empty()
    }

    pub fn onto(&self, path: PathId) -> Option<&Switch> {
        self.switches.iter().find(|s| s.to == path)
    }

    pub fn is_temporal(&self, g: &TemporalKPathGraph) -> Result<bool> {
        for sw in &self.switches {
            if !is_temporal_switch(g, sw)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn is_valid_svs(g: &TemporalKPathGraph, svs: &SwitchVertexSet) -> bool {
    let root = g.source_path();
    let k = g.k();
    let mut onto: Vec<Option<&Switch>> = vec![None; k];
    for sw in svs.switches() {
        if structural(g, sw).is_none() || sw.to == root {
            return false;
        }
        if onto[sw.to].replace(sw).is_some() {
            return false;
        }
    }
    let entry = |p: PathId| -> Option<usize> {
        if p == root {
            g.path(root).position(g.source())
        } else {
            onto[p].and_then(|sw| g.path(p).position(sw.vertex))
        }
    };
    for sw in svs.switches() {
        // the path we leave must itself be entered, and strictly earlier
        let Some(e) = entry(sw.from) else {
            return false;
        };
        match g.path(sw.from).position(sw.vertex) {
            Some(pos) if pos > e => {}
            _ => return false,
        }
        let mut cur = sw.to;
        let mut steps = 0;
        while cur != root {
            match onto[cur] {
                Some(s) => cur = s.from,
                None => return false,
            }
            steps += 1;
            if steps > k {
                return false;
            }
        }
    }
    true
}

/// Union of the path suffixes opened by the switches, plus the suffix of the
/// source path from `s`. Structural: labels are not consulted.
pub fn svs_suffix_mask(g: &TemporalKPathGraph, svs: &SwitchVertexSet, s: VertexId) -> Vec<bool> {
    let mut mask = vec![false; g.vertex_count()];
    let mut mark = |p: PathId, v: VertexId| {
        if let Some(i) = g.path(p).position(v) {
            for w in &g.path(p).vertices()[i..] {
                mask[w.index()] = true;
            }
        }
    };
    mark(g.source_path(), s);
    for sw in svs.switches() {
        mark(sw.to, sw.vertex);
    }
    mask[s.index()] = true;
    mask
}

pub fn svs_suffix_union(
    g: &TemporalKPathGraph,
    svs: &SwitchVertexSet,
    s: VertexId,
) -> BTreeSet<VertexId> {
    mask_to_set(&svs_suffix_mask(g, svs, s))
}

pub fn svs_reachability(
    g: &TemporalKPathGraph,
    svs: &SwitchVertexSet,
    s: VertexId,
) -> Result<BTreeSet<VertexId>> {
    if !svs.is_temporal(g)? {
        return Err(Error::Contract("switch-vertex-set is not temporal".into()));
    }
    Ok(svs_suffix_union(g, svs, s))
}

/// Directed tree on path ids rooted at the source path. Paths without a
/// parent (other than the root) are not part of the tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SwitchPathTree {
    root: PathId,
    parent: Vec<Option<PathId>>,
}

impl SwitchPathTree {
    pub fn root_only(k: usize, root: PathId) -> Self {
        SwitchPathTree {
            root,
            parent: vec![None; k],
        }
    }

    pub fn from_parents(root: PathId, parent: Vec<Option<PathId>>) -> Result<Self> {
        let k = parent.len();
        if root >= k || parent[root].is_some() {
            return Err(Error::Parameter("root must be a parentless path".into()));
        }
        for p in 0..k {
            let mut cur = p;
            let mut steps = 0;
            while let Some(q) = parent[cur] {
                if q >= k || q == cur {
                    return Err(Error::Parameter(format!("bad parent for path {cur}")));
                }
                cur = q;
                steps += 1;
                if steps > k {
                    return Err(Error::Parameter("parent relation has a cycle".into()));
                }
            }
            if cur != root && cur != p {
                return Err(Error::Parameter(format!(
                    "path {p} does not chain to the root"
                )));
            }
        }
        Ok(SwitchPathTree { root, parent })
    }

    pub fn k(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> PathId {
        self.root
    }

    pub fn parent(&self, p: PathId) -> Option<PathId> {
        self.parent[p]
    }

    pub fn parents(&self) -> &[Option<PathId>] {
        &self.parent
    }

    pub fn contains(&self, p: PathId) -> bool {
        p == self.root || self.parent[p].is_some()
    }

    pub fn is_spanning(&self) -> bool {
        (0..self.k()).all(|p| self.contains(p))
    }

    pub fn children(&self, p: PathId) -> Vec<PathId> {
        (0..self.k())
            .filter(|&q| self.parent[q] == Some(p))
            .collect()
    }

    /// Tree members in breadth-first order, children by ascending id.
    pub fn bfs_order(&self) -> Vec<PathId> {
        let mut order = vec![self.root];
        let mut queue = VecDeque::from([self.root]);
        while let Some(p) = queue.pop_front() {
            for c in self.children(p) {
                order.push(c);
                queue.push_back(c);
            }
        }
        order
    }

    pub fn depth(&self, p: PathId) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let mut d = 0;
        let mut cur = p;
        while let Some(q) = self.parent[cur] {
            cur = q;
            d += 1;
        }
        Some(d)
    }

    /// Every edge of `self` is an edge of `other`.
    pub fn is_subtree_of(&self, other: &SwitchPathTree) -> bool {
        self.root == other.root
            && self.k() == other.k()
            && (0..self.k()).all(|p| self.parent[p].is_none() || self.parent[p] == other.parent[p])
    }
}

pub fn implied_spt(svs: &SwitchVertexSet, k: usize, root: PathId) -> SwitchPathTree {
    let mut t = SwitchPathTree::root_only(k, root);
    for sw in svs.switches() {
        t.parent[sw.to] = Some(sw.from);
    }
    t
}

/// Rooted trees on path ids, in lexicographic parent-vector order. Spanning
/// trees come first; with `include_partial` the trees on proper subsets
/// containing the root follow.
pub fn enumerate_spts(
    k: usize,
    root: PathId,
    include_partial: bool,
) -> impl Iterator<Item = SwitchPathTree> {
    assert!(root < k, "root out of range");
    let spanning = parent_vectors(k, root, false);
    let partial = include_partial
        .then(|| parent_vectors(k, root, true))
        .into_iter()
        .flatten();
    spanning.chain(partial.filter(|t| !t.is_spanning()))
}

fn parent_vectors(
    k: usize,
    root: PathId,
    allow_absent: bool,
) -> impl Iterator<Item = SwitchPathTree> {
    // digit 0 means absent when allowed; otherwise digit - offset is the parent
    let offset = usize::from(allow_absent);
    let radix = k + offset;
    let others: Vec<PathId> = (0..k).filter(|&p| p != root).collect();
    let mut digits = vec![0usize; others.len()];
    let mut done = false;
    std::iter::from_fn(move || {
        while !done {
            let mut parent = vec![None; k];
            let mut ok = true;
            for (&p, &d) in others.iter().zip(&digits) {
                if d >= offset {
                    ok &= d - offset != p;
                    parent[p] = Some(d - offset);
                }
            }
            done = !odometer_step(&mut digits, radix);
            if ok {
                if let Ok(t) = SwitchPathTree::from_parents(root, parent) {
                    return Some(t);
                }
            }
        }
        None
    })
}

/// Advances a fixed-radix counter, last digit fastest; false on wrap-around.
fn odometer_step(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

pub const DEFAULT_SVS_LIMIT: usize = 1_000_000;

/// Every valid SVS, empty set first, ordered by the choices (none, or
/// vertex position then source path) made for each target path in id order.
pub fn enumerate_svss(g: &TemporalKPathGraph) -> Vec<SwitchVertexSet> {
    enumerate_svss_limited(g, usize::MAX).expect("unlimited enumeration")
}

pub fn enumerate_svss_limited(
    g: &TemporalKPathGraph,
    limit: usize,
) -> Result<Vec<SwitchVertexSet>> {
    let root = g.source_path();
    let pos = Positions::new(g);
    let targets: Vec<PathId> = (0..g.k()).filter(|&p| p != root).collect();
    let options: Vec<Vec<Switch>> = targets
        .iter()
        .map(|&t| {
            let path = g.path(t);
            let mut opts = Vec::new();
            for &v in &path.vertices()[..path.vertices().len() - 1] {
                for f in 0..g.k() {
                    if f != t && pos.get(f, v).is_some_and(|i| i >= 1) {
                        opts.push(Switch::new(v, f, t));
                    }
                }
            }
            opts
        })
        .collect();

    let mut out = Vec::new();
    let mut chosen: Vec<Switch> = Vec::new();
    fn rec(
        g: &TemporalKPathGraph,
        options: &[Vec<Switch>],
        i: usize,
        chosen: &mut Vec<Switch>,
        out: &mut Vec<SwitchVertexSet>,
        limit: usize,
    ) -> Result<()> {
        if i == options.len() {
            let svs = SwitchVertexSet::new(chosen.clone());
            if is_valid_svs(g, &svs) {
                if out.len() >= limit {
                    return Err(Error::ResourceLimit {
                        what: "switch-vertex-set count",
                        needed: limit as u128 + 1,
                        limit: limit as u128,
                    });
                }
                out.push(svs);
            }
            return Ok(());
        }
        rec(g, options, i + 1, chosen, out, limit)?;
        for sw in &options[i] {
            chosen.push(*sw);
            rec(g, options, i + 1, chosen, out, limit)?;
            chosen.pop();
        }
        Ok(())
    }
    rec(g, &options, 0, &mut chosen, &mut out, limit)?;
    Ok(out)
}

/// Vertices reachable by temporal paths that only switch along edges of `spt`.
pub fn tree_reach_mask(g: &TemporalKPathGraph, spt: &SwitchPathTree) -> Vec<bool> {
    let pos = Positions::new(g);
    let mut entry: Vec<Option<usize>> = vec![None; g.k()];
    entry[spt.root()] = g.path(spt.root()).position(g.source());
    for p in spt.bfs_order() {
        let Some(e) = entry[p] else { continue };
        let from = g.path(p);
        for q in spt.children(p) {
            let to = g.path(q);
            entry[q] = (0..to.edge_count()).find(|&j| {
                pos.get(p, to.vertices()[j])
                    .is_some_and(|r| r > e && from.labels()[r - 1] < to.labels()[j])
            });
        }
    }
    let mut mask = vec![false; g.vertex_count()];
    mask[g.source().index()] = true;
    for (p, e) in entry.iter().enumerate() {
        if let Some(e) = e {
            for v in &g.path(p).vertices()[*e..] {
                mask[v.index()] = true;
            }
        }
    }
    mask
}
