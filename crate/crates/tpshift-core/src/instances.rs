//! Instance generators: seeded random k-path graphs, small fixtures, and the
//! multicolored independent set gadget for delay-only reachability.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{BasePath, Label, PathId, ShiftOperation, TemporalKPathGraph, VertexId};

/// Node-colored graph for the multicolored independent set problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McisInstance {
    pub colors: Vec<(String, Vec<String>)>,
    pub edges: BTreeSet<(String, String)>,
}

impl McisInstance {
    /// Validates and normalizes; edge endpoints are stored in sorted order.
    pub fn new(
        colors: Vec<(String, Vec<String>)>,
        edges: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self> {
        let mut color_of: BTreeMap<&str, usize> = BTreeMap::new();
        for (c, (name, nodes)) in colors.iter().enumerate() {
            if nodes.is_empty() {
                return Err(Error::Parameter(format!("color {name} has no nodes")));
            }
            for n in nodes {
                if color_of.insert(n, c).is_some() {
                    return Err(Error::Parameter(format!("node {n} appears twice")));
                }
            }
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let (ca, cb) = match (color_of.get(a.as_str()), color_of.get(b.as_str())) {
                (Some(&x), Some(&y)) => (x, y),
                _ => {
                    return Err(Error::Parameter(format!(
                        "edge {a} {b} uses an unknown node"
                    )))
                }
            };
            if ca == cb {
                return Err(Error::Parameter(format!(
                    "edge {a} {b} joins nodes of one color"
                )));
            }
            set.insert(if a <= b { (a, b) } else { (b, a) });
        }
        Ok(McisInstance { colors, edges: set })
    }

    pub fn node_count(&self) -> usize {
        self.colors.iter().map(|(_, n)| n.len()).sum()
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        let key = if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        self.edges.contains(&key)
    }

    /// Whether picking `choice[c]` (an index into color `c`) gives an
    /// independent set.
    pub fn is_independent(&self, choice: &[usize]) -> bool {
        let picked: Vec<&str> = self
            .colors
            .iter()
            .zip(choice)
            .map(|((_, n), &i)| n[i].as_str())
            .collect();
        picked
            .iter()
            .enumerate()
            .all(|(i, a)| picked[i + 1..].iter().all(|b| !self.has_edge(a, b)))
    }
}

/// Parses `color <name>: n1 n2 ...` and `edge n1 n2` lines.
pub fn parse_mcis(text: &str) -> Result<McisInstance> {
    let mut colors = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        if let Some(rest) = line.strip_prefix("color ") {
            let (name, nodes) = rest
                .split_once(':')
                .ok_or_else(|| err("expected ':' after color name"))?;
            let name = name.trim();
            if name.is_empty() {
                return Err(err("empty color name"));
            }
            colors.push((
                name.to_string(),
                nodes.split_whitespace().map(str::to_string).collect(),
            ));
        } else if let Some(rest) = line.strip_prefix("edge ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let [a, b] = parts[..] else {
                return Err(err("edge needs two nodes"));
            };
            edges.push((a.to_string(), b.to_string()));
        } else {
            return Err(err("expected 'color' or 'edge'"));
        }
    }
    McisInstance::new(colors, edges)
}

/// Random k-path graph. Path 0 starts at the source `s`, which appears
/// nowhere else; other positions reuse a vertex of another path with
/// probability `share_prob`.
pub fn gen_random(
    k: usize,
    n_per_path: usize,
    lifetime: i64,
    share_prob: f64,
    seed: u64,
) -> Result<TemporalKPathGraph> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if n_per_path < 2 {
        return Err(Error::Parameter("paths need at least 2 vertices".into()));
    }
    if lifetime < n_per_path as i64 {
        return Err(Error::Parameter(format!(
            "lifetime {lifetime} too small for {n_per_path} vertices"
        )));
    }
    if !(0.0..=1.0).contains(&share_prob) {
        return Err(Error::Parameter(
            "share probability must lie in [0, 1]".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names = vec!["s".to_string()];
    let mut owners: Vec<Vec<PathId>> = vec![vec![0]];
    let mut paths = Vec::with_capacity(k);
    for p in 0..k {
        let mut vs: Vec<VertexId> = Vec::with_capacity(n_per_path);
        let mut used: HashSet<VertexId> = HashSet::new();
        for i in 0..n_per_path {
            if p == 0 && i == 0 {
                vs.push(VertexId(0));
                used.insert(VertexId(0));
                continue;
            }
            let shareable: Vec<VertexId> = (1..names.len() as u32)
                .map(VertexId)
                .filter(|v| !used.contains(v) && !owners[v.index()].contains(&p))
                .collect();
            let v = match shareable.choose(&mut rng) {
                Some(&v) if rng.gen_bool(share_prob) => v,
                _ => {
                    names.push(format!("v{}", names.len() - 1));
                    owners.push(Vec::new());
                    VertexId(names.len() as u32 - 1)
                }
            };
            owners[v.index()].push(p);
            used.insert(v);
            vs.push(v);
        }
        let mut labels: Vec<Label> = index::sample(&mut rng, lifetime as usize, n_per_path - 1)
            .into_iter()
            .map(|x| x as Label)
            .collect();
        labels.sort_unstable();
        paths.push(BasePath::new(vs, labels));
    }
    TemporalKPathGraph::new(names, paths, VertexId(0), 0)
}

/// The two-path fixture: `s -1-> a -2-> b` and `x -0-> a -1-> y`.
pub fn i1() -> TemporalKPathGraph {
    TemporalKPathGraph::from_named(
        &[(&["s", "a", "b"], &[1, 2]), (&["x", "a", "y"], &[0, 1])],
        "s",
    )
    .expect("fixture is well formed")
}

/// Paths belonging to one color of the gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorPaths {
    pub forward: PathId,
    pub backward: PathId,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct McisGadget {
    pub graph: TemporalKPathGraph,
    pub budget: u64,
    pub source: VertexId,
    pub omega: i64,
    pub colors: Vec<ColorPaths>,
}

fn top(c: &str, i: usize) -> String {
    format!("{c}.top{i}")
}

fn bot(c: &str, i: usize) -> String {
    format!("{c}.bot{i}")
}

/// Delay-hardness gadget. Color `A = {a_1..a_n}` gets vertex pairs
/// `top_i, bot_i` for `0 <= i <= n`; a forward path over pairs `1..n` and a
/// backward path over pairs `n-1..0`. Each edge vertex sits in the gap of
/// both its endpoints on both paths of their colors.
pub fn gen_mcis_delay_gadget(mcis: &McisInstance, omega: Option<i64>) -> Result<McisGadget> {
    let mcis = McisInstance::new(mcis.colors.clone(), mcis.edges.iter().cloned())?;
    let v = mcis.node_count() as i64;
    let omega = match omega {
        Some(w) if w < 1 => return Err(Error::Parameter("omega must be positive".into())),
        Some(w) => w,
        None => v
            .checked_pow(4)
            .ok_or_else(|| Error::Parameter("omega overflows".into()))?,
    };
    let mut position: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (c, (_, nodes)) in mcis.colors.iter().enumerate() {
        for (i, n) in nodes.iter().enumerate() {
            position.insert(n, (c, i + 1));
        }
    }
    // edge vertices in the gap of (color, node index)
    let mut gap: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (a, b) in &mcis.edges {
        let name = format!("e.{a}.{b}");
        gap.entry(position[a.as_str()])
            .or_default()
            .push(name.clone());
        gap.entry(position[b.as_str()]).or_default().push(name);
    }
    let in_gap = |c: usize, i: usize| gap.get(&(c, i)).cloned().unwrap_or_default();

    let mut paths: Vec<(Vec<String>, Vec<Label>)> = Vec::new();
    let mut ps = vec!["s".to_string()];
    for (name, nodes) in &mcis.colors {
        ps.extend((0..=nodes.len()).map(|i| top(name, i)));
    }
    let ps_labels = (0..ps.len() as i64 - 1).collect();
    paths.push((ps, ps_labels));

    let mut colors = Vec::new();
    for (c, (name, nodes)) in mcis.colors.iter().enumerate() {
        let n = nodes.len();
        // (vertices, absolute label of each pair edge by its start index)
        let mut fwd: Vec<String> = Vec::new();
        let mut fwd_pairs: BTreeMap<usize, Label> = BTreeMap::new();
        for i in 1..=n {
            if i > 1 {
                fwd.extend(in_gap(c, i));
            }
            fwd_pairs.insert(fwd.len(), -((n - i) as i64) * omega);
            fwd.push(top(name, i));
            fwd.push(bot(name, i));
        }
        let mut bwd: Vec<String> = Vec::new();
        let mut bwd_pairs: BTreeMap<usize, Label> = BTreeMap::new();
        for i in (0..n).rev() {
            if i + 1 < n {
                bwd.extend(in_gap(c, i + 1));
            }
            bwd_pairs.insert(bwd.len(), -(i as i64) * omega);
            bwd.push(top(name, i));
            bwd.push(bot(name, i));
        }
        for (vs, pairs) in [(fwd, fwd_pairs), (bwd, bwd_pairs)] {
            let mut labels: Vec<Label> = Vec::with_capacity(vs.len() - 1);
            for e in 0..vs.len() - 1 {
                let l = pairs
                    .get(&e)
                    .copied()
                    .unwrap_or_else(|| labels.last().map_or(0, |&x| x + 1));
                labels.push(l);
            }
            paths.push((vs, labels));
        }
        colors.push(ColorPaths {
            forward: 1 + 2 * c,
            backward: 2 + 2 * c,
            size: n,
        });
    }

    let owned: Vec<(Vec<&str>, &[Label])> = paths
        .iter()
        .map(|(vs, ls)| (vs.iter().map(String::as_str).collect(), ls.as_slice()))
        .collect();
    let named: Vec<(&[&str], &[Label])> =
        owned.iter().map(|(vs, ls)| (vs.as_slice(), *ls)).collect();
    let graph = TemporalKPathGraph::from_named(&named, "s")?;
    if let Some(bad) = graph.validate().first() {
        return Err(Error::Parameter(format!("omega {omega} too small: {bad}")));
    }
    let sizes: i64 = mcis.colors.iter().map(|(_, n)| n.len() as i64 - 1).sum();
    let budget = sizes
        .checked_mul(omega)
        .and_then(|x| x.checked_add(omega - 1))
        .ok_or_else(|| Error::Parameter("budget overflows".into()))?;
    let source = graph.source();
    Ok(McisGadget {
        graph,
        budget: budget as u64,
        source,
        omega,
        colors,
    })
}

/// Delays that realize a choice of one node per color (`choice[c]` is the
/// node index within color `c`, from 0): each forward path is delayed at the
/// chosen pair and each backward path at the pair before it, just enough to
/// switch there from the source path.
pub fn ops_from_mcis_witness(
    gadget: &McisGadget,
    mcis: &McisInstance,
    choice: &[usize],
) -> Result<Vec<ShiftOperation>> {
    if choice.len() != mcis.colors.len() || gadget.colors.len() != mcis.colors.len() {
        return Err(Error::Parameter("choose exactly one node per color".into()));
    }
    let g = &gadget.graph;
    let vertex = |n: String| g.vertex_by_name(&n).ok_or(Error::UnknownVertex(n));
    let mut ops = Vec::new();
    for (c, ((name, nodes), &pick)) in mcis.colors.iter().zip(choice).enumerate() {
        if pick >= nodes.len() {
            return Err(Error::Parameter(format!(
                "color {name} has no node with index {pick}"
            )));
        }
        let i = pick + 1;
        let paths = &gadget.colors[c];
        for (path, pair) in [(paths.forward, i), (paths.backward, i - 1)] {
            let v = vertex(top(name, pair))?;
            let at_source = g.path(0).position(v).expect("tops lie on the source path");
            let arrival = g.path(0).labels()[at_source - 1];
            let e = g.path(path).position(v).expect("pair lies on its path");
            let need = arrival + 1 - g.path(path).labels()[e];
            if need > 0 {
                ops.push(ShiftOperation::new(path, e, need));
            }
        }
    }
    Ok(ops)
}
