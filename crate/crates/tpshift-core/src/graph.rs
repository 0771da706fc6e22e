//! Temporal k-path graphs: base-paths, shifting with propagation, slack and
//! temporal reachability.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index into the vertex name table of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type PathId = usize;
pub type Label = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Delay,
    Advance,
    Shift,
}

impl Mode {
    pub fn allows(self, delta: i64) -> bool {
        match self {
            Mode::Delay => delta >= 0,
            Mode::Advance => delta <= 0,
            Mode::Shift => true,
        }
    }

    pub fn allows_delay(self) -> bool {
        self != Mode::Advance
    }

    pub fn allows_advance(self) -> bool {
        self != Mode::Delay
    }

    pub const ALL: [Mode; 3] = [Mode::Delay, Mode::Advance, Mode::Shift];
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Delay => "delay",
            Mode::Advance => "advance",
            Mode::Shift => "shift",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delay" => Ok(Mode::Delay),
            "advance" => Ok(Mode::Advance),
            "shift" => Ok(Mode::Shift),
            other => Err(Error::Parameter(format!("unknown mode {other}"))),
        }
    }
}

/// Change of one edge label by `delta`; positive delays, negative advances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftOperation {
    pub path: PathId,
    pub edge_index: usize,
    pub delta: i64,
}

impl ShiftOperation {
    pub fn new(path: PathId, edge_index: usize, delta: i64) -> Self {
        ShiftOperation {
            path,
            edge_index,
            delta,
        }
    }

    pub fn cost(&self) -> u64 {
        self.delta.unsigned_abs()
    }
}

pub fn total_cost(ops: &[ShiftOperation]) -> u64 {
    ops.iter().map(ShiftOperation::cost).sum()
}

/// A simple path with one strictly increasing label per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePath {
    vertices: Arc<[VertexId]>,
    labels: Vec<Label>,
}

impl BasePath {
    pub fn new(vertices: Vec<VertexId>, labels: Vec<Label>) -> Self {
        BasePath {
            vertices: vertices.into(),
            labels,
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// Cumulative slack between edge `i` and edge `j` (`i <= j`).
    pub fn edge_slack(&self, i: usize, j: usize) -> i64 {
        debug_assert!(i <= j);
        self.labels[j] - self.labels[i] - (j - i) as i64
    }

    pub(crate) fn with_labels(&self, labels: Vec<Label>) -> Self {
        BasePath {
            vertices: Arc::clone(&self.vertices),
            labels,
        }
    }
}

/// Applies one shift to a label vector in place.
pub(crate) fn shift_labels(labels: &mut [Label], idx: usize, delta: i64) -> Option<()> {
    if delta == 0 {
        return Some(());
    }
    let t = labels[idx];
    let target = t.checked_add(delta)?;
    labels[idx] = target;
    if delta > 0 {
        for (d, j) in (idx + 1..labels.len()).enumerate() {
            let bound = target.checked_add(d as i64 + 1)?;
            labels[j] = labels[j].max(bound);
        }
    } else {
        for (d, j) in (0..idx).rev().enumerate() {
            let bound = target.checked_sub(d as i64 + 1)?;
            labels[j] = labels[j].min(bound);
        }
    }
    Some(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: Option<PathId>,
    pub index: Option<usize>,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.path, self.index) {
            (Some(p), Some(i)) => write!(f, "path {p} index {i}: {}", self.reason),
            (Some(p), None) => write!(f, "path {p}: {}", self.reason),
            _ => f.write_str(&self.reason),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TemporalKPathGraph {
    names: Arc<Vec<String>>,
    paths: Vec<BasePath>,
    source: VertexId,
    source_path: PathId,
}

impl TemporalKPathGraph {
    pub fn new(
        names: Vec<String>,
        paths: Vec<BasePath>,
        source: VertexId,
        source_path: PathId,
    ) -> Result<Self> {
        let n = names.len();
        if source.index() >= n {
            return Err(Error::UnknownVertex(format!("#{}", source.0)));
        }
        if source_path >= paths.len() {
            return Err(Error::Parameter(format!(
                "source path {source_path} out of range"
            )));
        }
        for p in &paths {
            if let Some(v) = p.vertices().iter().find(|v| v.index() >= n) {
                return Err(Error::UnknownVertex(format!("#{}", v.0)));
            }
            if p.vertices().len() != p.labels().len() + 1 {
                return Err(Error::Parameter(
                    "label count must be vertex count minus one".into(),
                ));
            }
        }
        Ok(TemporalKPathGraph {
            names: Arc::new(names),
            paths,
            source,
            source_path,
        })
    }

    /// Builds a graph from named paths; the source path is the first one
    /// starting at `source`, or path 0.
    pub fn from_named(paths: &[(&[&str], &[Label])], source: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, VertexId> = HashMap::new();
        let mut intern = |s: &str, names: &mut Vec<String>| {
            *index.entry(s.to_string()).or_insert_with(|| {
                names.push(s.to_string());
                VertexId(names.len() as u32 - 1)
            })
        };
        let mut built = Vec::new();
        for (vs, ls) in paths {
            let ids = vs.iter().map(|v| intern(v, &mut names)).collect();
            built.push(BasePath::new(ids, ls.to_vec()));
        }
        let s = intern(source, &mut names);
        let sp = built
            .iter()
            .position(|p| p.vertices().first() == Some(&s))
            .unwrap_or(0);
        Self::new(names, built, s, sp)
    }

    pub fn k(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[BasePath] {
        &self.paths
    }

    pub fn path(&self, p: PathId) -> &BasePath {
        &self.paths[p]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn source_path(&self) -> PathId {
        self.source_path
    }

    pub fn edge_count(&self) -> usize {
        self.paths.iter().map(BasePath::edge_count).sum()
    }

    pub fn min_label(&self) -> Option<Label> {
        self.paths
            .iter()
            .filter_map(|p| p.labels().first().copied())
            .min()
    }

    pub fn max_label(&self) -> Option<Label> {
        self.paths
            .iter()
            .filter_map(|p| p.labels().last().copied())
            .max()
    }

    pub fn labeling(&self) -> Vec<Vec<Label>> {
        self.paths.iter().map(|p| p.labels().to_vec()).collect()
    }

    /// Same structure, different labels.
    pub fn with_labeling(&self, labeling: &[Vec<Label>]) -> Result<Self> {
        if labeling.len() != self.k()
            || labeling
                .iter()
                .zip(&self.paths)
                .any(|(l, p)| l.len() != p.edge_count())
        {
            return Err(Error::Parameter(
                "labeling shape does not match graph".into(),
            ));
        }
        let paths = self
            .paths
            .iter()
            .zip(labeling)
            .map(|(p, l)| p.with_labels(l.clone()))
            .collect();
        Ok(TemporalKPathGraph {
            paths,
            ..self.clone()
        })
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (pid, p) in self.paths.iter().enumerate() {
            if p.vertices().len() < 2 {
                out.push(Violation {
                    path: Some(pid),
                    index: None,
                    reason: "fewer than two vertices".into(),
                });
            }
            if p.vertices().len() != p.labels().len() + 1 {
                out.push(Violation {
                    path: Some(pid),
                    index: None,
                    reason: "label count mismatch".into(),
                });
            }
            for i in 1..p.labels().len() {
                if p.labels()[i] <= p.labels()[i - 1] {
                    out.push(Violation {
                        path: Some(pid),
                        index: Some(i),
                        reason: format!("non-increasing at index {i}"),
                    });
                }
            }
            let mut seen = BTreeSet::new();
            for (i, v) in p.vertices().iter().enumerate() {
                if !seen.insert(*v) {
                    out.push(Violation {
                        path: Some(pid),
                        index: Some(i),
                        reason: format!("vertex {} repeated", self.name(*v)),
                    });
                }
            }
        }
        match self.paths.get(self.source_path) {
            None => out.push(Violation {
                path: None,
                index: None,
                reason: "source path out of range".into(),
            }),
            Some(p) => {
                if p.vertices().first() != Some(&self.source) {
                    out.push(Violation {
                        path: Some(self.source_path),
                        index: Some(0),
                        reason: "source is not the first vertex of the source path".into(),
                    });
                }
                for (pid, q) in self.paths.iter().enumerate() {
                    if pid != self.source_path && q.position(self.source).is_some() {
                        out.push(Violation {
                            path: Some(pid),
                            index: None,
                            reason: "source appears outside the source path".into(),
                        });
                    }
                }
            }
        }
        out
    }

    fn check_edge(&self, path: PathId, edge_index: usize) -> Result<()> {
        match self.paths.get(path) {
            Some(p) if edge_index < p.edge_count() => Ok(()),
            _ => Err(Error::Addressing { path, edge_index }),
        }
    }

    pub fn apply_shift(&self, op: &ShiftOperation) -> Result<Self> {
        let mut g = self.clone();
        g.apply_shift_in_place(op)?;
        Ok(g)
    }

    pub(crate) fn apply_shift_in_place(&mut self, op: &ShiftOperation) -> Result<()> {
        self.check_edge(op.path, op.edge_index)?;
        let p = &mut self.paths[op.path];
        shift_labels(&mut p.labels, op.edge_index, op.delta).ok_or(Error::Overflow {
            path: op.path,
            edge_index: op.edge_index,
        })
    }

    pub fn apply_sequence(&self, ops: &[ShiftOperation]) -> Result<(Self, u64)> {
        let mut g = self.clone();
        for op in ops {
            g.apply_shift_in_place(op)?;
        }
        Ok((g, total_cost(ops)))
    }

    /// Waiting time accumulated at the vertices after `u` up to and including
    /// `v`, where waiting at an inner vertex is the gap between its two labels.
    pub fn slack(&self, path: PathId, u: VertexId, v: VertexId) -> Result<u64> {
        let p = self.paths.get(path).ok_or(Error::Addressing {
            path,
            edge_index: 0,
        })?;
        let pos = |x: VertexId| {
            p.position(x).ok_or_else(|| Error::NotOnPath {
                path,
                vertex: self.name(x).to_string(),
            })
        };
        let (i, j) = (pos(u)?, pos(v)?);
        if j < i {
            return Err(Error::Ordering {
                path,
                u: self.name(u).to_string(),
                v: self.name(v).to_string(),
            });
        }
        if p.edge_count() == 0 {
            return Ok(0);
        }
        let j = j.min(p.edge_count() - 1);
        let i = i.min(j);
        Ok(p.edge_slack(i, j) as u64)
    }

    /// Earliest-arrival reachability from `source`, as a membership mask.
    pub fn reach_mask(&self, source: VertexId) -> Result<Vec<bool>> {
        if source.index() >= self.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{}", source.0)));
        }
        let mut edges: Vec<(Label, VertexId, VertexId)> = Vec::with_capacity(self.edge_count());
        for p in &self.paths {
            let vs = p.vertices();
            for (i, &t) in p.labels().iter().enumerate() {
                edges.push((t, vs[i], vs[i + 1]));
            }
        }
        edges.sort_unstable_by_key(|e| e.0);
        let mut arrival: Vec<Option<Label>> = vec![None; self.vertex_count()];
        let mut reached = vec![false; self.vertex_count()];
        reached[source.index()] = true;
        let mut fresh = Vec::new();
        let mut start = 0;
        while start < edges.len() {
            let t = edges[start].0;
            let mut end = start;
            while end < edges.len() && edges[end].0 == t {
                let (_, u, v) = edges[end];
                let usable = u == source || arrival[u.index()].is_some_and(|a| a < t);
                if usable {
                    fresh.push(v);
                }
                end += 1;
            }
            for v in fresh.drain(..) {
                reached[v.index()] = true;
                if arrival[v.index()].is_none() {
                    arrival[v.index()] = Some(t);
                }
            }
            start = end;
        }
        Ok(reached)
    }

    pub fn reach_set(&self, source: VertexId) -> Result<BTreeSet<VertexId>> {
        Ok(mask_to_set(&self.reach_mask(source)?))
    }

    pub fn reach_count(&self, source: VertexId) -> Result<usize> {
        Ok(self.reach_mask(source)?.iter().filter(|&&b| b).count())
    }

    /// Ensures `s` heads a path of its own; otherwise renames it to `s'` and
    /// adds a one-edge path `s -> s'` with a label below anything an
    /// advance within `budget_hint` can produce.
    pub fn normalize_source(&self, s: VertexId, budget_hint: u64) -> Result<Self> {
        if s.index() >= self.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{}", s.0)));
        }
        let occurrences: Vec<PathId> = (0..self.k())
            .filter(|&p| self.paths[p].position(s).is_some())
            .collect();
        if let [only] = occurrences[..] {
            if self.paths[only].vertices()[0] == s {
                return Ok(TemporalKPathGraph {
                    source: s,
                    source_path: only,
                    ..self.clone()
                });
            }
        }
        let mut names = (*self.names).clone();
        let base = names[s.index()].clone();
        let mut renamed = format!("{base}'");
        while names.contains(&renamed) {
            renamed.push('\'');
        }
        names[s.index()] = renamed;
        names.push(base);
        let new_s = VertexId(names.len() as u32 - 1);
        let hint =
            i64::try_from(budget_hint).map_err(|_| Error::Parameter("budget too large".into()))?;
        let label = self
            .min_label()
            .unwrap_or(0)
            .checked_sub(hint)
            .and_then(|x| x.checked_sub(1))
            .ok_or(Error::Overflow {
                path: self.k(),
                edge_index: 0,
            })?;
        let mut paths = self.paths.clone();
        paths.push(BasePath::new(vec![new_s, s], vec![label]));
        let source_path = paths.len() - 1;
        Ok(TemporalKPathGraph {
            names: Arc::new(names),
            paths,
            source: new_s,
            source_path,
        })
    }
}

impl PartialEq for TemporalKPathGraph {
    fn eq(&self, other: &Self) -> bool {
        self.k() == other.k()
            && self.source_path == other.source_path
            && self.name(self.source) == other.name(other.source)
            && self.paths.iter().zip(&other.paths).all(|(a, b)| {
                a.labels() == b.labels()
                    && a.vertices().len() == b.vertices().len()
                    && a.vertices()
                        .iter()
                        .zip(b.vertices())
                        .all(|(x, y)| self.name(*x) == other.name(*y))
            })
    }
}

impl Eq for TemporalKPathGraph {}

pub fn mask_to_set(mask: &[bool]) -> BTreeSet<VertexId> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| VertexId(i as u32))
        .collect()
}
