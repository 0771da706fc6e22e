//! Line-oriented instance text format.
//!
//! ```text
//! kpathgraph v1
//! k 2
//! source s
//! path 0 : s -1-> a -2-> b
//! path 1 : x -0-> a -1-> y
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{BasePath, Label, TemporalKPathGraph, VertexId};

const HEADER: &str = "kpathgraph v1";

pub fn write_instance(g: &TemporalKPathGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "k {}", g.k());
    let _ = writeln!(out, "source {}", g.name(g.source()));
    if g.source_path() != 0 {
        let _ = writeln!(out, "sourcepath {}", g.source_path());
    }
    for (pid, p) in g.paths().iter().enumerate() {
        let _ = write!(out, "path {pid} :");
        for (i, v) in p.vertices().iter().enumerate() {
            if i > 0 {
                let _ = write!(out, " -{}->", p.labels()[i - 1]);
            }
            let _ = write!(out, " {}", g.name(*v));
        }
        out.push('\n');
    }
    out
}

fn parse_label(tok: &str) -> Option<Label> {
    tok.strip_prefix('-')?.strip_suffix("->")?.parse().ok()
}

fn is_label_token(tok: &str) -> bool {
    tok.starts_with('-') && tok.ends_with("->")
}

pub fn parse_instance(text: &str) -> Result<TemporalKPathGraph> {
    let err = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((n, _)) => return Err(err(n, "expected header 'kpathgraph v1'")),
        None => return Err(err(1, "empty instance")),
    }

    let mut k: Option<usize> = None;
    let mut source: Option<String> = None;
    let mut source_path: Option<usize> = None;
    let mut paths: Vec<Option<(Vec<String>, Vec<Label>)>> = Vec::new();

    for (n, line) in lines {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("k") => {
                let v = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(n, "bad k"))?;
                if k.replace(v).is_some() {
                    return Err(err(n, "duplicate k"));
                }
                paths = vec![None; v];
            }
            Some("source") => {
                let v = words.next().ok_or_else(|| err(n, "missing source name"))?;
                if source.replace(v.to_string()).is_some() {
                    return Err(err(n, "duplicate source"));
                }
            }
            Some("sourcepath") => {
                let v = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(n, "bad sourcepath"))?;
                source_path = Some(v);
            }
            Some("path") => {
                let kk = k.ok_or_else(|| err(n, "path before k"))?;
                let id: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(n, "bad path id"))?;
                if id >= kk {
                    return Err(err(n, "path id out of range"));
                }
                if words.next() != Some(":") {
                    return Err(err(n, "expected ':' after path id"));
                }
                let toks: Vec<&str> = words.collect();
                if toks.len() < 3 || toks.len().is_multiple_of(2) {
                    return Err(err(n, "a path needs at least one edge"));
                }
                let mut vs = Vec::new();
                let mut ls = Vec::new();
                for (i, t) in toks.iter().enumerate() {
                    if i % 2 == 0 {
                        if is_label_token(t) {
                            return Err(err(n, "expected vertex name"));
                        }
                        vs.push(t.to_string());
                    } else {
                        ls.push(parse_label(t).ok_or_else(|| err(n, "bad edge label token"))?);
                    }
                }
                if paths[id].replace((vs, ls)).is_some() {
                    return Err(err(n, "duplicate path id"));
                }
            }
            _ => return Err(err(n, "unknown directive")),
        }
    }

    let k = k.ok_or_else(|| err(0, "missing k"))?;
    if k == 0 {
        return Err(err(0, "k must be positive"));
    }
    let source = source.ok_or_else(|| err(0, "missing source"))?;
    let source_path = source_path.unwrap_or(0);
    if source_path >= k {
        return Err(err(0, "sourcepath out of range"));
    }

    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, VertexId> = HashMap::new();
    let mut built = Vec::with_capacity(k);
    for (pid, p) in paths.into_iter().enumerate() {
        let (vs, ls) = p.ok_or_else(|| err(0, &format!("path {pid} missing")))?;
        let ids = vs
            .into_iter()
            .map(|name| {
                *index.entry(name.clone()).or_insert_with(|| {
                    names.push(name);
                    VertexId(names.len() as u32 - 1)
                })
            })
            .collect();
        built.push(BasePath::new(ids, ls));
    }
    let s = *index
        .get(&source)
        .ok_or_else(|| err(0, "source is not on any path"))?;
    TemporalKPathGraph::new(names, built, s, source_path)
}
