//! Line-oriented text formats for graphs and sensitive sets.
//!
//! ```text
//! c comment
//! p dsp <directed|undirected> <n> <m> <d>
//! a <tail> <head> <w1> [<w2> ... <wd>]
//! ```
//!
//! Weights are integers or `num/den` with `den > 0`. Node ids are 1-based.

use std::fmt::Write as _;

use crate::disjoint::SensitiveSet;
use crate::error::{Error, Result};
use crate::graph::{Arc, NodeId, WeightedGraph};
use crate::weight::{format_rational, parse_rational, WeightVector};

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn parse_node(token: &str, n: usize, line: usize) -> Result<NodeId> {
    let id: usize = token.parse().map_err(|_| syntax(line, format!("malformed node id `{token}`")))?;
    if id == 0 || id > n {
        return Err(syntax(line, format!("node id {id} outside 1..{n}")));
    }
    Ok(id - 1)
}

/// Parses and validates a graph file.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let (directed, n, d, arcs) = parse_parts(text)?;
    WeightedGraph::new(directed, n, d, arcs)
}

/// Parses a graph file without checking simplicity or weight signs, so that
/// [`crate::graph::validate_graph`] can list every violation.
pub fn parse_graph_unchecked(text: &str) -> Result<WeightedGraph> {
    let (directed, n, d, arcs) = parse_parts(text)?;
    Ok(WeightedGraph::unchecked(directed, n, d, arcs))
}

fn parse_parts(text: &str) -> Result<(bool, usize, usize, Vec<Arc>)> {
    let mut header: Option<(bool, usize, usize, usize)> = None;
    let mut arcs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tokens = raw.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate problem line"));
                }
                let fields: Vec<&str> = tokens.collect();
                if fields.len() != 5 || fields[0] != "dsp" {
                    return Err(syntax(line, "expected `p dsp <directed|undirected> <n> <m> <d>`"));
                }
                let directed = match fields[1] {
                    "directed" => true,
                    "undirected" => false,
                    other => return Err(syntax(line, format!("unknown orientation `{other}`"))),
                };
                let num = |s: &str, what: &str| {
                    s.parse::<usize>().map_err(|_| syntax(line, format!("malformed {what} `{s}`")))
                };
                let n = num(fields[2], "node count")?;
                let m = num(fields[3], "arc count")?;
                let d = num(fields[4], "criteria count")?;
                if n == 0 || d == 0 {
                    return Err(syntax(line, "node and criteria counts must be positive"));
                }
                header = Some((directed, n, m, d));
            }
            "a" => {
                let (_, n, _, d) = header.ok_or_else(|| syntax(line, "arc before problem line"))?;
                let fields: Vec<&str> = tokens.collect();
                if fields.len() != 2 + d {
                    return Err(syntax(line, format!("expected 2 node ids and {d} weights")));
                }
                let tail = parse_node(fields[0], n, line)?;
                let head = parse_node(fields[1], n, line)?;
                let weights = fields[2..]
                    .iter()
                    .map(|t| parse_rational(t).map_err(|e| syntax(line, e)))
                    .collect::<Result<Vec<_>>>()?;
                arcs.push(Arc::new(tail, head, WeightVector::new(weights)));
            }
            other => return Err(syntax(line, format!("unknown line tag `{other}`"))),
        }
    }
    let (directed, n, m, d) = header.ok_or_else(|| syntax(0, "missing problem line"))?;
    if arcs.len() != m {
        return Err(syntax(0, format!("header declares {m} arcs, found {}", arcs.len())));
    }
    Ok((directed, n, d, arcs))
}

/// Canonical text form with arcs sorted by `(tail, head)`.
pub fn serialize_graph(g: &WeightedGraph) -> String {
    serialize_graph_with_comments(g, &[])
}

/// Like [`serialize_graph`], with leading `c` comment lines.
pub fn serialize_graph_with_comments(g: &WeightedGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let orientation = if g.is_directed() { "directed" } else { "undirected" };
    let _ = writeln!(out, "p dsp {orientation} {} {} {}", g.node_count(), g.arc_count(), g.dim());
    for arc in g.canonical_arcs() {
        let _ = write!(out, "a {} {}", arc.tail + 1, arc.head + 1);
        for w in arc.weight.components() {
            let _ = write!(out, " {}", format_rational(w));
        }
        out.push('\n');
    }
    out
}

/// Parses `e <u> <v>` / `n <u>` lines; one file holds a single kind.
pub fn parse_sensitive(text: &str, n: usize) -> Result<SensitiveSet> {
    let mut edges = Vec::new();
    let mut nodes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        match tokens.as_slice() {
            [] | ["c", ..] => {}
            ["e", u, v] => edges.push((parse_node(u, n, line)?, parse_node(v, n, line)?)),
            ["n", u] => nodes.push(parse_node(u, n, line)?),
            _ => return Err(syntax(line, "expected `e <u> <v>` or `n <u>`")),
        }
    }
    match (edges.is_empty(), nodes.is_empty()) {
        (_, true) => Ok(SensitiveSet::Edges(edges)),
        (true, false) => Ok(SensitiveSet::Nodes(nodes)),
        (false, false) => Err(syntax(0, "sensitive file mixes edges and nodes")),
    }
}

pub fn serialize_sensitive(spec: &SensitiveSet) -> String {
    let mut out = String::new();
    match spec {
        SensitiveSet::Edges(edges) => {
            for (u, v) in edges {
                let _ = writeln!(out, "e {} {}", u + 1, v + 1);
            }
        }
        SensitiveSet::Nodes(nodes) => {
            for v in nodes {
                let _ = writeln!(out, "n {}", v + 1);
            }
        }
    }
    out
}
