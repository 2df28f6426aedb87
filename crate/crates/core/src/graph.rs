//! Graph data model: simple directed or undirected graphs with positive
//! exact weights, plus simple paths with cached lengths.
//!
//! Node ids are 0-based here; the text formats in [`crate::io`] are 1-based.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::weight::WeightVector;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    pub weight: WeightVector,
}

impl Arc {
    pub fn new(tail: NodeId, head: NodeId, weight: WeightVector) -> Self {
        Arc { tail, head, weight }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    SelfLoop,
    ParallelEdge,
    NonPositiveWeight,
    NodeOutOfRange,
    DimensionMismatch,
}

/// One broken invariant, located by arc index (0-based, file order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub arc: usize,
    pub message: String,
}

/// A simple graph `G = (V, E, w)`. Undirected edges are stored once.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    directed: bool,
    n: usize,
    dim: usize,
    arcs: Vec<Arc>,
    out_adj: Vec<Vec<(NodeId, usize)>>,
    in_adj: Vec<Vec<(NodeId, usize)>>,
    index: HashMap<(NodeId, NodeId), usize>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.n == other.n
            && self.dim == other.dim
            && self.canonical_arcs() == other.canonical_arcs()
    }
}

impl Eq for WeightedGraph {}

impl WeightedGraph {
    /// Builds and validates a graph; any violation is an error.
    pub fn new(directed: bool, n: usize, dim: usize, arcs: Vec<Arc>) -> Result<Self> {
        let g = Self::unchecked(directed, n, dim, arcs);
        let violations = validate_graph(&g);
        if let Some(first) = violations.first() {
            return Err(Error::Invalid(format!("arc #{}: {}", first.arc + 1, first.message)));
        }
        Ok(g)
    }

    /// Builds a graph without validating invariants. Out-of-range arcs are
    /// kept in the arc list but left out of the adjacency structure.
    pub fn unchecked(directed: bool, n: usize, dim: usize, arcs: Vec<Arc>) -> Self {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut index = HashMap::new();
        for (i, arc) in arcs.iter().enumerate() {
            if arc.tail >= n || arc.head >= n {
                continue;
            }
            out_adj[arc.tail].push((arc.head, i));
            in_adj[arc.head].push((arc.tail, i));
            index.entry(key(directed, arc.tail, arc.head)).or_insert(i);
            if !directed {
                out_adj[arc.head].push((arc.tail, i));
                in_adj[arc.tail].push((arc.head, i));
            }
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        WeightedGraph { directed, n, dim, arcs, out_adj, in_adj, index }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Number of weight criteria `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Arcs sorted by `(tail, head)`; undirected edges are normalized so that
    /// `tail < head`.
    pub fn canonical_arcs(&self) -> Vec<Arc> {
        let mut arcs: Vec<Arc> = self
            .arcs
            .iter()
            .map(|a| {
                if !self.directed && a.tail > a.head {
                    Arc::new(a.head, a.tail, a.weight.clone())
                } else {
                    a.clone()
                }
            })
            .collect();
        arcs.sort_by(|a, b| (a.tail, a.head).cmp(&(b.tail, b.head)));
        arcs
    }

    /// Outgoing neighbours of `u` as `(head, arc index)`, sorted by head.
    /// Undirected edges appear in both endpoint lists.
    pub fn out_neighbors(&self, u: NodeId) -> &[(NodeId, usize)] {
        &self.out_adj[u]
    }

    /// Incoming neighbours of `v` as `(tail, arc index)`, sorted by tail.
    pub fn in_neighbors(&self, v: NodeId) -> &[(NodeId, usize)] {
        &self.in_adj[v]
    }

    /// Index of the arc traversable from `u` to `v`, if any.
    pub fn arc_index(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.index.get(&key(self.directed, u, v)).copied()
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<&WeightVector> {
        self.arc_index(u, v).map(|i| &self.arcs[i].weight)
    }

    pub fn zero_weight(&self) -> WeightVector {
        WeightVector::zero(self.dim)
    }
}

fn key(directed: bool, u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if directed || u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Lists every broken structural invariant; empty iff the graph is valid.
pub fn validate_graph(g: &WeightedGraph) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    for (i, arc) in g.arcs.iter().enumerate() {
        let (t, h) = (arc.tail + 1, arc.head + 1);
        if arc.tail >= g.n || arc.head >= g.n {
            violations.push(Violation {
                kind: ViolationKind::NodeOutOfRange,
                arc: i,
                message: format!("arc ({t},{h}) references a node outside 1..{}", g.n),
            });
            continue;
        }
        if arc.tail == arc.head {
            violations.push(Violation {
                kind: ViolationKind::SelfLoop,
                arc: i,
                message: format!("self loop at node {t}"),
            });
        }
        if !seen.insert(key(g.directed, arc.tail, arc.head)) {
            violations.push(Violation {
                kind: ViolationKind::ParallelEdge,
                arc: i,
                message: format!("parallel edge ({t},{h})"),
            });
        }
        if arc.weight.dim() != g.dim {
            violations.push(Violation {
                kind: ViolationKind::DimensionMismatch,
                arc: i,
                message: format!("arc ({t},{h}) has {} criteria, expected {}", arc.weight.dim(), g.dim),
            });
        } else if !arc.weight.is_positive() {
            violations.push(Violation {
                kind: ViolationKind::NonPositiveWeight,
                arc: i,
                message: format!("arc ({t},{h}) has non-positive weight {}", arc.weight),
            });
        }
    }
    violations
}

/// Exact length of the walk `nodes`, rejecting repeated nodes and missing arcs.
pub fn path_length(g: &WeightedGraph, nodes: &[NodeId]) -> Result<WeightVector> {
    let mut seen = HashSet::with_capacity(nodes.len());
    for &v in nodes {
        if v >= g.node_count() {
            return Err(Error::NodeOutOfRange(v + 1));
        }
        if !seen.insert(v) {
            return Err(Error::RepeatedNode(v + 1));
        }
    }
    let mut total = g.zero_weight();
    for pair in nodes.windows(2) {
        let w = g
            .weight(pair[0], pair[1])
            .ok_or(Error::MissingArc { tail: pair[0] + 1, head: pair[1] + 1 })?;
        total = &total + w;
    }
    Ok(total)
}

/// A simple path with its exact length. Paths order by `(length, nodes)`,
/// which is the enumeration order used throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    nodes: Vec<NodeId>,
    length: WeightVector,
}

impl Path {
    pub fn new(g: &WeightedGraph, nodes: Vec<NodeId>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Argument("empty path".into()));
        }
        let length = path_length(g, &nodes)?;
        Ok(Path { nodes, length })
    }

    /// Trusted constructor for callers that already know the length.
    pub(crate) fn from_parts(nodes: Vec<NodeId>, length: WeightVector) -> Self {
        Path { nodes, length }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn length(&self) -> &WeightVector {
        &self.length
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Node ids shifted to the 1-based file convention.
    pub fn one_based(&self) -> Vec<usize> {
        self.nodes.iter().map(|v| v + 1).collect()
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length.cmp(&other.length).then_with(|| self.nodes.cmp(&other.nodes))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
