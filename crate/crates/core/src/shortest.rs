//! Exact single-source shortest paths and resumable enumeration of simple
//! s-t paths in nondecreasing `(length, node sequence)` order.
//!
//! Enumeration follows Yen's deviation scheme. Each spur search returns the
//! minimal `(length, node sequence)` spur path, which is what makes the stream
//! match the full sort order exactly, ties included.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{NodeId, Path, WeightedGraph};
use crate::weight::WeightVector;

/// Distances from (or, when `reversed`, to) a source node.
#[derive(Clone, Debug)]
pub struct DistanceLabels {
    pub source: NodeId,
    pub reversed: bool,
    /// `None` marks an unreachable node.
    pub dist: Vec<Option<WeightVector>>,
    /// Arc index of the shortest-path tree edge entering (or leaving) a node.
    pub parent: Vec<Option<usize>>,
}

impl DistanceLabels {
    pub fn get(&self, v: NodeId) -> Option<&WeightVector> {
        self.dist[v].as_ref()
    }

    pub fn is_reachable(&self, v: NodeId) -> bool {
        self.dist[v].is_some()
    }
}

/// Nodes and directed arcs excluded from a search.
#[derive(Default)]
struct Blocked {
    nodes: Vec<bool>,
    arcs: HashSet<(NodeId, NodeId)>,
}

impl Blocked {
    fn none(n: usize) -> Self {
        Blocked { nodes: vec![false; n], arcs: HashSet::new() }
    }
}

fn dijkstra(g: &WeightedGraph, source: NodeId, reversed: bool, blocked: &Blocked) -> DistanceLabels {
    let n = g.node_count();
    let mut dist: Vec<Option<WeightVector>> = vec![None; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    if !blocked.nodes[source] {
        dist[source] = Some(g.zero_weight());
        heap.push(Reverse((g.zero_weight(), source)));
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        let adjacency = if reversed { g.in_neighbors(u) } else { g.out_neighbors(u) };
        for &(v, arc) in adjacency {
            let directed_pair = if reversed { (v, u) } else { (u, v) };
            if done[v] || blocked.nodes[v] || blocked.arcs.contains(&directed_pair) {
                continue;
            }
            let candidate = &d + &g.arcs()[arc].weight;
            if dist[v].as_ref().map_or(true, |cur| candidate < *cur) {
                dist[v] = Some(candidate.clone());
                parent[v] = Some(arc);
                heap.push(Reverse((candidate, v)));
            }
        }
    }
    DistanceLabels { source, reversed, dist, parent }
}

/// Exact lexicographic shortest distances from `source`, or to `source` along
/// reversed arcs when `reversed` is set.
pub fn shortest_tree(g: &WeightedGraph, source: NodeId, reversed: bool) -> DistanceLabels {
    dijkstra(g, source, reversed, &Blocked::none(g.node_count()))
}

/// Smallest `(length, node sequence)` path from `from` to `to` avoiding `blocked`.
fn min_key_path(g: &WeightedGraph, from: NodeId, to: NodeId, blocked: &Blocked) -> Option<Path> {
    let to_target = dijkstra(g, to, true, blocked);
    let total = to_target.dist[from].clone()?;
    let mut nodes = vec![from];
    let mut u = from;
    while u != to {
        let du = to_target.dist[u].as_ref().unwrap();
        // neighbours are sorted by id, so the first tight arc is the lexicographic choice
        let next = g.out_neighbors(u).iter().find_map(|&(v, arc)| {
            if blocked.arcs.contains(&(u, v)) {
                return None;
            }
            let dv = to_target.dist[v].as_ref()?;
            (&g.arcs()[arc].weight + dv == *du).then_some(v)
        })?;
        nodes.push(next);
        u = next;
    }
    Some(Path::from_parts(nodes, total))
}

/// Prefix tree of emitted paths: the children of a root prefix are exactly
/// the arcs Yen's algorithm must block at that spur node.
#[derive(Default)]
struct PrefixTrie {
    children: Vec<Vec<(NodeId, usize)>>,
    terminal: Vec<bool>,
}

impl PrefixTrie {
    fn with_root() -> Self {
        PrefixTrie { children: vec![Vec::new()], terminal: vec![false] }
    }

    fn child(&self, at: usize, v: NodeId) -> Option<usize> {
        self.children[at].iter().find(|&&(x, _)| x == v).map(|&(_, c)| c)
    }

    /// Inserts a path and returns how many of its leading nodes were already
    /// present as a prefix.
    fn insert(&mut self, nodes: &[NodeId]) -> usize {
        let mut at = 0;
        let mut shared = 0;
        for &v in nodes {
            at = match self.child(at, v) {
                Some(c) => {
                    shared += 1;
                    c
                }
                None => {
                    let c = self.children.len();
                    self.children.push(Vec::new());
                    self.terminal.push(false);
                    self.children[at].push((v, c));
                    c
                }
            };
        }
        self.terminal[at] = true;
        shared
    }

    fn contains(&self, nodes: &[NodeId]) -> bool {
        let mut at = 0;
        for &v in nodes {
            match self.child(at, v) {
                Some(c) => at = c,
                None => return false,
            }
        }
        self.terminal[at]
    }
}

/// Resumable stream of simple s-t paths. Single-owner: advance it from one
/// thread at a time.
pub struct PathStream<'g> {
    g: &'g WeightedGraph,
    s: NodeId,
    t: NodeId,
    emitted: Vec<Path>,
    trie: PrefixTrie,
    candidates: BTreeSet<Path>,
    /// First spur index worth expanding for the last emitted path.
    deviation: usize,
    started: bool,
    spurs_pending: bool,
}

impl<'g> PathStream<'g> {
    pub fn new(g: &'g WeightedGraph, s: NodeId, t: NodeId) -> Result<Self> {
        let n = g.node_count();
        for v in [s, t] {
            if v >= n {
                return Err(Error::NodeOutOfRange(v + 1));
            }
        }
        if s == t {
            return Err(Error::Argument("source and target must differ".into()));
        }
        Ok(PathStream {
            g,
            s,
            t,
            emitted: Vec::new(),
            trie: PrefixTrie::with_root(),
            candidates: BTreeSet::new(),
            deviation: 0,
            started: false,
            spurs_pending: false,
        })
    }

    pub fn emitted(&self) -> &[Path] {
        &self.emitted
    }

    /// Next path in order, or `None` once every simple s-t path was emitted.
    pub fn next_path(&mut self) -> Option<Path> {
        if !self.started {
            self.started = true;
            if let Some(p) = min_key_path(self.g, self.s, self.t, &Blocked::none(self.g.node_count())) {
                self.candidates.insert(p);
            }
        }
        if self.spurs_pending {
            self.spurs_pending = false;
            self.expand_last();
        }
        let next = self.candidates.pop_first()?;
        // Spur roots shorter than the shared prefix keep the blocked arcs they
        // had when last expanded, so they would only reproduce old candidates.
        self.deviation = self.trie.insert(next.nodes()).saturating_sub(1);
        self.emitted.push(next.clone());
        self.spurs_pending = true;
        Some(next)
    }

    /// Advances until `k` paths were emitted (or the stream is exhausted).
    pub fn take_prefix(&mut self, k: usize) -> &[Path] {
        while self.emitted.len() < k && self.next_path().is_some() {}
        &self.emitted[..self.emitted.len().min(k)]
    }

    fn expand_last(&mut self) {
        let g = self.g;
        let last = self.emitted.last().expect("expand after emission").clone();
        let nodes = last.nodes();
        let mut root_len = g.zero_weight();
        let mut at = 0;
        let mut blocked = Blocked::none(g.node_count());
        for i in 0..nodes.len() - 1 {
            let spur = nodes[i];
            let root = &nodes[..=i];
            at = self.trie.child(at, spur).expect("emitted path is in the trie");
            if i > 0 {
                blocked.nodes[nodes[i - 1]] = true;
            }
            if i < self.deviation {
                root_len = &root_len + g.weight(nodes[i], nodes[i + 1]).expect("path arcs exist");
                continue;
            }
            blocked.arcs.clear();
            for &(next, _) in &self.trie.children[at] {
                blocked.arcs.insert((spur, next));
            }
            if let Some(spur_path) = min_key_path(g, spur, self.t, &blocked) {
                let mut full = root[..i].to_vec();
                full.extend_from_slice(spur_path.nodes());
                if !self.trie.contains(&full) {
                    let length = &root_len + spur_path.length();
                    self.candidates.insert(Path::from_parts(full, length));
                }
            }
            root_len = &root_len + g.weight(nodes[i], nodes[i + 1]).expect("path arcs exist");
        }
    }
}

impl Iterator for PathStream<'_> {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        self.next_path()
    }
}

/// First `k` paths of the stream.
pub fn k_shortest_paths(g: &WeightedGraph, s: NodeId, t: NodeId, k: usize) -> Result<Vec<Path>> {
    Ok(PathStream::new(g, s, t)?.take(k).collect())
}
