//! The subgraph of all shortest s-t paths, oriented from s towards t.
//!
//! Built from one forward and one reversed shortest-path run; an arc `(u, v)`
//! is kept iff `d(s,u) + w(u,v) + d(v,t) = d(s,t)` holds exactly.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{NodeId, Path, WeightedGraph};
use crate::shortest::shortest_tree;
use crate::weight::{format_rational, WeightVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagArc {
    pub tail: NodeId,
    pub head: NodeId,
    pub weight: WeightVector,
}

#[derive(Clone, Debug)]
pub struct ShortestPathDag {
    pub(crate) n: usize,
    pub(crate) s: NodeId,
    pub(crate) t: NodeId,
    pub(crate) base_directed: bool,
    /// Sorted by `(tail, head)`.
    pub(crate) arcs: Vec<DagArc>,
    pub(crate) out: Vec<Vec<usize>>,
    pub(crate) dist_from_s: Vec<Option<WeightVector>>,
    pub(crate) dist_to_t: Vec<Option<WeightVector>>,
    pub(crate) member: Vec<bool>,
    /// Base node each DAG node stands for; the identity unless nodes were split.
    pub(crate) origin: Vec<NodeId>,
    pub(crate) total: WeightVector,
}

pub fn build_spdag(g: &WeightedGraph, s: NodeId, t: NodeId) -> Result<ShortestPathDag> {
    let n = g.node_count();
    if s >= n || t >= n {
        return Err(Error::NodeOutOfRange(s.max(t) + 1));
    }
    if s == t {
        return Err(Error::Argument("source and target must differ".into()));
    }
    let from_s = shortest_tree(g, s, false);
    let to_t = shortest_tree(g, t, true);
    let total = from_s.dist[t].clone().ok_or(Error::Unreachable { s: s + 1, t: t + 1 })?;

    let tight = |u: NodeId, v: NodeId, w: &WeightVector| match (&from_s.dist[u], &to_t.dist[v]) {
        (Some(du), Some(dv)) => &(du + w) + dv == total,
        _ => false,
    };
    let mut arcs = Vec::new();
    for arc in g.arcs() {
        let forward = tight(arc.tail, arc.head, &arc.weight);
        let backward = !g.is_directed() && tight(arc.head, arc.tail, &arc.weight);
        assert!(!(forward && backward), "positive weights cannot make an edge tight both ways");
        if forward {
            arcs.push(DagArc { tail: arc.tail, head: arc.head, weight: arc.weight.clone() });
        } else if backward {
            arcs.push(DagArc { tail: arc.head, head: arc.tail, weight: arc.weight.clone() });
        }
    }
    let mut member = vec![false; n];
    member[s] = true;
    for a in &arcs {
        member[a.tail] = true;
        member[a.head] = true;
    }
    let keep = |d: &Vec<Option<WeightVector>>| {
        d.iter().zip(&member).map(|(x, &m)| if m { x.clone() } else { None }).collect()
    };
    Ok(ShortestPathDag::from_parts(
        n,
        s,
        t,
        g.is_directed(),
        arcs,
        keep(&from_s.dist),
        keep(&to_t.dist),
        member,
        (0..n).collect(),
        total,
    ))
}

impl ShortestPathDag {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        n: usize,
        s: NodeId,
        t: NodeId,
        base_directed: bool,
        mut arcs: Vec<DagArc>,
        dist_from_s: Vec<Option<WeightVector>>,
        dist_to_t: Vec<Option<WeightVector>>,
        member: Vec<bool>,
        origin: Vec<NodeId>,
        total: WeightVector,
    ) -> Self {
        arcs.sort_by_key(|a| (a.tail, a.head));
        let mut out = vec![Vec::new(); n];
        for (i, a) in arcs.iter().enumerate() {
            out[a.tail].push(i);
        }
        ShortestPathDag { n, s, t, base_directed, arcs, out, dist_from_s, dist_to_t, member, origin, total }
    }

    pub fn source(&self) -> NodeId {
        self.s
    }

    pub fn target(&self) -> NodeId {
        self.t
    }

    /// Node id space (DAG membership is sparse within it).
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn base_directed(&self) -> bool {
        self.base_directed
    }

    pub fn arcs(&self) -> &[DagArc] {
        &self.arcs
    }

    /// `d(s,t)`.
    pub fn total(&self) -> &WeightVector {
        &self.total
    }

    pub fn dist_from_s(&self, v: NodeId) -> Option<&WeightVector> {
        self.dist_from_s[v].as_ref()
    }

    pub fn dist_to_t(&self, v: NodeId) -> Option<&WeightVector> {
        self.dist_to_t[v].as_ref()
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        v < self.n && self.member[v]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n).filter(|&v| self.member[v])
    }

    pub fn origin(&self, v: NodeId) -> NodeId {
        self.origin[v]
    }

    pub fn arc_index(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.out.get(u)?.iter().copied().find(|&i| self.arcs[i].head == v)
    }

    pub fn has_arc(&self, u: NodeId, v: NodeId) -> bool {
        self.arc_index(u, v).is_some()
    }

    /// Outgoing arc indices of `u`, in `(tail, head)` order.
    pub fn out_arcs(&self, u: NodeId) -> &[usize] {
        &self.out[u]
    }

    /// Kahn order over member nodes; `None` if a cycle exists.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let mut indeg = vec![0usize; self.n];
        for a in &self.arcs {
            indeg[a.head] += 1;
        }
        let mut ready: Vec<NodeId> = self.nodes().filter(|&v| indeg[v] == 0).collect();
        ready.reverse();
        let mut order = Vec::new();
        while let Some(u) = ready.pop() {
            order.push(u);
            for &i in &self.out[u] {
                let h = self.arcs[i].head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.push(h);
                }
            }
        }
        (order.len() == self.nodes().count()).then_some(order)
    }

    /// Every s-t path of the DAG in lexicographic node order, or `None` if
    /// there are more than `limit`.
    pub fn enumerate_paths(&self, limit: usize) -> Option<Vec<Vec<NodeId>>> {
        fn walk(dag: &ShortestPathDag, u: NodeId, cur: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>, limit: usize) -> bool {
            if u == dag.t {
                out.push(cur.clone());
                return out.len() <= limit;
            }
            for &i in &dag.out[u] {
                let h = dag.arcs[i].head;
                cur.push(h);
                let ok = walk(dag, h, cur, out, limit);
                cur.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
        let mut out = Vec::new();
        walk(self, self.s, &mut vec![self.s], &mut out, limit).then_some(out)
    }

    /// Number of s-t paths in the DAG.
    pub fn count_paths(&self) -> u128 {
        let order = self.topological_order().expect("acyclic");
        let mut ways = vec![0u128; self.n];
        ways[self.t] = 1;
        for &u in order.iter().rev() {
            if u != self.t {
                ways[u] = self.out[u].iter().map(|&i| ways[self.arcs[i].head]).sum();
            }
        }
        ways[self.s]
    }

    /// Length of a DAG arc sequence given as nodes.
    pub(crate) fn node_path_length(&self, nodes: &[NodeId]) -> WeightVector {
        let mut total = WeightVector::zero(self.total.dim());
        for w in nodes.windows(2) {
            let i = self.arc_index(w[0], w[1]).expect("DAG arc");
            total = &total + &self.arcs[i].weight;
        }
        total
    }

    /// Canonical graph-file text with `c d(s,u)=...` annotations (1-based ids).
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "c shortest-path dag s={} t={} d(s,t)={}", self.s + 1, self.t + 1, self.total);
        for v in self.nodes() {
            let _ = writeln!(
                out,
                "c d(s,{})={} d({},t)={}",
                v + 1,
                self.dist_from_s[v].as_ref().unwrap(),
                v + 1,
                self.dist_to_t[v].as_ref().unwrap()
            );
        }
        let _ = writeln!(out, "p dsp directed {} {} {}", self.n, self.arcs.len(), self.total.dim());
        for a in &self.arcs {
            let _ = write!(out, "a {} {}", a.tail + 1, a.head + 1);
            for c in a.weight.components() {
                let _ = write!(out, " {}", format_rational(c));
            }
            out.push('\n');
        }
        out
    }
}

/// Whether the s-t path `p` lies entirely inside the DAG, with matching
/// orientation.
pub fn is_shortest_path(dag: &ShortestPathDag, p: &Path) -> Result<bool> {
    if p.source() != dag.s || p.target() != dag.t {
        return Err(Error::EndpointMismatch);
    }
    Ok(p.nodes().windows(2).all(|w| dag.has_arc(w[0], w[1])))
}
