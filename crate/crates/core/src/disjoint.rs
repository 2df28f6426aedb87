//! Flow-network constructions over the shortest-path DAG:
//!
//! * `N1`: unit capacity everywhere; max flow = max number of arc-disjoint
//!   shortest paths.
//! * `N2`: unit capacity on the sensitive set `S`, unbounded elsewhere.
//! * `N3`: `N2` plus one level-2 gadget per `S` arc, so each `S` arc carries at
//!   most two paths and every second path on it costs 1.
//! * `N4`: `N3` plus level-`i` gadgets (`3 <= i <= r`) with prioritized costs.
//!
//! A gadget for `S` arc `(u, v)` at level `i` is a fresh node `x_i` with arcs
//! `(u, x_i)` and `(x_i, v)`, both of capacity 1; its cost sits on `(u, x_i)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::flow::{decompose, max_flow, min_cost_flow, ArcOrigin, FlowCost, FlowNetwork, LexCost};
use crate::graph::{NodeId, Path};
use crate::spdag::{DagArc, ShortestPathDag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    N1,
    N2,
    N3,
    N4,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::N1 => "n1",
            Variant::N2 => "n2",
            Variant::N3 => "n3",
            Variant::N4 => "n4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Variant::N1, Variant::N2, Variant::N3, Variant::N4].into_iter().find(|v| v.name() == s)
    }
}

/// Base of the level-`i` gadget cost `base^(i-2)` in `N4`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CostBase {
    /// `|S| + 1`: one arc at level `i + 1` strictly outweighs all arcs at level `i`.
    #[default]
    Strict,
    /// `|S|`, which ties in the all-arcs boundary case.
    Size,
}

impl CostBase {
    pub fn name(self) -> &'static str {
        match self {
            CostBase::Strict => "strict",
            CostBase::Size => "size",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CostMode {
    /// Arbitrary-precision integer costs.
    #[default]
    BigInt,
    /// Per-level usage vectors compared from the top level down.
    Lex,
}

impl CostMode {
    pub fn name(self) -> &'static str {
        match self {
            CostMode::BigInt => "bigint",
            CostMode::Lex => "lex",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    /// Number of paths; required by `N3`/`N4`, optional cap for unbounded `N2`.
    pub r: Option<u64>,
    pub cost_base: CostBase,
    pub cost_mode: CostMode,
}

impl SolveOptions {
    pub fn with_r(r: u64) -> Self {
        SolveOptions { r: Some(r), ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SensitiveSet {
    Edges(Vec<(NodeId, NodeId)>),
    Nodes(Vec<NodeId>),
}

impl SensitiveSet {
    pub fn empty() -> Self {
        SensitiveSet::Edges(Vec::new())
    }

    pub fn len(&self) -> usize {
        match self {
            SensitiveSet::Edges(e) => e.len(),
            SensitiveSet::Nodes(n) => n.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sorts, deduplicates and checks every member against the DAG. For
    /// undirected inputs an edge may be named in either direction.
    pub fn resolve(&self, dag: &ShortestPathDag) -> Result<SensitiveSet> {
        match self {
            SensitiveSet::Edges(edges) => {
                let mut out = Vec::with_capacity(edges.len());
                for &(u, v) in edges {
                    if dag.has_arc(u, v) {
                        out.push((u, v));
                    } else if !dag.base_directed() && dag.has_arc(v, u) {
                        out.push((v, u));
                    } else {
                        return Err(Error::NotInDag(format!("edge ({},{})", u + 1, v + 1)));
                    }
                }
                out.sort_unstable();
                out.dedup();
                Ok(SensitiveSet::Edges(out))
            }
            SensitiveSet::Nodes(nodes) => {
                let mut out = nodes.clone();
                out.sort_unstable();
                out.dedup();
                for &v in &out {
                    if v == dag.source() || v == dag.target() {
                        return Err(Error::Argument(format!("terminal node {} cannot be sensitive", v + 1)));
                    }
                    if !dag.contains_node(v) {
                        return Err(Error::NotInDag(format!("node {}", v + 1)));
                    }
                }
                Ok(SensitiveSet::Nodes(out))
            }
        }
    }

    /// Usage count of every member over `paths`.
    pub fn overload_profile(&self, paths: &[Path]) -> Vec<(Member, u64)> {
        match self {
            SensitiveSet::Edges(edges) => edges
                .iter()
                .map(|&(u, v)| {
                    let count = paths
                        .iter()
                        .filter(|p| p.nodes().windows(2).any(|w| (w[0], w[1]) == (u, v)))
                        .count();
                    (Member::Edge(u, v), count as u64)
                })
                .collect(),
            SensitiveSet::Nodes(nodes) => nodes
                .iter()
                .map(|&v| (Member::Node(v), paths.iter().filter(|p| p.nodes().contains(&v)).count() as u64))
                .collect(),
        }
    }
}

/// Free-function form of [`SensitiveSet::overload_profile`].
pub fn overload_profile(paths: &[Path], set: &SensitiveSet) -> Vec<(Member, u64)> {
    set.overload_profile(paths)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Member {
    Edge(NodeId, NodeId),
    Node(NodeId),
}

impl Member {
    pub fn to_json(self) -> Value {
        match self {
            Member::Edge(u, v) => json!([u + 1, v + 1]),
            Member::Node(v) => json!(v + 1),
        }
    }
}

/// Number of sensitive members used by at least `level` paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelCount {
    pub level: u64,
    pub members: u64,
}

/// Level counts for `level = r, r-1, ..., 2`. Comparing these vectors
/// lexicographically is the prioritized overload order.
pub fn level_vector(profile: &[(Member, u64)], r: u64) -> Vec<LevelCount> {
    (2..=r)
        .rev()
        .map(|level| LevelCount { level, members: profile.iter().filter(|(_, c)| *c >= level).count() as u64 })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    /// `N1`/`N2`: maximum number of paths.
    Count(u64),
    /// `N2` when some shortest path avoids `S` entirely.
    Unbounded,
    /// `N3`: members carrying two paths.
    Overloaded(u64),
    /// `N4`: level counts, plus the flow cost in big-integer mode.
    Levels { levels: Vec<LevelCount>, cost: Option<BigInt> },
}

impl Objective {
    pub fn to_json(&self) -> Value {
        match self {
            Objective::Count(c) => json!({ "kind": "max-count", "value": c }),
            Objective::Unbounded => json!({ "kind": "unbounded" }),
            Objective::Overloaded(c) => json!({ "kind": "overloaded", "value": c }),
            Objective::Levels { levels, cost } => json!({
                "kind": "prioritized-loss",
                "levels": levels.iter().map(|l| json!({ "level": l.level, "members": l.members })).collect::<Vec<_>>(),
                "cost": cost.as_ref().map(|c| c.to_string()),
            }),
        }
    }

    /// The part of the objective both cost modes must agree on.
    pub fn comparable(&self) -> Objective {
        match self {
            Objective::Levels { levels, .. } => Objective::Levels { levels: levels.clone(), cost: None },
            other => other.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DisjointSolution {
    pub variant: Variant,
    pub paths: Vec<Path>,
    pub overload_profile: Vec<(Member, u64)>,
    pub objective: Objective,
    /// Gadget levels carrying flow, per sensitive member.
    pub gadget_levels: BTreeMap<Member, Vec<u32>>,
    pub options: SolveOptions,
}

pub const SOLUTION_SCHEMA: &str = "kdsp.disjoint-solution/1";

impl DisjointSolution {
    pub fn r(&self) -> usize {
        self.paths.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SOLUTION_SCHEMA,
            "variant": self.variant.name(),
            "r": self.paths.len(),
            "cost_mode": self.options.cost_mode.name(),
            "cost_base": self.options.cost_base.name(),
            "objective": self.objective.to_json(),
            "paths": self.paths.iter().map(Path::one_based).collect::<Vec<_>>(),
            "overload_profile": self.overload_profile.iter()
                .map(|(m, c)| json!({ "member": m.to_json(), "count": c }))
                .collect::<Vec<_>>(),
        })
    }
}

fn infinite_capacity(variant: Variant, edges: &[(NodeId, NodeId)], r: Option<u64>) -> u64 {
    match variant {
        Variant::N1 => 1,
        // every unit of a bounded N2 flow crosses at least one S arc
        _ => r.unwrap_or(edges.len().max(1) as u64),
    }
}

fn check_args(variant: Variant, edges: &[(NodeId, NodeId)], r: Option<u64>) -> Result<()> {
    if r == Some(0) {
        return Err(Error::Argument("r must be at least 1".into()));
    }
    if matches!(variant, Variant::N3 | Variant::N4) && r.is_none() {
        return Err(Error::Argument(format!("variant {} requires r", variant.name())));
    }
    if variant != Variant::N1 && edges.is_empty() {
        return Err(Error::Argument(format!("variant {} requires a sensitive set", variant.name())));
    }
    Ok(())
}

fn build_generic<C: FlowCost>(
    dag: &ShortestPathDag,
    variant: Variant,
    edges: &[(NodeId, NodeId)],
    r: Option<u64>,
    level_cost: impl Fn(u32) -> C,
) -> FlowNetwork<C> {
    let mut net = FlowNetwork::new(dag.node_count(), dag.source(), dag.target());
    let inf = infinite_capacity(variant, edges, r);
    let top_level = match variant {
        Variant::N1 | Variant::N2 => 1,
        Variant::N3 => 2,
        Variant::N4 => r.unwrap_or(2).max(2) as u32,
    };
    for &DagArc { tail, head, .. } in dag.arcs() {
        let sensitive = edges.binary_search(&(tail, head)).is_ok();
        let cap = if sensitive { 1 } else { inf };
        net.add_simple(tail, head, cap, C::zero());
        if sensitive {
            for level in 2..=top_level {
                let x = net.add_node();
                net.add_arc(tail, x, 1, level_cost(level), ArcOrigin::GadgetIn { tail, head, level });
                net.add_arc(x, head, 1, C::zero(), ArcOrigin::GadgetOut { tail, head, level });
            }
        }
    }
    net
}

fn strict_base(edges: usize, base: CostBase) -> BigInt {
    match base {
        CostBase::Strict => BigInt::from(edges + 1),
        CostBase::Size => BigInt::from(edges),
    }
}

/// Builds `N1`..`N4` with big-integer costs. Edge members must already be
/// resolved against `dag` (see [`SensitiveSet::resolve`]).
pub fn build_network(
    dag: &ShortestPathDag,
    variant: Variant,
    edges: &[(NodeId, NodeId)],
    r: Option<u64>,
    cost_base: CostBase,
) -> Result<FlowNetwork<BigInt>> {
    check_args(variant, edges, r)?;
    let base = strict_base(edges.len(), cost_base);
    Ok(build_generic(dag, variant, edges, r, |level| {
        if level == 2 {
            BigInt::one()
        } else {
            Pow::pow(&base, level - 2)
        }
    }))
}

/// Builds `N1`..`N4` with level-vector costs: level `i` costs one unit at index `i - 2`.
pub fn build_network_lex(
    dag: &ShortestPathDag,
    variant: Variant,
    edges: &[(NodeId, NodeId)],
    r: Option<u64>,
) -> Result<FlowNetwork<LexCost>> {
    check_args(variant, edges, r)?;
    Ok(build_generic(dag, variant, edges, r, |level| LexCost::unit(level as usize - 2)))
}

/// Splits every sensitive node `v` into `v` (incoming arcs) and a fresh
/// `v_out` (outgoing arcs) joined by a zero-length arc, which becomes the
/// sensitive edge standing for `v`.
pub fn reduce_sensitive_nodes(
    dag: &ShortestPathDag,
    nodes: &[NodeId],
) -> Result<(ShortestPathDag, Vec<(NodeId, NodeId)>)> {
    let SensitiveSet::Nodes(nodes) = SensitiveSet::Nodes(nodes.to_vec()).resolve(dag)? else {
        unreachable!()
    };
    let n = dag.node_count();
    let split: BTreeMap<NodeId, NodeId> = nodes.iter().enumerate().map(|(i, &v)| (v, n + i)).collect();
    let n2 = n + nodes.len();
    let mut arcs: Vec<DagArc> = dag
        .arcs()
        .iter()
        .map(|a| DagArc { tail: split.get(&a.tail).copied().unwrap_or(a.tail), head: a.head, weight: a.weight.clone() })
        .collect();
    let mut from_s = dag.dist_from_s.clone();
    let mut to_t = dag.dist_to_t.clone();
    let mut member = dag.member.clone();
    let mut origin = dag.origin.clone();
    from_s.resize(n2, None);
    to_t.resize(n2, None);
    member.resize(n2, true);
    origin.resize(n2, 0);
    let mut edges = Vec::new();
    for (&v, &v_out) in &split {
        arcs.push(DagArc { tail: v, head: v_out, weight: crate::weight::WeightVector::zero(dag.total().dim()) });
        from_s[v_out] = from_s[v].clone();
        to_t[v_out] = to_t[v].clone();
        origin[v_out] = dag.origin[v];
        edges.push((v, v_out));
    }
    let reduced = ShortestPathDag::from_parts(
        n2,
        dag.source(),
        dag.target(),
        dag.base_directed(),
        arcs,
        from_s,
        to_t,
        member,
        origin,
        dag.total().clone(),
    );
    Ok((reduced, edges))
}

/// Node sequence in `dag` ids of one decomposed flow path.
fn flow_path_nodes<C>(net: &FlowNetwork<C>, arcs: &[usize]) -> Vec<NodeId> {
    let mut nodes = vec![net.s];
    for &e in arcs {
        match net.arcs[e].origin {
            ArcOrigin::Dag { head, .. } | ArcOrigin::GadgetOut { head, .. } => nodes.push(head),
            ArcOrigin::GadgetIn { .. } => {}
        }
    }
    nodes
}

/// Paths (in `dag` ids, with multiplicity expanded) and used gadget levels.
fn paths_from_flow<C: FlowCost>(
    net: &FlowNetwork<C>,
    flow: &crate::flow::Flow,
) -> Result<(Vec<Vec<NodeId>>, BTreeMap<(NodeId, NodeId), Vec<u32>>)> {
    let mut paths = Vec::new();
    for fp in decompose(net, flow)? {
        let nodes = flow_path_nodes(net, &fp.arcs);
        for _ in 0..fp.multiplicity {
            paths.push(nodes.clone());
        }
    }
    let mut gadgets: BTreeMap<(NodeId, NodeId), Vec<u32>> = BTreeMap::new();
    for (a, &f) in net.arcs.iter().zip(&flow.arc_flow) {
        if let (ArcOrigin::GadgetIn { tail, head, level }, true) = (a.origin, f > 0) {
            gadgets.entry((tail, head)).or_default().push(level);
        }
    }
    Ok((paths, gadgets))
}

/// Lexicographically smallest s-t path avoiding `edges`, if one exists.
fn avoiding_path(dag: &ShortestPathDag, edges: &[(NodeId, NodeId)]) -> Option<Vec<NodeId>> {
    let order = dag.topological_order().expect("acyclic");
    let allowed = |i: usize| {
        let a = &dag.arcs()[i];
        edges.binary_search(&(a.tail, a.head)).is_err()
    };
    let mut reaches = vec![false; dag.node_count()];
    reaches[dag.target()] = true;
    for &u in order.iter().rev() {
        if dag.out_arcs(u).iter().any(|&i| allowed(i) && reaches[dag.arcs()[i].head]) {
            reaches[u] = true;
        }
    }
    if !reaches[dag.source()] {
        return None;
    }
    let mut nodes = vec![dag.source()];
    let mut u = dag.source();
    while u != dag.target() {
        let i = dag.out_arcs(u).iter().copied().find(|&i| allowed(i) && reaches[dag.arcs()[i].head])?;
        u = dag.arcs()[i].head;
        nodes.push(u);
    }
    Some(nodes)
}

struct EdgeSolution {
    paths: Vec<Vec<NodeId>>,
    gadgets: BTreeMap<(NodeId, NodeId), Vec<u32>>,
    unbounded: bool,
    cost: Option<BigInt>,
}

fn solve_edges(
    dag: &ShortestPathDag,
    variant: Variant,
    edges: &[(NodeId, NodeId)],
    opts: &SolveOptions,
) -> Result<EdgeSolution> {
    check_args(variant, edges, opts.r)?;
    if variant == Variant::N2 {
        if let Some(witness) = avoiding_path(dag, edges) {
            let paths = match opts.r {
                Some(r) => {
                    let net = build_network(dag, variant, edges, Some(r), opts.cost_base)?;
                    paths_from_flow(&net, &min_cost_flow(&net, r)?)?.0
                }
                None => vec![witness],
            };
            return Ok(EdgeSolution { paths, gadgets: BTreeMap::new(), unbounded: true, cost: None });
        }
    }
    match (variant, opts.cost_mode) {
        (Variant::N1 | Variant::N2, _) => {
            let net = build_network(dag, variant, edges, None, opts.cost_base)?;
            let (paths, gadgets) = paths_from_flow(&net, &max_flow(&net))?;
            Ok(EdgeSolution { paths, gadgets, unbounded: false, cost: None })
        }
        (_, CostMode::BigInt) => {
            let net = build_network(dag, variant, edges, opts.r, opts.cost_base)?;
            let flow = min_cost_flow(&net, opts.r.unwrap())?;
            let cost = net.cost_of(&flow);
            let (paths, gadgets) = paths_from_flow(&net, &flow)?;
            Ok(EdgeSolution { paths, gadgets, unbounded: false, cost: Some(cost) })
        }
        (_, CostMode::Lex) => {
            let net = build_network_lex(dag, variant, edges, opts.r)?;
            let flow = min_cost_flow(&net, opts.r.unwrap())?;
            let (paths, gadgets) = paths_from_flow(&net, &flow)?;
            Ok(EdgeSolution { paths, gadgets, unbounded: false, cost: None })
        }
    }
}

/// Solves one variant on `dag`. Node-sensitive sets go through
/// [`reduce_sensitive_nodes`] and are mapped back to the original node ids.
pub fn solve(
    dag: &ShortestPathDag,
    variant: Variant,
    sensitive: &SensitiveSet,
    opts: SolveOptions,
) -> Result<DisjointSolution> {
    let resolved = sensitive.resolve(dag)?;
    let (work_dag, edges, node_of_edge) = match &resolved {
        SensitiveSet::Edges(edges) => (None, edges.clone(), BTreeMap::new()),
        SensitiveSet::Nodes(nodes) => {
            let (reduced, edges) = reduce_sensitive_nodes(dag, nodes)?;
            let map: BTreeMap<_, _> = edges.iter().map(|&(v, out)| ((v, out), v)).collect();
            (Some(reduced), edges, map)
        }
    };
    let solved = solve_edges(work_dag.as_ref().unwrap_or(dag), variant, &edges, &opts)?;
    let work = work_dag.as_ref().unwrap_or(dag);

    let paths: Vec<Path> = solved
        .paths
        .iter()
        .map(|nodes| {
            let mut merged: Vec<NodeId> = Vec::with_capacity(nodes.len());
            for &v in nodes {
                let o = work.origin(v);
                if merged.last() != Some(&o) {
                    merged.push(o);
                }
            }
            let length = dag.node_path_length(&merged);
            Path::from_parts(merged, length)
        })
        .collect();

    let gadget_levels = solved
        .gadgets
        .into_iter()
        .map(|((u, v), mut levels)| {
            levels.sort_unstable();
            let member = match node_of_edge.get(&(u, v)) {
                Some(&node) => Member::Node(node),
                None => Member::Edge(u, v),
            };
            (member, levels)
        })
        .collect();

    let profile = resolved.overload_profile(&paths);
    let objective = match variant {
        _ if solved.unbounded => Objective::Unbounded,
        Variant::N1 | Variant::N2 => Objective::Count(paths.len() as u64),
        Variant::N3 => {
            let overloaded = profile.iter().filter(|(_, c)| *c >= 2).count() as u64;
            debug_assert!(solved.cost.as_ref().map_or(true, |c| *c == BigInt::from(overloaded)));
            Objective::Overloaded(overloaded)
        }
        Variant::N4 => Objective::Levels { levels: level_vector(&profile, opts.r.unwrap()), cost: solved.cost },
    };
    Ok(DisjointSolution { variant, paths, overload_profile: profile, objective, gadget_levels, options: opts })
}
