//! Integral max-flow, min-cost flow of a prescribed value, and flow
//! decomposition on acyclic capacitated networks.
//!
//! Costs are generic over [`FlowCost`] so the same solver runs with
//! arbitrary-precision integers and with lexicographic level vectors.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// An ordered abelian group of arc costs.
pub trait FlowCost: Clone + Ord + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn times(&self, k: u64) -> Self;
}

impl FlowCost for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, k: u64) -> Self {
        self * BigInt::from(k)
    }
}

impl FlowCost for i64 {
    fn zero() -> Self {
        0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, k: u64) -> Self {
        self * k as i64
    }
}

/// Cost vector compared from the highest index down: one unit at index `i`
/// outweighs any amount at indices below `i`.
#[derive(Clone, Debug, Default)]
pub struct LexCost(Vec<i64>);

impl LexCost {
    pub fn unit(index: usize) -> Self {
        let mut v = vec![0; index + 1];
        v[index] = 1;
        LexCost(v)
    }

    pub fn get(&self, index: usize) -> i64 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        let len = self.0.len().max(other.0.len());
        LexCost((0..len).map(|i| f(self.get(i), other.get(i))).collect())
    }
}

impl Ord for LexCost {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.0.len().max(other.0.len());
        (0..len).rev().map(|i| self.get(i).cmp(&other.get(i))).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for LexCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for LexCost {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LexCost {}

impl FlowCost for LexCost {
    fn zero() -> Self {
        LexCost(Vec::new())
    }
    fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }
    fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }
    fn times(&self, k: u64) -> Self {
        LexCost(self.0.iter().map(|&x| x * k as i64).collect())
    }
}

/// Where a network arc came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcOrigin {
    /// An arc of the shortest-path DAG (or a plain test network).
    Dag { tail: NodeId, head: NodeId },
    /// First half `(u, x_i)` of the level-`level` gadget of sensitive arc `(tail, head)`.
    GadgetIn { tail: NodeId, head: NodeId, level: u32 },
    /// Second half `(x_i, v)` of that gadget.
    GadgetOut { tail: NodeId, head: NodeId, level: u32 },
}

#[derive(Clone, Debug)]
pub struct FlowArc<C> {
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: u64,
    pub cost: C,
    pub origin: ArcOrigin,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork<C> {
    pub n: usize,
    pub s: NodeId,
    pub t: NodeId,
    pub arcs: Vec<FlowArc<C>>,
}

impl<C: FlowCost> FlowNetwork<C> {
    pub fn new(n: usize, s: NodeId, t: NodeId) -> Self {
        FlowNetwork { n, s, t, arcs: Vec::new() }
    }

    pub fn add_node(&mut self) -> NodeId {
        self.n += 1;
        self.n - 1
    }

    pub fn add_arc(&mut self, tail: NodeId, head: NodeId, capacity: u64, cost: C, origin: ArcOrigin) -> usize {
        assert!(tail < self.n && head < self.n, "arc endpoints inside the network");
        self.arcs.push(FlowArc { tail, head, capacity, cost, origin });
        self.arcs.len() - 1
    }

    /// Plain arc with [`ArcOrigin::Dag`] provenance.
    pub fn add_simple(&mut self, tail: NodeId, head: NodeId, capacity: u64, cost: C) -> usize {
        self.add_arc(tail, head, capacity, cost, ArcOrigin::Dag { tail, head })
    }

    /// `Σ flow(e) · cost(e)`.
    pub fn cost_of(&self, flow: &Flow) -> C {
        self.arcs
            .iter()
            .zip(&flow.arc_flow)
            .fold(C::zero(), |acc, (a, &f)| acc.add(&a.cost.times(f)))
    }

    fn out_lists(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for (i, a) in self.arcs.iter().enumerate() {
            out[a.tail].push(i);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub value: u64,
    pub arc_flow: Vec<u64>,
}

/// Residual graph: edge `2k` is arc `k` forward, `2k + 1` its reverse.
struct Residual {
    cap: Vec<u64>,
    to: Vec<NodeId>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new<C>(net: &FlowNetwork<C>) -> Self {
        let mut cap = Vec::with_capacity(2 * net.arcs.len());
        let mut to = Vec::with_capacity(2 * net.arcs.len());
        let mut adj = vec![Vec::new(); net.n];
        for (k, a) in net.arcs.iter().enumerate() {
            cap.push(a.capacity);
            to.push(a.head);
            cap.push(0);
            to.push(a.tail);
            adj[a.tail].push(2 * k);
            adj[a.head].push(2 * k + 1);
        }
        Residual { cap, to, adj }
    }

    fn push(&mut self, e: usize, amount: u64) {
        self.cap[e] -= amount;
        self.cap[e ^ 1] += amount;
    }

    fn flow<C>(&self, net: &FlowNetwork<C>, value: u64) -> Flow {
        Flow { value, arc_flow: (0..net.arcs.len()).map(|k| self.cap[2 * k + 1]).collect() }
    }

    fn augment(&mut self, parent: &[Option<usize>], s: NodeId, t: NodeId, limit: u64) -> u64 {
        let mut amount = limit;
        let mut v = t;
        while v != s {
            let e = parent[v].unwrap();
            amount = amount.min(self.cap[e]);
            v = self.to[e ^ 1];
        }
        let mut v = t;
        while v != s {
            let e = parent[v].unwrap();
            self.push(e, amount);
            v = self.to[e ^ 1];
        }
        amount
    }
}

/// Maximum integral s-t flow (shortest augmenting paths).
pub fn max_flow<C: FlowCost>(net: &FlowNetwork<C>) -> Flow {
    max_flow_bounded(net, u64::MAX)
}

/// Maximum flow, stopping once `limit` units are routed.
pub fn max_flow_bounded<C: FlowCost>(net: &FlowNetwork<C>, limit: u64) -> Flow {
    let mut res = Residual::new(net);
    let mut value = 0u64;
    if net.s == net.t {
        return res.flow(net, 0);
    }
    while value < limit {
        let mut parent: Vec<Option<usize>> = vec![None; net.n];
        let mut seen = vec![false; net.n];
        seen[net.s] = true;
        let mut queue = VecDeque::from([net.s]);
        while let Some(u) = queue.pop_front() {
            for &e in &res.adj[u] {
                let v = res.to[e];
                if res.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        if !seen[net.t] {
            break;
        }
        value += res.augment(&parent, net.s, net.t, limit - value);
    }
    res.flow(net, value)
}

/// Flow of value exactly `target` with minimum total cost, by successive
/// shortest augmenting paths with node potentials. Arc costs must be
/// non-negative.
pub fn min_cost_flow<C: FlowCost>(net: &FlowNetwork<C>, target: u64) -> Result<Flow> {
    if target == 0 {
        return Err(Error::Argument("flow target must be at least 1".into()));
    }
    assert!(net.arcs.iter().all(|a| a.cost >= C::zero()), "arc costs are non-negative");
    let cost_of = |e: usize| -> C {
        let c = &net.arcs[e / 2].cost;
        if e % 2 == 0 {
            c.clone()
        } else {
            C::zero().sub(c)
        }
    };
    let mut res = Residual::new(net);
    let mut potential = vec![C::zero(); net.n];
    let mut value = 0u64;
    while value < target {
        let mut dist: Vec<Option<C>> = vec![None; net.n];
        let mut parent: Vec<Option<usize>> = vec![None; net.n];
        let mut done = vec![false; net.n];
        dist[net.s] = Some(C::zero());
        let mut heap = BinaryHeap::from([Reverse((C::zero(), net.s))]);
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &e in &res.adj[u] {
                let v = res.to[e];
                if res.cap[e] == 0 || done[v] {
                    continue;
                }
                let reduced = cost_of(e).add(&potential[u]).sub(&potential[v]);
                debug_assert!(reduced >= C::zero(), "reduced costs stay non-negative");
                let candidate = d.add(&reduced);
                if dist[v].as_ref().map_or(true, |cur| candidate < *cur) {
                    dist[v] = Some(candidate.clone());
                    parent[v] = Some(e);
                    heap.push(Reverse((candidate, v)));
                }
            }
        }
        if dist[net.t].is_none() {
            return Err(Error::Infeasible { requested: target, achievable: value });
        }
        for v in 0..net.n {
            if let Some(d) = &dist[v] {
                potential[v] = potential[v].add(d);
            }
        }
        value += res.augment(&parent, net.s, net.t, target - value);
    }
    Ok(res.flow(net, value))
}

/// One s-t arc path of a decomposition, used `multiplicity` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowPath {
    pub arcs: Vec<usize>,
    pub multiplicity: u64,
}

/// Splits a feasible acyclic flow into s-t arc paths whose usage counts add
/// up to the per-arc flow.
pub fn decompose<C: FlowCost>(net: &FlowNetwork<C>, flow: &Flow) -> Result<Vec<FlowPath>> {
    if flow.arc_flow.len() != net.arcs.len() {
        return Err(Error::Argument("flow does not match network".into()));
    }
    let mut balance = vec![0i128; net.n];
    for (a, &f) in net.arcs.iter().zip(&flow.arc_flow) {
        if f > a.capacity {
            return Err(Error::Argument(format!("arc {}->{} exceeds capacity", a.tail + 1, a.head + 1)));
        }
        balance[a.tail] += f as i128;
        balance[a.head] -= f as i128;
    }
    for (v, &b) in balance.iter().enumerate() {
        let expected = if v == net.s && v != net.t {
            flow.value as i128
        } else if v == net.t && v != net.s {
            -(flow.value as i128)
        } else {
            0
        };
        if b != expected {
            return Err(Error::NonConserving(v + 1));
        }
    }

    let out = net.out_lists();
    let mut left = flow.arc_flow.clone();
    let mut remaining = flow.value;
    let mut paths = Vec::new();
    while remaining > 0 {
        let mut arcs = Vec::new();
        let mut u = net.s;
        while u != net.t {
            let e = out[u]
                .iter()
                .copied()
                .find(|&e| left[e] > 0)
                .ok_or(Error::NonConserving(u + 1))?;
            arcs.push(e);
            if arcs.len() > net.n {
                return Err(Error::Argument("flow contains a cycle".into()));
            }
            u = net.arcs[e].head;
        }
        let amount = arcs.iter().map(|&e| left[e]).min().unwrap().min(remaining);
        for &e in &arcs {
            left[e] -= amount;
        }
        remaining -= amount;
        paths.push(FlowPath { arcs, multiplicity: amount });
    }
    Ok(paths)
}
