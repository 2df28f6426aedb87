//! Deterministic instance families: the tower chain (Example 1a), the diamond
//! chain (Example 1b), the locally spoiled graph (Example 2) and seeded random
//! graphs for test corpora.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Arc, NodeId, WeightedGraph};
use crate::shortest::PathStream;
use crate::weight::{Rational, WeightVector};

/// A generated graph with its designated terminals.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: WeightedGraph,
    pub s: NodeId,
    pub t: NodeId,
    /// One-line description of family and parameters.
    pub provenance: String,
}

fn int_arc(u: NodeId, v: NodeId, w: u64) -> Arc {
    Arc::new(u, v, WeightVector::scalar(Rational::from_integer(BigInt::from(w))))
}

fn arg(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

/// `towers` towers between `s` and `t`. Tower `i` (1-based) joins junction
/// `i-1` to junction `i` through `tower_width` middle nodes; the pair through
/// middle `j` weighs `1 + (1 + j * tower_width^(i-1))`, so path lengths count
/// in base `tower_width` with the first tower as the lowest digit.
pub fn gen_example1a(towers: usize, tower_width: usize) -> Result<Generated> {
    if towers < 1 || tower_width < 2 {
        return Err(arg("example1a needs towers >= 1 and tower_width >= 2"));
    }
    let n = towers * (tower_width + 1) + 1;
    let mut arcs = Vec::with_capacity(2 * towers * tower_width);
    let mut scale: u64 = 1;
    for i in 0..towers {
        let entry = i * (tower_width + 1);
        let exit = entry + tower_width + 1;
        for j in 0..tower_width {
            let middle = entry + 1 + j;
            arcs.push(int_arc(entry, middle, 1));
            arcs.push(int_arc(middle, exit, 1 + j as u64 * scale));
        }
        scale = scale
            .checked_mul(tower_width as u64)
            .ok_or_else(|| arg("example1a weights overflow"))?;
    }
    Ok(Generated {
        graph: WeightedGraph::new(false, n, 1, arcs)?,
        s: 0,
        t: n - 1,
        provenance: format!("example1a towers={towers} tower_width={tower_width}"),
    })
}

/// `diamonds` diamonds in series. Each has a short branch (1 + 1) through
/// the lower-numbered middle node and a long branch (1 + 2).
pub fn gen_example1b(diamonds: usize) -> Result<Generated> {
    if diamonds < 1 {
        return Err(arg("example1b needs at least one diamond"));
    }
    let n = 3 * diamonds + 1;
    let mut arcs = Vec::with_capacity(4 * diamonds);
    for k in 0..diamonds {
        let entry = 3 * k;
        let (short, long, exit) = (entry + 1, entry + 2, entry + 3);
        arcs.push(int_arc(entry, short, 1));
        arcs.push(int_arc(short, exit, 1));
        arcs.push(int_arc(entry, long, 1));
        arcs.push(int_arc(long, exit, 2));
    }
    Ok(Generated {
        graph: WeightedGraph::new(false, n, 1, arcs)?,
        s: 0,
        t: n - 1,
        provenance: format!("example1b diamonds={diamonds}"),
    })
}

/// What replaces the split node in [`gen_example2`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example2Insert {
    /// Complete graph on `v'`, `v''` and `q_bar` new nodes, all weights `ε`.
    Complete { q_bar: usize },
    /// A tower chain between `v'` and `v''`, weights scaled below the gap.
    Towers { towers: usize, tower_width: usize },
    /// A diamond chain between `v'` and `v''`, weights scaled below the gap.
    Diamonds { diamonds: usize },
}

/// `ε = (w(p*_2) - w(p*)) / (q_bar + 2)`.
pub fn example2_epsilon(shortest: &Rational, second: &Rational, q_bar: usize) -> Rational {
    (second - shortest) / Rational::from_integer(BigInt::from(q_bar + 2))
}

/// Splits `v` (an inner node of the unique shortest s-t path `p*` of `base`)
/// into `v'` (keeps the id of `v` and only the arc from its predecessor on
/// `p*`) and a new `v''` (all other arcs), then joins them by `insert`.
pub fn gen_example2(
    base: &WeightedGraph,
    s: NodeId,
    t: NodeId,
    v: NodeId,
    insert: Example2Insert,
) -> Result<Generated> {
    if base.dim() != 1 {
        return Err(arg("example2 needs single-criterion weights"));
    }
    let mut stream = PathStream::new(base, s, t)?;
    let best = stream.next_path().ok_or(Error::Unreachable { s: s + 1, t: t + 1 })?;
    let second = stream.next_path().ok_or_else(|| arg("base graph has a single s-t path"))?;
    if best.length() == second.length() {
        return Err(arg("base graph's shortest s-t path is not unique"));
    }
    let pos = best
        .nodes()
        .iter()
        .position(|&x| x == v)
        .filter(|&p| p > 0 && p + 1 < best.nodes().len())
        .ok_or_else(|| arg(format!("node {} is not an inner node of the shortest path", v + 1)))?;
    let pred = best.nodes()[pos - 1];
    let shortest = best.length().components()[0].clone();
    let gap = &second.length().components()[0] - &shortest;

    let n = base.node_count();
    let v2 = n;
    let mut arcs: Vec<Arc> = base
        .arcs()
        .iter()
        .map(|a| {
            let keep = (a.tail, a.head) == (pred, v) || (!base.is_directed() && (a.head, a.tail) == (pred, v));
            let remap = |x: NodeId| if x == v && !keep { v2 } else { x };
            Arc::new(remap(a.tail), remap(a.head), a.weight.clone())
        })
        .collect();
    let mut next_id = n + 1;
    let push_link = |arcs: &mut Vec<Arc>, a: NodeId, b: NodeId, w: Rational| {
        arcs.push(Arc::new(a, b, WeightVector::scalar(w.clone())));
        if base.is_directed() {
            arcs.push(Arc::new(b, a, WeightVector::scalar(w)));
        }
    };
    let detail = match insert {
        Example2Insert::Complete { q_bar } => {
            if q_bar < 1 {
                return Err(arg("example2 needs q_bar >= 1"));
            }
            let eps = example2_epsilon(&shortest, &second.length().components()[0], q_bar);
            let mut clique = vec![v, v2];
            clique.extend((0..q_bar).map(|i| n + 1 + i));
            next_id += q_bar;
            for (i, &a) in clique.iter().enumerate() {
                for &b in &clique[i + 1..] {
                    push_link(&mut arcs, a, b, eps.clone());
                }
            }
            format!("complete q_bar={q_bar} epsilon={}", crate::weight::format_rational(&eps))
        }
        Example2Insert::Towers { .. } | Example2Insert::Diamonds { .. } => {
            let (inner, longest) = match insert {
                Example2Insert::Towers { towers, tower_width } => {
                    let g = gen_example1a(towers, tower_width)?;
                    let w = tower_width as u64;
                    let longest: u64 = (0..towers as u32).map(|i| 2 + (w - 1) * w.pow(i)).sum();
                    (g, longest)
                }
                Example2Insert::Diamonds { diamonds } => (gen_example1b(diamonds)?, 3 * diamonds as u64),
                Example2Insert::Complete { .. } => unreachable!(),
            };
            let factor = &gap / Rational::from_integer(BigInt::from(longest + 1));
            // inner terminals are its first and last node
            let map = |x: NodeId| match x {
                x if x == inner.s => v,
                x if x == inner.t => v2,
                x => n + x,
            };
            next_id = n + inner.graph.node_count() - 1;
            for a in inner.graph.arcs() {
                push_link(&mut arcs, map(a.tail), map(a.head), &a.weight.components()[0] * &factor);
            }
            format!("{} scale={}", inner.provenance, crate::weight::format_rational(&factor))
        }
    };
    Ok(Generated {
        graph: WeightedGraph::new(base.is_directed(), next_id, 1, arcs)?,
        s,
        t,
        provenance: format!("example2 split={} {detail}", v + 1),
    })
}

/// Complete graph on `q_bar + 1` nodes with unit weights, terminals at the
/// first and last node.
pub fn gen_example2_boundary(q_bar: usize) -> Result<Generated> {
    if q_bar < 1 {
        return Err(arg("q_bar must be at least 1"));
    }
    let n = q_bar + 1;
    let arcs = (0..n).flat_map(|a| (a + 1..n).map(move |b| int_arc(a, b, 1))).collect();
    Ok(Generated {
        graph: WeightedGraph::new(false, n, 1, arcs)?,
        s: 0,
        t: n - 1,
        provenance: format!("example2-boundary q_bar={q_bar}"),
    })
}

/// Undirected path `1 - 2 - ... - nodes` with unit weights plus a direct
/// `1 - nodes` bypass one unit longer than the chain.
pub fn chain_with_bypass(nodes: usize) -> Result<Generated> {
    if nodes < 3 {
        return Err(arg("chain needs at least 3 nodes"));
    }
    let mut arcs: Vec<Arc> = (0..nodes - 1).map(|i| int_arc(i, i + 1, 1)).collect();
    arcs.push(int_arc(0, nodes - 1, nodes as u64));
    Ok(Generated {
        graph: WeightedGraph::new(false, nodes, 1, arcs)?,
        s: 0,
        t: nodes - 1,
        provenance: format!("chain-with-bypass nodes={nodes}"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub nodes: usize,
    /// Probability of each non-tree node pair receiving an arc.
    pub density: f64,
    pub weight_min: u64,
    pub weight_max: u64,
    pub directed: bool,
    pub seed: u64,
}

/// Random simple graph: a random spanning tree rooted at node 1 (arcs point
/// away from the root, so every node is reachable from it) plus extra node
/// pairs taken with probability `density`, randomly oriented when directed.
/// Terminals are the first and last node.
pub fn gen_random(spec: &RandomSpec) -> Result<Generated> {
    if spec.nodes < 2 {
        return Err(arg("random graph needs at least 2 nodes"));
    }
    if !(0.0..=1.0).contains(&spec.density) {
        return Err(arg("density must lie in [0, 1]"));
    }
    if spec.weight_min < 1 || spec.weight_min > spec.weight_max {
        return Err(arg("weight range must satisfy 1 <= min <= max"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.nodes;
    let mut tree = vec![vec![false; n]; n];
    let mut arcs = Vec::new();
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        tree[parent][v] = true;
        arcs.push((parent, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !tree[u][v] && rng.gen_bool(spec.density) {
                let flip = spec.directed && rng.gen_bool(0.5);
                arcs.push(if flip { (v, u) } else { (u, v) });
            }
        }
    }
    let arcs = arcs
        .into_iter()
        .map(|(u, v)| int_arc(u, v, rng.gen_range(spec.weight_min..=spec.weight_max)))
        .collect();
    Ok(Generated {
        graph: WeightedGraph::new(spec.directed, n, 1, arcs)?,
        s: 0,
        t: n - 1,
        provenance: format!(
            "random nodes={} density={} weights={}..{} directed={} seed={}",
            spec.nodes, spec.density, spec.weight_min, spec.weight_max, spec.directed, spec.seed
        ),
    })
}

/// `count` random instances with `min_nodes..=max_nodes` nodes. Instance `i`
/// depends only on `(seed, i)`; orientation alternates, weights lie in 1..=3
/// so that equal-length paths are common.
pub fn random_corpus(count: usize, seed: u64, min_nodes: usize, max_nodes: usize) -> Vec<Generated> {
    const DENSITIES: [f64; 3] = [0.25, 0.4, 0.6];
    (0..count)
        .map(|i| {
            let instance_seed = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
            let spec = RandomSpec {
                nodes: rng.gen_range(min_nodes..=max_nodes),
                density: DENSITIES[rng.gen_range(0..DENSITIES.len())],
                weight_min: 1,
                weight_max: 3,
                directed: i % 2 == 0,
                seed: instance_seed,
            };
            gen_random(&spec).expect("corpus parameters are valid")
        })
        .collect()
}
