//! Pairwise independence measures between s-t paths and best-pair search
//! over a prefix of the near-shortest path stream.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, Path, WeightedGraph};
use crate::par;
use crate::shortest::PathStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    EdgeSymmetricDifference,
    NodeSymmetricDifference,
    EdgeSetDifference,
    NodeSetDifference,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [
        MeasureKind::EdgeSymmetricDifference,
        MeasureKind::NodeSymmetricDifference,
        MeasureKind::EdgeSetDifference,
        MeasureKind::NodeSetDifference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::EdgeSymmetricDifference => "edge-symmetric-difference",
            MeasureKind::NodeSymmetricDifference => "node-symmetric-difference",
            MeasureKind::EdgeSetDifference => "edge-set-difference",
            MeasureKind::NodeSetDifference => "node-set-difference",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    fn is_symmetric(self) -> bool {
        matches!(self, MeasureKind::EdgeSymmetricDifference | MeasureKind::NodeSymmetricDifference)
    }
}

/// Sorted edge and intermediate-node sets of one path.
#[derive(Clone, Debug)]
pub struct PathSets {
    edges: Vec<(NodeId, NodeId)>,
    inner: Vec<NodeId>,
    s: NodeId,
    t: NodeId,
}

impl PathSets {
    pub fn new(p: &Path, directed: bool) -> Self {
        let mut edges: Vec<_> = p
            .nodes()
            .windows(2)
            .map(|w| if directed || w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) })
            .collect();
        edges.sort_unstable();
        let n = p.nodes().len();
        let mut inner = p.nodes()[1..n - 1].to_vec();
        inner.sort_unstable();
        PathSets { edges, inner, s: p.source(), t: p.target() }
    }
}

/// `(|a \ b|, |b \ a|)` for sorted, duplicate-free slices.
fn difference_sizes<T: Ord>(a: &[T], b: &[T]) -> (usize, usize) {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    (a.len() - common, b.len() - common)
}

fn measure_sets(a: &PathSets, b: &PathSets, kind: MeasureKind) -> usize {
    match kind {
        MeasureKind::EdgeSymmetricDifference => {
            let (x, y) = difference_sizes(&a.edges, &b.edges);
            x + y
        }
        MeasureKind::NodeSymmetricDifference => {
            let (x, y) = difference_sizes(&a.inner, &b.inner);
            x + y
        }
        MeasureKind::EdgeSetDifference => difference_sizes(&a.edges, &b.edges).0,
        MeasureKind::NodeSetDifference => difference_sizes(&a.inner, &b.inner).0,
    }
}

/// Pair value used by [`best_pair`]: directional kinds take the larger direction.
fn pair_value(a: &PathSets, b: &PathSets, kind: MeasureKind) -> usize {
    if kind.is_symmetric() {
        measure_sets(a, b, kind)
    } else {
        measure_sets(a, b, kind).max(measure_sets(b, a, kind))
    }
}

/// Size of the requested difference between `p1` and `p2`. Set-difference
/// kinds count members of `p1` missing from `p2`. Node kinds ignore s and t;
/// undirected edges compare as unordered pairs.
pub fn measure(p1: &Path, p2: &Path, kind: MeasureKind, directed: bool) -> Result<usize> {
    if p1.source() != p2.source() || p1.target() != p2.target() {
        return Err(Error::EndpointMismatch);
    }
    Ok(measure_sets(&PathSets::new(p1, directed), &PathSets::new(p2, directed), kind))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BestPair {
    pub i: usize,
    pub j: usize,
    pub value: usize,
}

/// Better means larger value, then smaller `(i, j)`.
fn better(a: BestPair, b: BestPair) -> BestPair {
    match a.value.cmp(&b.value).then_with(|| (b.i, b.j).cmp(&(a.i, a.j))) {
        Ordering::Less => b,
        _ => a,
    }
}

fn prepared(paths: &[Path], directed: bool) -> Result<Vec<PathSets>> {
    if paths.len() < 2 {
        return Err(Error::TooFewPaths { needed: 2, got: paths.len() });
    }
    let sets: Vec<PathSets> = paths.iter().map(|p| PathSets::new(p, directed)).collect();
    if sets.iter().any(|x| x.s != sets[0].s || x.t != sets[0].t) {
        return Err(Error::EndpointMismatch);
    }
    Ok(sets)
}

fn row_best(sets: &[PathSets], i: usize, kind: MeasureKind) -> Option<BestPair> {
    (i + 1..sets.len())
        .map(|j| BestPair { i, j, value: pair_value(&sets[i], &sets[j], kind) })
        .reduce(better)
}

/// Exhaustive single-threaded pair scan.
pub fn best_pair_sequential(paths: &[Path], kind: MeasureKind, directed: bool) -> Result<BestPair> {
    let sets = prepared(paths, directed)?;
    Ok((0..sets.len()).filter_map(|i| row_best(&sets, i, kind)).reduce(better).unwrap())
}

/// Pair of paths maximizing `kind`; ties go to the smallest `(i, j)`.
/// Rows are scanned in parallel when the `parallel` feature is on.
pub fn best_pair(paths: &[Path], kind: MeasureKind, directed: bool) -> Result<BestPair> {
    let sets = prepared(paths, directed)?;
    let best = par::map_range(sets.len(), |i| row_best(&sets, i, kind))
        .into_iter()
        .flatten()
        .reduce(better)
        .unwrap();
    debug_assert_eq!(Ok(best), best_pair_sequential(paths, kind, directed));
    Ok(best)
}

pub const CLAIM1_EDGES: usize = 3;
pub const CLAIM1_NODES: usize = 1;
pub const CLAIM2_EDGES: usize = 4;
pub const CLAIM2_NODES: usize = 2;
pub const CONJECTURE_EDGES: usize = 6;
pub const CONJECTURE_NODES: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Holds { i: usize, j: usize, edges: usize, nodes: usize },
    Violated { edges: usize, nodes: usize },
    Vacuous { available: usize },
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated { .. })
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }
}

/// Measurement against the 6-edge / 4-node target; never a pass/fail verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureProbe {
    pub target_edges: usize,
    pub target_nodes: usize,
    pub max_edges: usize,
    pub max_nodes: usize,
    /// Smallest prefix length containing one pair meeting both targets.
    pub first_prefix_meeting_both: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasureBest {
    pub measure: MeasureKind,
    pub pair: Option<BestPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiversityReport {
    pub schema: &'static str,
    pub prefix_size: usize,
    pub paths_available: usize,
    pub paths: Vec<Vec<usize>>,
    pub best_pairs: Vec<MeasureBest>,
    pub claim1: Verdict,
    pub claim2: Verdict,
    pub conjecture: ConjectureProbe,
}

pub const REPORT_SCHEMA: &str = "kdsp.diversity-report/1";

fn edge_node(a: &PathSets, b: &PathSets) -> (usize, usize) {
    (
        measure_sets(a, b, MeasureKind::EdgeSymmetricDifference),
        measure_sets(a, b, MeasureKind::NodeSymmetricDifference),
    )
}

/// Evaluates the first-two / first-three guarantees and probes the conjecture
/// over the first `k` near-shortest s-t paths.
pub fn check_guarantees(g: &WeightedGraph, s: NodeId, t: NodeId, k: usize) -> Result<DiversityReport> {
    let mut stream = PathStream::new(g, s, t)?;
    let paths = stream.take_prefix(k.max(3)).to_vec();
    let sets: Vec<PathSets> = paths.iter().map(|p| PathSets::new(p, g.is_directed())).collect();

    let claim1 = if sets.len() < 2 {
        Verdict::Vacuous { available: sets.len() }
    } else {
        let (edges, nodes) = edge_node(&sets[0], &sets[1]);
        if edges >= CLAIM1_EDGES && nodes >= CLAIM1_NODES {
            Verdict::Holds { i: 0, j: 1, edges, nodes }
        } else {
            Verdict::Violated { edges, nodes }
        }
    };

    let claim2 = if sets.len() < 3 {
        Verdict::Vacuous { available: sets.len() }
    } else {
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let values: Vec<_> = pairs.iter().map(|&(i, j)| (i, j, edge_node(&sets[i], &sets[j]))).collect();
        match values.iter().find(|(_, _, (e, n))| *e >= CLAIM2_EDGES && *n >= CLAIM2_NODES) {
            Some(&(i, j, (edges, nodes))) => Verdict::Holds { i, j, edges, nodes },
            None => Verdict::Violated {
                edges: values.iter().map(|v| v.2 .0).max().unwrap(),
                nodes: values.iter().map(|v| v.2 .1).max().unwrap(),
            },
        }
    };

    let prefix = &sets[..sets.len().min(k)];
    let mut conjecture = ConjectureProbe {
        target_edges: CONJECTURE_EDGES,
        target_nodes: CONJECTURE_NODES,
        max_edges: 0,
        max_nodes: 0,
        first_prefix_meeting_both: None,
    };
    for j in 1..prefix.len() {
        for i in 0..j {
            let (e, n) = edge_node(&prefix[i], &prefix[j]);
            conjecture.max_edges = conjecture.max_edges.max(e);
            conjecture.max_nodes = conjecture.max_nodes.max(n);
            if e >= CONJECTURE_EDGES && n >= CONJECTURE_NODES && conjecture.first_prefix_meeting_both.is_none() {
                conjecture.first_prefix_meeting_both = Some(j + 1);
            }
        }
    }

    let prefix_paths = &paths[..prefix.len()];
    let best_pairs = MeasureKind::ALL
        .iter()
        .map(|&kind| MeasureBest { measure: kind, pair: best_pair(prefix_paths, kind, g.is_directed()).ok() })
        .collect();

    Ok(DiversityReport {
        schema: REPORT_SCHEMA,
        prefix_size: k,
        paths_available: prefix.len(),
        paths: prefix_paths.iter().map(Path::one_based).collect(),
        best_pairs,
        claim1,
        claim2,
        conjecture,
    })
}

/// Runs [`check_guarantees`] on every `(graph, s, t)` instance, in parallel
/// when available; results keep the input order.
pub fn check_corpus(instances: &[(&WeightedGraph, NodeId, NodeId)], k: usize) -> Vec<Result<DiversityReport>> {
    par::map(instances, |&(g, s, t)| check_guarantees(g, s, t, k))
}

/// Sequential counterpart of [`check_corpus`].
pub fn check_corpus_sequential(instances: &[(&WeightedGraph, NodeId, NodeId)], k: usize) -> Vec<Result<DiversityReport>> {
    instances.iter().map(|&(g, s, t)| check_guarantees(g, s, t, k)).collect()
}
