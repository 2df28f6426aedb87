//! Small named graphs shared by unit tests, integration tests and examples.

use crate::graph::{Arc, NodeId, WeightedGraph};
use crate::weight::WeightVector;

fn directed(n: usize, arcs: &[(NodeId, NodeId, i64)]) -> WeightedGraph {
    let arcs = arcs
        .iter()
        .map(|&(u, v, w)| Arc::new(u, v, WeightVector::from_ints(&[w])))
        .collect();
    WeightedGraph::new(true, n, 1, arcs).expect("fixture is valid")
}

/// `1->2 (1)`, `2->3 (1)`, `1->3 (2)`: two shortest paths of length 2.
pub fn tri() -> WeightedGraph {
    directed(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 2)])
}

/// [`tri`] with the direct arc reweighted to 3, leaving a unique shortest path.
pub fn tri_reweighted() -> WeightedGraph {
    directed(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 3)])
}

/// `1->2` with weight 5.
pub fn single_arc() -> WeightedGraph {
    directed(2, &[(0, 1, 5)])
}

/// `1->2->4` and `1->3->4`, unit weights.
pub fn diamond() -> WeightedGraph {
    directed(4, &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)])
}

/// `s=1` fans out to `x1..x3 = 2..4`, all of which feed `a=5`, then `a->t=6`.
pub fn fan() -> WeightedGraph {
    directed(6, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 4, 1), (2, 4, 1), (3, 4, 1), (4, 5, 1)])
}

/// Node id of `a` in [`fan`].
pub const FAN_A: NodeId = 4;
/// Node id of `t` in [`fan`].
pub const FAN_T: NodeId = 5;

/// `s->a->t`, unit weights.
pub fn chain() -> WeightedGraph {
    directed(3, &[(0, 1, 1), (1, 2, 1)])
}

/// Three parallel two-hop rows `s -> m_i -> t`, `i = 1..3`, unit weights.
pub fn ladder() -> WeightedGraph {
    directed(5, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 4, 1), (2, 4, 1), (3, 4, 1)])
}
