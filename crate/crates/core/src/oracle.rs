//! Brute-force references for small instances. Everything here enumerates
//! explicitly (simple-path DFS, subset and multiset search) and shares no
//! search code with the solvers it checks.

use crate::disjoint::{level_vector, LevelCount, Member, Objective, SensitiveSet, Variant};
use crate::error::{Error, Result};
use crate::graph::{NodeId, Path, WeightedGraph};
use crate::weight::WeightVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_nodes: usize,
    pub max_paths: usize,
    pub max_subsets: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_nodes: 14, max_paths: 20_000, max_subsets: 2_000_000 }
    }
}

fn exceeded(what: &str, cap: usize) -> Error {
    Error::BudgetExceeded(format!("more than {cap} {what}"))
}

/// Every simple s-t path, sorted by `(length, node sequence)`.
pub fn enum_paths_ordered(g: &WeightedGraph, s: NodeId, t: NodeId, budget: OracleBudget) -> Result<Vec<Path>> {
    if g.node_count() > budget.max_nodes {
        return Err(exceeded("nodes", budget.max_nodes));
    }
    if s >= g.node_count() || t >= g.node_count() {
        return Err(Error::NodeOutOfRange(s.max(t) + 1));
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.node_count()];
    let mut stack = vec![s];
    on_path[s] = true;
    dfs(g, t, &mut stack, &mut on_path, &mut out, budget.max_paths)?;
    out.sort();
    Ok(out)
}

fn dfs(
    g: &WeightedGraph,
    t: NodeId,
    stack: &mut Vec<NodeId>,
    on_path: &mut [bool],
    out: &mut Vec<Path>,
    cap: usize,
) -> Result<()> {
    let u = *stack.last().unwrap();
    if u == t {
        if out.len() == cap {
            return Err(exceeded("paths", cap));
        }
        out.push(Path::new(g, stack.clone())?);
        return Ok(());
    }
    for &(v, _) in g.out_neighbors(u) {
        if !on_path[v] {
            on_path[v] = true;
            stack.push(v);
            dfs(g, t, stack, on_path, out, cap)?;
            stack.pop();
            on_path[v] = false;
        }
    }
    Ok(())
}

/// All minimum-length s-t paths, in node-sequence order. Depth-first search
/// that prunes partial paths longer than the best complete one found so far.
pub fn enum_shortest_paths(g: &WeightedGraph, s: NodeId, t: NodeId, budget: OracleBudget) -> Result<Vec<Path>> {
    if g.node_count() > budget.max_nodes {
        return Err(exceeded("nodes", budget.max_nodes));
    }
    if s >= g.node_count() || t >= g.node_count() {
        return Err(Error::NodeOutOfRange(s.max(t) + 1));
    }
    let mut search = BoundedSearch {
        g,
        t,
        stack: vec![s],
        on_path: vec![false; g.node_count()],
        best: None,
        found: Vec::new(),
        cap: budget.max_paths,
    };
    search.on_path[s] = true;
    search.run(g.zero_weight())?;
    let mut paths: Vec<Path> = match search.best {
        Some(len) => search.found.into_iter().map(|nodes| Path::from_parts(nodes, len.clone())).collect(),
        None => Vec::new(),
    };
    paths.sort();
    Ok(paths)
}

struct BoundedSearch<'a> {
    g: &'a WeightedGraph,
    t: NodeId,
    stack: Vec<NodeId>,
    on_path: Vec<bool>,
    best: Option<WeightVector>,
    found: Vec<Vec<NodeId>>,
    cap: usize,
}

impl BoundedSearch<'_> {
    fn run(&mut self, len: WeightVector) -> Result<()> {
        if self.best.as_ref().is_some_and(|b| len > *b) {
            return Ok(());
        }
        let u = *self.stack.last().unwrap();
        if u == self.t {
            if self.best.as_ref() != Some(&len) {
                self.best = Some(len);
                self.found.clear();
            }
            if self.found.len() == self.cap {
                return Err(exceeded("paths", self.cap));
            }
            self.found.push(self.stack.clone());
            return Ok(());
        }
        for &(v, arc) in self.g.out_neighbors(u) {
            if !self.on_path[v] {
                let next = &len + &self.g.arcs()[arc].weight;
                self.on_path[v] = true;
                self.stack.push(v);
                self.run(next)?;
                self.stack.pop();
                self.on_path[v] = false;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct OracleOptimum {
    pub objective: Objective,
    pub witness: Vec<Path>,
}

/// Resource ids used by a path: all edges for `N1`, sensitive members otherwise.
fn resources(g: &WeightedGraph, p: &Path, variant: Variant, set: &SensitiveSet) -> Vec<usize> {
    let same_edge = |a: (NodeId, NodeId), b: (NodeId, NodeId)| a == b || (!g.is_directed() && a == (b.1, b.0));
    let steps: Vec<(NodeId, NodeId)> = p.nodes().windows(2).map(|w| (w[0], w[1])).collect();
    match (variant, set) {
        (Variant::N1, _) => steps
            .iter()
            .map(|&(u, v)| g.arc_index(u, v).expect("path arcs exist"))
            .collect(),
        (_, SensitiveSet::Edges(edges)) => (0..edges.len())
            .filter(|&i| steps.iter().any(|&st| same_edge(st, edges[i])))
            .collect(),
        (_, SensitiveSet::Nodes(nodes)) => (0..nodes.len()).filter(|&i| p.nodes().contains(&nodes[i])).collect(),
    }
}

fn members(set: &SensitiveSet) -> Vec<Member> {
    match set {
        SensitiveSet::Edges(e) => e.iter().map(|&(u, v)| Member::Edge(u, v)).collect(),
        SensitiveSet::Nodes(n) => n.iter().map(|&v| Member::Node(v)).collect(),
    }
}

struct SubsetSearch<'a> {
    uses: &'a [Vec<usize>],
    taken: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    steps: usize,
    cap: usize,
}

impl SubsetSearch<'_> {
    fn run(&mut self, i: usize) -> Result<()> {
        self.steps += 1;
        if self.steps > self.cap {
            return Err(exceeded("subset search steps", self.cap));
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if i == self.uses.len() || self.chosen.len() + (self.uses.len() - i) <= self.best.len() {
            return Ok(());
        }
        if self.uses[i].iter().all(|&r| !self.taken[r]) {
            for &r in &self.uses[i] {
                self.taken[r] = true;
            }
            self.chosen.push(i);
            self.run(i + 1)?;
            self.chosen.pop();
            for &r in &self.uses[i] {
                self.taken[r] = false;
            }
        }
        self.run(i + 1)
    }
}

struct MultisetSearch<'a> {
    uses: &'a [Vec<usize>],
    r: usize,
    /// Per-member usage bound (`N3`), or `None` (`N4`).
    bound: Option<u64>,
    usage: Vec<u64>,
    chosen: Vec<usize>,
    best: Option<(Vec<u64>, Vec<usize>)>,
    deepest: usize,
    steps: usize,
    cap: usize,
}

impl MultisetSearch<'_> {
    /// Objective key: counts of members used at least `level` times, top level first.
    fn key(&self) -> Vec<u64> {
        (2..=self.r as u64)
            .rev()
            .map(|level| self.usage.iter().filter(|&&c| c >= level).count() as u64)
            .collect()
    }

    fn run(&mut self, from: usize) -> Result<()> {
        self.steps += 1;
        if self.steps > self.cap {
            return Err(exceeded("multisets", self.cap));
        }
        self.deepest = self.deepest.max(self.chosen.len());
        if self.chosen.len() == self.r {
            let key = self.key();
            if self.best.as_ref().map_or(true, |(b, _)| key < *b) {
                self.best = Some((key, self.chosen.clone()));
            }
            return Ok(());
        }
        for i in from..self.uses.len() {
            let fits = self.bound.map_or(true, |b| self.uses[i].iter().all(|&m| self.usage[m] < b));
            if !fits {
                continue;
            }
            for &m in &self.uses[i] {
                self.usage[m] += 1;
            }
            self.chosen.push(i);
            self.run(i)?;
            self.chosen.pop();
            for &m in &self.uses[i] {
                self.usage[m] -= 1;
            }
        }
        Ok(())
    }
}

/// Exact optimum of a variant by exhaustive search over the shortest paths:
/// subsets for `N1`/`N2`, `r`-multisets for `N3`/`N4`.
pub fn brute_force_best_set(
    g: &WeightedGraph,
    s: NodeId,
    t: NodeId,
    variant: Variant,
    set: &SensitiveSet,
    r: Option<u64>,
    budget: OracleBudget,
) -> Result<OracleOptimum> {
    let shortest = enum_shortest_paths(g, s, t, budget)?;
    if shortest.is_empty() {
        return Err(Error::Unreachable { s: s + 1, t: t + 1 });
    }
    let uses: Vec<Vec<usize>> = shortest.iter().map(|p| resources(g, p, variant, set)).collect();
    let pick = |idx: &[usize]| idx.iter().map(|&i| shortest[i].clone()).collect::<Vec<_>>();
    match variant {
        Variant::N1 | Variant::N2 => {
            if variant == Variant::N2 {
                if let Some(i) = uses.iter().position(|u| u.is_empty()) {
                    return Ok(OracleOptimum { objective: Objective::Unbounded, witness: pick(&[i]) });
                }
            }
            let resource_count = match variant {
                Variant::N1 => g.arc_count(),
                _ => set.len(),
            };
            let mut search = SubsetSearch {
                uses: &uses,
                taken: vec![false; resource_count],
                chosen: Vec::new(),
                best: Vec::new(),
                steps: 0,
                cap: budget.max_subsets,
            };
            search.run(0)?;
            Ok(OracleOptimum { objective: Objective::Count(search.best.len() as u64), witness: pick(&search.best) })
        }
        Variant::N3 | Variant::N4 => {
            let r = r.ok_or_else(|| Error::Argument("r is required".into()))?;
            if r == 0 {
                return Err(Error::Argument("r must be at least 1".into()));
            }
            let mut search = MultisetSearch {
                uses: &uses,
                r: r as usize,
                bound: (variant == Variant::N3).then_some(2),
                usage: vec![0; set.len()],
                chosen: Vec::new(),
                best: None,
                deepest: 0,
                steps: 0,
                cap: budget.max_subsets,
            };
            search.run(0)?;
            let (key, chosen) = search
                .best
                .ok_or(Error::Infeasible { requested: r, achievable: search.deepest as u64 })?;
            let witness = pick(&chosen);
            let objective = if variant == Variant::N3 {
                Objective::Overloaded(key.last().copied().unwrap_or(0))
            } else {
                let profile: Vec<(Member, u64)> = members(set)
                    .into_iter()
                    .zip(0..)
                    .map(|(m, i)| (m, witness.iter().filter(|p| resources(g, p, variant, set).contains(&i)).count() as u64))
                    .collect();
                let levels: Vec<LevelCount> = level_vector(&profile, r);
                debug_assert_eq!(levels.iter().map(|l| l.members).collect::<Vec<_>>(), key);
                Objective::Levels { levels, cost: None }
            };
            Ok(OracleOptimum { objective, witness })
        }
    }
}
