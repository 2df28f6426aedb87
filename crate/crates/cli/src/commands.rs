use std::path::Path as FsPath;

use serde_json::{json, Value};

use kdsp::diversity::{check_corpus, check_guarantees, DiversityReport, Verdict};
use kdsp::disjoint::{solve, SensitiveSet, SolveOptions, Variant};
use kdsp::generators::{
    gen_example1a, gen_example1b, gen_example2, gen_example2_boundary, gen_random, Example2Insert, Generated, RandomSpec,
};
use kdsp::graph::validate_graph;
use kdsp::io::{parse_graph, parse_graph_unchecked, parse_sensitive, serialize_graph_with_comments};
use kdsp::oracle::{brute_force_best_set, enum_paths_ordered, enum_shortest_paths, OracleBudget};
use kdsp::shortest::k_shortest_paths;
use kdsp::spdag::build_spdag;
use kdsp::weight::format_rational;
use kdsp::{NodeId, Path, WeightVector, WeightedGraph};

use crate::report::{sha256_hex, Failure, Report};
use crate::{BudgetArgs, Command, DisjointArgs, Family, GenArgs, InsertArg, OracleCommand, Query};

type Outcome = Result<Value, Failure>;

pub fn run(cmd: &Command, report: &mut Report) -> Outcome {
    match cmd {
        Command::Validate { graph } => validate(graph, report),
        Command::Ksp { query, k } => {
            let (g, s, t) = load(query, report)?;
            let paths = k_shortest_paths(&g, s, t, *k)?;
            Ok(json!({ "k": k, "count": paths.len(), "paths": paths_json(&paths) }))
        }
        Command::Diverse { query, prefix, measure } => {
            let (g, s, t) = load(query, report)?;
            let mut value = diversity_json(&check_guarantees(&g, s, t, *prefix)?);
            let keep: Vec<&str> = measure.kinds().into_iter().map(|k| k.name()).collect();
            if let Some(Value::Array(pairs)) = value.get_mut("best_pairs") {
                pairs.retain(|p| keep.iter().any(|k| p["measure"] == *k));
            }
            Ok(value)
        }
        Command::Spdag { query, output } => spdag(query, output.as_deref(), report),
        Command::Disjoint(args) => disjoint(args, report),
        Command::Gen(args) => generate(args, report),
        Command::Oracle { budget, what } => oracle(budget, what, report),
        Command::Claims { dir, prefix } => claims(dir, *prefix, report),
    }
}

fn validate(path: &FsPath, report: &mut Report) -> Outcome {
    let text = report.read_input(path)?;
    let g = parse_graph_unchecked(&text)?;
    let violations: Vec<Value> = validate_graph(&g)
        .iter()
        .map(|v| json!({ "kind": v.kind, "arc": v.arc + 1, "message": v.message }))
        .collect();
    let results = json!({
        "directed": g.is_directed(),
        "nodes": g.node_count(),
        "arcs": g.arc_count(),
        "criteria": g.dim(),
        "violations": violations,
    });
    if violations.is_empty() {
        Ok(results)
    } else {
        let mut f = Failure::input(format!("{} violation(s)", violations.len()));
        f.kind = "validation";
        f.results = Some(results);
        Err(f)
    }
}

/// Reads `c terminals s=<u> t=<v>` from a graph file, if present.
fn declared_terminals(text: &str) -> Option<(usize, usize)> {
    let line = text.lines().find_map(|l| l.trim().strip_prefix("c terminals "))?;
    let mut s = None;
    let mut t = None;
    for token in line.split_whitespace() {
        if let Some(v) = token.strip_prefix("s=") {
            s = v.parse().ok();
        } else if let Some(v) = token.strip_prefix("t=") {
            t = v.parse().ok();
        }
    }
    Some((s?, t?))
}

fn terminals(text: &str, n: usize, s: Option<usize>, t: Option<usize>) -> Result<(NodeId, NodeId), Failure> {
    let declared = declared_terminals(text);
    let s = s.or(declared.map(|d| d.0)).unwrap_or(1);
    let t = t.or(declared.map(|d| d.1)).unwrap_or(n);
    for (name, v) in [("source", s), ("target", t)] {
        if v == 0 || v > n {
            return Err(Failure::usage(format!("{name} {v} outside 1..{n}")));
        }
    }
    Ok((s - 1, t - 1))
}

fn load(q: &Query, report: &mut Report) -> Result<(WeightedGraph, NodeId, NodeId), Failure> {
    let text = report.read_input(&q.graph)?;
    let g = parse_graph(&text)?;
    let (s, t) = terminals(&text, g.node_count(), q.s, q.t)?;
    Ok((g, s, t))
}

fn weight_json(w: &WeightVector) -> Value {
    json!(w.components().iter().map(format_rational).collect::<Vec<_>>())
}

fn paths_json(paths: &[Path]) -> Vec<Value> {
    paths.iter().map(|p| json!({ "nodes": p.one_based(), "length": weight_json(p.length()) })).collect()
}

fn diversity_json(r: &DiversityReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn spdag(q: &Query, output: Option<&FsPath>, report: &mut Report) -> Outcome {
    let (g, s, t) = load(q, report)?;
    let dag = build_spdag(&g, s, t)?;
    if let Some(path) = output {
        std::fs::write(path, dag.serialize()).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    }
    let nodes: Vec<Value> = dag
        .nodes()
        .map(|v| {
            json!({
                "node": v + 1,
                "dist_from_s": weight_json(dag.dist_from_s(v).expect("dag node")),
                "dist_to_t": weight_json(dag.dist_to_t(v).expect("dag node")),
            })
        })
        .collect();
    let arcs: Vec<Value> = dag
        .arcs()
        .iter()
        .map(|a| json!({ "tail": a.tail + 1, "head": a.head + 1, "weight": weight_json(&a.weight) }))
        .collect();
    Ok(json!({
        "source": s + 1,
        "target": t + 1,
        "total": weight_json(dag.total()),
        "path_count": dag.count_paths().to_string(),
        "nodes": nodes,
        "arcs": arcs,
    }))
}

fn sensitive_set(args: &DisjointArgs, n: usize, report: &mut Report) -> Result<SensitiveSet, Failure> {
    match &args.sensitive {
        Some(path) => {
            let text = report.read_input(path)?;
            Ok(parse_sensitive(&text, n)?)
        }
        None => Ok(SensitiveSet::empty()),
    }
}

fn disjoint(args: &DisjointArgs, report: &mut Report) -> Outcome {
    let (g, s, t) = load(&args.query, report)?;
    let set = sensitive_set(args, g.node_count(), report)?;
    let dag = build_spdag(&g, s, t)?;
    let opts = SolveOptions { r: args.r, cost_base: args.cost_base.into(), cost_mode: args.cost_mode.into() };
    let solution = solve(&dag, args.variant.into(), &set, opts)?;
    let mut value = solution.to_json();
    value["sensitive_count"] = json!(set.len());
    Ok(value)
}

fn oracle(budget: &BudgetArgs, what: &OracleCommand, report: &mut Report) -> Outcome {
    let budget = OracleBudget { max_nodes: budget.max_nodes, max_paths: budget.max_paths, max_subsets: budget.max_subsets };
    match what {
        OracleCommand::Ksp { query, k } => {
            let (g, s, t) = load(query, report)?;
            let all = enum_paths_ordered(&g, s, t, budget)?;
            let shown = &all[..k.unwrap_or(all.len()).min(all.len())];
            Ok(json!({ "total_paths": all.len(), "count": shown.len(), "paths": paths_json(shown) }))
        }
        OracleCommand::Spdag { query } => {
            let (g, s, t) = load(query, report)?;
            let shortest = enum_shortest_paths(&g, s, t, budget)?;
            let total = shortest.first().map(|p| weight_json(p.length()));
            Ok(json!({ "total": total, "count": shortest.len(), "paths": paths_json(&shortest) }))
        }
        OracleCommand::Disjoint(args) => {
            let (g, s, t) = load(&args.query, report)?;
            let set = sensitive_set(args, g.node_count(), report)?;
            let variant: Variant = args.variant.into();
            let best = brute_force_best_set(&g, s, t, variant, &set, args.r, budget)?;
            Ok(json!({
                "variant": variant.name(),
                "objective": best.objective.to_json(),
                "witness": paths_json(&best.witness),
            }))
        }
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::usage(format!("missing --{flag}")))
}

fn generate(args: &GenArgs, report: &mut Report) -> Outcome {
    let family = match (args.family_pos, args.family_flag) {
        (Some(a), Some(b)) if a != b => return Err(Failure::usage("conflicting families")),
        (Some(f), _) | (None, Some(f)) => f,
        (None, None) => return Err(Failure::usage("missing family")),
    };
    let generated: Generated = match family {
        Family::Example1a => gen_example1a(need(args.q_bar, "q-bar")?, args.tower_width)?,
        Family::Example1b => gen_example1b(need(args.n_prime, "n-prime")?)?,
        Family::Example2Boundary => gen_example2_boundary(need(args.q_bar, "q-bar")?)?,
        Family::Random => gen_random(&RandomSpec {
            nodes: args.nodes,
            density: args.density,
            weight_min: args.weight_min,
            weight_max: args.weight_max,
            directed: args.directed,
            seed: args.seed,
        })?,
        Family::Example2 => {
            let base_path = need(args.base.as_ref(), "base")?;
            let text = report.read_input(base_path)?;
            let base = parse_graph(&text)?;
            let (s, t) = terminals(&text, base.node_count(), args.s, args.t)?;
            let v = need(args.split_node, "split-node")?;
            if v == 0 || v > base.node_count() {
                return Err(Failure::usage(format!("split node {v} outside 1..{}", base.node_count())));
            }
            let insert = match args.insert {
                InsertArg::Complete => Example2Insert::Complete { q_bar: need(args.q_bar, "q-bar")? },
                InsertArg::Towers => {
                    Example2Insert::Towers { towers: need(args.q_bar, "q-bar")?, tower_width: args.tower_width }
                }
                InsertArg::Diamonds => Example2Insert::Diamonds { diamonds: need(args.n_prime, "n-prime")? },
            };
            gen_example2(&base, s, t, v - 1, insert)?
        }
    };
    let comments = vec![
        format!("provenance {}", generated.provenance),
        format!("terminals s={} t={}", generated.s + 1, generated.t + 1),
    ];
    let text = serialize_graph_with_comments(&generated.graph, &comments);
    std::fs::write(&args.output, &text).map_err(|e| Failure::input(format!("{}: {e}", args.output.display())))?;
    Ok(json!({
        "output": args.output.display().to_string(),
        "sha256": sha256_hex(text.as_bytes()),
        "provenance": generated.provenance,
        "directed": generated.graph.is_directed(),
        "nodes": generated.graph.node_count(),
        "arcs": generated.graph.arc_count(),
        "source": generated.s + 1,
        "target": generated.t + 1,
    }))
}

#[derive(Default)]
struct Tally {
    holds: u64,
    violated: u64,
    vacuous: u64,
}

impl Tally {
    fn add(&mut self, v: &Verdict) {
        match v {
            Verdict::Holds { .. } => self.holds += 1,
            Verdict::Violated { .. } => self.violated += 1,
            Verdict::Vacuous { .. } => self.vacuous += 1,
        }
    }

    fn json(&self) -> Value {
        json!({ "holds": self.holds, "violated": self.violated, "vacuous": self.vacuous })
    }
}

fn claims(dir: &FsPath, prefix: usize, report: &mut Report) -> Outcome {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "graph"))
        .collect();
    files.sort();

    let mut loaded: Vec<(String, Result<(WeightedGraph, NodeId, NodeId), Failure>)> = Vec::new();
    for path in &files {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let parsed = report.read_input(path).and_then(|text| {
            let g = parse_graph(&text)?;
            let (s, t) = terminals(&text, g.node_count(), None, None)?;
            Ok((g, s, t))
        });
        loaded.push((name, parsed));
    }
    let ready: Vec<(&WeightedGraph, NodeId, NodeId)> =
        loaded.iter().filter_map(|(_, r)| r.as_ref().ok().map(|(g, s, t)| (g, *s, *t))).collect();
    let mut checked = check_corpus(&ready, prefix).into_iter();

    let (mut claim1, mut claim2) = (Tally::default(), Tally::default());
    let (mut errors, mut conjecture_met) = (0u64, 0u64);
    let mut instances = Vec::with_capacity(loaded.len());
    for (name, parsed) in &loaded {
        let outcome = match parsed {
            Ok((_, s, t)) => {
                let checked = checked.next().expect("one result per instance");
                match checked {
                    Ok(r) => {
                        claim1.add(&r.claim1);
                        claim2.add(&r.claim2);
                        if r.conjecture.first_prefix_meeting_both.is_some() {
                            conjecture_met += 1;
                        }
                        json!({ "file": name, "source": s + 1, "target": t + 1, "report": diversity_json(&r) })
                    }
                    Err(e) => {
                        errors += 1;
                        json!({ "file": name, "error": e.to_string() })
                    }
                }
            }
            Err(f) => {
                errors += 1;
                json!({ "file": name, "error": f.message })
            }
        };
        instances.push(outcome);
    }
    Ok(json!({
        "prefix": prefix,
        "summary": {
            "instances": loaded.len(),
            "errors": errors,
            "claim1": claim1.json(),
            "claim2": claim2.json(),
            "conjecture_met": conjecture_met,
        },
        "instances": instances,
    }))
}
