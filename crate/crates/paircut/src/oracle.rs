//! Brute-force reference computations. Everything here is exponential and
//! budget-guarded; the point is independence from the fast paths, not speed.

use crate::coding::{Gf2Pair, LinearCode};
use crate::flow::{Cut, PathFamily};
use crate::graph::{Dag, EdgeId, NodeId, UnicastInstance};
use crate::path::Path;
use thiserror::Error;

/// Caps for exhaustive searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_steps: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 12,
            max_edges: 18,
            max_steps: 50_000_000,
        }
    }
}

impl SearchBudget {
    /// Budget for the code search, which counts only the original
    /// (non-auxiliary) edges against the edge cap.
    pub fn code_search() -> Self {
        SearchBudget {
            max_nodes: usize::MAX,
            max_edges: 16,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum OracleError {
    #[error("instance exceeds the search budget ({0})")]
    BudgetExceeded(&'static str),
}

fn all_simple_paths(
    dag: &Dag,
    s: NodeId,
    t: NodeId,
    budget: &SearchBudget,
) -> Result<Vec<Path>, OracleError> {
    let mut out = Vec::new();
    let mut stack: Vec<EdgeId> = Vec::new();
    let mut steps = 0u64;
    fn dfs(
        dag: &Dag,
        at: NodeId,
        t: NodeId,
        stack: &mut Vec<EdgeId>,
        out: &mut Vec<Path>,
        steps: &mut u64,
        max_steps: u64,
    ) -> Result<(), OracleError> {
        *steps += 1;
        if *steps > max_steps {
            return Err(OracleError::BudgetExceeded("path enumeration steps"));
        }
        if at == t {
            if !stack.is_empty() {
                out.push(Path::from_edges(dag, stack.clone()).unwrap());
            }
            return Ok(());
        }
        for &e in dag.out_edges(at) {
            stack.push(e);
            dfs(dag, dag.head(e), t, stack, out, steps, max_steps)?;
            stack.pop();
        }
        Ok(())
    }
    dfs(
        dag,
        s,
        t,
        &mut stack,
        &mut out,
        &mut steps,
        budget.max_steps,
    )?;
    Ok(out)
}

/// Every maximal family of `f` pairwise edge-disjoint s-t paths,
/// deduplicated by union edge set.
pub fn enumerate_path_families(
    dag: &Dag,
    s: NodeId,
    t: NodeId,
    f: usize,
    budget: &SearchBudget,
) -> Result<Vec<PathFamily>, OracleError> {
    if dag.node_count() > budget.max_nodes {
        return Err(OracleError::BudgetExceeded("node count"));
    }
    if dag.edge_count() > budget.max_edges {
        return Err(OracleError::BudgetExceeded("edge count"));
    }
    let paths = all_simple_paths(dag, s, t, budget)?;
    let mut families = Vec::new();
    let mut seen_unions: std::collections::HashSet<Vec<EdgeId>> = Default::default();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = vec![false; dag.edge_count()];
    let mut steps = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn search(
        s: NodeId,
        t: NodeId,
        paths: &[Path],
        f: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        used: &mut [bool],
        seen_unions: &mut std::collections::HashSet<Vec<EdgeId>>,
        families: &mut Vec<PathFamily>,
        steps: &mut u64,
        max_steps: u64,
    ) -> Result<(), OracleError> {
        *steps += 1;
        if *steps > max_steps {
            return Err(OracleError::BudgetExceeded("family enumeration steps"));
        }
        if chosen.len() == f {
            let family = PathFamily {
                source: s,
                sink: t,
                paths: chosen.iter().map(|&i| paths[i].clone()).collect(),
            };
            if seen_unions.insert(family.union_edges()) {
                families.push(family);
            }
            return Ok(());
        }
        for i in start..paths.len() {
            if paths[i].edges().iter().any(|e| used[e.0]) {
                continue;
            }
            for e in paths[i].edges() {
                used[e.0] = true;
            }
            chosen.push(i);
            search(
                s,
                t,
                paths,
                f,
                i + 1,
                chosen,
                used,
                seen_unions,
                families,
                steps,
                max_steps,
            )?;
            chosen.pop();
            for e in paths[i].edges() {
                used[e.0] = false;
            }
        }
        Ok(())
    }
    search(
        s,
        t,
        &paths,
        f,
        0,
        &mut chosen,
        &mut used,
        &mut seen_unions,
        &mut families,
        &mut steps,
        budget.max_steps,
    )?;
    Ok(families)
}

/// All s-t cuts by direct enumeration of vertex partitions.
pub fn enumerate_all_cuts(
    dag: &Dag,
    s: NodeId,
    t: NodeId,
    budget: &SearchBudget,
) -> Result<Vec<Cut>, OracleError> {
    let n = dag.node_count();
    if n > budget.max_nodes {
        return Err(OracleError::BudgetExceeded("node count"));
    }
    let free: Vec<NodeId> = (0..n).map(NodeId).filter(|&v| v != s && v != t).collect();
    let mut cuts = Vec::new();
    for mask in 0u64..(1u64 << free.len()) {
        let mut side = vec![false; n];
        side[s.0] = true;
        for (i, &v) in free.iter().enumerate() {
            if mask & (1 << i) != 0 {
                side[v.0] = true;
            }
        }
        let edges: Vec<EdgeId> = dag
            .edges()
            .filter(|(_, e)| side[e.tail.0] && !side[e.head.0])
            .map(|(id, _)| id)
            .collect();
        let source_side = (0..n).filter(|&v| side[v]).map(NodeId).collect();
        cuts.push(Cut { edges, source_side });
    }
    Ok(cuts)
}

/// Union of all minimum-capacity cuts, another reference characterization
/// of the bottleneck set.
pub fn union_of_min_cuts(
    dag: &Dag,
    s: NodeId,
    t: NodeId,
    budget: &SearchBudget,
) -> Result<Vec<EdgeId>, OracleError> {
    let cuts = enumerate_all_cuts(dag, s, t, budget)?;
    let best = cuts.iter().map(|c| c.edges.len()).min().unwrap_or(0);
    let mut out: Vec<EdgeId> = Vec::new();
    for c in cuts.iter().filter(|c| c.edges.len() == best) {
        for &e in &c.edges {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    dag.sort_edges_topologically(&mut out);
    Ok(out)
}

struct CodeSearch<'a> {
    inst: &'a UnicastInstance,
    edge_order: Vec<EdgeId>,
    source_pair: Vec<Option<Gf2Pair>>,
    sink_requirement: Vec<Option<Gf2Pair>>,
    steps: u64,
    max_steps: u64,
}

impl<'a> CodeSearch<'a> {
    fn new(
        inst: &'a UnicastInstance,
        budget: &SearchBudget,
    ) -> Result<CodeSearch<'a>, OracleError> {
        let info = inst.info.as_ref().expect("augmented instance required");
        let dag = &inst.dag;
        let aux: usize = info
            .source_edges
            .iter()
            .chain(info.sink_edges.iter())
            .map(Vec::len)
            .sum();
        if dag.edge_count() - aux > budget.max_edges {
            return Err(OracleError::BudgetExceeded("edge count"));
        }
        let mut source_pair = vec![None; dag.edge_count()];
        let mut sink_requirement = vec![None; dag.edge_count()];
        for session in 0..2 {
            let pair = if session == 0 {
                Gf2Pair::X1
            } else {
                Gf2Pair::X2
            };
            for &e in &info.source_edges[session] {
                source_pair[e.0] = Some(pair);
            }
            for &e in &info.sink_edges[session] {
                sink_requirement[e.0] = Some(pair);
            }
        }
        // edges sorted so that all in-edges of a tail come first
        let mut edge_order: Vec<EdgeId> = (0..dag.edge_count()).map(EdgeId).collect();
        edge_order.sort_by_key(|&e| dag.edge_topo_key(e));
        Ok(CodeSearch {
            inst,
            edge_order,
            source_pair,
            sink_requirement,
            steps: 0,
            max_steps: budget.max_steps,
        })
    }

    /// Depth-first assignment in topological edge order; `emit` sees every
    /// complete valid assignment and says whether to keep searching.
    fn run(
        &mut self,
        depth: usize,
        pairs: &mut Vec<Gf2Pair>,
        emit: &mut dyn FnMut(&[Gf2Pair]) -> bool,
    ) -> Result<bool, OracleError> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(OracleError::BudgetExceeded("code search steps"));
        }
        if depth == self.edge_order.len() {
            return Ok(emit(pairs));
        }
        let e = self.edge_order[depth];
        let dag = &self.inst.dag;
        let candidates: Vec<Gf2Pair> = if let Some(p) = self.source_pair[e.0] {
            vec![p]
        } else {
            let ins: Vec<Gf2Pair> = dag
                .in_edges(dag.tail(e))
                .iter()
                .map(|&x| pairs[x.0])
                .collect();
            Gf2Pair::span(&ins)
        };
        for cand in candidates {
            if let Some(req) = self.sink_requirement[e.0] {
                if cand != req {
                    continue;
                }
            }
            pairs[e.0] = cand;
            if !self.run(depth + 1, pairs, emit)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Whether any assignment of coefficient pairs to edges is locally
/// computable and delivers each session's symbol to its sink. Decided by
/// exhaustive search over spans in topological edge order.
pub fn exhaustive_gf2_solvable(
    aug: &UnicastInstance,
    budget: &SearchBudget,
) -> Result<bool, OracleError> {
    assert!(
        aug.is_augmented(),
        "code search runs on augmented instances"
    );
    // a sink no route can reach never carries its session's symbol
    let info = aug.info.as_ref().unwrap();
    for session in 0..2 {
        if info.source_edges[session].is_empty() || info.sink_edges[session].is_empty() {
            return Ok(false);
        }
        let reach = crate::flow::reachable_set(
            &aug.dag,
            if session == 0 {
                aug.roles.s1
            } else {
                aug.roles.s2
            },
            &vec![false; aug.dag.edge_count()],
        );
        let sink = if session == 0 {
            aug.roles.t1
        } else {
            aug.roles.t2
        };
        if !reach[sink.0] {
            return Ok(false);
        }
    }
    let mut search = CodeSearch::new(aug, budget)?;
    let mut pairs = vec![Gf2Pair::ZERO; aug.dag.edge_count()];
    let mut found = false;
    search.run(0, &mut pairs, &mut |_| {
        found = true;
        false
    })?;
    Ok(found)
}

/// Every valid code on the instance, for uniqueness checks on small
/// networks. Capped at `limit` results.
pub fn enumerate_valid_codes(
    aug: &UnicastInstance,
    limit: usize,
    budget: &SearchBudget,
) -> Result<Vec<LinearCode>, OracleError> {
    assert!(
        aug.is_augmented(),
        "code search runs on augmented instances"
    );
    let mut search = CodeSearch::new(aug, budget)?;
    let mut pairs = vec![Gf2Pair::ZERO; aug.dag.edge_count()];
    let mut codes = Vec::new();
    search.run(0, &mut pairs, &mut |assignment| {
        codes.push(LinearCode::from_pairs(assignment.to_vec()));
        codes.len() < limit
    })?;
    Ok(codes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_and_build;

    #[test]
    fn diamond_has_one_maximal_two_path_family() {
        let inst = validate_and_build(
            &[("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")],
            ["s", "t", "s", "t"],
        )
        .unwrap();
        let fams = enumerate_path_families(
            &inst.dag,
            inst.roles.s1,
            inst.roles.t1,
            2,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].union_edges().len(), 4);
    }

    #[test]
    fn parallel_tail_gives_two_families_sharing_the_neck() {
        let inst = validate_and_build(&[("s", "a"), ("a", "t"), ("a", "t")], ["s", "t", "s", "t"])
            .unwrap();
        let fams = enumerate_path_families(
            &inst.dag,
            inst.roles.s1,
            inst.roles.t1,
            1,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(fams.len(), 2);
        let shared = crate::aset::intersect_families(&inst.dag, &fams);
        assert_eq!(shared, vec![EdgeId(0)]);
    }

    #[test]
    fn chain_has_single_family() {
        let inst = validate_and_build(&[("s", "a"), ("a", "t")], ["s", "t", "s", "t"]).unwrap();
        let fams = enumerate_path_families(
            &inst.dag,
            inst.roles.s1,
            inst.roles.t1,
            1,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(fams.len(), 1);
    }

    #[test]
    fn cut_enumeration_counts_partitions() {
        let inst = validate_and_build(&[("s", "a"), ("a", "t")], ["s", "t", "s", "t"]).unwrap();
        let cuts = enumerate_all_cuts(&inst.dag, inst.roles.s1, inst.roles.t1, &Default::default())
            .unwrap();
        assert_eq!(cuts.len(), 2); // a on either side
        let widths: Vec<usize> = cuts.iter().map(|c| c.edges.len()).collect();
        assert!(widths.contains(&1));
    }

    #[test]
    fn min_cut_union_of_diamond_is_everything() {
        let inst = validate_and_build(
            &[("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")],
            ["s", "t", "s", "t"],
        )
        .unwrap();
        let union = union_of_min_cuts(&inst.dag, inst.roles.s1, inst.roles.t1, &Default::default())
            .unwrap();
        assert_eq!(union.len(), 4);
    }

    #[test]
    fn budget_rejects_oversized_instances() {
        let edges: Vec<(String, String)> = (0..20)
            .map(|i| (format!("n{i}"), format!("n{}", i + 1)))
            .collect();
        let pairs: Vec<(&str, &str)> = edges
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let inst = validate_and_build(&pairs, ["n0", "n20", "n0", "n20"]).unwrap();
        assert_eq!(
            enumerate_all_cuts(&inst.dag, inst.roles.s1, inst.roles.t1, &Default::default())
                .unwrap_err(),
            OracleError::BudgetExceeded("node count")
        );
    }

    #[test]
    fn bowtie_is_not_codable() {
        let inst = validate_and_build(
            &[
                ("s1", "a"),
                ("s2", "a"),
                ("a", "b"),
                ("b", "t1"),
                ("b", "t2"),
            ],
            ["s1", "t1", "s2", "t2"],
        )
        .unwrap();
        let aug = inst.unit_augmented();
        assert!(!exhaustive_gf2_solvable(&aug, &SearchBudget::code_search()).unwrap());
    }

    #[test]
    fn butterfly_is_codable() {
        let inst = validate_and_build(
            &[
                ("s1", "v1"),
                ("s2", "v2"),
                ("v1", "v3"),
                ("v2", "v3"),
                ("v3", "v4"),
                ("v1", "v5"),
                ("v2", "v6"),
                ("v4", "v5"),
                ("v4", "v6"),
                ("v6", "t1"),
                ("v5", "t2"),
            ],
            ["s1", "t1", "s2", "t2"],
        )
        .unwrap();
        let aug = inst.unit_augmented();
        assert!(exhaustive_gf2_solvable(&aug, &SearchBudget::code_search()).unwrap());
    }

    #[test]
    fn disjoint_pairs_are_codable() {
        let inst =
            validate_and_build(&[("s1", "t1"), ("s2", "t2")], ["s1", "t1", "s2", "t2"]).unwrap();
        let aug = inst.unit_augmented();
        assert!(exhaustive_gf2_solvable(&aug, &SearchBudget::code_search()).unwrap());
    }
}
