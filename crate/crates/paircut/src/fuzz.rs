//! Randomized cross-validation: every generated instance runs through the
//! fast pipeline, the exhaustive oracles, and the structural
//! constructions, and any disagreement is reported with the spec that
//! regenerates the offending instance.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aset::a_set;
use crate::aset::a_set_by_deletion;
use crate::coding::{extend_code, validate_code};
use crate::flow::max_flow;
use crate::generate::{generate, GenSpec};
use crate::graph::UnicastInstance;
use crate::oracle::{exhaustive_gf2_solvable, SearchBudget};
use crate::par;
use crate::solvability::{decide, decide_by_asets, verify_certificate, Branch, Decision};
use crate::witness::{avoiding_path, disjoint_st_paths, find_embedding, verify_embedding};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FuzzConfig {
    pub count: usize,
    pub max_nodes: usize,
    pub max_edges: usize,
    pub seed: u64,
    /// Raw-edge bound above which the exponential code-search oracle is
    /// skipped.
    pub oracle_edge_limit: usize,
}

impl FuzzConfig {
    pub fn new(count: usize, max_nodes: usize, max_edges: usize, seed: u64) -> FuzzConfig {
        FuzzConfig {
            count,
            max_nodes,
            max_edges,
            seed,
            oracle_edge_limit: 16,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mismatch {
    pub index: usize,
    pub spec: GenSpec,
    pub detail: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.spec;
        write!(
            f,
            "instance {} (gen --nodes {} --edges {} --seed {}{}): {}",
            self.index,
            s.nodes,
            s.edges,
            s.seed,
            if s.allow_parallel {
                " --allow-parallel"
            } else {
                ""
            },
            self.detail
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FuzzReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Runs the standard check battery over `count` seeded instances.
pub fn run_fuzz(config: &FuzzConfig) -> FuzzReport {
    run_fuzz_with(config, default_checks)
}

/// Same driver with a custom check, used to prove the harness actually
/// catches and reports faults.
pub fn run_fuzz_with<F>(config: &FuzzConfig, check: F) -> FuzzReport
where
    F: Fn(&FuzzConfig, &UnicastInstance) -> Vec<String> + Sync + Send,
{
    assert!(
        config.max_nodes >= 2 && config.max_edges >= 1,
        "fuzzing needs room for at least one edge"
    );
    let specs: Vec<(usize, GenSpec)> = draw_specs(config).into_iter().enumerate().collect();
    let results = par::map(specs, |(index, spec)| {
        let inst = generate(&spec).expect("drawn specs are valid");
        (index, spec, check(config, &inst))
    });
    let mut mismatches = Vec::new();
    for (index, spec, problems) in results {
        for detail in problems {
            mismatches.push(Mismatch {
                index,
                spec,
                detail,
            });
        }
    }
    FuzzReport {
        checked: config.count,
        mismatches,
    }
}

fn draw_specs(config: &FuzzConfig) -> Vec<GenSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.count)
        .map(|_| {
            let nodes = rng.random_range(2..=config.max_nodes);
            let allow_parallel = rng.random_range(0..4u8) == 0;
            let cap = if allow_parallel {
                config.max_edges
            } else {
                config.max_edges.min(nodes * (nodes - 1) / 2)
            };
            let mut spec = GenSpec::new(nodes, rng.random_range(1..=cap), rng.random());
            spec.allow_parallel = allow_parallel;
            spec
        })
        .collect()
}

/// The full battery. Each returned string is one observed disagreement.
pub fn default_checks(config: &FuzzConfig, inst: &UnicastInstance) -> Vec<String> {
    let mut problems = Vec::new();
    let v = decide(inst);
    let aug = &v.aug;

    if inst.dag.edge_count() <= config.oracle_edge_limit {
        match exhaustive_gf2_solvable(aug, &SearchBudget::code_search()) {
            Ok(oracle) => {
                let fast = v.decision == Decision::Solvable;
                if oracle != fast {
                    problems.push(format!(
                        "code search finds solvable={oracle} but the pipeline says {} ({})",
                        v.decision, v.branch
                    ));
                }
            }
            Err(e) => problems.push(format!("code-search oracle gave up: {e}")),
        }
    }

    let r = aug.roles;
    let cross = [(r.s1, r.t1), (r.s2, r.t2), (r.s1, r.t2), (r.s2, r.t1)]
        .map(|(s, t)| max_flow(&aug.dag, s, t).0);
    if cross == [1, 1, 1, 1] {
        match decide_by_asets(inst) {
            Ok(w) => {
                if w.decision != v.decision {
                    problems.push(format!(
                        "bottleneck characterization says {}, pipeline says {}",
                        w.decision, v.decision
                    ));
                }
            }
            Err(e) => problems.push(format!("characterization refused its own hypothesis: {e}")),
        }
    }

    if v.decision == Decision::Solvable {
        match find_embedding(aug) {
            Ok((tmpl, emb)) => {
                if !verify_embedding(aug, &tmpl, &emb) {
                    problems.push(format!(
                        "embedding of template {} fails its conditions",
                        tmpl.tag
                    ));
                }
                match extend_code(aug, &tmpl, &emb) {
                    Ok(code) => {
                        if !validate_code(aug, &code) {
                            problems.push("extended code is not a valid solution".into());
                        }
                    }
                    Err(e) => problems.push(format!("embedding does not carry a code: {e}")),
                }
            }
            Err(e) => problems.push(format!("solvable instance has no embedding: {e}")),
        }
    } else if v.branch == Branch::NoCrossPath {
        match &v.certificate {
            Some(cert) => {
                if !verify_certificate(aug, cert) {
                    problems.push(format!(
                        "certificate on edge {:?} does not replay",
                        cert.edge
                    ));
                }
            }
            None => problems.push("blocked instance came without a certificate".into()),
        }
    }

    for session in 1..=2 {
        let (s, t) = (r.source(session), r.sink(session));
        if max_flow(&aug.dag, s, t).0 == 0 {
            continue;
        }
        let fast = a_set(&aug.dag, s, t).expect("flow checked");
        let slow = a_set_by_deletion(&aug.dag, s, t).expect("flow checked");
        if fast.edges != slow.edges {
            problems.push(format!(
                "session {session} bottleneck mismatch: fast {:?} vs deletion {:?}",
                fast.edges, slow.edges
            ));
        }
    }

    if let Ok((side, path)) = avoiding_path(inst) {
        let other = 3 - side;
        let oset = a_set(&inst.dag, inst.roles.source(other), inst.roles.sink(other))
            .expect("avoiding_path checked the flow");
        if path.edges().iter().any(|&e| oset.contains(e)) {
            problems.push(format!(
                "avoiding path for session {side} touches the other bottleneck"
            ));
        }
        if path.tail(&inst.dag) != inst.roles.source(side)
            || path.head(&inst.dag) != inst.roles.sink(side)
        {
            problems.push("avoiding path has wrong endpoints".into());
        }
    }

    if let Ok((p, q)) = disjoint_st_paths(inst) {
        let a11 = a_set(&inst.dag, inst.roles.s1, inst.roles.t1).expect("flow checked");
        let a22 = a_set(&inst.dag, inst.roles.s2, inst.roles.t2).expect("flow checked");
        if p.shared_edges(&q) != a11.intersect(&a22) {
            problems.push("session paths do not meet exactly on the shared bottleneck".into());
        }
    }

    problems
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_run_passes() {
        let report = run_fuzz(&FuzzConfig::new(0, 6, 8, 0));
        assert!(report.passed());
        assert_eq!(report.checked, 0);
    }

    #[test]
    fn standard_battery_passes_on_small_instances() {
        let report = run_fuzz(&FuzzConfig::new(60, 7, 10, 42));
        assert!(report.passed(), "{:?}", report.mismatches);
        assert_eq!(report.checked, 60);
    }

    #[test]
    fn injected_fault_is_reported_with_a_reproducing_spec() {
        // Cripple the bottleneck comparison: drop the last edge from the
        // fast result before comparing, as if the criticality test missed
        // one edge.
        let config = FuzzConfig::new(40, 6, 8, 7);
        let report = run_fuzz_with(&config, |_, inst| {
            let v = decide(inst);
            let r = v.aug.roles;
            if max_flow(&v.aug.dag, r.s1, r.t1).0 == 0 {
                return Vec::new();
            }
            let mut fast = a_set(&v.aug.dag, r.s1, r.t1).unwrap().edges;
            fast.pop();
            let slow = a_set_by_deletion(&v.aug.dag, r.s1, r.t1).unwrap().edges;
            if fast != slow {
                vec!["bottleneck mismatch".into()]
            } else {
                Vec::new()
            }
        });
        assert!(!report.passed());
        let m = &report.mismatches[0];
        assert_eq!(m.detail, "bottleneck mismatch");
        // the spec alone reproduces the instance that tripped the check
        let again = generate(&m.spec).unwrap();
        let v = decide(&again);
        assert!(max_flow(&v.aug.dag, v.aug.roles.s1, v.aug.roles.t1).0 >= 1);
        assert!(m.to_string().contains(&format!("--seed {}", m.spec.seed)));
    }

    #[test]
    fn mismatches_stay_sorted_by_instance_index() {
        let config = FuzzConfig::new(25, 5, 6, 3);
        let report = run_fuzz_with(&config, |_, inst| {
            vec![format!("edges={}", inst.dag.edge_count())]
        });
        assert_eq!(report.mismatches.len(), 25);
        for (i, m) in report.mismatches.iter().enumerate() {
            assert_eq!(m.index, i);
        }
    }
}
