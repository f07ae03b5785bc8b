//! The bottleneck set of a session: edges that lie in every minimum cut,
//! equivalently in every maximum family of edge-disjoint paths, equivalently
//! whose removal lowers the maximum flow by one.

use crate::flow::{max_flow_with_banned, FlowState, PathFamily};
use crate::graph::{Dag, EdgeId, NodeId};
use crate::par;
use crate::path::Path;
use thiserror::Error;

/// Bottleneck edges of one (source, sink) pair, topologically sorted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ASet {
    pub source: NodeId,
    pub sink: NodeId,
    pub flow: usize,
    pub edges: Vec<EdgeId>,
}

impl ASet {
    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Edges present in both sets, in this set's order.
    pub fn intersect(&self, other: &ASet) -> Vec<EdgeId> {
        self.edges
            .iter()
            .copied()
            .filter(|e| other.contains(*e))
            .collect()
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum AsetError {
    #[error("no path from source to sink")]
    NoFlow,
    #[error("expected flow exactly 1, found {0}")]
    FlowNotOne(usize),
    #[error("gap between consecutive bottleneck edges carries flow {0} < 2")]
    BridgeFlowViolation(usize),
    #[error("chain endpoints need a single-out-edge source and single-in-edge sink")]
    TerminalDegree,
}

/// Computes the bottleneck set from one maximum flow: a saturated edge
/// belongs to it exactly when the residual graph offers no way to reroute
/// its unit from tail to head.
pub fn a_set(dag: &Dag, s: NodeId, t: NodeId) -> Result<ASet, AsetError> {
    let mut state = FlowState::new(dag, &[]);
    let flow = state.run(s, t);
    if flow == 0 {
        return Err(AsetError::NoFlow);
    }
    let mut edges: Vec<EdgeId> = (0..dag.edge_count())
        .map(EdgeId)
        .filter(|&e| {
            if !state.saturated[e.0] {
                return false;
            }
            let reach = state.residual_reachable_skipping(dag.tail(e), Some(e));
            !reach[dag.head(e).0]
        })
        .collect();
    dag.sort_edges_topologically(&mut edges);
    Ok(ASet {
        source: s,
        sink: t,
        flow,
        edges,
    })
}

/// Reference computation: re-runs the maximum flow once per deleted edge.
pub fn a_set_by_deletion(dag: &Dag, s: NodeId, t: NodeId) -> Result<ASet, AsetError> {
    let (flow, _) = max_flow_with_banned(dag, s, t, &[]);
    if flow == 0 {
        return Err(AsetError::NoFlow);
    }
    let candidates: Vec<EdgeId> = (0..dag.edge_count()).map(EdgeId).collect();
    let hits = par::map(candidates, |e| {
        let (v, _) = max_flow_with_banned(dag, s, t, &[e]);
        debug_assert!(v == flow || v + 1 == flow);
        (e, v < flow)
    });
    let mut edges: Vec<EdgeId> = hits
        .into_iter()
        .filter_map(|(e, hit)| hit.then_some(e))
        .collect();
    dag.sort_edges_topologically(&mut edges);
    Ok(ASet {
        source: s,
        sink: t,
        flow,
        edges,
    })
}

/// A flow-1 bottleneck set split into maximal consecutive runs, with the
/// two edge-disjoint detour paths that bridge each gap between runs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainDecomposition {
    pub a_set: ASet,
    pub runs: Vec<Path>,
    pub bridges: Vec<(Path, Path)>,
}

/// Splits the bottleneck edges of a flow-1 pair into runs and bridges.
/// Requires the source to have a single out-edge and the sink a single
/// in-edge so the chain starts and ends at the terminals; augmented
/// instances satisfy this by construction.
pub fn chain_decomposition(
    dag: &Dag,
    s: NodeId,
    t: NodeId,
) -> Result<ChainDecomposition, AsetError> {
    let set = a_set(dag, s, t)?;
    if set.flow != 1 {
        return Err(AsetError::FlowNotOne(set.flow));
    }
    if dag.out_edges(s).len() != 1 || dag.in_edges(t).len() != 1 {
        return Err(AsetError::TerminalDegree);
    }
    debug_assert_eq!(dag.tail(set.edges[0]), s);
    debug_assert_eq!(dag.head(*set.edges.last().unwrap()), t);

    let mut runs: Vec<Vec<EdgeId>> = vec![vec![set.edges[0]]];
    for &e in &set.edges[1..] {
        let last = *runs.last().unwrap().last().unwrap();
        if dag.head(last) == dag.tail(e) {
            runs.last_mut().unwrap().push(e);
        } else {
            runs.push(vec![e]);
        }
    }
    let mut bridges = Vec::with_capacity(runs.len().saturating_sub(1));
    for pair in runs.windows(2) {
        let from = dag.head(*pair[0].last().unwrap());
        let to = dag.tail(pair[1][0]);
        let (value, family) = crate::flow::max_flow(dag, from, to);
        if value < 2 {
            return Err(AsetError::BridgeFlowViolation(value));
        }
        bridges.push((family.paths[0].clone(), family.paths[1].clone()));
    }
    let runs = runs
        .into_iter()
        .map(|edges| Path::from_edges(dag, edges).expect("run edges are consecutive"))
        .collect();
    Ok(ChainDecomposition {
        a_set: set,
        runs,
        bridges,
    })
}

impl ChainDecomposition {
    /// The full source-to-sink path that follows every run and, at each
    /// gap, the chosen branch of the bridge (0 or 1).
    pub fn assemble(&self, dag: &Dag, pick: impl Fn(usize) -> usize) -> Path {
        let mut path = self.runs[0].clone();
        for (i, run) in self.runs[1..].iter().enumerate() {
            let branch = match pick(i) {
                0 => &self.bridges[i].0,
                _ => &self.bridges[i].1,
            };
            path = path.concat(dag, branch).expect("bridge starts at run head");
            path = path.concat(dag, run).expect("run starts at bridge head");
        }
        path
    }
}

/// Intersection of the union-edge-sets of all maximal path families; used
/// in tests as an independent characterization of [`a_set`].
pub fn intersect_families(dag: &Dag, families: &[PathFamily]) -> Vec<EdgeId> {
    let unions: Vec<Vec<EdgeId>> = families.iter().map(|f| f.union_edges()).collect();
    let mut out: Vec<EdgeId> = match unions.first() {
        Some(first) => first
            .iter()
            .copied()
            .filter(|e| unions[1..].iter().all(|u| u.binary_search(e).is_ok()))
            .collect(),
        None => Vec::new(),
    };
    out.dedup();
    dag.sort_edges_topologically(&mut out);
    out
}
