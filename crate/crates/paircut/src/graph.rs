//! Directed acyclic multigraph with dense integer ids and the unicast
//! instance built on top of it (two source/sink pairs, optional information
//! edges added by augmentation).

use std::collections::BinaryHeap;
use std::collections::HashMap;

use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub usize);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
}

/// Immutable acyclic multigraph. Parallel edges are distinct ids with equal
/// endpoints; all adjacency lists are sorted by edge id.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dag {
    edges: Vec<Edge>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    topo_rank: Vec<usize>,
    topo_order: Vec<NodeId>,
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum BuildError {
    #[error("edge list contains a directed cycle")]
    CycleDetected,
    #[error("node `{0}` does not appear in the edge list")]
    UnknownNode(String),
    #[error("session {0} has identical source and sink")]
    DegenerateRoles(u8),
    #[error("edge list is empty")]
    EmptyEdgeList,
    #[error("edge endpoint {0:?} out of range for {1} nodes")]
    NodeOutOfRange(NodeId, usize),
}

impl Dag {
    /// Builds a DAG over nodes `0..node_count` from an edge list, rejecting
    /// cycles. Self-loops count as cycles.
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Dag, BuildError> {
        let mut es = Vec::with_capacity(edges.len());
        for &(tail, head) in edges {
            if tail.0 >= node_count {
                return Err(BuildError::NodeOutOfRange(tail, node_count));
            }
            if head.0 >= node_count {
                return Err(BuildError::NodeOutOfRange(head, node_count));
            }
            es.push(Edge { tail, head });
        }
        let mut out_edges = vec![Vec::new(); node_count];
        let mut in_edges = vec![Vec::new(); node_count];
        for (i, e) in es.iter().enumerate() {
            out_edges[e.tail.0].push(EdgeId(i));
            in_edges[e.head.0].push(EdgeId(i));
        }
        let (topo_order, topo_rank) = kahn_order(node_count, &es, &out_edges)?;
        Ok(Dag {
            edges: es,
            out_edges,
            in_edges,
            topo_rank,
            topo_order,
        })
    }

    pub fn node_count(&self) -> usize {
        self.out_edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e.0]
    }

    pub fn tail(&self, e: EdgeId) -> NodeId {
        self.edges[e.0].tail
    }

    pub fn head(&self, e: EdgeId) -> NodeId {
        self.edges[e.0].head
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Edge)> + '_ {
        self.edges.iter().enumerate().map(|(i, &e)| (EdgeId(i), e))
    }

    pub fn out_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.in_edges[v.0]
    }

    /// Nodes in topological order; ties between simultaneously ready nodes
    /// are broken by smallest node id.
    pub fn topological_order(&self) -> &[NodeId] {
        &self.topo_order
    }

    pub fn topo_rank(&self, v: NodeId) -> usize {
        self.topo_rank[v.0]
    }

    /// Total order on edges consistent with the up-link relation: an edge
    /// reachable from another sorts after it.
    pub fn edge_topo_key(&self, e: EdgeId) -> (usize, usize, usize) {
        let ed = self.edges[e.0];
        (self.topo_rank[ed.tail.0], self.topo_rank[ed.head.0], e.0)
    }

    pub fn sort_edges_topologically(&self, edges: &mut [EdgeId]) {
        edges.sort_by_key(|&e| self.edge_topo_key(e));
    }

    /// Same nodes and edge ids with every edge direction flipped.
    pub fn reversed(&self) -> Dag {
        let flipped: Vec<(NodeId, NodeId)> = self.edges.iter().map(|e| (e.head, e.tail)).collect();
        Dag::from_edges(self.node_count(), &flipped).expect("reversal of a DAG is a DAG")
    }
}

fn kahn_order(
    node_count: usize,
    edges: &[Edge],
    out_edges: &[Vec<EdgeId>],
) -> Result<(Vec<NodeId>, Vec<usize>), BuildError> {
    let mut indegree = vec![0usize; node_count];
    for e in edges {
        indegree[e.head.0] += 1;
    }
    let mut ready: BinaryHeap<std::cmp::Reverse<usize>> = indegree
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(v, _)| std::cmp::Reverse(v))
        .collect();
    let mut order = Vec::with_capacity(node_count);
    let mut rank = vec![usize::MAX; node_count];
    while let Some(std::cmp::Reverse(v)) = ready.pop() {
        rank[v] = order.len();
        order.push(NodeId(v));
        for &e in &out_edges[v] {
            let h = edges[e.0].head.0;
            indegree[h] -= 1;
            if indegree[h] == 0 {
                ready.push(std::cmp::Reverse(h));
            }
        }
    }
    if order.len() != node_count {
        return Err(BuildError::CycleDetected);
    }
    Ok((order, rank))
}

/// The four session roles. Sources may coincide, sinks may coincide, but a
/// session's own source and sink must differ.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Roles {
    pub s1: NodeId,
    pub t1: NodeId,
    pub s2: NodeId,
    pub t2: NodeId,
}

impl Roles {
    pub fn source(&self, session: usize) -> NodeId {
        match session {
            1 => self.s1,
            2 => self.s2,
            _ => panic!("session index must be 1 or 2"),
        }
    }

    pub fn sink(&self, session: usize) -> NodeId {
        match session {
            1 => self.t1,
            2 => self.t2,
            _ => panic!("session index must be 1 or 2"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AugmentMode {
    /// One auxiliary edge per terminal.
    Unit,
    /// As many parallel auxiliary edges per terminal as the session's
    /// maximum flow in the raw graph.
    MaxflowCapacity,
}

/// Auxiliary edges attached by [`UnicastInstance::augment`]. In unit mode
/// each list holds exactly one edge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InfoEdges {
    pub source_edges: [Vec<EdgeId>; 2],
    pub sink_edges: [Vec<EdgeId>; 2],
    /// Roles of the instance before augmentation.
    pub original: Roles,
    pub mode: AugmentMode,
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum AugmentError {
    #[error("instance is already augmented")]
    AlreadyAugmented,
    #[error("instance is not augmented")]
    NotAugmented,
}

/// A two-session unicast problem: a DAG, node labels for display, the four
/// roles, and (after augmentation) the information-edge record.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnicastInstance {
    pub dag: Dag,
    pub labels: Vec<String>,
    pub roles: Roles,
    pub info: Option<InfoEdges>,
}

/// Interns node names in first-appearance order over the edge list, builds
/// the DAG, and resolves the four roles. Roles must name nodes that occur as
/// edge endpoints.
pub fn validate_and_build<S: AsRef<str>>(
    raw_edges: &[(S, S)],
    roles: [&str; 4],
) -> Result<UnicastInstance, BuildError> {
    if raw_edges.is_empty() {
        return Err(BuildError::EmptyEdgeList);
    }
    fn intern(name: &str, index: &mut HashMap<String, NodeId>, labels: &mut Vec<String>) -> NodeId {
        if let Some(&id) = index.get(name) {
            return id;
        }
        let id = NodeId(labels.len());
        index.insert(name.to_owned(), id);
        labels.push(name.to_owned());
        id
    }
    let mut index: HashMap<String, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (tail, head) in raw_edges {
        let t = intern(tail.as_ref(), &mut index, &mut labels);
        let h = intern(head.as_ref(), &mut index, &mut labels);
        edges.push((t, h));
    }
    let lookup = |name: &str| -> Result<NodeId, BuildError> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| BuildError::UnknownNode(name.to_owned()))
    };
    let roles = Roles {
        s1: lookup(roles[0])?,
        t1: lookup(roles[1])?,
        s2: lookup(roles[2])?,
        t2: lookup(roles[3])?,
    };
    if roles.s1 == roles.t1 {
        return Err(BuildError::DegenerateRoles(1));
    }
    if roles.s2 == roles.t2 {
        return Err(BuildError::DegenerateRoles(2));
    }
    let dag = Dag::from_edges(labels.len(), &edges)?;
    Ok(UnicastInstance {
        dag,
        labels,
        roles,
        info: None,
    })
}

impl UnicastInstance {
    pub fn is_augmented(&self) -> bool {
        self.info.is_some()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.0]
    }

    /// Attaches a fresh source node ahead of each session source and a fresh
    /// sink node behind each session sink. The new nodes take over the role;
    /// the original terminals become internal.
    pub fn augment(&self, mode: AugmentMode) -> Result<UnicastInstance, AugmentError> {
        if self.is_augmented() {
            return Err(AugmentError::AlreadyAugmented);
        }
        let width = |session: usize| -> usize {
            match mode {
                AugmentMode::Unit => 1,
                AugmentMode::MaxflowCapacity => {
                    crate::flow::max_flow(
                        &self.dag,
                        self.roles.source(session),
                        self.roles.sink(session),
                    )
                    .0
                }
            }
        };
        let w1 = width(1);
        let w2 = width(2);

        let n = self.dag.node_count();
        let mut labels = self.labels.clone();
        let fresh = |base: &str, labels: &mut Vec<String>| -> NodeId {
            let mut name = base.to_owned();
            while labels.contains(&name) {
                name.push('_');
            }
            labels.push(name);
            NodeId(labels.len() - 1)
        };
        let aux_s1 = fresh("@s1", &mut labels);
        let aux_s2 = fresh("@s2", &mut labels);
        let aux_t1 = fresh("@t1", &mut labels);
        let aux_t2 = fresh("@t2", &mut labels);
        debug_assert_eq!(aux_s1.0, n);

        let mut edges: Vec<(NodeId, NodeId)> =
            self.dag.edges().map(|(_, e)| (e.tail, e.head)).collect();
        let push_parallel =
            |edges: &mut Vec<(NodeId, NodeId)>, tail: NodeId, head: NodeId, count: usize| {
                let start = edges.len();
                for _ in 0..count {
                    edges.push((tail, head));
                }
                (start..edges.len()).map(EdgeId).collect::<Vec<_>>()
            };
        let s1_edges = push_parallel(&mut edges, aux_s1, self.roles.s1, w1);
        let s2_edges = push_parallel(&mut edges, aux_s2, self.roles.s2, w2);
        let t1_edges = push_parallel(&mut edges, self.roles.t1, aux_t1, w1);
        let t2_edges = push_parallel(&mut edges, self.roles.t2, aux_t2, w2);

        let dag = Dag::from_edges(labels.len(), &edges)
            .expect("adding degree-one fringe nodes keeps the graph acyclic");
        Ok(UnicastInstance {
            dag,
            labels,
            roles: Roles {
                s1: aux_s1,
                t1: aux_t1,
                s2: aux_s2,
                t2: aux_t2,
            },
            info: Some(InfoEdges {
                source_edges: [s1_edges, s2_edges],
                sink_edges: [t1_edges, t2_edges],
                original: self.roles,
                mode,
            }),
        })
    }

    pub fn unit_augmented(&self) -> UnicastInstance {
        self.augment(AugmentMode::Unit)
            .expect("instance must be raw")
    }

    /// Strips the auxiliary nodes and edges added by [`augment`],
    /// recovering the original instance exactly.
    ///
    /// [`augment`]: UnicastInstance::augment
    pub fn deaugment(&self) -> Result<UnicastInstance, AugmentError> {
        let info = self.info.as_ref().ok_or(AugmentError::NotAugmented)?;
        let aux_edge_count: usize = info
            .source_edges
            .iter()
            .chain(info.sink_edges.iter())
            .map(Vec::len)
            .sum();
        let keep_edges = self.dag.edge_count() - aux_edge_count;
        let keep_nodes = self.dag.node_count() - 4;
        let edges: Vec<(NodeId, NodeId)> = self
            .dag
            .edges()
            .take(keep_edges)
            .map(|(_, e)| (e.tail, e.head))
            .collect();
        let dag = Dag::from_edges(keep_nodes, &edges)
            .expect("the raw edge list was acyclic when first built");
        Ok(UnicastInstance {
            dag,
            labels: self.labels[..keep_nodes].to_vec(),
            roles: info.original,
            info: None,
        })
    }

    /// One auxiliary source edge per session in unit mode.
    pub fn source_edge(&self, session: usize) -> EdgeId {
        let info = self.info.as_ref().expect("augmented instance required");
        info.source_edges[session - 1][0]
    }

    pub fn sink_edge(&self, session: usize) -> EdgeId {
        let info = self.info.as_ref().expect("augmented instance required");
        info.sink_edges[session - 1][0]
    }

    /// Session terminals before augmentation (the now-internal nodes).
    pub fn original_roles(&self) -> Roles {
        match &self.info {
            Some(info) => info.original,
            None => self.roles,
        }
    }

    /// Same network with the two sessions relabeled: session 1 becomes
    /// session 2 and vice versa.
    pub fn swap_sessions(&self) -> UnicastInstance {
        UnicastInstance {
            dag: self.dag.clone(),
            labels: self.labels.clone(),
            roles: Roles {
                s1: self.roles.s2,
                t1: self.roles.t2,
                s2: self.roles.s1,
                t2: self.roles.t1,
            },
            info: self.info.as_ref().map(|info| InfoEdges {
                source_edges: [info.source_edges[1].clone(), info.source_edges[0].clone()],
                sink_edges: [info.sink_edges[1].clone(), info.sink_edges[0].clone()],
                original: Roles {
                    s1: info.original.s2,
                    t1: info.original.t2,
                    s2: info.original.s1,
                    t2: info.original.t1,
                },
                mode: info.mode,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bfly_edges() -> Vec<(&'static str, &'static str)> {
        vec![
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
        ]
    }

    #[test]
    fn builds_butterfly_with_dense_ids() {
        let inst = validate_and_build(&bfly_edges(), ["s1", "t1", "s2", "t2"]).unwrap();
        assert_eq!(inst.dag.node_count(), 10);
        assert_eq!(inst.dag.edge_count(), 11);
        assert_eq!(inst.label(inst.roles.s1), "s1");
        assert_eq!(inst.label(inst.roles.t2), "t2");
    }

    #[test]
    fn accepts_shared_source() {
        let inst = validate_and_build(
            &[("s", "a"), ("a", "t1"), ("a", "t2")],
            ["s", "t1", "s", "t2"],
        )
        .unwrap();
        assert_eq!(inst.roles.s1, inst.roles.s2);
    }

    #[test]
    fn rejects_two_cycle() {
        let err = validate_and_build(&[("a", "b"), ("b", "a")], ["a", "b", "a", "b"]).unwrap_err();
        assert_eq!(err, BuildError::CycleDetected);
    }

    #[test]
    fn rejects_degenerate_session() {
        let err = validate_and_build(&[("a", "b")], ["a", "a", "a", "b"]).unwrap_err();
        assert_eq!(err, BuildError::DegenerateRoles(1));
    }

    #[test]
    fn rejects_unknown_role() {
        let err = validate_and_build(&[("a", "b")], ["a", "b", "a", "z"]).unwrap_err();
        assert_eq!(err, BuildError::UnknownNode("z".into()));
    }

    #[test]
    fn rejects_empty_edge_list() {
        let edges: Vec<(&str, &str)> = vec![];
        let err = validate_and_build(&edges, ["a", "b", "a", "b"]).unwrap_err();
        assert_eq!(err, BuildError::EmptyEdgeList);
    }

    #[test]
    fn topological_order_breaks_ties_by_node_id() {
        // diamond: a and b become ready together, a has the smaller id
        let inst = validate_and_build(
            &[("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")],
            ["s", "t", "s", "t"],
        )
        .unwrap();
        let order: Vec<&str> = inst
            .dag
            .topological_order()
            .iter()
            .map(|&v| inst.label(v))
            .collect();
        assert_eq!(order, ["s", "a", "b", "t"]);
    }

    #[test]
    fn topological_order_of_chain() {
        let dag = Dag::from_edges(3, &[(NodeId(0), NodeId(1)), (NodeId(1), NodeId(2))]).unwrap();
        assert_eq!(dag.topological_order(), &[NodeId(0), NodeId(1), NodeId(2)]);
    }

    #[test]
    fn topological_order_of_single_node() {
        let dag = Dag::from_edges(1, &[]).unwrap();
        assert_eq!(dag.topological_order(), &[NodeId(0)]);
    }

    #[test]
    fn unit_augmentation_adds_four_nodes_and_edges() {
        // two disjoint session edges
        let inst =
            validate_and_build(&[("s1", "t1"), ("s2", "t2")], ["s1", "t1", "s2", "t2"]).unwrap();
        let aug = inst.unit_augmented();
        assert_eq!(aug.dag.node_count(), 8);
        assert_eq!(aug.dag.edge_count(), 6);
        // new roles are the auxiliary nodes; originals became internal
        assert_eq!(aug.dag.out_edges(aug.roles.s1).len(), 1);
        assert_eq!(aug.dag.in_edges(aug.roles.s1).len(), 0);
        assert_eq!(aug.dag.in_edges(aug.roles.t2).len(), 1);
        assert_eq!(aug.dag.out_edges(aug.roles.t2).len(), 0);
        let s1_edge = aug.source_edge(1);
        assert_eq!(aug.dag.tail(s1_edge), aug.roles.s1);
        assert_eq!(aug.dag.head(s1_edge), aug.original_roles().s1);
    }

    #[test]
    fn augmenting_twice_fails() {
        let inst =
            validate_and_build(&[("s1", "t1"), ("s2", "t2")], ["s1", "t1", "s2", "t2"]).unwrap();
        let aug = inst.unit_augmented();
        assert_eq!(
            aug.augment(AugmentMode::Unit).unwrap_err(),
            AugmentError::AlreadyAugmented
        );
    }

    #[test]
    fn maxflow_capacity_mode_widens_information_edges() {
        // s -> t via three parallel edges: session capacity 3
        let inst = validate_and_build(&[("s", "t"), ("s", "t"), ("s", "t")], ["s", "t", "s", "t"])
            .unwrap();
        let aug = inst.augment(AugmentMode::MaxflowCapacity).unwrap();
        let info = aug.info.as_ref().unwrap();
        assert_eq!(info.source_edges[0].len(), 3);
        assert_eq!(info.sink_edges[1].len(), 3);
        for &e in &info.source_edges[0] {
            assert_eq!(aug.dag.tail(e), aug.roles.s1);
            assert_eq!(aug.dag.head(e), info.original.s1);
        }
    }

    #[test]
    fn deaugment_restores_original() {
        let inst = validate_and_build(&bfly_edges(), ["s1", "t1", "s2", "t2"]).unwrap();
        let aug = inst.unit_augmented();
        assert_eq!(aug.deaugment().unwrap(), inst);
        assert_eq!(inst.deaugment().unwrap_err(), AugmentError::NotAugmented);
    }

    #[test]
    fn reversal_keeps_edge_ids() {
        let inst = validate_and_build(&bfly_edges(), ["s1", "t1", "s2", "t2"]).unwrap();
        let rev = inst.dag.reversed();
        for (id, e) in inst.dag.edges() {
            assert_eq!(rev.tail(id), e.head);
            assert_eq!(rev.head(id), e.tail);
        }
    }
}
