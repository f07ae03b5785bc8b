//! Edge paths over a [`Dag`], plus the section and concatenation operations
//! the witness constructions splice with.
//!
//! A path may be empty, in which case it still sits at a definite node so
//! that its tail and head stay well defined. Empty paths appear naturally
//! when a construction collapses two junctions onto the same network node.

use crate::graph::{Dag, EdgeId, NodeId};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Path {
    start: NodeId,
    edges: Vec<EdgeId>,
}

/// Where a section starts or stops: at a node of the path, or at one of its
/// edges (inclusive).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Anchor {
    Node(NodeId),
    Edge(EdgeId),
}

impl From<NodeId> for Anchor {
    fn from(v: NodeId) -> Self {
        Anchor::Node(v)
    }
}

impl From<EdgeId> for Anchor {
    fn from(e: EdgeId) -> Self {
        Anchor::Edge(e)
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum PathError {
    #[error("edge {1} does not continue from {0}")]
    BrokenChain(NodeId, EdgeId),
    #[error("anchor {0:?} is not on the path")]
    AnchorNotOnPath(Anchor),
    #[error("section end anchor precedes its start anchor")]
    OrderViolation,
    #[error("paths do not meet: first ends at {0}, second starts at {1}")]
    EndpointMismatch(NodeId, NodeId),
    #[error("edge {0} occurs twice")]
    EdgeRepeated(EdgeId),
}

impl Path {
    pub fn empty_at(node: NodeId) -> Path {
        Path {
            start: node,
            edges: Vec::new(),
        }
    }

    /// Builds a path from a chained edge sequence.
    pub fn from_edges(dag: &Dag, edges: Vec<EdgeId>) -> Result<Path, PathError> {
        let first = *edges.first().expect("use empty_at for zero-edge paths");
        let start = dag.tail(first);
        let mut at = start;
        for &e in &edges {
            if dag.tail(e) != at {
                return Err(PathError::BrokenChain(at, e));
            }
            at = dag.head(e);
        }
        Ok(Path { start, edges })
    }

    pub fn single(dag: &Dag, e: EdgeId) -> Path {
        Path {
            start: dag.tail(e),
            edges: vec![e],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn tail(&self, _dag: &Dag) -> NodeId {
        self.start
    }

    pub fn head(&self, dag: &Dag) -> NodeId {
        match self.edges.last() {
            Some(&e) => dag.head(e),
            None => self.start,
        }
    }

    /// Nodes visited in order, length `len() + 1` (or 1 when empty).
    pub fn nodes(&self, dag: &Dag) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        out.push(self.start);
        for &e in &self.edges {
            out.push(dag.head(e));
        }
        out
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Index into `nodes()` where the anchor's section boundary falls: a
    /// node anchors at itself, a start-edge anchors at its tail, and the
    /// same edge used as an end anchor stops at its head.
    fn boundary(&self, dag: &Dag, anchor: Anchor, end: bool) -> Result<usize, PathError> {
        match anchor {
            Anchor::Node(v) => {
                if self.start == v {
                    return Ok(0);
                }
                for (i, &e) in self.edges.iter().enumerate() {
                    if dag.head(e) == v {
                        return Ok(i + 1);
                    }
                }
                Err(PathError::AnchorNotOnPath(anchor))
            }
            Anchor::Edge(e) => {
                let i = self
                    .edges
                    .iter()
                    .position(|&x| x == e)
                    .ok_or(PathError::AnchorNotOnPath(anchor))?;
                Ok(if end { i + 1 } else { i })
            }
        }
    }

    /// The sub-path between two anchors. Edge anchors are inclusive; two
    /// equal node anchors yield the empty path at that node.
    pub fn section(
        &self,
        dag: &Dag,
        from: impl Into<Anchor>,
        to: impl Into<Anchor>,
    ) -> Result<Path, PathError> {
        let lo = self.boundary(dag, from.into(), false)?;
        let hi = self.boundary(dag, to.into(), true)?;
        if lo > hi {
            return Err(PathError::OrderViolation);
        }
        let node_at = |i: usize| {
            if i == 0 {
                self.start
            } else {
                dag.head(self.edges[i - 1])
            }
        };
        Ok(Path {
            start: node_at(lo),
            edges: self.edges[lo..hi].to_vec(),
        })
    }

    /// Joins two paths at a shared endpoint, rejecting edge reuse.
    pub fn concat(&self, dag: &Dag, other: &Path) -> Result<Path, PathError> {
        let meet = self.head(dag);
        if other.tail(dag) != meet {
            return Err(PathError::EndpointMismatch(meet, other.tail(dag)));
        }
        for &e in &other.edges {
            if self.edges.contains(&e) {
                return Err(PathError::EdgeRepeated(e));
            }
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Path {
            start: self.start,
            edges,
        })
    }

    /// The same walk in the reversed graph (edge ids preserved).
    pub fn reversed(&self, dag: &Dag) -> Path {
        Path {
            start: self.head(dag),
            edges: self.edges.iter().rev().copied().collect(),
        }
    }

    /// Edges present in both paths, in this path's traversal order.
    pub fn shared_edges(&self, other: &Path) -> Vec<EdgeId> {
        self.edges
            .iter()
            .copied()
            .filter(|e| other.edges.contains(e))
            .collect()
    }
}

/// Convenience free function mirroring [`Path::section`].
pub fn path_section(
    dag: &Dag,
    path: &Path,
    from: impl Into<Anchor>,
    to: impl Into<Anchor>,
) -> Result<Path, PathError> {
    path.section(dag, from, to)
}

/// Convenience free function mirroring [`Path::concat`].
pub fn path_concat(dag: &Dag, a: &Path, b: &Path) -> Result<Path, PathError> {
    a.concat(dag, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> (Dag, Path) {
        // n0 -e0-> n1 -e1-> n2 -e2-> n3
        let dag = Dag::from_edges(
            4,
            &[
                (NodeId(0), NodeId(1)),
                (NodeId(1), NodeId(2)),
                (NodeId(2), NodeId(3)),
            ],
        )
        .unwrap();
        let p = Path::from_edges(&dag, vec![EdgeId(0), EdgeId(1), EdgeId(2)]).unwrap();
        (dag, p)
    }

    #[test]
    fn section_between_edge_anchors_spans_inclusively() {
        let (dag, p) = chain3();
        let full = p.section(&dag, EdgeId(0), EdgeId(2)).unwrap();
        assert_eq!(full, p);
    }

    #[test]
    fn section_between_heads_takes_inner_edge() {
        let (dag, p) = chain3();
        // from head(e0)=n1 to head(e1)=n2
        let mid = p.section(&dag, NodeId(1), NodeId(2)).unwrap();
        assert_eq!(mid.edges(), &[EdgeId(1)]);
    }

    #[test]
    fn section_with_equal_node_anchors_is_empty() {
        let (dag, p) = chain3();
        let empty = p.section(&dag, NodeId(2), NodeId(2)).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.tail(&dag), NodeId(2));
        assert_eq!(empty.head(&dag), NodeId(2));
    }

    #[test]
    fn section_orders_anchors() {
        let (dag, p) = chain3();
        assert_eq!(
            p.section(&dag, EdgeId(2), EdgeId(0)).unwrap_err(),
            PathError::OrderViolation
        );
    }

    #[test]
    fn section_rejects_foreign_anchor() {
        let dag = Dag::from_edges(
            4,
            &[
                (NodeId(0), NodeId(1)),
                (NodeId(1), NodeId(2)),
                (NodeId(0), NodeId(3)),
            ],
        )
        .unwrap();
        let p = Path::from_edges(&dag, vec![EdgeId(0), EdgeId(1)]).unwrap();
        assert_eq!(
            p.section(&dag, NodeId(0), EdgeId(2)).unwrap_err(),
            PathError::AnchorNotOnPath(Anchor::Edge(EdgeId(2)))
        );
        assert_eq!(
            p.section(&dag, NodeId(3), NodeId(2)).unwrap_err(),
            PathError::AnchorNotOnPath(Anchor::Node(NodeId(3)))
        );
    }

    #[test]
    fn concat_joins_at_shared_node() {
        let (dag, p) = chain3();
        let a = p.section(&dag, NodeId(0), NodeId(1)).unwrap();
        let b = p.section(&dag, NodeId(1), NodeId(3)).unwrap();
        assert_eq!(a.concat(&dag, &b).unwrap(), p);
    }

    #[test]
    fn concat_rejects_gap() {
        let (dag, p) = chain3();
        let a = p.section(&dag, NodeId(0), NodeId(1)).unwrap();
        let b = p.section(&dag, NodeId(2), NodeId(3)).unwrap();
        assert_eq!(
            a.concat(&dag, &b).unwrap_err(),
            PathError::EndpointMismatch(NodeId(1), NodeId(2))
        );
    }

    #[test]
    fn concat_rejects_edge_reuse() {
        let (dag, _) = chain3();
        // hand-rolled overlapping pieces: (e0,e1) then (e1,e2) "rebased" so
        // the junction matches
        let a = Path {
            start: NodeId(0),
            edges: vec![EdgeId(0), EdgeId(1)],
        };
        let b = Path {
            start: NodeId(2),
            edges: vec![EdgeId(1), EdgeId(2)],
        };
        assert_eq!(
            a.concat(&dag, &b).unwrap_err(),
            PathError::EdgeRepeated(EdgeId(1))
        );
    }

    #[test]
    fn concat_with_empty_piece_is_identity() {
        let (dag, p) = chain3();
        let empty = Path::empty_at(NodeId(0));
        assert_eq!(empty.concat(&dag, &p).unwrap(), p);
        let end = Path::empty_at(NodeId(3));
        assert_eq!(p.concat(&dag, &end).unwrap(), p);
    }

    #[test]
    fn from_edges_rejects_broken_chain() {
        let dag = Dag::from_edges(4, &[(NodeId(0), NodeId(1)), (NodeId(2), NodeId(3))]).unwrap();
        assert_eq!(
            Path::from_edges(&dag, vec![EdgeId(0), EdgeId(1)]).unwrap_err(),
            PathError::BrokenChain(NodeId(1), EdgeId(1))
        );
    }
}
