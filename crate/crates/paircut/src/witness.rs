//! Embeddings of the four canonical solvable networks. A solvable instance
//! always hosts one of them as a family of edge-disjoint paths; the
//! constructions here extract such a family from the flow structure, one
//! per verdict branch.

use std::fmt;

use thiserror::Error;

use crate::aset::{a_set, chain_decomposition, ChainDecomposition};
use crate::flow::{bfs_path, max_flow};
use crate::graph::{validate_and_build, Dag, EdgeId, NodeId, UnicastInstance};
use crate::path::{Anchor, Path};

/// Which canonical network a witness embeds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TemplateTag {
    A,
    B,
    C,
    D,
}

impl fmt::Display for TemplateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TemplateTag::A => "A",
            TemplateTag::B => "B",
            TemplateTag::C => "C",
            TemplateTag::D => "D",
        };
        f.write_str(s)
    }
}

/// Node of a canonical network.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TemplateNode {
    S1,
    S2,
    T1,
    T2,
    V(u8),
}

impl fmt::Display for TemplateNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateNode::S1 => f.write_str("s1"),
            TemplateNode::S2 => f.write_str("s2"),
            TemplateNode::T1 => f.write_str("t1"),
            TemplateNode::T2 => f.write_str("t2"),
            TemplateNode::V(k) => write!(f, "v{k}"),
        }
    }
}

/// A canonical network as a fixed edge list over template nodes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Template {
    pub tag: TemplateTag,
    pub edges: Vec<(TemplateNode, TemplateNode)>,
}

impl Template {
    pub fn catalog(tag: TemplateTag) -> Template {
        use TemplateNode::{S1, S2, T1, T2, V};
        let edges = match tag {
            TemplateTag::A => vec![(S1, T1), (S2, T2)],
            TemplateTag::B => vec![
                (S1, V(1)),
                (S2, V(2)),
                (V(1), V(2)),
                (V(1), V(4)),
                (V(2), V(3)),
                (V(3), V(4)),
                (V(3), V(6)),
                (V(4), V(5)),
                (V(5), V(6)),
                (V(5), T2),
                (V(6), T1),
            ],
            TemplateTag::C => vec![
                (S2, V(1)),
                (S1, V(2)),
                (V(1), V(2)),
                (V(1), V(4)),
                (V(2), V(3)),
                (V(3), V(4)),
                (V(3), V(6)),
                (V(4), V(5)),
                (V(5), V(6)),
                (V(5), T1),
                (V(6), T2),
            ],
            TemplateTag::D => vec![
                (S1, V(1)),
                (S2, V(2)),
                (V(1), V(3)),
                (V(2), V(3)),
                (V(3), V(4)),
                (V(1), V(5)),
                (V(2), V(6)),
                (V(4), V(5)),
                (V(4), V(6)),
                (V(6), T1),
                (V(5), T2),
            ],
        };
        Template { tag, edges }
    }

    /// The template itself as a raw two-pair instance, edge ids matching
    /// the catalog order.
    pub fn instance(&self) -> UnicastInstance {
        let named: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect();
        validate_and_build(&named, ["s1", "t1", "s2", "t2"])
            .expect("catalog templates are well formed")
    }
}

/// Maps each template edge to a path of the host instance, in catalog
/// edge order. Images may be empty when a template node collapses onto
/// its neighbor's endpoint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Embedding {
    pub tag: TemplateTag,
    images: Vec<Path>,
}

impl Embedding {
    pub fn new(tag: TemplateTag, images: Vec<Path>) -> Embedding {
        Embedding { tag, images }
    }

    pub fn image(&self, i: usize) -> &Path {
        &self.images[i]
    }

    pub fn images(&self) -> &[Path] {
        &self.images
    }

    /// One line per template edge: "(a,b) -> n0 n1 ... nk". An empty image
    /// prints the single node it sits at.
    pub fn to_text(&self, tmpl: &Template, inst: &UnicastInstance) -> String {
        let mut out = String::new();
        for (i, (a, b)) in tmpl.edges.iter().enumerate() {
            let labels: Vec<&str> = self.images[i]
                .nodes(&inst.dag)
                .into_iter()
                .map(|v| inst.label(v))
                .collect();
            out.push_str(&format!("({a},{b}) -> {}\n", labels.join(" ")));
        }
        out
    }
}

/// First violated embedding condition: endpoint anchoring at sources and
/// sinks, head-tail chaining at shared template nodes, or pairwise
/// edge-disjointness of the images.
#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum EmbeddingViolation {
    #[error("expected {want} images, found {got}")]
    WrongArity { want: usize, got: usize },
    #[error("image of template edge {edge} is not a path of the instance")]
    BrokenImage { edge: usize },
    #[error("image of template edge {edge} must start at node {expect}")]
    SourceAnchor { edge: usize, expect: NodeId },
    #[error("image of template edge {edge} must end at node {expect}")]
    SinkAnchor { edge: usize, expect: NodeId },
    #[error("images of template edges {from} and {to} do not meet at one node")]
    ChainBreak { from: usize, to: usize },
    #[error("images of template edges {first} and {second} both use edge {shared}")]
    Overlap {
        first: usize,
        second: usize,
        shared: EdgeId,
    },
}

/// Checks the four embedding conditions literally and reports the first
/// failure.
pub fn check_embedding(
    inst: &UnicastInstance,
    tmpl: &Template,
    emb: &Embedding,
) -> Result<(), EmbeddingViolation> {
    let dag = &inst.dag;
    if emb.images.len() != tmpl.edges.len() {
        return Err(EmbeddingViolation::WrongArity {
            want: tmpl.edges.len(),
            got: emb.images.len(),
        });
    }
    for (i, p) in emb.images.iter().enumerate() {
        if p.tail(dag).0 >= dag.node_count() {
            return Err(EmbeddingViolation::BrokenImage { edge: i });
        }
        let mut at = p.tail(dag);
        for &e in p.edges() {
            if e.0 >= dag.edge_count() || dag.tail(e) != at {
                return Err(EmbeddingViolation::BrokenImage { edge: i });
            }
            at = dag.head(e);
        }
    }
    for (i, &(a, b)) in tmpl.edges.iter().enumerate() {
        let p = &emb.images[i];
        let want_tail = match a {
            TemplateNode::S1 => Some(inst.roles.s1),
            TemplateNode::S2 => Some(inst.roles.s2),
            _ => None,
        };
        if let Some(s) = want_tail {
            if p.tail(dag) != s {
                return Err(EmbeddingViolation::SourceAnchor { edge: i, expect: s });
            }
        }
        let want_head = match b {
            TemplateNode::T1 => Some(inst.roles.t1),
            TemplateNode::T2 => Some(inst.roles.t2),
            _ => None,
        };
        if let Some(t) = want_head {
            if p.head(dag) != t {
                return Err(EmbeddingViolation::SinkAnchor { edge: i, expect: t });
            }
        }
    }
    for (i, &(_, b)) in tmpl.edges.iter().enumerate() {
        for (j, &(a, _)) in tmpl.edges.iter().enumerate() {
            if b == a && emb.images[i].head(dag) != emb.images[j].tail(dag) {
                return Err(EmbeddingViolation::ChainBreak { from: i, to: j });
            }
        }
    }
    let mut used: Vec<Option<usize>> = vec![None; dag.edge_count()];
    for (i, p) in emb.images.iter().enumerate() {
        for &e in p.edges() {
            if let Some(j) = used[e.0] {
                return Err(EmbeddingViolation::Overlap {
                    first: j,
                    second: i,
                    shared: e,
                });
            }
            used[e.0] = Some(i);
        }
    }
    Ok(())
}

pub fn verify_embedding(inst: &UnicastInstance, tmpl: &Template, emb: &Embedding) -> bool {
    check_embedding(inst, tmpl, emb).is_ok()
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum WitnessError {
    #[error("instance is not solvable")]
    NotSolvable,
    #[error("construction hypothesis failed: {0}")]
    HypothesisViolated(&'static str),
}

fn section(dag: &Dag, path: &Path, from: impl Into<Anchor>, to: impl Into<Anchor>) -> Path {
    path.section(dag, from, to)
        .expect("anchors are ordered along the path by construction")
}

fn splice(dag: &Dag, parts: &[&Path]) -> Path {
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        out = out
            .concat(dag, p)
            .expect("spliced sections are edge-disjoint and meet end to end");
    }
    out
}

/// Finds a session path missing the other session's bottleneck set, which
/// exists whenever the two bottleneck sets are disjoint. Returns the
/// session index (1 or 2) owning the path.
pub fn avoiding_path(inst: &UnicastInstance) -> Result<(usize, Path), WitnessError> {
    let dag = &inst.dag;
    let r = &inst.roles;
    let a11 = a_set(dag, r.s1, r.t1)
        .map_err(|_| WitnessError::HypothesisViolated("session 1 carries no flow"))?;
    let a22 = a_set(dag, r.s2, r.t2)
        .map_err(|_| WitnessError::HypothesisViolated("session 2 carries no flow"))?;
    if !a11.intersect(&a22).is_empty() {
        return Err(WitnessError::HypothesisViolated(
            "the session bottleneck sets intersect",
        ));
    }
    let probe = bfs_path(dag, r.s1, r.t1, &[]).expect("positive flow yields a path");
    let Some(hit) = probe.edges().iter().position(|&e| a22.contains(e)) else {
        return Ok((1, probe));
    };
    if a11.flow != 1 || a22.flow != 1 {
        return Err(WitnessError::HypothesisViolated(
            "the detour splice needs unit session flows",
        ));
    }
    // The probe crosses the second session's bottleneck at `blocker`. Count
    // the first session's bottleneck edges ahead of it; banning the two
    // around that split yields detours that meet at the blocker.
    let blocker = probe.edges()[hit];
    let before = probe.edges()[..hit]
        .iter()
        .filter(|&&e| a11.contains(e))
        .count();
    let ban_lo: &[EdgeId] = if before > 0 {
        &a11.edges[before - 1..before]
    } else {
        &[]
    };
    let ban_hi: &[EdgeId] = if before < a11.edges.len() {
        &a11.edges[before..before + 1]
    } else {
        &[]
    };
    let low =
        bfs_path(dag, r.s2, r.t2, ban_lo).expect("a non-bottleneck edge of session 2 is avoidable");
    let high =
        bfs_path(dag, r.s2, r.t2, ban_hi).expect("a non-bottleneck edge of session 2 is avoidable");
    let head = section(dag, &low, r.s2, blocker);
    let tail = section(dag, &high, dag.head(blocker), r.t2);
    let path = splice(dag, &[&head, &tail]);
    debug_assert!(path.edges().iter().all(|&e| !a11.contains(e)));
    Ok((2, path))
}

/// One directed leg of the split-path shape: disjoint paths from the two
/// sources into the tail of the first shared edge. Also used against the
/// reversed graph to grow the symmetric legs out of the shared run's head.
fn approach(
    dag: &Dag,
    first: (NodeId, NodeId),
    second: (NodeId, NodeId),
    a11: &[EdgeId],
    m_idx: usize,
) -> (Path, Path) {
    let target = dag.tail(a11[m_idx]);
    let prev = a11[m_idx - 1];
    let p_full = bfs_path(dag, first.0, first.1, &[]).expect("unit flow yields a path");
    let q_full = bfs_path(dag, second.0, second.1, &[prev])
        .expect("an unshared bottleneck edge of session 1 is avoidable by session 2");
    let p_head = section(dag, &p_full, first.0, prev);
    let q_head = section(dag, &q_full, second.0, target);
    if dag.head(prev) == target {
        return (p_head, q_head);
    }
    let (value, fam) = max_flow(dag, dag.head(prev), target);
    assert!(
        value >= 2,
        "consecutive bottleneck edges are joined by a two-path"
    );
    let meet = q_head
        .edges()
        .iter()
        .copied()
        .find(|&e| fam.paths[0].contains_edge(e) || fam.paths[1].contains_edge(e));
    match meet {
        None => (splice(dag, &[&p_head, &fam.paths[0]]), q_head),
        Some(e) => {
            let (ride, other) = if fam.paths[0].contains_edge(e) {
                (&fam.paths[0], &fam.paths[1])
            } else {
                (&fam.paths[1], &fam.paths[0])
            };
            let q_pre = section(dag, &q_head, second.0, e);
            let q_post = section(dag, ride, dag.head(e), target);
            (
                splice(dag, &[&p_head, other]),
                splice(dag, &[&q_pre, &q_post]),
            )
        }
    }
}

/// Both rails across the shared run: the shared edges themselves, with the
/// two branches of a bridge two-path across every gap.
fn middle_rails(dag: &Dag, shared: &[EdgeId]) -> (Path, Path) {
    let mut rail0 = vec![shared[0]];
    let mut rail1 = vec![shared[0]];
    for pair in shared.windows(2) {
        if dag.head(pair[0]) != dag.tail(pair[1]) {
            let (value, fam) = max_flow(dag, dag.head(pair[0]), dag.tail(pair[1]));
            assert!(
                value >= 2,
                "a gap between shared bottleneck edges carries a two-path"
            );
            rail0.extend_from_slice(fam.paths[0].edges());
            rail1.extend_from_slice(fam.paths[1].edges());
        }
        rail0.push(pair[1]);
        rail1.push(pair[1]);
    }
    (
        Path::from_edges(dag, rail0).expect("rail edges chain"),
        Path::from_edges(dag, rail1).expect("rail edges chain"),
    )
}

/// Builds session paths whose common edges are exactly the shared
/// bottleneck set: disjoint approach legs into the run, the run itself on
/// separate bridge branches, and disjoint departure legs grown in the
/// reversed graph.
pub fn disjoint_st_paths(inst: &UnicastInstance) -> Result<(Path, Path), WitnessError> {
    let dag = &inst.dag;
    let r = &inst.roles;
    let a11 = a_set(dag, r.s1, r.t1)
        .map_err(|_| WitnessError::HypothesisViolated("session 1 carries no flow"))?;
    let a22 = a_set(dag, r.s2, r.t2)
        .map_err(|_| WitnessError::HypothesisViolated("session 2 carries no flow"))?;
    if a11.flow != 1 || a22.flow != 1 {
        return Err(WitnessError::HypothesisViolated(
            "unit session flows are required",
        ));
    }
    let shared = a11.intersect(&a22);
    if shared.is_empty() {
        return Err(WitnessError::HypothesisViolated(
            "the session bottleneck sets are disjoint",
        ));
    }
    let first_idx = a11
        .edges
        .iter()
        .position(|&e| e == shared[0])
        .expect("shared edges come from the first set");
    assert_eq!(
        a11.edges[first_idx..first_idx + shared.len()],
        shared[..],
        "shared bottleneck edges form a consecutive run"
    );
    if first_idx == 0 || first_idx + shared.len() == a11.edges.len() {
        return Err(WitnessError::HypothesisViolated(
            "the shared run touches a terminal bottleneck edge",
        ));
    }
    let (p_head, q_head) = approach(dag, (r.s1, r.t1), (r.s2, r.t2), &a11.edges, first_idx);
    let (p_mid, q_mid) = middle_rails(dag, &shared);
    let rdag = dag.reversed();
    let mut rev_edges = a11.edges.clone();
    rdag.sort_edges_topologically(&mut rev_edges);
    let rev_idx = rev_edges
        .iter()
        .position(|&e| e == *shared.last().unwrap())
        .expect("same edge set");
    let (p_rev, q_rev) = approach(&rdag, (r.t1, r.s1), (r.t2, r.s2), &rev_edges, rev_idx);
    let p_tail = p_rev.reversed(&rdag);
    let q_tail = q_rev.reversed(&rdag);
    let p = splice(dag, &[&p_head, &p_mid, &p_tail]);
    let q = splice(dag, &[&q_head, &q_mid, &q_tail]);
    debug_assert_eq!(p.shared_edges(&q), shared);
    Ok((p, q))
}

/// Reroutes the rider through one bridge branch: follow the rider to its
/// first meet with the branch, ride the branch through the last meet, then
/// rejoin the rider.
fn reroute_through(dag: &Dag, rider: &Path, branch: &Path, meets: &[EdgeId]) -> Path {
    let first = meets[0];
    let last = *meets.last().unwrap();
    let pre = section(dag, rider, rider.tail(dag), dag.tail(first));
    let mid = section(dag, branch, first, last);
    let post = section(dag, rider, dag.head(last), rider.head(dag));
    splice(dag, &[&pre, &mid, &post])
}

/// The nine inner images shared by every cross-branch case: the rider
/// enters on one branch and leaves on the other, with the pivot at the
/// rider's last meet on the entry branch. Indices 1 through 9 of the
/// catalog order for templates B and C; the caller supplies 0 and 10.
fn crossing_images(
    dag: &Dag,
    rider: &Path,
    entry: &Path,
    exit: &Path,
    meets: &[EdgeId],
) -> Vec<Path> {
    let k = meets
        .iter()
        .rposition(|&e| entry.contains_edge(e))
        .expect("the first meet lies on the entry branch");
    let (e1, ek, ek1, er) = (meets[0], meets[k], meets[k + 1], *meets.last().unwrap());
    debug_assert!(meets[k + 1..].iter().all(|&e| exit.contains_edge(e)));
    vec![
        section(dag, rider, rider.tail(dag), dag.tail(e1)),
        section(dag, entry, entry.tail(dag), dag.tail(e1)),
        section(dag, exit, exit.tail(dag), dag.tail(ek1)),
        section(dag, entry, e1, ek),
        section(dag, rider, dag.head(ek), dag.tail(ek1)),
        section(dag, entry, dag.head(ek), entry.head(dag)),
        section(dag, exit, ek1, er),
        section(dag, exit, dag.head(er), exit.head(dag)),
        section(dag, rider, dag.head(er), rider.head(dag)),
    ]
}

fn finish(inst: &UnicastInstance, tag: TemplateTag, images: Vec<Path>) -> (Template, Embedding) {
    let tmpl = Template::catalog(tag);
    let emb = Embedding::new(tag, images);
    debug_assert_eq!(check_embedding(inst, &tmpl, &emb), Ok(()));
    (tmpl, emb)
}

/// Embeds a template when one session supports two edge-disjoint routes.
/// Runs on the augmented instance; the fat session's two-path lives
/// between its pre-augmentation terminals.
pub fn embed_case_flow_ge2(inst: &UnicastInstance) -> Result<(Template, Embedding), WitnessError> {
    assert!(
        inst.is_augmented(),
        "the fat-session construction needs the augmented terminal edges"
    );
    let dag = &inst.dag;
    let orig = inst.original_roles();
    let f1 = max_flow(dag, orig.s1, orig.t1).0;
    let f2 = max_flow(dag, orig.s2, orig.t2).0;
    if f1 * f2 < 2 {
        return Err(WitnessError::HypothesisViolated(
            "one session must carry two routes while the other carries one",
        ));
    }
    let fat = if f1 >= 2 { 1 } else { 2 };
    let thin = 3 - fat;
    let (_, fam) = max_flow(dag, orig.source(fat), orig.sink(fat));
    let trunk = |branch: &Path| -> Path {
        splice(
            dag,
            &[
                &Path::single(dag, inst.source_edge(fat)),
                branch,
                &Path::single(dag, inst.sink_edge(fat)),
            ],
        )
    };
    let rider = bfs_path(dag, inst.roles.source(thin), inst.roles.sink(thin), &[])
        .expect("the thin session carries flow");
    let by_session = |fat_img: Path, thin_img: Path| -> Vec<Path> {
        if fat == 1 {
            vec![fat_img, thin_img]
        } else {
            vec![thin_img, fat_img]
        }
    };
    let meets: Vec<EdgeId> = rider
        .edges()
        .iter()
        .copied()
        .filter(|&e| fam.paths[0].contains_edge(e) || fam.paths[1].contains_edge(e))
        .collect();
    if meets.is_empty() {
        let images = by_session(trunk(&fam.paths[0]), rider.clone());
        return Ok(finish(inst, TemplateTag::A, images));
    }
    let enter0 = fam.paths[0].contains_edge(meets[0]);
    let leave0 = fam.paths[0].contains_edge(*meets.last().unwrap());
    if enter0 == leave0 {
        let (ride, spare) = if enter0 {
            (&fam.paths[0], &fam.paths[1])
        } else {
            (&fam.paths[1], &fam.paths[0])
        };
        let images = by_session(trunk(spare), reroute_through(dag, &rider, ride, &meets));
        return Ok(finish(inst, TemplateTag::A, images));
    }
    let (entry, exit) = if enter0 {
        (&fam.paths[0], &fam.paths[1])
    } else {
        (&fam.paths[1], &fam.paths[0])
    };
    let mut images = Vec::with_capacity(11);
    images.push(Path::single(dag, inst.source_edge(fat)));
    images.extend(crossing_images(dag, &rider, entry, exit, &meets));
    images.push(Path::single(dag, inst.sink_edge(fat)));
    let tag = if fat == 1 {
        TemplateTag::B
    } else {
        TemplateTag::C
    };
    Ok(finish(inst, tag, images))
}

fn chain_prefix(dag: &Dag, chain: &ChainDecomposition, upto: usize) -> Path {
    let mut p = chain.runs[0].clone();
    for i in 0..upto {
        p = splice(dag, &[&p, &chain.bridges[i].0, &chain.runs[i + 1]]);
    }
    p
}

fn chain_suffix(dag: &Dag, chain: &ChainDecomposition, from: usize) -> Path {
    let mut p = chain.runs[from].clone();
    for i in from..chain.bridges.len() {
        p = splice(dag, &[&p, &chain.bridges[i].0, &chain.runs[i + 1]]);
    }
    p
}

/// Embeds a template when the two bottleneck sets are disjoint: decompose
/// the session the avoiding path dodges into runs and bridges, then route
/// around or across the single bridge the avoiding path crosses.
pub fn embed_case_disjoint_asets(
    inst: &UnicastInstance,
) -> Result<(Template, Embedding), WitnessError> {
    let dag = &inst.dag;
    let (side, rider) = avoiding_path(inst)?;
    let chain_session = 3 - side;
    let chain = chain_decomposition(
        dag,
        inst.roles.source(chain_session),
        inst.roles.sink(chain_session),
    )
    .map_err(|_| {
        WitnessError::HypothesisViolated(
            "the crossed session needs unit flow through unique terminal edges",
        )
    })?;
    let by_session = |chain_img: Path, rider_img: Path| -> Vec<Path> {
        if chain_session == 1 {
            vec![chain_img, rider_img]
        } else {
            vec![rider_img, chain_img]
        }
    };
    let on_bridge = |e: EdgeId, b: &(Path, Path)| b.0.contains_edge(e) || b.1.contains_edge(e);
    let meets: Vec<EdgeId> = rider
        .edges()
        .iter()
        .copied()
        .filter(|&e| chain.bridges.iter().any(|b| on_bridge(e, b)))
        .collect();
    if meets.is_empty() {
        let images = by_session(chain.assemble(dag, |_| 0), rider.clone());
        return Ok(finish(inst, TemplateTag::A, images));
    }
    let m = chain
        .bridges
        .iter()
        .position(|b| on_bridge(meets[0], b))
        .unwrap();
    assert!(
        meets.iter().all(|&e| on_bridge(e, &chain.bridges[m])),
        "an avoiding path crosses exactly one bridge"
    );
    let (b0, b1) = &chain.bridges[m];
    let enter0 = b0.contains_edge(meets[0]);
    let leave0 = b0.contains_edge(*meets.last().unwrap());
    if enter0 == leave0 {
        let ride = if enter0 { b0 } else { b1 };
        let detour = chain.assemble(dag, |i| match (i == m, enter0) {
            (true, true) => 1,
            _ => 0,
        });
        let images = by_session(detour, reroute_through(dag, &rider, ride, &meets));
        return Ok(finish(inst, TemplateTag::A, images));
    }
    let (entry, exit) = if enter0 { (b0, b1) } else { (b1, b0) };
    let mut images = Vec::with_capacity(11);
    images.push(chain_prefix(dag, &chain, m));
    images.extend(crossing_images(dag, &rider, entry, exit, &meets));
    images.push(chain_suffix(dag, &chain, m + 1));
    let tag = if chain_session == 1 {
        TemplateTag::B
    } else {
        TemplateTag::C
    };
    Ok(finish(inst, tag, images))
}

/// Embeds the two-level template when the bottleneck sets share edges but
/// both cross pairs can route around the shared run.
pub fn embed_case_shared_aset(
    inst: &UnicastInstance,
) -> Result<(Template, Embedding), WitnessError> {
    let dag = &inst.dag;
    let r = &inst.roles;
    let (p, q) = disjoint_st_paths(inst)?;
    let shared = p.shared_edges(&q);
    let p1 = bfs_path(dag, r.s1, r.t2, &shared).ok_or(WitnessError::HypothesisViolated(
        "no cross path from the first source to the second sink",
    ))?;
    let p2 = bfs_path(dag, r.s2, r.t1, &shared).ok_or(WitnessError::HypothesisViolated(
        "no cross path from the second source to the first sink",
    ))?;
    let missing =
        WitnessError::HypothesisViolated("a cross path misses the trunk it must branch from");
    // Anchor edges: the cross paths peel off the trunks strictly before the
    // shared run and rejoin strictly after it.
    let hat1 = *p1.shared_edges(&p).last().ok_or(missing.clone())?;
    let chk1 = *p1.shared_edges(&q).first().ok_or(missing.clone())?;
    let hat2 = *p2.shared_edges(&q).last().ok_or(missing.clone())?;
    let chk2 = *p2.shared_edges(&p).first().ok_or(missing)?;
    let (first, last) = (shared[0], *shared.last().unwrap());
    let images = vec![
        section(dag, &p, r.s1, hat1),
        section(dag, &q, r.s2, hat2),
        section(dag, &p, dag.head(hat1), dag.tail(first)),
        section(dag, &q, dag.head(hat2), dag.tail(first)),
        section(dag, &p, first, last),
        section(dag, &p1, dag.head(hat1), dag.tail(chk1)),
        section(dag, &p2, dag.head(hat2), dag.tail(chk2)),
        section(dag, &q, dag.head(last), dag.tail(chk1)),
        section(dag, &p, dag.head(last), dag.tail(chk2)),
        section(dag, &p, dag.tail(chk2), r.t1),
        section(dag, &q, dag.tail(chk1), r.t2),
    ];
    Ok(finish(inst, TemplateTag::D, images))
}

/// Dispatches to the construction matching the instance's verdict branch.
/// Runs on the unit-augmented instance produced by the decision pipeline.
pub fn find_embedding(inst: &UnicastInstance) -> Result<(Template, Embedding), WitnessError> {
    assert!(
        inst.is_augmented(),
        "embeddings are built on the unit-augmented instance"
    );
    let dag = &inst.dag;
    let orig = inst.original_roles();
    let f1 = max_flow(dag, orig.s1, orig.t1).0;
    let f2 = max_flow(dag, orig.s2, orig.t2).0;
    if f1 == 0 || f2 == 0 {
        return Err(WitnessError::NotSolvable);
    }
    if f1 * f2 >= 2 {
        return embed_case_flow_ge2(inst);
    }
    let a11 = a_set(dag, inst.roles.s1, inst.roles.t1).expect("unit flow");
    let a22 = a_set(dag, inst.roles.s2, inst.roles.t2).expect("unit flow");
    let shared = a11.intersect(&a22);
    if shared.is_empty() {
        return embed_case_disjoint_asets(inst);
    }
    let cross12 = bfs_path(dag, inst.roles.s1, inst.roles.t2, &shared).is_some();
    let cross21 = bfs_path(dag, inst.roles.s2, inst.roles.t1, &shared).is_some();
    if cross12 && cross21 {
        embed_case_shared_aset(inst)
    } else {
        Err(WitnessError::NotSolvable)
    }
}
