//! Scalar GF(2) codes: each edge carries a·X1 ⊕ b·X2 for one coefficient
//! pair (a,b). Template codes are fixed XOR solutions; arbitrary instances
//! get theirs by routing pairs along embedding images.

use crate::graph::{EdgeId, UnicastInstance};
use crate::witness::{Embedding, Template};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gf2Pair {
    pub a: u8,
    pub b: u8,
}

impl Gf2Pair {
    pub const ZERO: Gf2Pair = Gf2Pair { a: 0, b: 0 };
    pub const X1: Gf2Pair = Gf2Pair { a: 1, b: 0 };
    pub const X2: Gf2Pair = Gf2Pair { a: 0, b: 1 };
    pub const BOTH: Gf2Pair = Gf2Pair { a: 1, b: 1 };

    pub fn xor(self, other: Gf2Pair) -> Gf2Pair {
        Gf2Pair {
            a: self.a ^ other.a,
            b: self.b ^ other.b,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Gf2Pair::ZERO
    }

    /// Session symbol for session index 0 or 1.
    pub fn symbol(session: usize) -> Gf2Pair {
        match session {
            0 => Gf2Pair::X1,
            1 => Gf2Pair::X2,
            _ => panic!("session index out of range"),
        }
    }

    pub fn swapped(self) -> Gf2Pair {
        Gf2Pair {
            a: self.b,
            b: self.a,
        }
    }

    /// All XOR combinations of the inputs, sorted. At most 4 values.
    pub fn span(inputs: &[Gf2Pair]) -> Vec<Gf2Pair> {
        let mut set = vec![Gf2Pair::ZERO];
        for &p in inputs {
            let extra: Vec<Gf2Pair> = set
                .iter()
                .map(|&x| x.xor(p))
                .filter(|x| !set.contains(x))
                .collect();
            set.extend(extra);
        }
        set.sort();
        set
    }
}

impl fmt::Display for Gf2Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.a, self.b)
    }
}

/// Coefficient pair per edge, dense over edge ids. Edges past the stored
/// prefix are idle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearCode {
    pairs: Vec<Gf2Pair>,
}

impl LinearCode {
    pub fn idle(edge_count: usize) -> LinearCode {
        LinearCode {
            pairs: vec![Gf2Pair::ZERO; edge_count],
        }
    }

    pub fn from_pairs(pairs: Vec<Gf2Pair>) -> LinearCode {
        LinearCode { pairs }
    }

    pub fn pair(&self, e: EdgeId) -> Gf2Pair {
        self.pairs.get(e.0).copied().unwrap_or(Gf2Pair::ZERO)
    }

    pub fn set(&mut self, e: EdgeId, p: Gf2Pair) {
        if self.pairs.len() <= e.0 {
            self.pairs.resize(e.0 + 1, Gf2Pair::ZERO);
        }
        self.pairs[e.0] = p;
    }

    /// Edges carrying a nonzero pair, ascending by id.
    pub fn support(&self) -> Vec<EdgeId> {
        (0..self.pairs.len())
            .map(EdgeId)
            .filter(|&e| !self.pair(e).is_zero())
            .collect()
    }

    /// One `edge a b` line per non-idle edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in self.support() {
            out.push_str(&format!("{} {}\n", e, self.pair(e)));
        }
        out
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum CodeViolation {
    #[error("edge {edge} carries {carried} outside the span of its inputs")]
    NotComputable { edge: EdgeId, carried: Gf2Pair },
    #[error("source edge {edge} carries {carried}, must emit {expected}")]
    WrongEmission {
        edge: EdgeId,
        carried: Gf2Pair,
        expected: Gf2Pair,
    },
    #[error("sink edge {edge} carries {carried}, must deliver {expected}")]
    WrongDelivery {
        edge: EdgeId,
        carried: Gf2Pair,
        expected: Gf2Pair,
    },
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum CodingError {
    #[error("embedding fails validation: {0}")]
    EmbeddingInvalid(crate::witness::EmbeddingViolation),
}

/// The fixed XOR solution of a template, keyed by template edge index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TemplateCode {
    pairs: Vec<Gf2Pair>,
}

impl TemplateCode {
    pub fn pair_for(&self, template_edge: usize) -> Gf2Pair {
        self.pairs[template_edge]
    }

    pub fn pairs(&self) -> &[Gf2Pair] {
        &self.pairs
    }
}

/// Catalog solution for each template, aligned with its edge list. These
/// are the unique valid assignments on the templates (checked in tests by
/// exhaustive search).
pub fn template_code(tmpl: &Template) -> TemplateCode {
    use crate::witness::TemplateTag::*;
    let pairs = match tmpl.tag {
        A => vec![Gf2Pair::X1, Gf2Pair::X2],
        B => vec![
            Gf2Pair::X1,   // (s1,v1)
            Gf2Pair::X2,   // (s2,v2)
            Gf2Pair::X1,   // (v1,v2)
            Gf2Pair::X1,   // (v1,v4)
            Gf2Pair::BOTH, // (v2,v3)
            Gf2Pair::BOTH, // (v3,v4)
            Gf2Pair::BOTH, // (v3,v6)
            Gf2Pair::X2,   // (v4,v5)
            Gf2Pair::X2,   // (v5,v6)
            Gf2Pair::X2,   // (v5,t2)
            Gf2Pair::X1,   // (v6,t1)
        ],
        C => {
            let b = template_code(&Template::catalog(B));
            b.pairs.iter().map(|p| p.swapped()).collect()
        }
        D => vec![
            Gf2Pair::X1,   // (s1,v1)
            Gf2Pair::X2,   // (s2,v2)
            Gf2Pair::X1,   // (v1,v3)
            Gf2Pair::X2,   // (v2,v3)
            Gf2Pair::BOTH, // (v3,v4)
            Gf2Pair::X1,   // (v1,v5)
            Gf2Pair::X2,   // (v2,v6)
            Gf2Pair::BOTH, // (v4,v5)
            Gf2Pair::BOTH, // (v4,v6)
            Gf2Pair::X1,   // (v6,t1)
            Gf2Pair::X2,   // (v5,t2)
        ],
    };
    assert_eq!(pairs.len(), tmpl.edges.len());
    TemplateCode { pairs }
}

/// Routes each template edge's pair along its image path; everything off
/// the embedding stays idle. Well defined because images are pairwise
/// edge-disjoint.
pub fn extend_code(
    inst: &UnicastInstance,
    tmpl: &Template,
    emb: &Embedding,
) -> Result<LinearCode, CodingError> {
    if let Err(v) = crate::witness::check_embedding(inst, tmpl, emb) {
        return Err(CodingError::EmbeddingInvalid(v));
    }
    let tcode = template_code(tmpl);
    let mut code = LinearCode::idle(inst.dag.edge_count());
    for (i, _) in tmpl.edges.iter().enumerate() {
        let image = emb.image(i);
        for &e in image.edges() {
            code.set(e, tcode.pair_for(i));
        }
    }
    Ok(code)
}

/// Checks the code invariants edge by edge in topological order and stops
/// at the first violation.
pub fn check_code(inst: &UnicastInstance, code: &LinearCode) -> Result<(), CodeViolation> {
    let info = inst
        .info
        .as_ref()
        .expect("code validation runs on augmented instances");
    let dag = &inst.dag;
    let mut order: Vec<EdgeId> = (0..dag.edge_count()).map(EdgeId).collect();
    order.sort_by_key(|&e| dag.edge_topo_key(e));
    let mut source_of = vec![None; dag.edge_count()];
    let mut sink_of = vec![None; dag.edge_count()];
    for session in 0..2 {
        for &e in &info.source_edges[session] {
            source_of[e.0] = Some(session);
        }
        for &e in &info.sink_edges[session] {
            sink_of[e.0] = Some(session);
        }
    }
    for e in order {
        let carried = code.pair(e);
        if let Some(session) = source_of[e.0] {
            let expected = Gf2Pair::symbol(session);
            if carried != expected {
                return Err(CodeViolation::WrongEmission {
                    edge: e,
                    carried,
                    expected,
                });
            }
            continue;
        }
        let ins: Vec<Gf2Pair> = dag
            .in_edges(dag.tail(e))
            .iter()
            .map(|&x| code.pair(x))
            .collect();
        if !Gf2Pair::span(&ins).contains(&carried) {
            return Err(CodeViolation::NotComputable { edge: e, carried });
        }
        if let Some(session) = sink_of[e.0] {
            let expected = Gf2Pair::symbol(session);
            if carried != expected {
                return Err(CodeViolation::WrongDelivery {
                    edge: e,
                    carried,
                    expected,
                });
            }
        }
    }
    Ok(())
}

pub fn validate_code(inst: &UnicastInstance, code: &LinearCode) -> bool {
    check_code(inst, code).is_ok()
}
