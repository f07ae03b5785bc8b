//! Plain-text instance files. One `pairs s1 t1 s2 t2` header, one
//! `edge <tail> <head>` line per edge, `#` comments. Edge ids follow file
//! order, so printing and reparsing preserves the instance exactly.

use thiserror::Error;

use crate::graph::{validate_and_build, BuildError, EdgeId, UnicastInstance};

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum ParseError {
    #[error("line {line}: expected `pairs <s1> <t1> <s2> <t2>`")]
    BadHeader { line: usize },
    #[error("line {line}: expected `edge <tail> <head>`")]
    BadEdge { line: usize },
    #[error("line {line}: unknown directive `{word}`")]
    UnknownDirective { line: usize, word: String },
    #[error("line {line}: second `pairs` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: name `{name}` uses the reserved `@` prefix")]
    ReservedName { line: usize, name: String },
    #[error("missing `pairs <s1> <t1> <s2> <t2>` header")]
    MissingHeader,
    #[error(transparent)]
    Build(#[from] BuildError),
}

pub fn parse(text: &str) -> Result<UnicastInstance, ParseError> {
    let mut header: Option<[String; 4]> = None;
    let mut edges: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&word, args)) = tokens.split_first() else {
            continue;
        };
        let check = |name: &str| -> Result<String, ParseError> {
            if name.starts_with('@') {
                Err(ParseError::ReservedName {
                    line,
                    name: name.to_owned(),
                })
            } else {
                Ok(name.to_owned())
            }
        };
        match word {
            "pairs" => {
                if header.is_some() {
                    return Err(ParseError::DuplicateHeader { line });
                }
                let [s1, t1, s2, t2] = args else {
                    return Err(ParseError::BadHeader { line });
                };
                header = Some([check(s1)?, check(t1)?, check(s2)?, check(t2)?]);
            }
            "edge" => {
                let [tail, head] = args else {
                    return Err(ParseError::BadEdge { line });
                };
                edges.push((check(tail)?, check(head)?));
            }
            _ => {
                return Err(ParseError::UnknownDirective {
                    line,
                    word: word.to_owned(),
                })
            }
        }
    }
    let roles = header.ok_or(ParseError::MissingHeader)?;
    let inst = validate_and_build(&edges, [&roles[0], &roles[1], &roles[2], &roles[3]])?;
    Ok(inst)
}

/// Canonical text form: header, then edges in id order. Augmented
/// instances print their pre-augmentation form, which is what parses back.
pub fn print(inst: &UnicastInstance) -> String {
    let raw;
    let inst = if inst.is_augmented() {
        raw = inst.deaugment().expect("augmented instances de-augment");
        &raw
    } else {
        inst
    };
    let r = &inst.roles;
    let mut out = format!(
        "pairs {} {} {} {}\n",
        inst.label(r.s1),
        inst.label(r.t1),
        inst.label(r.s2),
        inst.label(r.t2)
    );
    for e in 0..inst.dag.edge_count() {
        let e = EdgeId(e);
        out.push_str(&format!(
            "edge {} {}\n",
            inst.label(inst.dag.tail(e)),
            inst.label(inst.dag.head(e))
        ));
    }
    out
}
