//! Graphviz rendering. The plain view lists the graph as-is; overlays run
//! the decision pipeline and annotate its findings on the edges.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::coding::extend_code;
use crate::graph::{EdgeId, UnicastInstance};
use crate::solvability::{decide, Decision};
use crate::witness::find_embedding;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Overlay {
    Plain,
    Verdict,
    Witness,
    Code,
}

const IMAGE_COLORS: [&str; 6] = ["blue", "red", "forestgreen", "darkorange", "purple", "teal"];

pub fn render(inst: &UnicastInstance, overlay: Overlay) -> String {
    let raw;
    let inst = if inst.is_augmented() {
        raw = inst.deaugment().expect("augmented instances de-augment");
        &raw
    } else {
        inst
    };
    match overlay {
        Overlay::Plain => draw(inst, "", &no_attrs(inst)),
        Overlay::Verdict => {
            let v = decide(inst);
            let mut attrs = no_attrs(inst);
            if let Some(shared) = &v.shared {
                for &e in shared {
                    attrs[e.0].push("style=bold".into());
                    attrs[e.0].push("color=blue".into());
                }
            }
            if let Some(cert) = &v.certificate {
                let a = &mut attrs[cert.edge.0];
                a.retain(|s| s != "color=blue");
                a.push("color=red".into());
                a.push("label=\"certificate\"".into());
            }
            draw(inst, &format!("{} ({})", v.decision, v.branch), &attrs)
        }
        Overlay::Witness | Overlay::Code => {
            let v = decide(inst);
            if v.decision == Decision::Unsolvable {
                return render(inst, Overlay::Verdict);
            }
            let (tmpl, emb) = find_embedding(&v.aug).expect("solvable instances embed");
            let mut attrs = no_attrs(&v.aug);
            if overlay == Overlay::Code {
                let code = extend_code(&v.aug, &tmpl, &emb).expect("embeddings carry a code");
                for (i, a) in attrs.iter_mut().enumerate() {
                    let p = code.pair(EdgeId(i));
                    a.push(format!("label=\"{} {}\"", p.a, p.b));
                }
            } else {
                for (i, (x, y)) in tmpl.edges.iter().enumerate() {
                    for &e in emb.image(i).edges() {
                        attrs[e.0].push(format!("label=\"({x},{y})\""));
                        attrs[e.0].push(format!("color={}", IMAGE_COLORS[i % IMAGE_COLORS.len()]));
                    }
                }
            }
            draw(&v.aug, &format!("template {}", tmpl.tag), &attrs)
        }
    }
}

fn no_attrs(inst: &UnicastInstance) -> Vec<Vec<String>> {
    vec![Vec::new(); inst.dag.edge_count()]
}

fn draw(inst: &UnicastInstance, title: &str, attrs: &[Vec<String>]) -> String {
    let mut out = String::from("digraph instance {\n  rankdir=LR;\n");
    if !title.is_empty() {
        writeln!(out, "  label=\"{title}\";").unwrap();
    }
    let r = &inst.roles;
    let roles: BTreeSet<_> = [r.s1, r.t1, r.s2, r.t2].into();
    for v in roles {
        writeln!(out, "  \"{}\" [shape=box];", inst.label(v)).unwrap();
    }
    for e in 0..inst.dag.edge_count() {
        let e = EdgeId(e);
        let tail = inst.label(inst.dag.tail(e));
        let head = inst.label(inst.dag.head(e));
        if attrs[e.0].is_empty() {
            writeln!(out, "  \"{tail}\" -> \"{head}\";").unwrap();
        } else {
            writeln!(
                out,
                "  \"{tail}\" -> \"{head}\" [{}];",
                attrs[e.0].join(", ")
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}
