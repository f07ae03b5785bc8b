use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use paircut::coding::extend_code;
use paircut::dot;
use paircut::flow::max_flow;
use paircut::fuzz::{run_fuzz, FuzzConfig};
use paircut::generate::{generate, GenSpec};
use paircut::graph::UnicastInstance;
use paircut::io;
use paircut::solvability::{decide, decide_by_asets, Decision, Verdict};
use paircut::witness::find_embedding;
use paircut::EdgeId;

#[derive(Parser)]
#[command(
    name = "paircut",
    version,
    about = "Decides whether two unicast sessions can share a directed network, \
             with a checkable embedding and XOR code or a one-edge impossibility certificate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide solvability of an instance file and print the evidence
    Analyze {
        file: PathBuf,
        /// Print the canonical-network embedding on solvable instances
        #[arg(long)]
        witness: bool,
        /// Print the XOR code carried by the embedding
        #[arg(long)]
        code: bool,
        /// Print the impossibility certificate on blocked instances
        #[arg(long)]
        certificate: bool,
        /// Decision procedure to run
        #[arg(long, value_enum, default_value_t = Via::Alg45)]
        via: Via,
    },
    /// Emit a seeded random instance
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        seed: u64,
        /// Permit repeated (tail, head) pairs
        #[arg(long)]
        allow_parallel: bool,
        /// Resample until both sessions carry flow
        #[arg(long)]
        require_connected: bool,
    },
    /// Cross-validate the pipeline against oracles on random instances
    Fuzz {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_nodes: usize,
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Render an instance file as Graphviz DOT
    Dot {
        file: PathBuf,
        #[arg(long, value_enum)]
        overlay: Option<OverlayArg>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Via {
    /// Flow product, shared bottleneck, cross connectivity
    Alg45,
    /// Four bottleneck sets alone (needs every pair capacity equal to 1)
    Asets,
}

#[derive(Clone, Copy, ValueEnum)]
enum OverlayArg {
    Verdict,
    Witness,
    Code,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<u8> {
    match Cli::parse().command {
        Command::Analyze {
            file,
            witness,
            code,
            certificate,
            via,
        } => analyze(&file, witness, code, certificate, via),
        Command::Gen {
            nodes,
            edges,
            seed,
            allow_parallel,
            require_connected,
        } => {
            let spec = GenSpec {
                nodes,
                edges,
                seed,
                allow_parallel,
                require_connected_pairs: require_connected,
            };
            print!("{}", io::print(&generate(&spec)?));
            Ok(0)
        }
        Command::Fuzz {
            count,
            max_nodes,
            max_edges,
            seed,
        } => {
            let report = run_fuzz(&FuzzConfig::new(count, max_nodes, max_edges, seed));
            println!(
                "checked {} instances: {} mismatches",
                report.checked,
                report.mismatches.len()
            );
            for m in &report.mismatches {
                println!("{m}");
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Dot { file, overlay } => {
            let inst = load(&file)?;
            let overlay = match overlay {
                None => dot::Overlay::Plain,
                Some(OverlayArg::Verdict) => dot::Overlay::Verdict,
                Some(OverlayArg::Witness) => dot::Overlay::Witness,
                Some(OverlayArg::Code) => dot::Overlay::Code,
            };
            print!("{}", dot::render(&inst, overlay));
            Ok(0)
        }
    }
}

fn load(file: &Path) -> Result<UnicastInstance> {
    let text =
        fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    io::parse(&text).with_context(|| format!("cannot parse {}", file.display()))
}

fn edge_name(inst: &UnicastInstance, e: EdgeId) -> String {
    format!(
        "{}->{}",
        inst.label(inst.dag.tail(e)),
        inst.label(inst.dag.head(e))
    )
}

fn analyze(file: &Path, witness: bool, code: bool, certificate: bool, via: Via) -> Result<u8> {
    let inst = load(file)?;
    let v: Verdict = match via {
        Via::Alg45 => decide(&inst),
        Via::Asets => decide_by_asets(&inst)?,
    };
    let r = &inst.roles;
    let flow = |s, t| max_flow(&inst.dag, s, t).0;
    println!(
        "flows: C(s1,t1)={} C(s2,t2)={} C(s1,t2)={} C(s2,t1)={}",
        flow(r.s1, r.t1),
        flow(r.s2, r.t2),
        flow(r.s1, r.t2),
        flow(r.s2, r.t1)
    );
    if let Some(shared) = &v.shared {
        let names: Vec<String> = shared.iter().map(|&e| edge_name(&v.aug, e)).collect();
        println!(
            "shared bottleneck: {}",
            if names.is_empty() {
                "(empty)".to_owned()
            } else {
                names.join(" ")
            }
        );
    }
    println!("verdict: {} ({})", v.decision, v.branch);
    if v.decision == Decision::Solvable && (witness || code) {
        let (tmpl, emb) = find_embedding(&v.aug).expect("solvable instances embed");
        if witness {
            println!("witness: template {}", tmpl.tag);
            print!("{}", emb.to_text(&tmpl, &v.aug));
        }
        if code {
            let code = extend_code(&v.aug, &tmpl, &emb).expect("embeddings carry a code");
            println!("code (edge: X1-coefficient X2-coefficient):");
            for e in 0..v.aug.dag.edge_count() {
                let e = EdgeId(e);
                let p = code.pair(e);
                println!("  {}: {} {}", edge_name(&v.aug, e), p.a, p.b);
            }
        }
    }
    if certificate {
        match &v.certificate {
            Some(cert) => {
                println!(
                    "certificate: deleting {} starves {}; reachable from s1: {}; from s2: {}",
                    edge_name(&v.aug, cert.edge),
                    cert.blocked,
                    cert.reach_s1.len(),
                    cert.reach_s2.len()
                );
            }
            None => println!("certificate: none (decision did not rest on a blocked edge)"),
        }
    }
    Ok(match v.decision {
        Decision::Solvable => 0,
        Decision::Unsolvable => 1,
    })
}
