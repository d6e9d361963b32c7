//! The `mixpack` command line.
//!
//! Exit status: 0 success, 1 input error, 2 infeasible, 3 capacity bound
//! exceeded, 4 packing or certificate rejected, 5 internal error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::Bounds;
use crate::decomposition::{build_auxiliary, compute_atoms};
use crate::dot::export_dot;
use crate::error::Error;
use crate::graph::{parse_mixed_graph, DirectedView, Instance};
use crate::json;
use crate::orientation::{orient_covering_from, CoverOutcome, CoverRequirement};
use crate::packing::{pack_reachability, PackOutcome};
use crate::pipeline::{solve, validate_mixed_packing, verify_certificate, CertificateVerdict, Solution, SolveOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_REJECTED: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

const GRAMMAR: &str = "\
Input grammar (one declaration per line, '#' comments, blank lines ignored):
  vertex <id>
  edge <id1> <id2> [<edge-id>]
  arc <tail-id> <head-id> [<arc-id>]
  root <id>
Missing edge-id/arc-id auto-assigned \"e<n>\"/\"a<n>\" in file order. Roots listed in order define indices 1..k.

Exit status: 0 ok, 1 input error, 2 infeasible, 3 capacity bound exceeded,
4 packing or certificate rejected, 5 internal error.";

#[derive(Debug, Parser)]
#[command(
    name = "mixpack",
    version,
    about = "Pack reachability arborescences in mixed graphs, or certify that none exist",
    after_help = GRAMMAR
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: Config,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Output format; `solve` defaults to json, everything else to text.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Randomize the starting orientation of each atom's edges.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Threads for the per-atom orientation step.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Largest auxiliary graph (atom plus terminals) handled by the orientation step.
    #[arg(long, global = true, default_value_t = Bounds::default().max_atom_vertices as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_atom_vertices: u64,
    /// Most edges in one atom for exhaustive orientation search.
    #[arg(long, global = true, default_value_t = Bounds::default().max_fallback_edges as u64, value_parser = clap::value_parser!(u64).range(1..=63))]
    pub max_fallback_edges: u64,
    /// Most vertices for whole-graph cut enumeration.
    #[arg(long, global = true, default_value_t = Bounds::default().max_enum_vertices as u64, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub max_enum_vertices: u64,
}

impl Config {
    pub fn bounds(&self) -> Bounds {
        Bounds {
            max_atom_vertices: self.max_atom_vertices as usize,
            max_fallback_edges: self.max_fallback_edges as usize,
            max_enum_vertices: self.max_enum_vertices as usize,
        }
    }

    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            bounds: self.bounds(),
            jobs: self.jobs as usize,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find a packing, or a certificate that none exists.
    Solve { file: PathBuf },
    /// Validate a packing document against a graph.
    Check { file: PathBuf, packing: PathBuf },
    /// Print the atoms and their root index sets.
    Atoms { file: PathBuf },
    /// Orient one atom's edges to cover its requirement.
    Orient {
        file: PathBuf,
        /// 1-based atom index, as printed by `atoms`.
        #[arg(long)]
        atom: usize,
    },
    /// Pack reachability arborescences in a graph without edges.
    PackDigraph { file: PathBuf },
    /// Verify an infeasibility certificate.
    Certify { file: PathBuf, certificate: PathBuf },
    /// Write a Graphviz description, coloring trees of an optional packing.
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        packing: Option<PathBuf>,
    },
}

/// A failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity { .. } => EXIT_CAPACITY,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    parse_mixed_graph(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, doc: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(doc).map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: e.to_string(),
    })?;
    writeln!(out, "{text}")?;
    Ok(())
}

/// Parse `args` (program name first) and run; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let config = &cli.config;
    let format = |default| config.format.unwrap_or(default);
    match &cli.command {
        Command::Solve { file } => {
            let inst = load(file)?;
            let g = &inst.graph;
            match solve(g, &inst.roots, &config.solve_options())? {
                Solution::Packed { packing, .. } => {
                    let doc = json::packing_doc(g, &inst.roots, &packing);
                    match format(Format::Json) {
                        Format::Json => emit_json(out, &doc)?,
                        Format::Text => write_trees(out, &doc, true)?,
                    }
                    Ok(EXIT_OK)
                }
                Solution::Infeasible(cert) => {
                    let doc = json::certificate_doc(g, &cert);
                    match format(Format::Json) {
                        Format::Json => emit_json(out, &doc)?,
                        Format::Text => {
                            writeln!(out, "infeasible: atom {} lhs {} rhs {} deficit {}", doc.atom, doc.lhs, doc.rhs, doc.deficit)?;
                            for b in &doc.bisets {
                                writeln!(out, "  outer {{{}}} inner {{{}}}", b.outer.join(", "), b.inner.join(", "))?;
                            }
                        }
                    }
                    Ok(EXIT_INFEASIBLE)
                }
            }
        }
        Command::Check { file, packing } => {
            let inst = load(file)?;
            let doc: json::PackingDoc = load_json(packing)?;
            let mp = json::packing_from_doc(&inst.graph, &inst.roots, &doc)?;
            match validate_mixed_packing(&inst.graph, &inst.roots, &mp) {
                Ok(()) => {
                    writeln!(out, "packing valid")?;
                    Ok(EXIT_OK)
                }
                Err(v) => {
                    writeln!(out, "packing rejected: {v}")?;
                    Ok(EXIT_REJECTED)
                }
            }
        }
        Command::Atoms { file } => {
            let inst = load(file)?;
            let dec = compute_atoms(&inst.graph, &inst.roots)?;
            let doc = json::atoms_doc(&inst.graph, &dec);
            match format(Format::Text) {
                Format::Json => emit_json(out, &doc)?,
                Format::Text => {
                    for a in &doc.atoms {
                        let roots: Vec<String> = a.roots.iter().map(usize::to_string).collect();
                        writeln!(out, "atom {}: {{{}}} R={{{}}}", a.index, a.vertices.join(", "), roots.join(", "))?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Orient { file, atom } => {
            let inst = load(file)?;
            let g = &inst.graph;
            let dec = compute_atoms(g, &inst.roots)?;
            if *atom == 0 || *atom > dec.len() {
                return Err(input_failure(format!("atom {atom} out of range 1..={}", dec.len())));
            }
            let aux = build_auxiliary(g, &dec, atom - 1)?;
            let req = CoverRequirement::new(&aux, &dec, &inst.roots, config.bounds())?;
            let start = crate::pipeline::starting_orientation(&aux, config.seed);
            match orient_covering_from(&req, Some(&start))?.0 {
                CoverOutcome::Covered(o) => {
                    let ag = aux.graph();
                    let lines: Vec<OrientedLine> = ag
                        .edges()
                        .iter()
                        .zip(o.directions())
                        .map(|(e, &(t, h))| OrientedLine {
                            id: e.id.clone(),
                            tail: ag.name(t).to_owned(),
                            head: ag.name(h).to_owned(),
                        })
                        .collect();
                    match format(Format::Text) {
                        Format::Json => emit_json(
                            out,
                            &OrientationDoc {
                                format: json::FORMAT_VERSION,
                                kind: "orientation".into(),
                                atom: *atom,
                                edges: lines,
                            },
                        )?,
                        Format::Text => {
                            for l in &lines {
                                writeln!(out, "{} {} {}", l.id, l.tail, l.head)?;
                            }
                        }
                    }
                    Ok(EXIT_OK)
                }
                CoverOutcome::Infeasible(sc) => {
                    emit_json(out, &json::subpartition_doc(aux.graph(), &sc))?;
                    Ok(EXIT_INFEASIBLE)
                }
            }
        }
        Command::PackDigraph { file } => {
            let inst = load(file)?;
            let g = &inst.graph;
            if let Some(e) = g.edges().first() {
                return Err(input_failure(format!(
                    "pack-digraph takes arcs only, found edge `{}`",
                    e.id
                )));
            }
            let d = DirectedView::from_arcs(g);
            match pack_reachability(&d, &inst.roots, config.bounds())? {
                PackOutcome::Packed(p) => {
                    let mp = crate::pipeline::MixedPacking {
                        trees: p
                            .trees
                            .iter()
                            .map(|t| crate::pipeline::MixedTree {
                                root_index: t.root_index,
                                arcs: t.arcs.clone(),
                                edges: Vec::new(),
                            })
                            .collect(),
                    };
                    let doc = json::packing_doc(g, &inst.roots, &mp);
                    match format(Format::Text) {
                        Format::Json => emit_json(out, &doc)?,
                        Format::Text => write_trees(out, &doc, false)?,
                    }
                    Ok(EXIT_OK)
                }
                PackOutcome::Violated(x) => {
                    writeln!(out, "violated: {{{}}}", g.set_names(x).join(", "))?;
                    Ok(EXIT_INFEASIBLE)
                }
            }
        }
        Command::Certify { file, certificate } => {
            let inst = load(file)?;
            let doc: json::CertificateDoc = load_json(certificate)?;
            let cert = json::certificate_from_doc(&inst.graph, &doc)?;
            match verify_certificate(&inst.graph, &inst.roots, &cert) {
                CertificateVerdict::Accepted { lhs, rhs } => {
                    writeln!(out, "certificate accepted: {lhs} < {rhs}")?;
                    Ok(EXIT_OK)
                }
                CertificateVerdict::Rejected(why) => {
                    writeln!(out, "certificate rejected: {why}")?;
                    Ok(EXIT_REJECTED)
                }
            }
        }
        Command::ExportDot { file, packing } => {
            let inst = load(file)?;
            let mp = match packing {
                Some(path) => {
                    let doc: json::PackingDoc = load_json(path)?;
                    Some(json::packing_from_doc(&inst.graph, &inst.roots, &doc)?)
                }
                None => None,
            };
            write!(out, "{}", export_dot(&inst.graph, &inst.roots, mp.as_ref()))?;
            Ok(EXIT_OK)
        }
    }
}

#[derive(Debug, Serialize)]
struct OrientedLine {
    id: String,
    tail: String,
    head: String,
}

#[derive(Debug, Serialize)]
struct OrientationDoc {
    format: u32,
    kind: String,
    atom: usize,
    edges: Vec<OrientedLine>,
}

fn write_trees(out: &mut dyn Write, doc: &json::PackingDoc, origins: bool) -> std::io::Result<()> {
    for (n, t) in doc.trees.iter().enumerate() {
        if n > 0 {
            writeln!(out)?;
        }
        writeln!(out, "tree {} root {}", t.index, t.root)?;
        for a in &t.arcs {
            if origins {
                let origin = match a.origin {
                    json::ArcOrigin::Arc => "arc",
                    json::ArcOrigin::Edge => "edge",
                };
                writeln!(out, "  {} {} {} {origin}", a.id, a.tail, a.head)?;
            } else {
                writeln!(out, "  {} {} {}", a.id, a.tail, a.head)?;
            }
        }
    }
    Ok(())
}
