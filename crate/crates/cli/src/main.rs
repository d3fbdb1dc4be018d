//! `dgh`: command-line front end for the digraph-homotopy toolkit.
//!
//! Exit codes: 0 success, 1 a verification or search came back negative,
//! 2 usage or input errors.

use dgh::formats;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use digraph_homotopy::grids::GridMap;
use digraph_homotopy::homotopy::{
    f_homotopic, one_step_grid_homotopy, pi0, OneStepOutcome, SearchBudget, SearchOutcome,
};
use digraph_homotopy::lines::{minimal_reduction, standardize, HomotopyDir};
use digraph_homotopy::spaces::{
    check_pi0_exactness, pullback, verify_spherelike, LoopDigraph, MappingPath,
    ReducedLoopDigraph, ReducedPathDigraph, DEFAULT_SIZE_CAP,
};
use digraph_homotopy::{box_product, cartesian_product, relative_box_product};

use formats::MapDocument;

#[derive(Parser)]
#[command(name = "dgh", version, about = "homotopy computations on finite digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductKind {
    Box,
    Cart,
    Relbox,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Cap on stored search states (also via DGH_BUDGET_STATES).
    #[arg(long)]
    budget_states: Option<usize>,
    /// Cap on the per-axis subdivision factor in one-step search.
    #[arg(long)]
    budget_subdiv: Option<usize>,
    /// Cap on any axis length reached by subdivision.
    #[arg(long)]
    budget_len: Option<usize>,
    /// Worker threads for the frontier expansion; 1 keeps certificates
    /// reproducible.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Seed for sampled reporting; accepted on every search command.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        let mut b = SearchBudget::default();
        if let Ok(text) = std::env::var("DGH_BUDGET_STATES") {
            if let Ok(n) = text.parse() {
                b.max_states = n;
            }
        }
        if let Some(n) = self.budget_states {
            b.max_states = n;
        }
        if let Some(n) = self.budget_subdiv {
            b.max_subdivision_factor = n;
        }
        if let Some(n) = self.budget_len {
            b.max_axis_length = n;
        }
        b.threads = self.threads.max(1);
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Path components of a digraph.
    Pi0 { file: PathBuf },
    /// Box, Cartesian or relative box product (relbox takes pair documents).
    Product {
        kind: ProductKind,
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Rewrite a path/loop over a standard line, with its witness.
    Standardize {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Minimal reduction of a path or loop.
    Minimal {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Search for a homotopy between two loop or grid documents.
    Homotopic {
        left: PathBuf,
        right: PathBuf,
        /// Restrict to a single one-step witness.
        #[arg(long)]
        one_step: bool,
        /// Expected dimension (checked against the inputs).
        #[arg(long)]
        dim: Option<usize>,
        /// Write the certificate here on success.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// The loop digraph of a based digraph (classes with --reduced).
    LoopDigraph {
        file: PathBuf,
        #[arg(long)]
        reduced: bool,
        #[arg(long)]
        max_len: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// The reduced path digraph of a based digraph.
    PathDigraph {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// The mapping path digraph of a based map document.
    MappingPath {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Pullback of two map documents with a common target.
    Pullback {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Component-level exactness of the mapping-path sequence for a map.
    PuppePi0 {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Structural facts and bounded search on the 3x3-plus-basepoint grid
    /// example.
    VerifyExample417 {
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// DOT rendering of a digraph document.
    ExportDot {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// 0 = success, 1 = negative verdict, 2 = bad input.
fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Pi0 { file } => {
            let g = formats::parse_digraph(&read(&file)?).map_err(|e| e.to_string())?;
            let p = pi0(&g);
            println!("components: {}", p.class_count());
            for class in p.classes() {
                let names: Vec<String> =
                    class.iter().map(|&v| g.vertex_name(v).to_string()).collect();
                println!("  {}", names.join(" "));
            }
            Ok(0)
        }
        Command::Product { kind, left, right, out } => {
            let text = match kind {
                ProductKind::Box | ProductKind::Cart => {
                    let a = formats::parse_digraph(&read(&left)?).map_err(|e| e.to_string())?;
                    let b = formats::parse_digraph(&read(&right)?).map_err(|e| e.to_string())?;
                    let p = match kind {
                        ProductKind::Box => box_product(&a, &b),
                        _ => cartesian_product(&a, &b),
                    };
                    formats::emit_digraph(&p)
                }
                ProductKind::Relbox => {
                    let a = formats::parse_pair(&read(&left)?).map_err(|e| e.to_string())?;
                    let b = formats::parse_pair(&read(&right)?).map_err(|e| e.to_string())?;
                    formats::emit_pair(&relative_box_product(&a, &b))
                }
            };
            write_out(&out, &text)?;
            Ok(0)
        }
        Command::Standardize { file, out } => {
            let doc = formats::parse_map_document(&read(&file)?).map_err(|e| e.to_string())?;
            let MapDocument::Path(p) = doc else {
                return Err("standardize expects a path or loop document".into());
            };
            let s = standardize(&p);
            eprintln!(
                "shrinking map: {:?} (length {} onto {})",
                s.shrink.values(),
                s.shrink.source().len(),
                s.shrink.target().len()
            );
            s.certificate.verify().map_err(|e| e.to_string())?;
            eprintln!("certificate verified");
            write_out(&out, &formats::emit_path_document(&s.path))?;
            Ok(0)
        }
        Command::Minimal { file, out } => {
            let doc = formats::parse_map_document(&read(&file)?).map_err(|e| e.to_string())?;
            let MapDocument::Path(p) = doc else {
                return Err("minimal expects a path or loop document".into());
            };
            write_out(&out, &formats::emit_path_document(&minimal_reduction(&p)))?;
            Ok(0)
        }
        Command::Homotopic { left, right, one_step, dim, out, budget } => {
            let l = formats::parse_map_document(&read(&left)?).map_err(|e| e.to_string())?;
            let r = formats::parse_map_document(&read(&right)?).map_err(|e| e.to_string())?;
            if l.target() != r.target() {
                return Err("the two maps target different digraphs".into());
            }
            let to_grid = |doc: MapDocument| -> Result<GridMap, String> {
                match doc {
                    MapDocument::Grid(g) => Ok(g),
                    MapDocument::Path(p) => {
                        let p = if p.domain().is_standard() {
                            p
                        } else {
                            eprintln!("note: standardizing a non-standard loop document");
                            standardize(&p).path
                        };
                        GridMap::from_loop(&p).map_err(|e| e.to_string())
                    }
                }
            };
            let lg = to_grid(l)?;
            let rg = to_grid(r)?;
            if let Some(d) = dim {
                if lg.dimension() != d {
                    return Err(format!(
                        "documents have dimension {}, but --dim {d} was given",
                        lg.dimension()
                    ));
                }
            }
            let b = budget.budget();
            if one_step {
                match one_step_grid_homotopy(&lg, &rg, &b, HomotopyDir::Direct)
                    .map_err(|e| e.to_string())?
                {
                    OneStepOutcome::Witness(w) => {
                        println!("one-step witness on common domain {:?}", w.common_lengths());
                        Ok(0)
                    }
                    OneStepOutcome::Exhausted(s) => {
                        println!("EXHAUSTED: {} ({} states)", s.reason, s.states);
                        Ok(1)
                    }
                }
            } else {
                match f_homotopic(&lg, &rg, &b).map_err(|e| e.to_string())? {
                    SearchOutcome::Certificate(c) => {
                        c.verify().map_err(|e| e.to_string())?;
                        println!("homotopic: certificate with {} steps (verified)", c.len());
                        if out.is_some() {
                            write_out(&out, &formats::emit_certificate(&c))?;
                        }
                        Ok(0)
                    }
                    SearchOutcome::Exhausted(s) => {
                        println!(
                            "EXHAUSTED: {} (states {}, expanded {}, depth {})",
                            s.reason, s.states, s.expanded, s.depth
                        );
                        Ok(1)
                    }
                }
            }
        }
        Command::LoopDigraph { file, reduced, max_len, out } => {
            let g = formats::parse_digraph(&read(&file)?).map_err(|e| e.to_string())?;
            formats::ensure_plain_names(&g).map_err(|e| e.to_string())?;
            let text = if reduced {
                let l = ReducedLoopDigraph::build(&g, max_len).map_err(|e| e.to_string())?;
                eprintln!(
                    "reduced loop digraph: {} classes, {} arrows",
                    l.digraph().vertex_count(),
                    l.digraph().arrow_count()
                );
                formats::emit_digraph(l.digraph())
            } else {
                let l = LoopDigraph::build(&g, max_len).map_err(|e| e.to_string())?;
                eprintln!(
                    "loop digraph: {} loops, {} arrows",
                    l.digraph().vertex_count(),
                    l.digraph().arrow_count()
                );
                formats::emit_digraph(l.digraph())
            };
            write_out(&out, &text)?;
            Ok(0)
        }
        Command::PathDigraph { file, max_len, out } => {
            let g = formats::parse_digraph(&read(&file)?).map_err(|e| e.to_string())?;
            formats::ensure_plain_names(&g).map_err(|e| e.to_string())?;
            let p = ReducedPathDigraph::build(&g, max_len).map_err(|e| e.to_string())?;
            eprintln!(
                "reduced path digraph: {} classes, {} arrows",
                p.digraph().vertex_count(),
                p.digraph().arrow_count()
            );
            write_out(&out, &formats::emit_digraph(p.digraph()))?;
            Ok(0)
        }
        Command::MappingPath { file, max_len, out } => {
            let f = formats::parse_map(&read(&file)?).map_err(|e| e.to_string())?;
            formats::ensure_plain_names(f.target()).map_err(|e| e.to_string())?;
            let pf = MappingPath::build(&f, max_len).map_err(|e| e.to_string())?;
            eprintln!(
                "mapping path digraph: {} vertices, {} arrows",
                pf.digraph.vertex_count(),
                pf.digraph.arrow_count()
            );
            write_out(&out, &formats::emit_digraph(&pf.digraph))?;
            Ok(0)
        }
        Command::Pullback { left, right, out } => {
            let f = formats::parse_map(&read(&left)?).map_err(|e| e.to_string())?;
            let g = formats::parse_map(&read(&right)?).map_err(|e| e.to_string())?;
            let pb = pullback(&f, &g).map_err(|e| e.to_string())?;
            eprintln!(
                "pullback: {} vertices, {} arrows",
                pb.digraph.vertex_count(),
                pb.digraph.arrow_count()
            );
            write_out(&out, &formats::emit_digraph(&pb.digraph))?;
            Ok(0)
        }
        Command::PuppePi0 { file, max_len } => {
            let f = formats::parse_map(&read(&file)?).map_err(|e| e.to_string())?;
            formats::ensure_plain_names(f.target()).map_err(|e| e.to_string())?;
            let r = check_pi0_exactness(&f, max_len, DEFAULT_SIZE_CAP).map_err(|e| e.to_string())?;
            let names = |set: &std::collections::BTreeSet<u32>| -> Vec<String> {
                set.iter().map(|&v| f.source().vertex_name(v).to_string()).collect()
            };
            println!("image components:  {}", names(&r.at.image).join(" "));
            println!("kernel components: {}", names(&r.at.kernel).join(" "));
            println!(
                "exact at window {max_len}: {}; at window {}: {}; stable: {}",
                r.at.exact,
                max_len + 2,
                r.at_wider.exact,
                r.stable
            );
            Ok(if r.at.exact && r.at_wider.exact && r.stable { 0 } else { 1 })
        }
        Command::VerifyExample417 { budget } => {
            let r = verify_spherelike(&budget.budget());
            println!(
                "center adjacent only to the four mid-side vertices: {}",
                r.center_adjacent_only_to_mid_sides
            );
            println!(
                "mid-side vertices pairwise non-adjacent: {}",
                r.mid_sides_pairwise_nonadjacent
            );
            println!("basepoint not adjacent to the center: {}", r.base_not_adjacent_to_center);
            println!("grid map validates: {}", r.grid_valid);
            println!(
                "bounded search reached the constant map: {} ({} states, {})",
                r.reached_constant, r.stats.states, r.stats.reason
            );
            Ok(if r.all_structural_facts_hold() && !r.reached_constant { 0 } else { 1 })
        }
        Command::ExportDot { file, out } => {
            let g = formats::parse_digraph(&read(&file)?).map_err(|e| e.to_string())?;
            write_out(&out, &formats::export_dot(&g))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
