use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use toric_lc::exec::Exec;
use toric_lc::graph::{enumerate_spanning_trees, SimpleGraph, SpanningTree};
use toric_lc::lc::{
    find_local_representative, lc_equivalent, lc_orbit_until, orbit_to_json, verify_witness,
    LocalitySearch, OrbitOptions, DEFAULT_ORBIT_BUDGET,
};
use toric_lc::reduction::chain::{reduction_chain, CertificateStore, ChainSpec};
use toric_lc::selftest::{run_criterion, SelftestOptions, Status};
use toric_lc::surface::{
    adjacency_relation, default_phi, polyform_enumerate, surface_stabilizer,
    transform_to_graph_state, tree_from_qubits, Embedding, Lattice,
};
use toric_lc::{sha256_hex, Error};

/// Exit status when the orbit budget runs out before a verdict.
const EXIT_BUDGET: u8 = 2;

#[derive(Parser)]
#[command(name = "toric-lc", version, about = "Surface codes, graph states and local-Clifford orbits")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Maximum number of orbit members to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ORBIT_BUDGET)]
    budget: usize,
    /// Worker threads (1 runs sequentially; default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Graph of the state obtained from a setup and a spanning tree.
    Phi {
        #[arg(long)]
        setup: PathBuf,
        /// Tree edges as comma-separated qubit ids (default: first tree).
        #[arg(long, value_delimiter = ',')]
        tree: Option<Vec<u32>>,
    },
    /// Checks that Hadamards on the deleted edges map the surface-code state
    /// onto the graph state.
    #[command(name = "verify-thm1")]
    VerifyThm1 {
        #[arg(long)]
        setup: PathBuf,
        #[arg(long, value_delimiter = ',', conflicts_with = "all_trees")]
        tree: Option<Vec<u32>>,
        /// Check every spanning tree.
        #[arg(long)]
        all_trees: bool,
    },
    /// Enumerates the local-complementation orbit of a graph.
    #[command(name = "lc-orbit")]
    LcOrbit {
        #[arg(long)]
        graph: PathBuf,
        /// Include every member key with its complementation sequence.
        #[arg(long)]
        members: bool,
    },
    /// Decides local-Clifford equivalence of two graphs.
    #[command(name = "lc-equiv")]
    LcEquiv {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
    },
    /// Searches the orbit of a setup's graph for a member whose edges join
    /// vicinal qubits only.
    Locality {
        #[arg(long)]
        setup: PathBuf,
    },
    /// Verifies a reduction chain.
    Reduce {
        #[arg(long)]
        chain: PathBuf,
        /// Certificate directory: read before and written after the run.
        #[arg(long)]
        certs: Option<PathBuf>,
    },
    /// Enumerates free polyforms and emits them as setups.
    Enumerate {
        #[arg(long, value_parser = parse_lattice)]
        lattice: Lattice,
        #[arg(long)]
        n: usize,
    },
    /// Runs the acceptance suite.
    Selftest {
        /// Shorten the all-pairs sweep (reported as skipped).
        #[arg(long)]
        quick: bool,
        /// Only these criteria (comma-separated numbers).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
    },
}

fn parse_lattice(s: &str) -> std::result::Result<Lattice, String> {
    Lattice::parse(s).ok_or_else(|| format!("unknown lattice {s:?} (square, triangular)"))
}

struct Input {
    digest: String,
    text: String,
}

fn read_input(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Input {
        digest: sha256_hex(text.as_bytes()),
        text,
    })
}

fn load_setup(path: &Path) -> Result<(Input, Embedding)> {
    let input = read_input(path)?;
    let e = Embedding::from_json_str(&input.text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((input, e))
}

fn load_graph(path: &Path) -> Result<(Input, SimpleGraph)> {
    let input = read_input(path)?;
    let g = SimpleGraph::from_json_str(&input.text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((input, g))
}

fn graph_json(g: &SimpleGraph) -> Value {
    serde_json::to_value(g.to_file()).expect("graph serializes")
}

fn pick_tree(e: &Embedding, tree: &Option<Vec<u32>>) -> Result<SpanningTree> {
    Ok(match tree {
        Some(q) => tree_from_qubits(e, q)?,
        None => default_phi(e)?.0,
    })
}

fn tree_qubits(e: &Embedding, t: &SpanningTree) -> Vec<u32> {
    t.tree_edges().iter().map(|&i| e.qubits()[i]).collect()
}

fn setup_name(e: &Embedding) -> &str {
    e.name().unwrap_or("setup")
}

/// What a command produced, and the exit status it implies.
struct Outcome {
    body: String,
    code: u8,
}

impl Outcome {
    fn json(v: Value) -> Self {
        Self {
            body: serde_json::to_string_pretty(&v).expect("report serializes") + "\n",
            code: 0,
        }
    }

    fn text(s: String) -> Self {
        Self { body: s, code: 0 }
    }
}

fn json_only(g: &Global, cmd: &str) -> Result<()> {
    if g.format == Format::Dot {
        bail!("{cmd} has no DOT output");
    }
    Ok(())
}

fn orbit_options(g: &Global) -> Result<OrbitOptions> {
    if g.budget == 0 {
        bail!("--budget must be at least 1");
    }
    Ok(OrbitOptions {
        budget: g.budget,
        exec: exec_mode(g),
        ..OrbitOptions::default()
    })
}

fn exec_mode(g: &Global) -> Exec {
    if g.workers == Some(1) {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn cmd_phi(g: &Global, setup: &Path, tree: &Option<Vec<u32>>) -> Result<Outcome> {
    let (input, e) = load_setup(setup)?;
    let t = pick_tree(&e, tree)?;
    let r = transform_to_graph_state(&e, &t)?;
    let lam = adjacency_relation(&e);
    if g.format == Format::Dot {
        return Ok(Outcome::text(r.graph.to_dot(setup_name(&e), Some(lam.graph()))));
    }
    let violations: Vec<[u32; 2]> = lam.violations(&r.graph).into_iter().map(|(p, q)| [p, q]).collect();
    Ok(Outcome::json(json!({
        "command": "phi",
        "input_digest": input.digest,
        "setup_digest": e.digest(),
        "tree": tree_qubits(&e, &t),
        "hadamard_set": r.hadamard_set,
        "graph": graph_json(&r.graph),
        "nonlocal_edges": violations,
    })))
}

fn cmd_verify(g: &Global, setup: &Path, tree: &Option<Vec<u32>>, all: bool) -> Result<Outcome> {
    json_only(g, "verify-thm1")?;
    let (input, e) = load_setup(setup)?;
    let trees = if all {
        enumerate_spanning_trees(e.graph())?
    } else {
        vec![pick_tree(&e, tree)?]
    };
    let mut checks = Vec::with_capacity(trees.len());
    let mut all_ok = true;
    for t in &trees {
        let r = transform_to_graph_state(&e, t)?;
        all_ok &= r.verified;
        checks.push(json!({
            "tree": tree_qubits(&e, t),
            "hadamard_set": r.hadamard_set,
            "verified": r.verified,
        }));
    }
    let stab = surface_stabilizer(&e)?;
    Ok(Outcome::json(json!({
        "command": "verify-thm1",
        "input_digest": input.digest,
        "setup_digest": e.digest(),
        "qubits": e.n_qubits(),
        "degeneracy": stab.degeneracy.to_string(),
        "verified": all_ok,
        "trees": checks,
    })))
}

fn cmd_orbit(g: &Global, graph: &Path, members: bool) -> Result<Outcome> {
    let (input, gr) = load_graph(graph)?;
    let mut opts = orbit_options(g)?;
    opts.track_paths = members;
    let orbit = match lc_orbit_until(&gr, None, &opts) {
        Ok(o) => o.into_complete().expect("no stop predicate"),
        Err(Error::OrbitBudgetExceeded { budget }) => {
            return Ok(unknown("lc-orbit", &input.digest, budget));
        }
        Err(e) => return Err(e.into()),
    };
    if g.format == Format::Dot {
        return Ok(Outcome::text(gr.to_dot(graph_label(graph), None)));
    }
    Ok(Outcome::json(json!({
        "command": "lc-orbit",
        "input_digest": input.digest,
        "orbit": orbit_to_json(&orbit, members),
    })))
}

fn graph_label(p: &Path) -> &str {
    p.file_stem().and_then(|s| s.to_str()).unwrap_or("graph")
}

fn unknown(cmd: &str, digest: &str, budget: usize) -> Outcome {
    let mut o = Outcome::json(json!({
        "command": cmd,
        "input_digest": digest,
        "verdict": "unknown",
        "budget": budget,
    }));
    o.code = EXIT_BUDGET;
    o
}

fn cmd_equiv(g: &Global, gp: &Path, hp: &Path) -> Result<Outcome> {
    json_only(g, "lc-equiv")?;
    let (gi, ga) = load_graph(gp)?;
    let (hi, hb) = load_graph(hp)?;
    let w = lc_equivalent(&ga, &hb)?;
    let checked = match &w {
        Some(w) => verify_witness(&ga, &hb, w)?,
        None => false,
    };
    Ok(Outcome::json(json!({
        "command": "lc-equiv",
        "input_digest": [gi.digest, hi.digest],
        "equivalent": w.is_some(),
        "witness": w,
        "witness_verified": checked,
    })))
}

fn cmd_locality(g: &Global, setup: &Path) -> Result<Outcome> {
    let (input, e) = load_setup(setup)?;
    let (t, phi_graph) = default_phi(&e)?;
    let lam = adjacency_relation(&e);
    let opts = orbit_options(g)?;
    let search = match find_local_representative(&phi_graph, lam.graph(), &opts) {
        Ok(s) => s,
        Err(Error::OrbitBudgetExceeded { budget }) => return Ok(unknown("locality", &input.digest, budget)),
        Err(err) => return Err(err.into()),
    };
    if g.format == Format::Dot {
        let shown = search.local_graph().unwrap_or(&phi_graph);
        return Ok(Outcome::text(shown.to_dot(setup_name(&e), Some(lam.graph()))));
    }
    let base = json!({
        "command": "locality",
        "input_digest": input.digest,
        "setup_digest": e.digest(),
        "qubits": e.n_qubits(),
        "tree": tree_qubits(&e, &t),
    });
    let verdict = match search {
        LocalitySearch::Local { graph, path, explored } => json!({
            "verdict": "local",
            "graph": graph_json(&graph),
            "complementations": path,
            "explored": explored,
        }),
        LocalitySearch::Nonlocal(orbit) => json!({
            "verdict": "nonlocal",
            "orbit_size": orbit.len(),
            "orbit_depth": orbit.depth(),
            "orbit_digest": orbit.digest(),
        }),
    };
    let mut report = base;
    report.as_object_mut().expect("object").extend(verdict.as_object().expect("object").clone());
    Ok(Outcome::json(report))
}

fn cmd_reduce(g: &Global, chain: &Path, certs: &Option<PathBuf>) -> Result<Outcome> {
    json_only(g, "reduce")?;
    let input = read_input(chain)?;
    let spec = ChainSpec::from_json_str(&input.text).with_context(|| format!("parsing {}", chain.display()))?;
    let mut store = match certs {
        Some(dir) if dir.exists() => CertificateStore::load_dir(dir)?,
        _ => CertificateStore::new(),
    };
    let report = reduction_chain(&spec, &mut store, &orbit_options(g)?)?;
    if let Some(dir) = certs {
        store.save_dir(dir)?;
    }
    Ok(Outcome::json(json!({
        "command": "reduce",
        "input_digest": input.digest,
        "chain": spec.name,
        "report": report,
    })))
}

fn cmd_enumerate(g: &Global, lattice: Lattice, n: usize) -> Result<Outcome> {
    json_only(g, "enumerate")?;
    let forms = polyform_enumerate(n, lattice);
    let mut setups = Vec::with_capacity(forms.len());
    for (k, p) in forms.iter().enumerate() {
        let e = p
            .to_embedding(lattice)?
            .with_name(format!("{}-{n}-{k}", lattice.name()));
        setups.push(json!({
            "digest": e.digest(),
            "qubits": e.n_qubits(),
            "setup": e.to_setup(),
        }));
    }
    Ok(Outcome::json(json!({
        "command": "enumerate",
        "input_digest": sha256_hex(format!("{}:{n}", lattice.name()).as_bytes()),
        "lattice": lattice.name(),
        "cells": n,
        "count": setups.len(),
        "setups": setups,
    })))
}

fn cmd_selftest(g: &Global, quick: bool, only: &Option<Vec<u8>>) -> Result<Outcome> {
    json_only(g, "selftest")?;
    let opts = SelftestOptions {
        exec: exec_mode(g),
        quick,
    };
    let ids: Vec<u8> = only.clone().unwrap_or_else(|| (1..=11).collect());
    let mut body = String::new();
    let mut failed = false;
    for id in ids {
        if !(1..=11).contains(&id) {
            bail!("no acceptance criterion {id}");
        }
        let r = run_criterion(id, &opts);
        failed |= r.status == Status::Fail;
        body.push_str(&format!("{r}\n"));
        if g.out.is_none() {
            println!("{r}");
            body.clear();
        }
    }
    let mut o = Outcome::text(body);
    o.code = failed as u8;
    Ok(o)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Phi { setup, tree } => cmd_phi(g, setup, tree),
        Command::VerifyThm1 { setup, tree, all_trees } => cmd_verify(g, setup, tree, *all_trees),
        Command::LcOrbit { graph, members } => cmd_orbit(g, graph, *members),
        Command::LcEquiv { g: gp, h } => cmd_equiv(g, gp, h),
        Command::Locality { setup } => cmd_locality(g, setup),
        Command::Reduce { chain, certs } => cmd_reduce(g, chain, certs),
        Command::Enumerate { lattice, n } => cmd_enumerate(g, *lattice, *n),
        Command::Selftest { quick, only } => cmd_selftest(g, *quick, only),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = exec_mode(&cli.global).with_workers(cli.global.workers, || run(&cli));
    match result {
        Ok(outcome) => {
            if let Some(path) = &cli.global.out {
                if let Err(e) = std::fs::write(path, &outcome.body) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::FAILURE;
                }
            } else {
                print!("{}", outcome.body);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
