//! `orthonet`: relation graphs, LGT networks and transfer-minimizing
//! reconciliation from the command line.
//!
//! Exit codes: 0 success, 2 usage or input limit, 3 infeasible or
//! inconsistent result, 4 invalid reconciliation, 5 I/O or parse error.
//! Results go to stdout, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use orthonet::formats::{
    parse_dstree, parse_network, parse_reconciliation_doc, parse_relation_graph, parse_species_tree, write_dstree,
    write_network, write_reconciliation_doc, write_relation_graph, write_species_tree, write_time_assignment,
};
use orthonet::generate;
use orthonet::highways::s_consistency_certificate;
use orthonet::reconcile::{extract_witness_with, min_transfer_cost_with, DpConfig, ReconcileError};
use orthonet::reductions::{
    act_to_nc, fas_to_tmstc, fas_witness, mcc_to_act, solve_act_bruteforce_with, solve_fas_bruteforce, ActInstance,
    FasInstance, MccInstance, ReductionError, DEFAULT_ACT_BOUND,
};
use orthonet::relations::build_least_resolved_dstree;
use orthonet::timing::check_time_consistency;
use orthonet::verify::{check_displays, verify_reconciliation};
use orthonet::{validate_network, Cost, DsTree, LgtNetwork, Parallelism};

#[derive(Parser)]
#[command(name = "orthonet", version, about = "Orthology relations reconciled with LGT species networks")]
struct Cli {
    /// Print one JSON object on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the parallel parts; 1 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest DS-tree out-degree the reconciliation DP accepts.
    #[arg(long, global = true, default_value_t = 8)]
    max_degree: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural rules of an LGT network.
    CheckNetwork {
        #[arg(long)]
        network: PathBuf,
    },
    /// Find a time assignment, or a cycle proving there is none.
    TimeCheck {
        #[arg(long)]
        network: PathBuf,
    },
    /// Least-resolved DS-tree (cotree) of a relation graph.
    Dstree {
        #[arg(long)]
        relations: PathBuf,
    },
    /// Minimum number of transfers to reconcile a DS-tree with a network.
    Reconcile {
        #[arg(long)]
        dstree: PathBuf,
        #[arg(long)]
        network: PathBuf,
        /// Write an optimal binary refinement and reconciliation here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Check a reconciliation against the definition.
    Verify {
        /// DS-tree; defaults to the tree stored in the reconciliation file.
        #[arg(long)]
        dstree: Option<PathBuf>,
        #[arg(long)]
        network: PathBuf,
        #[arg(long, alias = "reconciliation")]
        recon: PathBuf,
        /// Also check that the reconciled tree displays this relation graph.
        #[arg(long)]
        relations: Option<PathBuf>,
    },
    /// Whether a relation graph is consistent with some highway network over a species tree.
    Sconsist {
        #[arg(long)]
        relations: PathBuf,
        #[arg(long, alias = "species-tree")]
        species: PathBuf,
        /// Write the highway network here.
        #[arg(long)]
        emit_network: Option<PathBuf>,
        /// Write the DS-tree and reconciliation here.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Reduction outputs and random instances.
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
    /// Brute-force solvers.
    Oracle {
        #[command(subcommand)]
        what: Oracle,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Incomparable-assignment instance from a multicolored-clique instance.
    Act {
        #[arg(long)]
        mcc: PathBuf,
    },
    /// DS-tree and network from a restricted incomparable-assignment instance.
    Nc {
        #[arg(long)]
        act: PathBuf,
        #[command(flatten)]
        out: OutFiles,
    },
    /// DS-tree and species tree from a feedback-arc-set instance.
    Tmstc {
        #[arg(long)]
        fas: PathBuf,
        /// Also build the forward network and reconciliation from a minimum feedback arc set.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        out: OutFiles,
    },
    /// A seeded random instance.
    Random(RandomArgs),
}

#[derive(Args)]
struct OutFiles {
    /// Write the DS-tree here instead of stdout.
    #[arg(long)]
    dstree_out: Option<PathBuf>,
    /// Write the network (or species tree) here instead of stdout.
    #[arg(long)]
    network_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Network,
    Dstree,
    Cotree,
    Relations,
    Act,
    Mcc,
    Fas,
}

#[derive(Args)]
struct RandomArgs {
    kind: Kind,
    /// Species-tree leaves, tree nodes, vertices or classes, depending on the kind.
    #[arg(long, default_value_t = 4)]
    size: usize,
    /// Secondary arcs (network), genes (trees), elements (act), vertices (mcc) or arcs (fas).
    #[arg(long, default_value_t = 2)]
    count: usize,
    /// Species names A, B, … to draw gene species from.
    #[arg(long, default_value_t = 3)]
    species: usize,
    /// Only keep time-consistent networks.
    #[arg(long)]
    time_consistent: bool,
}

#[derive(Subcommand)]
enum Oracle {
    /// Minimum-weight incomparable assignment.
    Act {
        #[arg(long)]
        act: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ACT_BOUND)]
        bound: usize,
    },
    /// Minimum feedback arc set.
    Fas {
        #[arg(long)]
        fas: PathBuf,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn io_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 5, error: e.into() }
}

fn limit_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: e.into() }
}

/// Result of a command: text for humans, JSON for scripts, and the exit code.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json, code: 0 }
    }

    fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(io_err)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(io_err)
}

/// JSON network documents or Newick species trees.
fn load_network(path: &Path) -> Result<LgtNetwork, Failure> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with('{') { parse_network(&text) } else { parse_species_tree(&text) };
    parsed.with_context(|| format!("parsing {}", path.display())).map_err(io_err)
}

fn load_dstree(path: &Path) -> Result<DsTree, Failure> {
    parse_dstree(&read(path)?).with_context(|| format!("parsing {}", path.display())).map_err(io_err)
}

fn parse_json(text: &str) -> Value {
    serde_json::from_str(text).expect("the library writes valid JSON")
}

fn reduction_err(e: ReductionError) -> Failure {
    match e {
        ReductionError::BoundExceeded { .. } => limit_err(e),
        _ => io_err(e),
    }
}

fn reconcile_err(e: ReconcileError) -> Failure {
    match e {
        ReconcileError::DegreeTooLarge { .. } => limit_err(e),
        _ => io_err(e),
    }
}

fn cost_json(c: Cost) -> Value {
    serde_json::to_value(c).expect("costs serialize")
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let parallelism = match cli.threads {
        Some(1) => Parallelism::Sequential,
        _ => Parallelism::Parallel,
    };
    let dp = DpConfig { max_degree: cli.max_degree, parallelism };
    match &cli.command {
        Command::CheckNetwork { network } => {
            let net = load_network(network)?;
            let report = validate_network(&net);
            let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            let json = json!({
                "valid": report.is_ok(),
                "violations": report.violations.iter().map(|v| json!({
                    "rule": v.rule.name(), "subject": v.subject, "detail": v.detail,
                })).collect::<Vec<_>>(),
            });
            if report.is_ok() {
                Ok(Output::ok("valid", json))
            } else {
                Ok(Output::ok(format!("invalid\n{}", lines.join("\n")), json).with_code(3))
            }
        }
        Command::TimeCheck { network } => {
            let net = load_network(network)?;
            match check_time_consistency(&net) {
                Ok(t) => {
                    let times = write_time_assignment(&net, &t.times);
                    Ok(Output::ok(
                        format!("time-consistent\n{}", times.trim_end()),
                        json!({
                            "consistent": true, "times": parse_json(&times),
                        }),
                    ))
                }
                Err(c) => {
                    let cycle = c.describe(&net);
                    let arcs: Vec<Value> =
                        c.principal_arcs.iter().map(|&(u, v)| json!([net.id(u), net.id(v)])).collect();
                    Ok(Output::ok(
                        format!("not time-consistent\n{cycle}"),
                        json!({
                            "consistent": false, "cycle": arcs,
                        }),
                    )
                    .with_code(3))
                }
            }
        }
        Command::Dstree { relations } => {
            let r = parse_relation_graph(&read(relations)?).context("parsing relations").map_err(io_err)?;
            match build_least_resolved_dstree(&r) {
                Ok(d) => {
                    let nwk = write_dstree(&d);
                    Ok(Output::ok(nwk.trim_end(), json!({"representable": true, "dstree": nwk.trim_end()})))
                }
                Err(e) => {
                    Ok(Output::ok(e.to_string(), json!({"representable": false, "reason": e.to_string()})).with_code(3))
                }
            }
        }
        Command::Reconcile { dstree, network, witness } => {
            let d = load_dstree(dstree)?;
            let net = load_network(network)?;
            let cost = min_transfer_cost_with(&d, &net, &dp).map_err(reconcile_err)?;
            if !cost.is_finite() {
                return Ok(Output::ok("INFEASIBLE", json!({"cost": cost_json(cost)})).with_code(3));
            }
            let mut json = json!({"cost": cost_json(cost)});
            if let Some(path) = witness {
                let w = extract_witness_with(&d, &net, &dp).map_err(reconcile_err)?;
                write(path, &write_reconciliation_doc(&w.reconciliation, Some(&w.tree)))?;
                json["witness"] = json!(path.display().to_string());
            }
            Ok(Output::ok(cost.to_string(), json))
        }
        Command::Verify { dstree, network, recon, relations } => {
            let net = load_network(network)?;
            let (alpha, stored) =
                parse_reconciliation_doc(&read(recon)?).context("parsing reconciliation").map_err(io_err)?;
            let d = match (dstree, stored) {
                (Some(p), _) => load_dstree(p)?,
                (None, Some(t)) => t,
                (None, None) => {
                    return Err(limit_err(anyhow!("no DS-tree: pass --dstree or store one in the reconciliation")))
                }
            };
            let report = verify_reconciliation(&d, &net, &alpha).map_err(|e| Failure { code: 4, error: e.into() })?;
            let displays = match relations {
                Some(p) => {
                    let r = parse_relation_graph(&read(p)?).context("parsing relations").map_err(io_err)?;
                    Some(check_displays(&d, &alpha, &r))
                }
                None => None,
            };
            let ok = report.valid && displays != Some(false);
            let verdict = if ok { "VALID" } else { "INVALID" };
            let mut lines = vec![format!("{verdict} {} transfers", report.transfer_count)];
            lines.extend(report.violations.iter().map(|v| v.to_string()));
            if let Some(shows) = displays {
                lines.push(format!("displays relations: {shows}"));
            }
            let json = json!({
                "valid": report.valid,
                "transfer_count": report.transfer_count,
                "secondary_arcs_used": report.secondary_arcs_used,
                "violations": report.violations.iter().map(|v| json!({
                    "node": v.node, "index": v.index, "rule": v.rule.name(),
                })).collect::<Vec<_>>(),
                "displays": displays,
            });
            Ok(Output::ok(lines.join("\n"), json).with_code(if ok { 0 } else { 4 }))
        }
        Command::Sconsist { relations, species, emit_network, emit_witness } => {
            let r = parse_relation_graph(&read(relations)?).context("parsing relations").map_err(io_err)?;
            let s = load_network(species)?;
            match s_consistency_certificate(&r, &s).map_err(io_err)? {
                Some((d, hw, alpha)) => {
                    if let Some(p) = emit_network {
                        write(p, &write_network(&hw.network))?;
                    }
                    if let Some(p) = emit_witness {
                        write(p, &write_reconciliation_doc(&alpha, Some(&d)))?;
                    }
                    let nwk = write_dstree(&d);
                    Ok(Output::ok(
                        format!("CONSISTENT {} highway arcs", hw.network.secondary_arc_count()),
                        json!({
                            "consistent": true,
                            "dstree": nwk.trim_end(),
                            "highway_arcs": hw.network.secondary_arc_count(),
                        }),
                    ))
                }
                None => Ok(Output::ok("INCONSISTENT", json!({"consistent": false})).with_code(3)),
            }
        }
        Command::Gen { what } => gen(cli, what),
        Command::Oracle { what } => oracle(what),
    }
}

/// Writes `text` to `path` if given, otherwise returns it for stdout.
fn emit(path: &Option<PathBuf>, text: String) -> Result<Value, Failure> {
    match path {
        Some(p) => {
            write(p, &text)?;
            Ok(json!({"file": p.display().to_string()}))
        }
        None => Ok(Value::String(text)),
    }
}

fn text_of(v: &Value) -> String {
    match v {
        Value::String(s) => s.trim_end().to_string(),
        other => format!("written to {}", other["file"].as_str().unwrap_or("?")),
    }
}

fn gen(cli: &Cli, what: &Gen) -> Result<Output, Failure> {
    match what {
        Gen::Act { mcc } => {
            let h = MccInstance::from_json(&read(mcc)?).map_err(io_err)?;
            let act = mcc_to_act(&h).map_err(io_err)?;
            let text = act.to_json();
            Ok(Output::ok(text.trim_end(), parse_json(&text)))
        }
        Gen::Nc { act, out } => {
            let inst = ActInstance::from_json(&read(act)?).map_err(io_err)?;
            let (d, net) = act_to_nc(&inst).map_err(reduction_err)?;
            let tree = emit(&out.dstree_out, write_dstree(&d))?;
            let network = emit(&out.network_out, write_network(&net))?;
            let text = format!("{}\n{}", text_of(&tree), text_of(&network));
            let network = if out.network_out.is_none() { parse_json(network.as_str().unwrap()) } else { network };
            Ok(Output::ok(text, json!({"dstree": tree, "network": network})))
        }
        Gen::Tmstc { fas, witness, out } => {
            let h = FasInstance::from_json(&read(fas)?).map_err(io_err)?;
            let red = fas_to_tmstc(&h).map_err(io_err)?;
            let tree = emit(&out.dstree_out, write_dstree(&red.dstree))?;
            let species = write_species_tree(&red.species_tree).map_err(io_err)?;
            let mut json = json!({"dstree": tree, "k": red.big_k});
            let mut lines = vec![format!("K = {}", red.big_k), text_of(&tree)];
            if *witness {
                let a = solve_fas_bruteforce(&h).map_err(reduction_err)?;
                let (net, alpha) = fas_witness(&h, &a, &red).map_err(io_err)?;
                let network = emit(&out.network_out, write_network(&net))?;
                let doc = write_reconciliation_doc(&alpha, None);
                lines.push(format!("feedback arcs: {}", a.len()));
                lines.push(text_of(&network));
                lines.push(doc.trim_end().to_string());
                json["species_tree"] = Value::String(species.trim_end().to_string());
                json["feedback_arcs"] = json!(a);
                json["network"] =
                    if out.network_out.is_none() { parse_json(network.as_str().unwrap()) } else { network };
                json["reconciliation"] = parse_json(&doc);
            } else {
                let s = emit(&out.network_out, species)?;
                lines.push(text_of(&s));
                json["species_tree"] = s;
            }
            Ok(Output::ok(lines.join("\n"), json))
        }
        Gen::Random(args) => {
            let mut rng = generate::rng(cli.seed);
            let species: Vec<String> = (0..args.species.max(1)).map(generate::species_name).collect();
            let size = args.size.max(1);
            let text = match args.kind {
                Kind::Network => {
                    let net = generate::random_lgt_network(&mut rng, size, args.count, args.time_consistent);
                    write_network(&net)
                }
                Kind::Dstree => {
                    write_dstree(&generate::random_dstree(&mut rng, args.count.max(1), cli.max_degree.max(2), &species))
                }
                Kind::Cotree => {
                    write_dstree(&generate::random_cotree(&mut rng, args.count.max(1), cli.max_degree.max(2), &species))
                }
                Kind::Relations => {
                    let d = generate::random_cotree(&mut rng, args.count.max(1), cli.max_degree.max(2), &species);
                    write_relation_graph(&orthonet::relations::relation_graph_of(&d))
                }
                Kind::Act => {
                    let elements = args.count.clamp(1, size);
                    generate::random_restricted_act(&mut rng, size, elements, 2).to_json()
                }
                Kind::Mcc => {
                    let vertices = args.count.max(size);
                    generate::random_mcc(&mut rng, size, vertices, 0.5).to_json()
                }
                Kind::Fas => {
                    let n = size.max(2);
                    generate::random_fas(&mut rng, n, args.count.min(n * (n - 1))).to_json()
                }
            };
            let json = if text.trim_start().starts_with('{') { parse_json(&text) } else { json!(text.trim_end()) };
            Ok(Output::ok(text.trim_end(), json))
        }
    }
}

fn oracle(what: &Oracle) -> Result<Output, Failure> {
    match what {
        Oracle::Act { act, bound } => {
            let inst = ActInstance::from_json(&read(act)?).map_err(io_err)?;
            let best = solve_act_bruteforce_with(&inst, *bound).map_err(reduction_err)?;
            let code = if best.is_finite() { 0 } else { 3 };
            Ok(Output::ok(best.to_string(), json!({"optimum": cost_json(best)})).with_code(code))
        }
        Oracle::Fas { fas } => {
            let h = FasInstance::from_json(&read(fas)?).map_err(io_err)?;
            let a = solve_fas_bruteforce(&h).map_err(reduction_err)?;
            let arcs: Vec<Value> = a.iter().map(|&i| json!([h.arcs[i].0, h.arcs[i].1])).collect();
            Ok(Output::ok(a.len().to_string(), json!({"size": a.len(), "arcs": arcs})))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = orthonet::par::configure_threads(n.max(1)) {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize"));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
