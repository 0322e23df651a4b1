//! Command-line dispatch.  Exit codes: 0 success / positive decision,
//! 1 negative decision, 2 usage or input error, 3 guard exceeded.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::density::threshold_scale;
use crate::encoding::{build_encoding, degree_profile};
use crate::error::{Error, Guards, Result};
use crate::experiments::threshold_sweep;
use crate::graph::VertexOrdering;
use crate::io::{
    parse_colouring, parse_graph_file, parse_lists, parse_rational, serialise_colouring,
};
use crate::localdense::{is_locally_dense, resilience_bound, DenseMode};
use crate::patterns::classify_pattern;
use crate::solver::{
    canonical_ramsey_number, decide_canarrow_lists, decide_canarrow_unrestricted,
    find_avoiding_colouring, AvoidanceInstance, RamseyOutcome,
};

#[derive(Parser)]
#[command(name = "canram", version, about = "Canonical Ramsey computations on (hyper)graphs")]
struct Cli {
    /// Limit on search-tree nodes and subset scans.
    #[arg(long, global = true, default_value_t = Guards::default().nodes)]
    guard_nodes: u64,
    /// Limit on copy enumeration and hyperedge generation work.
    #[arg(long, global = true, default_value_t = Guards::default().copies)]
    guard_copies: u64,
    /// Worker threads for the Monte Carlo experiments.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal k-density, its witness, and the threshold exponent.
    Density { graph: PathBuf },
    /// Canonical pattern sets of a coloured graph under an ordering.
    Classify {
        graph: PathBuf,
        colouring: PathBuf,
        #[command(flatten)]
        sigma: SigmaArg,
    },
    /// Build the canonical copy hypergraph and its degree profile.
    Encode {
        pattern: PathBuf,
        host: PathBuf,
        lists: PathBuf,
        #[command(flatten)]
        sigma: SigmaArg,
        /// Write the hyperedge list here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check (rho, d)-denseness; also evaluates the deletion-resilience bound.
    Localdense {
        graph: PathBuf,
        #[arg(long)]
        rho: String,
        #[arg(long)]
        d: String,
        /// Exhaustive subset scan (default); errors above the subset guard.
        #[arg(long, default_value_t = true)]
        exact: bool,
        /// Sampled mode: number of random subsets.
        #[arg(long, conflicts_with = "exact", requires = "seed")]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Deletion fraction for the resilience bound d - 2*gamma/rho^2.
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Search for a list-compatible colouring avoiding canonical copies.
    Avoid {
        host: PathBuf,
        pattern: PathBuf,
        lists: PathBuf,
        #[command(flatten)]
        sigma: SigmaArg,
    },
    /// Does every (list-)colouring contain a canonical copy for every sigma?
    Canarrow {
        host: PathBuf,
        pattern: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
    },
    /// Smallest n <= max with the unrestricted canonical Ramsey property.
    Crnumber {
        pattern: PathBuf,
        #[arg(long)]
        max: usize,
    },
    /// Monte Carlo threshold sweep from a JSON config.
    Threshold {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Required: all randomness flows through this seed.
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
struct SigmaArg {
    /// Vertex ordering as a comma-separated sequence, e.g. 2,0,1 (default:
    /// natural order).
    #[arg(long)]
    sigma: Option<String>,
}

impl SigmaArg {
    fn resolve(&self, n: usize) -> Result<VertexOrdering> {
        match &self.sigma {
            None => Ok(VertexOrdering::natural(n)),
            Some(s) => {
                let seq: Vec<usize> = s
                    .split([',', ' '])
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse().map_err(|_| {
                            Error::ParameterOutOfRange(format!("invalid ordering entry {t:?}"))
                        })
                    })
                    .collect::<Result<_>>()?;
                if seq.len() != n {
                    return Err(Error::ParameterOutOfRange(format!(
                        "ordering has {} entries, graph has {n} vertices",
                        seq.len()
                    )));
                }
                VertexOrdering::from_sequence(&seq)
            }
        }
    }
}

/// Parse and dispatch; returns the process exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version as "errors" with success status
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let guards = Guards {
        nodes: cli.guard_nodes,
        copies: cli.guard_copies,
    };
    match dispatch(&cli, &guards) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_guard() {
                3
            } else {
                2
            }
        }
    }
}

fn dispatch(cli: &Cli, guards: &Guards) -> Result<i32> {
    match &cli.command {
        Command::Density { graph } => cmd_density(graph, cli.json),
        Command::Classify {
            graph,
            colouring,
            sigma,
        } => cmd_classify(graph, colouring, sigma, cli.json),
        Command::Encode {
            pattern,
            host,
            lists,
            sigma,
            out,
        } => cmd_encode(pattern, host, lists, sigma, out.as_deref(), cli.json, guards),
        Command::Localdense {
            graph,
            rho,
            d,
            exact: _,
            samples,
            seed,
            gamma,
        } => cmd_localdense(graph, rho, d, *samples, *seed, gamma.as_deref(), cli.json),
        Command::Avoid {
            host,
            pattern,
            lists,
            sigma,
        } => cmd_avoid(host, pattern, lists, sigma, cli.json, guards),
        Command::Canarrow {
            host,
            pattern,
            lists,
        } => cmd_canarrow(host, pattern, lists.as_deref(), cli.json, guards),
        Command::Crnumber { pattern, max } => cmd_crnumber(pattern, *max, cli.json, guards),
        Command::Threshold { config, out, seed } => {
            cmd_threshold(config, out, *seed, cli.workers, cli.json, guards)
        }
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_density(graph: &std::path::Path, as_json: bool) -> Result<i32> {
    let h = parse_graph_file(graph)?;
    let scale = threshold_scale(&h, h.vertex_count().max(2))?;
    let d = &scale.density;
    if as_json {
        println!(
            "{}",
            json!({
                "value": d.value.to_string(),
                "witness": d.witness,
                "exponent": scale.exponent.to_string(),
            })
        );
    } else {
        println!("{}", d.value);
        println!("witness: {}", join(&d.witness));
        println!("exponent: {}", scale.exponent);
    }
    Ok(0)
}

fn cmd_classify(
    graph: &std::path::Path,
    colouring: &std::path::Path,
    sigma: &SigmaArg,
    as_json: bool,
) -> Result<i32> {
    let h = parse_graph_file(graph)?;
    let chi = parse_colouring(&std::fs::read_to_string(colouring)?, &h)?;
    let sigma = sigma.resolve(h.vertex_count())?;
    let witness = classify_pattern(&h, &sigma, &chi)?;
    let sets: Vec<Vec<usize>> = witness.sets().iter().map(|s| s.positions()).collect();
    if as_json {
        println!(
            "{}",
            json!({
                "canonical": !witness.is_empty(),
                "witnessing_sets": sets,
            })
        );
    } else if witness.is_empty() {
        println!("not canonical");
    } else {
        for s in &witness.sets() {
            println!("{s}");
        }
    }
    Ok(if witness.is_empty() { 1 } else { 0 })
}

fn cmd_encode(
    pattern: &std::path::Path,
    host: &std::path::Path,
    lists: &std::path::Path,
    sigma: &SigmaArg,
    out: Option<&std::path::Path>,
    as_json: bool,
    guards: &Guards,
) -> Result<i32> {
    let h = parse_graph_file(pattern)?;
    let gamma = parse_graph_file(host)?;
    let lists = parse_lists(&std::fs::read_to_string(lists)?, &gamma)?;
    let sigma = sigma.resolve(h.vertex_count())?;
    let enc = build_encoding(&h, &sigma, &gamma, &lists, guards)?;
    let mut hyperedge_text = String::new();
    for he in enc.hyperedges() {
        let toks: Vec<String> = he.iter().map(|(e, s)| format!("{e}:{s}")).collect();
        hyperedge_text.push_str(&toks.join(" "));
        hyperedge_text.push('\n');
    }
    let profile = degree_profile(&enc, &h, guards)?;
    if let Some(path) = out {
        std::fs::write(path, &hyperedge_text)?;
    }
    if as_json {
        println!(
            "{}",
            json!({
                "vertex_count": enc.vertex_count(),
                "edge_count": enc.edge_count(),
                "degree_profile": profile,
            })
        );
    } else {
        if out.is_none() {
            print!("{hyperedge_text}");
        }
        println!("vertices: {}", enc.vertex_count());
        println!("hyperedges: {}", enc.edge_count());
        for e in &profile.entries {
            println!(
                "Delta_{} = {} (bound {:.4}, {})",
                e.j,
                e.delta,
                e.bound,
                if e.within_bound { "ok" } else { "VIOLATED" }
            );
        }
    }
    Ok(0)
}

fn cmd_localdense(
    graph: &std::path::Path,
    rho: &str,
    d: &str,
    samples: Option<usize>,
    seed: Option<u64>,
    gamma: Option<&str>,
    as_json: bool,
) -> Result<i32> {
    let g = parse_graph_file(graph)?;
    let rho = parse_rational(rho)?;
    let d = parse_rational(d)?;
    let mode = match samples {
        None => DenseMode::Exact,
        Some(samples) => DenseMode::Sampled {
            samples,
            seed: seed.ok_or_else(|| {
                Error::ParameterOutOfRange("sampled mode requires --seed".into())
            })?,
        },
    };
    let report = is_locally_dense(&g, &rho, &d, mode)?;
    let resilience = gamma
        .map(|gstr| -> Result<_> {
            let gamma = parse_rational(gstr)?;
            resilience_bound(&d, &gamma, &rho)
        })
        .transpose()?;
    if as_json {
        println!(
            "{}",
            json!({
                "dense": report.dense,
                "witness": report.witness,
                "subset_size": report.subset_size,
                "subsets_checked": report.subsets_checked,
                "exhaustive": report.exhaustive,
                "resilience": resilience.as_ref().map(|r| json!({
                    "d_prime": r.d_prime.to_string(),
                    "d_prime_float": r.d_prime.to_f64(),
                    "corollary_applies": r.corollary_applies,
                    "negative": r.negative,
                })),
            })
        );
    } else {
        if report.dense {
            println!(
                "dense (checked {} subsets of size {}{})",
                report.subsets_checked,
                report.subset_size,
                if report.exhaustive { "" } else { ", sampled" }
            );
        } else {
            println!("not dense");
            if let Some(w) = &report.witness {
                println!("witness: {}", join(w));
            }
        }
        if let Some(r) = &resilience {
            println!(
                "d' = {}{}{}",
                r.d_prime,
                if r.corollary_applies {
                    " (corollary applies: d' >= d/2)"
                } else {
                    ""
                },
                if r.negative { " [negative]" } else { "" }
            );
        }
    }
    Ok(if report.dense { 0 } else { 1 })
}

fn cmd_avoid(
    host: &std::path::Path,
    pattern: &std::path::Path,
    lists: &std::path::Path,
    sigma: &SigmaArg,
    as_json: bool,
    guards: &Guards,
) -> Result<i32> {
    let g = parse_graph_file(host)?;
    let h = parse_graph_file(pattern)?;
    let lists = parse_lists(&std::fs::read_to_string(lists)?, &g)?;
    let sigma = sigma.resolve(h.vertex_count())?;
    let inst = AvoidanceInstance {
        host: g.clone(),
        pattern: h,
        sigma,
        lists,
    };
    let res = find_avoiding_colouring(&inst, guards)?;
    if as_json {
        println!(
            "{}",
            json!({
                "outcome": if res.found().is_some() { "found" } else { "none-exists" },
                "certificate": res.found().map(|c| c.colours()),
                "nodes": res.stats.nodes,
                "prunings": res.stats.prunings,
            })
        );
    } else {
        match res.found() {
            Some(chi) => {
                println!("found");
                print!("{}", serialise_colouring(&g, chi));
            }
            None => println!("none-exists"),
        }
    }
    Ok(if res.found().is_some() { 0 } else { 1 })
}

fn cmd_canarrow(
    host: &std::path::Path,
    pattern: &std::path::Path,
    lists: Option<&std::path::Path>,
    as_json: bool,
    guards: &Guards,
) -> Result<i32> {
    let g = parse_graph_file(host)?;
    let h = parse_graph_file(pattern)?;
    let answer = match lists {
        Some(path) => {
            let lists = parse_lists(&std::fs::read_to_string(path)?, &g)?;
            decide_canarrow_lists(&g, &h, &lists, guards)?
        }
        None => decide_canarrow_unrestricted(&g, &h, guards)?,
    };
    if as_json {
        println!("{}", json!({ "canarrow": answer }));
    } else {
        println!("{answer}");
    }
    Ok(if answer { 0 } else { 1 })
}

fn cmd_crnumber(
    pattern: &std::path::Path,
    max: usize,
    as_json: bool,
    guards: &Guards,
) -> Result<i32> {
    let h = parse_graph_file(pattern)?;
    let outcome = canonical_ramsey_number(&h, max, guards)?;
    match outcome {
        RamseyOutcome::Exact(n) => {
            if as_json {
                println!("{}", json!({ "outcome": "exact", "value": n }));
            } else {
                println!("{n}");
            }
            Ok(0)
        }
        RamseyOutcome::Unknown { lower_bound } => {
            if as_json {
                println!(
                    "{}",
                    json!({ "outcome": "unknown", "lower_bound": lower_bound })
                );
            } else {
                println!("unknown (no n < {lower_bound} works)");
            }
            // a guard stopped the scan early; otherwise every n <= max failed
            Ok(if lower_bound <= max { 3 } else { 1 })
        }
    }
}

fn cmd_threshold(
    config: &std::path::Path,
    out: &std::path::Path,
    seed: u64,
    workers: Option<usize>,
    as_json: bool,
    guards: &Guards,
) -> Result<i32> {
    let text = std::fs::read_to_string(config)?;
    let mut cfg: crate::experiments::ExperimentConfig = serde_json::from_str(&text)?;
    cfg.seed = Some(seed);
    if workers.is_some() {
        cfg.workers = workers;
    }
    let curve = threshold_sweep(&cfg, guards)?;
    std::fs::write(out, curve.to_csv(true))?;
    if as_json {
        println!("{}", serde_json::to_string(&curve)?);
    } else {
        for pt in &curve.points {
            println!(
                "p={:.6} ratio={:.3} estimate={:.3} [{:.3}, {:.3}] guard_exceeded={}",
                pt.p, pt.ratio_to_scale, pt.estimate, pt.ci_lo, pt.ci_hi, pt.guard_exceeded
            );
        }
        if curve.unreliable {
            println!("warning: > 5% of trials hit a solver guard; curve unreliable");
        }
        println!("wrote {}", out.display());
    }
    Ok(0)
}
