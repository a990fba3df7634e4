//! `rigidkit` command-line front end.
//!
//! Exit codes: 0 success (or a tight graph), 1 runtime or suite failure,
//! 2 malformed input or a framework that is not well-positioned, 3 sparse
//! but not tight (or not reducible), 4 not sparse.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use rigidkit::construct::{construct_with_report, PlacementParams};
use rigidkit::export::{framework_to_dot, framework_to_svg, graph_to_dot};
use rigidkit::lq::{analyze_lq, regular_framework, LqNorm};
use rigidkit::moves::{generate_tight_graph, reduce, MoveSequence, Scheme};
use rigidkit::polytope::{analyze_poly_with, colour_framework, spanning_tree_criteria};
use rigidkit::sparsity::{is_sparse_bruteforce, is_sparse_pebble, SparsityVerdict};
use rigidkit::suite::{run_suite, SuiteReport, SUITE_NAMES};
use rigidkit::{
    Framework, Graph, NormSpec, PolytopeNorm, RigidityError, SparsityParams, TolerancePolicy,
};

#[derive(Parser, Debug)]
#[command(
    name = "rigidkit",
    version,
    about = "Infinitesimal rigidity of bar-joint frameworks under lq and polytopic norms",
    after_help = "Norm aliases: {\"type\":\"linf\"} expands to facets (1,0),(0,1); \
                  {\"type\":\"l1\"} expands to facets (1,1),(1,-1), for which the polytopic \
                  norm equals |a_1| + |a_2| exactly."
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every command.
#[derive(Args, Debug)]
struct RunConfig {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "RIGIDKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Placements sampled when realising a bare graph.
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Relative rank threshold factor (default 2^-40).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Suppress warnings and informational text.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Dot,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SchemeArg {
    A,
    B,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::A => Scheme::A,
            SchemeArg::B => Scheme::B,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// (k,l)-sparsity verdict of a graph by the pebble game.
    CheckSparsity {
        graph: PathBuf,
        #[arg(short, default_value_t = 2)]
        k: u32,
        #[arg(short, default_value_t = 2)]
        l: u32,
        /// Also run the brute-force subset enumeration (n <= 12).
        #[arg(long)]
        oracle: bool,
    },
    /// Rigidity report of a framework, or of a bare graph at a sampled
    /// regular lq placement when `--q` is given.
    Analyze {
        file: PathBuf,
        /// Exponent for realising a bare graph.
        #[arg(long)]
        q: Option<f64>,
        /// Dimension for realising a bare graph.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Build the polytopic matrix even with tied edges (zero rows).
        #[arg(long)]
        allow_ill_positioned: bool,
    },
    /// Edge colouring and spanning-tree criteria of a polytopic framework.
    Colour { framework: PathBuf },
    /// Random (2,2)-tight graph with its move sequence.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SchemeArg::A)]
        scheme: SchemeArg,
    },
    /// Move sequence from K1 certifying that a graph is (2,2)-tight.
    Reduce {
        graph: PathBuf,
        /// Restrict to one scheme's moves.
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
    },
    /// Graph produced by a move sequence.
    Replay { sequence: PathBuf },
    /// Well-positioned placement along a scheme-B move sequence whose two
    /// colour classes span.
    Construct {
        sequence: PathBuf,
        /// Norm JSON file with two facets (default l-infinity).
        #[arg(long)]
        norm: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
    },
    /// Run a property suite: oracle, thm38, thm410 or invariants.
    Suite {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        name: String,
    },
    /// Render a graph or framework file as JSON, DOT or SVG.
    Export {
        file: PathBuf,
        /// Draw the i-th nontrivial flex as arrows (SVG only).
        #[arg(long)]
        flex: Option<usize>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Failure {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }

    fn runtime(e: impl std::fmt::Display) -> Failure {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<RigidityError> for Failure {
    fn from(e: RigidityError) -> Self {
        match e {
            RigidityError::NotWellPositioned(edges) => Failure::input(format!(
                "framework is not well-positioned; tied edges: {}",
                edges
                    .iter()
                    .map(|(a, b)| format!("{a}-{b}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            )),
            other => Failure::input(other),
        }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| Failure::input(format!("{e:#}")))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable") + "\n"
}

fn policy(config: &RunConfig) -> Result<TolerancePolicy, Failure> {
    match config.tol {
        None => Ok(TolerancePolicy::default()),
        Some(t) if t > 0.0 && t.is_finite() => Ok(TolerancePolicy::Relative(t)),
        Some(t) => Err(Failure::input(format!("--tol must be positive, got {t}"))),
    }
}

fn require_format(config: &RunConfig, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&config.format) {
        Ok(())
    } else {
        Err(Failure::input(format!(
            "format {:?} is not available for this command",
            config.format
        )))
    }
}

fn warn(config: &RunConfig, message: &str) {
    if !config.quiet {
        eprintln!("warning: {message}");
    }
}

fn verdict_text(v: &SparsityVerdict) -> &'static str {
    if v.is_tight {
        "tight"
    } else if v.is_sparse {
        "sparse, not tight"
    } else {
        "not sparse"
    }
}

fn verdict_code(v: &SparsityVerdict) -> u8 {
    if v.is_tight {
        0
    } else if v.is_sparse {
        3
    } else {
        4
    }
}

fn check_sparsity(config: &RunConfig, path: &Path, k: u32, l: u32, oracle: bool) -> Outcome {
    require_format(config, &[Format::Json, Format::Text])?;
    let params = SparsityParams::new(k, l).map_err(Failure::input)?;
    let g: Graph = read_json(path)?;
    let pebble = is_sparse_pebble(&g, params);
    let brute = if oracle {
        Some(is_sparse_bruteforce(&g, params).map_err(Failure::input)?)
    } else {
        None
    };
    let agree = brute
        .as_ref()
        .map(|b| b.is_sparse == pebble.is_sparse && b.is_tight == pebble.is_tight);
    let code = verdict_code(&pebble);
    let out = match config.format {
        Format::Text => {
            let mut s = verdict_text(&pebble).to_string();
            if let Some(w) = &pebble.witness {
                s += &format!(" (witness {w:?})");
            }
            if let (Some(b), Some(a)) = (&brute, agree) {
                s += &format!("\noracle: {}\nagreement: {a}", verdict_text(b));
            }
            s + "\n"
        }
        _ => {
            let mut v = json!({
                "k": k,
                "l": l,
                "verdict": verdict_text(&pebble),
                "pebble": pebble,
            });
            if let (Some(b), Some(a)) = (brute, agree) {
                v["oracle"] = json!(b);
                v["agreement"] = json!(a);
            }
            to_json(&v)
        }
    };
    Ok((out, code))
}

/// Reads a framework, or realises a bare graph when `q` is given.
fn load_framework(
    config: &RunConfig,
    path: &Path,
    q: Option<f64>,
    dim: usize,
) -> Result<Framework, Failure> {
    match q {
        None => read_json(path),
        Some(q) => {
            let g: Graph = read_json(path)?;
            let norm = LqNorm::new(q)?;
            Ok(regular_framework(
                &g,
                norm,
                dim,
                config.seed,
                config.trials as usize,
                policy(config)?,
            )?)
        }
    }
}

fn analyze(config: &RunConfig, path: &Path, q: Option<f64>, dim: usize, allow: bool) -> Outcome {
    require_format(config, &[Format::Json, Format::Text])?;
    let pol = policy(config)?;
    let f = load_framework(config, path, q, dim)?;
    let value = match f.norm() {
        NormSpec::Lq(norm) => {
            if norm.is_ill_conditioned() {
                warn(
                    config,
                    &format!(
                        "q = {} makes the q-1 powers ill-conditioned; consider the polytopic l1/linf model",
                        norm.q()
                    ),
                );
            }
            let report = analyze_lq(&f, pol)?;
            json!({ "framework": f, "report": report })
        }
        NormSpec::Polytope(_) => {
            let a = analyze_poly_with(&f, pol, allow)?;
            if !a.colouring.well_positioned {
                warn(
                    config,
                    "tied edges kept as zero rows; the verdict is exploratory",
                );
            }
            json!({
                "framework": f,
                "report": a.report,
                "colouring": a.colouring,
                "criteria": a.criteria,
                "criteria_consistent": a.criteria_consistent,
            })
        }
    };
    let out = match config.format {
        Format::Text => {
            let r = &value["report"];
            let mut s = format!(
                "rank {} of {}x{}; rigid: {}; minimal: {}; nontrivial flexes: {}\n",
                r["rank"],
                r["matrix_rows"],
                r["matrix_cols"],
                r["is_rigid"],
                r["is_minimal"],
                r["nontrivial_flexes"].as_array().map_or(0, Vec::len)
            );
            if let Some(c) = value.get("criteria").filter(|c| !c.is_null()) {
                s += &format!(
                    "colour classes spanning: {}; edge-disjoint spanning trees: {}\n",
                    c["spans"], c["edge_disjoint_spanning_trees"]
                );
            }
            s
        }
        _ => to_json(&value),
    };
    Ok((out, 0))
}

fn colour(config: &RunConfig, path: &Path) -> Outcome {
    require_format(config, &[Format::Json, Format::Text, Format::Dot])?;
    let f: Framework = read_json(path)?;
    let colouring = colour_framework(&f)?;
    let criteria = spanning_tree_criteria(&f)?;
    let out = match config.format {
        Format::Dot => framework_to_dot(&f),
        Format::Text => {
            let mut s = String::new();
            for k in 1..=colouring.facet_count {
                s += &format!("colour {k}: {:?}\n", colouring.class(k));
            }
            s + &format!("spanning: {:?}\n", criteria.spans)
        }
        _ => to_json(&json!({ "colouring": colouring, "criteria": criteria })),
    };
    Ok((out, 0))
}

fn generate(config: &RunConfig, n: usize, scheme: SchemeArg) -> Outcome {
    require_format(config, &[Format::Json, Format::Dot])?;
    if n == 0 {
        return Err(Failure::input("--n must be at least 1"));
    }
    let (g, seq) = generate_tight_graph(n, scheme.into(), config.seed);
    let out = match config.format {
        Format::Dot => graph_to_dot(&g),
        _ => to_json(&json!({ "graph": g, "sequence": seq })),
    };
    Ok((out, 0))
}

fn reduce_cmd(config: &RunConfig, path: &Path, scheme: Option<SchemeArg>) -> Outcome {
    require_format(config, &[Format::Json])?;
    let g: Graph = read_json(path)?;
    match reduce(&g, scheme.map(Scheme::from)) {
        Ok(r) => Ok((to_json(&r), 0)),
        Err(e) => Err(Failure {
            code: 3,
            message: e.to_string(),
        }),
    }
}

fn replay(config: &RunConfig, path: &Path) -> Outcome {
    require_format(config, &[Format::Json, Format::Dot])?;
    let seq: MoveSequence = read_json(path)?;
    let g = seq.replay().map_err(Failure::input)?;
    let out = match config.format {
        Format::Dot => graph_to_dot(&g),
        _ => to_json(&g),
    };
    Ok((out, 0))
}

fn construct(
    config: &RunConfig,
    path: &Path,
    norm: Option<&Path>,
    params: PlacementParams,
) -> Outcome {
    require_format(config, &[Format::Json, Format::Dot, Format::Svg])?;
    let seq: MoveSequence = read_json(path)?;
    let norm = match norm {
        None => PolytopeNorm::linf(2),
        Some(p) => match read_json::<NormSpec>(p)? {
            NormSpec::Polytope(p) => p,
            NormSpec::Lq(_) => return Err(Failure::input("construction needs a polytopic norm")),
        },
    };
    let c = construct_with_report(&seq, &norm, params, config.seed).map_err(|e| match e {
        RigidityError::ParameterUnderflow { .. } => Failure::runtime(e),
        other => Failure::from(other),
    })?;
    let out = match config.format {
        Format::Dot => framework_to_dot(&c.framework),
        Format::Svg => framework_to_svg(&c.framework, None)?,
        _ => to_json(&c.framework),
    };
    Ok((out, 0))
}

fn suite_text(r: &SuiteReport) -> String {
    let mut s = format!("suite {} (seed {})\n", r.suite, r.seed);
    for c in &r.checks {
        let mark = if c.ok {
            "ok"
        } else if c.advisory {
            "advisory"
        } else {
            "FAIL"
        };
        s += &format!(
            "  [{mark}] {}: {}/{} {}\n",
            c.name, c.passed, c.total, c.detail
        );
    }
    s + if r.ok() { "passed\n" } else { "failed\n" }
}

fn suite(config: &RunConfig, name: &str) -> Outcome {
    require_format(config, &[Format::Json, Format::Text])?;
    let report = run_suite(name, config.seed)
        .ok_or_else(|| Failure::input(format!("unknown suite {name}")))?;
    let code = if report.ok() { 0 } else { 1 };
    let out = match config.format {
        Format::Text => suite_text(&report),
        _ => to_json(&report),
    };
    Ok((out, code))
}

fn export(config: &RunConfig, path: &Path, flex: Option<usize>) -> Outcome {
    let value: Value = read_json(path)?;
    let is_framework = value.get("placement").is_some();
    if !is_framework {
        let g: Graph = serde_json::from_value(value).map_err(Failure::input)?;
        return match config.format {
            Format::Json => Ok((to_json(&g), 0)),
            Format::Dot => Ok((graph_to_dot(&g), 0)),
            _ => Err(Failure::input("a bare graph exports as json or dot")),
        };
    }
    let f: Framework = serde_json::from_value(value).map_err(Failure::input)?;
    let out = match config.format {
        Format::Json => to_json(&f),
        Format::Dot => framework_to_dot(&f),
        Format::Svg => {
            let u = match flex {
                None => None,
                Some(i) => {
                    let report = rigidkit::analyze(&f, policy(config)?)?;
                    let u = report.nontrivial_flexes.get(i).cloned().ok_or_else(|| {
                        Failure::input(format!(
                            "flex {i} requested but only {} nontrivial flexes exist",
                            report.nontrivial_flexes.len()
                        ))
                    })?;
                    Some(u)
                }
            };
            framework_to_svg(&f, u.as_deref())?
        }
        Format::Text => return Err(Failure::input("export supports json, dot and svg")),
    };
    Ok((out, 0))
}

fn run(cli: &Cli) -> Outcome {
    let config = &cli.config;
    match &cli.command {
        Command::CheckSparsity {
            graph,
            k,
            l,
            oracle,
        } => check_sparsity(config, graph, *k, *l, *oracle),
        Command::Analyze {
            file,
            q,
            dim,
            allow_ill_positioned,
        } => analyze(config, file, *q, *dim, *allow_ill_positioned),
        Command::Colour { framework } => colour(config, framework),
        Command::Generate { n, scheme } => generate(config, *n, *scheme),
        Command::Reduce { graph, scheme } => reduce_cmd(config, graph, *scheme),
        Command::Replay { sequence } => replay(config, sequence),
        Command::Construct {
            sequence,
            norm,
            epsilon,
            r,
            delta,
        } => construct(
            config,
            sequence,
            norm.as_deref(),
            PlacementParams {
                epsilon: *epsilon,
                r: *r,
                delta: *delta,
            },
        ),
        Command::Suite { name } => suite(config, name),
        Command::Export { file, flex } => export(config, file, *flex),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
