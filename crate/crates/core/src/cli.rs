//! Command-line front end. Every subcommand prints one line of JSON.
//!
//! Exit codes: 0 on success, 2 on invalid input (with an
//! `{"error": code, "detail": text}` object), 3 when a resource guard refuses
//! the request.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::engine::{evaluate_amplitude_with, plan_moves, EvalOptions, Permutation};
use crate::error::{Error, Result};
use crate::numerics::{SurdSum, TwiceSpin};
use crate::ponzano_regge::{closed_amplitude_truncated, flip_cobordism_amplitude, genus, ClosedTriangulation, FlipCobordism};
use crate::recoupling::{recoupling_tensor, sixj, twist_phase, SixSpins};
use crate::symrep::{
    character_estimate, character_exact, dimension_two_row, enumerate_tableaux, yof_full_matrix, yof_matrix_element,
    TwoRowDiagram, TwoRowTableau,
};
use crate::tree::{count_tree_shapes, enumerate_shapes, LabeledTree};

/// Environment variable capping the number of particles.
pub const MAX_N_VAR: &str = "SPINRECOUPLE_MAX_N";
pub const DEFAULT_MAX_N: usize = 20;
/// Most shapes `trees --list` will print.
pub const MAX_LISTED_SHAPES: usize = 100_000;

#[derive(Parser, Debug)]
#[command(name = "spinrecouple", version, about = "Exact spin-network amplitudes for the permutational model")]
struct Cli {
    /// Worker threads for data-parallel evaluation; output is unchanged.
    #[arg(long, global = true, value_name = "N")]
    parallel: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SixArgs {
    /// Twice-spins a b f c e d of {a b f; c e d}.
    #[arg(num_args = 6, value_names = ["A", "B", "F", "C", "E", "D"], required = true)]
    spins: Vec<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wigner 6j symbol.
    Sixj(SixArgs),
    /// Recoupling coefficient [a b f; c e d].
    Recouple(SixArgs),
    /// Exchange phase for swapping two subsystems coupled to j.
    Twist {
        j1: u32,
        j2: u32,
        j: u32,
    },
    /// Amplitude <lambda'|U_pi|lambda> from a JSON document.
    Amplitude {
        #[arg(long)]
        input: PathBuf,
        /// Also print the compiled move plan.
        #[arg(long)]
        moves: bool,
    },
    /// Count or list binary tree shapes on n leaves.
    Trees {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "list")]
        count: bool,
        #[arg(long)]
        list: bool,
    },
    /// Young's orthogonal form matrix elements.
    Yof {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        perm: String,
        #[arg(long, num_args = 2, value_names = ["ROW", "COL"], conflicts_with = "full")]
        element: Option<Vec<String>>,
        #[arg(long)]
        full: bool,
    },
    /// Character of a two-row irrep, exact or sampled.
    Character {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        perm: String,
        #[arg(long, conflicts_with_all = ["epsilon", "delta", "seed"])]
        exact: bool,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Amplitude of a flip cobordism.
    PrAmplitude {
        #[arg(long)]
        input: PathBuf,
    },
    /// Truncated state sum of a closed triangulation.
    PrClosed {
        #[arg(long)]
        input: PathBuf,
        /// Largest twice-spin summed over.
        #[arg(long)]
        cutoff: u32,
    },
    /// Genus from vertex, edge and face counts.
    Genus {
        #[arg(long, allow_hyphen_values = true)]
        v: i64,
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
        #[arg(long, allow_hyphen_values = true)]
        f: i64,
    },
}

/// Settings read from the environment.
#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub max_n: usize,
}

impl Config {
    pub fn from_env() -> Result<Config> {
        let max_n = match std::env::var(MAX_N_VAR) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{MAX_N_VAR} must be a non-negative integer, got `{s}`")))?,
            Err(_) => DEFAULT_MAX_N,
        };
        Ok(Config { max_n })
    }
}

impl Default for Config {
    fn default() -> Self {
        Config { max_n: DEFAULT_MAX_N }
    }
}

/// Runs one invocation; `args` excludes the program name. Returns the exit
/// code and everything to print on stdout.
pub fn run<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    match Config::from_env() {
        Ok(cfg) => run_with(args, cfg),
        Err(e) => failure(&e),
    }
}

pub fn run_with<I, S>(args: I, cfg: Config) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("spinrecouple".to_string()).chain(args.into_iter().map(Into::into)).collect();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let mut s = e.render().to_string();
                    if !s.ends_with('\n') {
                        s.push('\n');
                    }
                    (if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 }, s)
                }
                _ => (2, line(&json!({ "error": "usage", "detail": e.render().to_string().trim_end() }))),
            };
        }
    };
    let result = match cli.parallel {
        Some(0) => Err(Error::Parse("--parallel must be at least 1".into())),
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Resource(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(&cli.command, cfg, threads > 1))),
        None => dispatch(&cli.command, cfg, false),
    };
    match result {
        Ok(v) => (0, line(&v)),
        Err(e) => failure(&e),
    }
}

fn failure(e: &Error) -> (i32, String) {
    let code = if matches!(e, Error::Resource(_)) { 3 } else { 2 };
    (code, line(&json!({ "error": e.code(), "detail": e.to_string() })))
}

fn line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn surd(v: &SurdSum) -> Value {
    serde_json::to_value(v).expect("surds always serialize")
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Parse(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Parses a tree document; inadmissible labels are reported with the node
/// they occur at.
pub fn parse_tree_json(text: &str) -> Result<LabeledTree> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    LabeledTree::from_json(&v)
}

/// Parses `"2 1 3"` (spaces or commas) as one-line notation.
pub fn parse_permutation(s: &str) -> Result<Permutation> {
    let images = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u32>().map_err(|_| Error::Parse(format!("bad permutation entry `{x}`"))))
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(images)
}

fn guard_n(n: usize, cfg: Config) -> Result<()> {
    if n > cfg.max_n {
        return Err(Error::Resource(format!("n = {n} exceeds the limit {} set by {MAX_N_VAR}", cfg.max_n)));
    }
    Ok(())
}

fn six(spins: &[u32]) -> SixSpins {
    SixSpins::new([spins[0], spins[1], spins[2]], [spins[3], spins[4], spins[5]])
}

fn dispatch(cmd: &Command, cfg: Config, parallel: bool) -> Result<Value> {
    match cmd {
        Command::Sixj(a) => {
            let v = sixj(six(&a.spins));
            Ok(json!({ "value": surd(&v), "float": v.to_f64() }))
        }
        Command::Recouple(a) => {
            let v = recoupling_tensor(six(&a.spins));
            Ok(json!({ "value": surd(&v), "float": v.to_f64() }))
        }
        Command::Twist { j1, j2, j } => {
            let v = twist_phase(TwiceSpin(*j1), TwiceSpin(*j2), TwiceSpin(*j))?;
            Ok(json!({ "value": surd(&v), "float": v.to_f64() }))
        }
        Command::Amplitude { input, moves } => amplitude(&read_json(input)?, *moves, cfg, parallel),
        Command::Trees { n, count: _, list } => {
            guard_n(*n, cfg)?;
            if *n == 0 {
                return Err(Error::Domain("a tree needs at least one leaf".into()));
            }
            let count = count_tree_shapes(*n);
            if !*list {
                return Ok(json!({ "count": count.to_string() }));
            }
            if count > MAX_LISTED_SHAPES.into() {
                return Err(Error::Resource(format!("{count} shapes is more than the {MAX_LISTED_SHAPES} that can be listed")));
            }
            let leaves: Vec<u32> = (1..=*n as u32).collect();
            let shapes: Vec<Value> = enumerate_shapes(&leaves).iter().map(|s| s.to_nested()).collect();
            Ok(json!({ "count": count.to_string(), "shapes": shapes }))
        }
        Command::Yof { diagram, perm, element, full } => {
            let d: TwoRowDiagram = diagram.parse()?;
            guard_n(d.n(), cfg)?;
            let p = parse_permutation(perm)?;
            match (element, full) {
                (Some(ts), _) => {
                    let row = TwoRowTableau::parse(d, &ts[0])?;
                    let col = TwoRowTableau::parse(d, &ts[1])?;
                    let v = yof_matrix_element(d, &p, &row, &col)?;
                    Ok(json!({ "value": surd(&v), "float": v.to_f64() }))
                }
                (None, true) => {
                    let m = yof_full_matrix(d, &p)?;
                    let tableaux: Vec<String> = enumerate_tableaux(d).iter().map(|t| t.to_string()).collect();
                    let rows: Vec<Value> = m.iter().map(|r| Value::Array(r.iter().map(surd).collect())).collect();
                    Ok(json!({ "tableaux": tableaux, "matrix": rows }))
                }
                (None, false) => Err(Error::Parse("yof needs --element ROW COL or --full".into())),
            }
        }
        Command::Character { diagram, perm, exact, epsilon, delta, seed } => {
            let d: TwoRowDiagram = diagram.parse()?;
            guard_n(d.n(), cfg)?;
            let p = parse_permutation(perm)?;
            if *exact {
                let chi = character_exact(d, &p)?;
                let value = chi.as_integer().ok_or_else(|| Error::Domain("character is not an integer".into()))?;
                let dim = dimension_two_row(d);
                let normalized = chi.to_f64() / dim.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
                return Ok(json!({ "character": value.to_string(), "normalized": normalized }));
            }
            let (Some(eps), Some(del)) = (epsilon, delta) else {
                return Err(Error::Parse("character needs --exact or both --epsilon and --delta".into()));
            };
            let seed = seed.unwrap_or(0);
            let est = character_estimate(d, &p, *eps, *del, seed)?;
            Ok(json!({
                "normalized_estimate": est.estimate,
                "samples": est.samples,
                "epsilon": eps,
                "delta": del,
                "seed": seed,
            }))
        }
        Command::PrAmplitude { input } => {
            let c = FlipCobordism::from_json(&read_json(input)?)?;
            guard_n(c.start_tree.n(), cfg)?;
            let v = flip_cobordism_amplitude(&c)?;
            Ok(json!({ "amplitude": surd(&v), "float": v.to_f64() }))
        }
        Command::PrClosed { input, cutoff } => {
            let m = ClosedTriangulation::from_json(&read_json(input)?)?;
            let z = closed_amplitude_truncated(&m, TwiceSpin(*cutoff))?;
            Ok(json!({
                "value": surd(&z.value),
                "float": z.value.to_f64(),
                "touched_cutoff": z.touched_cutoff,
                "labelings": z.labelings,
            }))
        }
        Command::Genus { v, e, f } => Ok(json!({ "genus": genus(*v, *e, *f)? })),
    }
}

fn amplitude(doc: &Value, with_moves: bool, cfg: Config, parallel: bool) -> Result<Value> {
    let obj = doc.as_object().ok_or_else(|| Error::Parse("input must be a JSON object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "lambda" | "pi" | "lambda_prime") {
            return Err(Error::Parse(format!("unknown field `{key}`")));
        }
    }
    let field = |k: &str| obj.get(k).ok_or_else(|| Error::Parse(format!("missing field `{k}`")));
    let name_err = |k: &'static str| move |e: Error| match e {
        Error::Parse(s) => Error::Parse(format!("{k}: {s}")),
        Error::Domain(s) => Error::Domain(format!("{k}: {s}")),
        other => other,
    };
    let lambda = LabeledTree::from_json(field("lambda")?).map_err(name_err("lambda"))?;
    let lambda_prime = LabeledTree::from_json(field("lambda_prime")?).map_err(name_err("lambda_prime"))?;
    let images: Vec<u32> =
        serde_json::from_value(field("pi")?.clone()).map_err(|e| Error::Parse(format!("pi: {e}")))?;
    let p = Permutation::new(images)?;
    guard_n(lambda.n().max(lambda_prime.n()).max(p.n()), cfg)?;
    let v = evaluate_amplitude_with(&lambda, &p, &lambda_prime, EvalOptions { parallel })?;
    let mut out = json!({ "amplitude": surd(&v), "float": v.to_f64() });
    if with_moves {
        let plan = plan_moves(&lambda.shape, &p, &lambda_prime.shape)?;
        out["moves"] = plan.to_json();
    }
    Ok(out)
}
