//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 input parse, 3 validation (bad k, unknown
//! vertex, bad generator parameters), 4 oracle budget exceeded, 5 property
//! check found a counterexample.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bench::{run_bench, BenchConfig, BenchError};
use crate::check::{run_check, CheckConfig, KSelection};
use crate::generate::{generate, Family, GenError};
use crate::io::{format_edge_list, parse_edge_list, LabeledTree, ParseError};
use crate::kecc::{avg_steiner_k_ecc, format_decimal, steiner_k_ecc};
use crate::oracle::{ecc_k_bruteforce_with, OracleError, OracleOptions, SearchMode, DEFAULT_WORK_BUDGET};
use crate::transform::{collapse_to_star, stretch_to_path, Goal, TransformError};
use crate::tree::Vertex;
use crate::QueryError;

/// Environment variable overriding the oracle work budget.
pub const BUDGET_ENV: &str = "STEINER_ECC_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "steiner-ecc", version, about = "Steiner k-eccentricity of tree vertices")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Steiner k-eccentricity of one vertex (greedy algorithm).
    Ecc {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        /// Vertex label as written in the input.
        #[arg(long)]
        vertex: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact average Steiner k-eccentricity over all vertices.
    Aecc {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Brute-force Steiner k-eccentricity with a witness set.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        vertex: u64,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        /// Work budget in elementary steps (default: $STEINER_ECC_BUDGET or 1e8).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sweep a tree corpus and check the algorithm and its structural properties.
    Check {
        /// Largest tree order in the corpus.
        #[arg(long, default_value_t = 40)]
        max_n: usize,
        /// Orders up to this are enumerated exhaustively.
        #[arg(long, default_value_t = 8)]
        exhaustive_max_n: usize,
        /// Random trees per order above the exhaustive range.
        #[arg(long, default_value_t = 500)]
        random_per_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check every k from 1 to n (the default when --k is absent).
        #[arg(long, conflicts_with = "k")]
        k_all: bool,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Transform a tree into the star or the path, emitting the terminal tree.
    Transform {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = Goal::from_str)]
        goal: Goal,
        /// Write the step trace here (`-` for standard error).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate a tree and print it as an edge list.
    Gen {
        /// star, path, random, spider:3,2,1, balanced-spider:16 or caterpillar:4
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Time the greedy algorithm over a size sweep and fit a log-log slope.
    Bench {
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value = "balanced-spider:16")]
        family: String,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

/// Where the tree comes from: a file (`-` or nothing for stdin) or a generator.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge-list file; `-` or omitted reads standard input.
    pub input: Option<PathBuf>,
    /// Generate the tree instead of reading it (see `gen --family`).
    #[arg(long = "gen", value_name = "FAMILY")]
    pub generator: Option<String>,
    /// Order of the generated tree.
    #[arg(long, requires = "generator")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Auto,
    Full,
    Leaves,
}

impl From<Mode> for SearchMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Auto => SearchMode::Auto,
            Mode::Full => SearchMode::Full,
            Mode::Leaves => SearchMode::LeavesOnly,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Counterexample(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Counterexample(_) => 5,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<QueryError> for CliError {
    fn from(e: QueryError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command. Output goes to
/// `out`, diagnostics to `err`; the return value is the process exit code.
pub fn main_with<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match run(&config, stdin, err) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={s:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_WORK_BUDGET),
    }
}

fn load(input: &InputArgs, stdin: &mut dyn Read) -> Result<LabeledTree, CliError> {
    if let Some(spec) = &input.generator {
        if input.input.is_some() {
            return Err(CliError::Usage("give either an input file or --gen, not both".into()));
        }
        let n = input
            .n
            .ok_or_else(|| CliError::Usage("--gen needs --n".into()))?;
        let family: Family = spec.parse()?;
        return Ok(LabeledTree::unlabeled(generate(&family, n, input.seed)?));
    }
    let text = match input.input.as_deref() {
        None => read_all(stdin, "standard input")?,
        Some(p) if p.as_os_str() == "-" => read_all(stdin, "standard input")?,
        Some(p) => fs::read_to_string(p)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", p.display())))?,
    };
    Ok(parse_edge_list(&text)?)
}

fn read_all(stdin: &mut dyn Read, what: &str) -> Result<String, CliError> {
    let mut text = String::new();
    stdin
        .read_to_string(&mut text)
        .map_err(|e| CliError::Parse(format!("cannot read {what}: {e}")))?;
    Ok(text)
}

fn vertex_id(tree: &LabeledTree, label: u64) -> Result<Vertex, CliError> {
    tree.id_of(label)
        .ok_or_else(|| CliError::Validation(format!("vertex {label} does not occur in the input")))
}

fn edges_json(tree: &LabeledTree, edges: &[(Vertex, Vertex)]) -> Value {
    edges
        .iter()
        .map(|&(a, b)| json!([tree.label_of(a), tree.label_of(b)]))
        .collect()
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Runs a parsed command and returns what it prints on standard output.
pub fn run(config: &RunConfig, stdin: &mut dyn Read, err: &mut dyn Write) -> Result<String, CliError> {
    match &config.command {
        Command::Ecc { input, k, vertex, format } => {
            let tree = load(input, stdin)?;
            let v = vertex_id(&tree, *vertex)?;
            let report = steiner_k_ecc(&tree.tree, v, *k)?;
            Ok(match format {
                Format::Json => pretty(&json!({
                    "n": tree.tree.order(),
                    "k": k,
                    "vertex": vertex,
                    "ecc": report.ecc,
                    "shortcut": report.shortcut_used,
                    "segments": report.segment_lengths,
                    "label_map": tree.labels,
                })),
                Format::Text => format!(
                    "ecc_{k}({vertex}) = {}{}\n",
                    report.ecc,
                    if report.shortcut_used {
                        " (fewer leaves than k: whole tree)".to_string()
                    } else if report.segment_lengths.is_empty() {
                        String::new()
                    } else {
                        format!(" (segments {})", join(&report.segment_lengths, " + "))
                    }
                ),
                Format::Csv => format!(
                    "n,k,vertex,ecc,shortcut,segments\n{},{k},{vertex},{},{},{}\n",
                    tree.tree.order(),
                    report.ecc,
                    report.shortcut_used,
                    join(&report.segment_lengths, ";")
                ),
            })
        }
        Command::Aecc { input, k, format } => {
            let tree = load(input, stdin)?;
            let avg = avg_steiner_k_ecc(&tree.tree, *k)?;
            let (num, den) = (*avg.numer(), *avg.denom());
            Ok(match format {
                Format::Json => pretty(&json!({
                    "n": tree.tree.order(),
                    "k": k,
                    "aecc_num": num,
                    "aecc_den": den,
                    "label_map": tree.labels,
                })),
                Format::Text => format!("{num}/{den} ({})\n", format_decimal(&avg)),
                Format::Csv => format!(
                    "n,k,aecc_num,aecc_den,decimal\n{},{k},{num},{den},{}\n",
                    tree.tree.order(),
                    format_decimal(&avg)
                ),
            })
        }
        Command::Oracle { input, k, vertex, mode, budget: flag, format } => {
            let tree = load(input, stdin)?;
            let v = vertex_id(&tree, *vertex)?;
            let options = OracleOptions {
                mode: (*mode).into(),
                budget: Some(budget(*flag)?),
            };
            let result = ecc_k_bruteforce_with(&tree.tree, v, *k, &options)?;
            let witness: Vec<u64> = result.witness_set.iter().map(|w| tree.label_of(w)).collect();
            Ok(match format {
                Format::Json => pretty(&json!({
                    "n": tree.tree.order(),
                    "k": k,
                    "vertex": vertex,
                    "ecc": result.value,
                    "witness_set": witness,
                    "witness_edges": edges_json(&tree, &result.witness_edges),
                    "label_map": tree.labels,
                })),
                Format::Text => format!(
                    "ecc_{k}({vertex}) = {} witnessed by {{{}}}\n",
                    result.value,
                    join(&witness, ",")
                ),
                Format::Csv => format!(
                    "n,k,vertex,ecc,witness\n{},{k},{vertex},{},{}\n",
                    tree.tree.order(),
                    result.value,
                    join(&witness, ";")
                ),
            })
        }
        Command::Check {
            max_n,
            exhaustive_max_n,
            random_per_n,
            seed,
            k_all: _,
            k,
            budget: flag,
            format,
        } => {
            let config = CheckConfig {
                exhaustive_max_n: *exhaustive_max_n,
                max_n: *max_n,
                random_per_n: *random_per_n,
                seed: *seed,
                k: k.map_or(KSelection::All, KSelection::One),
                budget: budget(*flag)?,
            };
            if let Some(0) = k {
                return Err(QueryError::KTooSmall { k: 0, min: 1 }.into());
            }
            let report = run_check(&config);
            let text = match format {
                Format::Json => pretty(&serde_json::to_value(&report).expect("serializable")),
                Format::Text => {
                    let mut s = format!("{} trees\n", report.trees);
                    for p in &report.properties {
                        writeln!(
                            s,
                            "{:<20} passed {:>10}  failed {:>6}  skipped {:>10}",
                            p.name, p.passed, p.failed, p.skipped
                        )
                        .unwrap();
                    }
                    writeln!(s, "{} counterexamples", report.counterexamples).unwrap();
                    if let Some(c) = &report.first_counterexample {
                        writeln!(s, "first counterexample ({}, k = {}): {}", c.property, c.k, c.detail)
                            .unwrap();
                        for (a, b) in &c.edges {
                            writeln!(s, "{a} {b}").unwrap();
                        }
                    }
                    s
                }
                Format::Csv => {
                    let mut s = "property,passed,failed,skipped\n".to_string();
                    for p in &report.properties {
                        writeln!(s, "{},{},{},{}", p.name, p.passed, p.failed, p.skipped).unwrap();
                    }
                    s
                }
            };
            if report.counterexamples > 0 {
                let _ = err.write_all(text.as_bytes());
                return Err(CliError::Counterexample(format!(
                    "{} counterexamples found",
                    report.counterexamples
                )));
            }
            Ok(text)
        }
        Command::Transform { input, goal, trace, format } => {
            let tree = load(input, stdin)?;
            let (terminal, steps) = match goal {
                Goal::Star => collapse_to_star(&tree.tree),
                Goal::Path => stretch_to_path(&tree.tree),
            };
            let terminal = LabeledTree {
                tree: terminal,
                labels: tree.labels.clone(),
            };
            if let Some(target) = trace {
                let mut lines = String::new();
                for step in &steps {
                    writeln!(lines, "{}", step.map_vertices(|v| tree.label_of(v) as Vertex)).unwrap();
                }
                if target.as_os_str() == "-" {
                    let _ = err.write_all(lines.as_bytes());
                } else {
                    fs::write(target, lines).map_err(|e| {
                        CliError::Usage(format!("cannot write trace to {}: {e}", target.display()))
                    })?;
                }
            }
            Ok(match format {
                Format::Json => pretty(&json!({
                    "n": terminal.tree.order(),
                    "goal": match goal { Goal::Star => "star", Goal::Path => "path" },
                    "steps": steps.len(),
                    "edges": edges_json(&terminal, &terminal.tree.edges()),
                    "label_map": terminal.labels,
                })),
                Format::Text => format_edge_list(&terminal),
                Format::Csv => format!("u,v\n{}", format_edge_list(&terminal).replace(' ', ",")),
            })
        }
        Command::Gen { family, n, seed, format } => {
            let family: Family = family.parse()?;
            let tree = LabeledTree::unlabeled(generate(&family, *n, *seed)?);
            Ok(match format {
                Format::Json => pretty(&json!({
                    "n": n,
                    "edges": edges_json(&tree, &tree.tree.edges()),
                })),
                Format::Text => format!("# {family} n={n} seed={seed}\n{}", format_edge_list(&tree)),
                Format::Csv => format!("u,v\n{}", format_edge_list(&tree).replace(' ', ",")),
            })
        }
        Command::Bench { k, family, sizes, reps, format } => {
            let config = BenchConfig {
                k: *k,
                family: family.parse()?,
                sizes: sizes.clone(),
                reps: *reps,
                min_sample: Duration::from_millis(2),
            };
            let report = run_bench(&config)?;
            Ok(match format {
                Format::Json => pretty(&serde_json::to_value(&report).expect("serializable")),
                Format::Text => {
                    let mut s = format!("k = {}, family {}\n", report.k, report.family);
                    for p in &report.points {
                        writeln!(s, "n = {:>9}  median {:>14.0} ns  mean {:>14.0} ns", p.n, p.median_ns, p.mean_ns)
                            .unwrap();
                    }
                    writeln!(s, "log-log slope {:.3}", report.slope).unwrap();
                    s
                }
                Format::Csv => {
                    let mut s = "n,median_ns,mean_ns\n".to_string();
                    for p in &report.points {
                        writeln!(s, "{},{:.0},{:.0}", p.n, p.median_ns, p.mean_ns).unwrap();
                    }
                    s
                }
            })
        }
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    main_with(
        std::env::args_os(),
        &mut stdin.lock(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}
