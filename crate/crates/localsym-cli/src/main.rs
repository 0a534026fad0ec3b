//! Command-line surface over the localsym library.
//!
//! Exit codes are part of the contract: 0 for success (and for symmetric
//! verdicts), 1 for asymmetric verdicts, 2 for usage, parse, and I/O
//! errors, 3 when a canonicalization budget left the answer undecided.
//! Stdout carries data only; diagnostics go to stderr.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use localsym::canonical::{CODE_FORMAT_VERSION, DEFAULT_NODE_BUDGET};
use localsym::config::parse_experiment_config;
use localsym::degree::{degree_function, dsed};
use localsym::experiment::{run_experiment, CSV_HEADER};
use localsym::io::read_graph_str;
use localsym::random::{sample_gnm, sample_gnp, triangle_count, GnmSpec, GnpSpec, PRNG_ID};
use localsym::symmetry::{
    globally_symmetric_pair_with_budget, graph_globally_symmetric,
    k_locally_symmetric_with_budget, symmetry_partition_with_budget, Locality, PairVerdict,
    QueryOpts,
};
use localsym::{Diameter, Graph};

fn version_string() -> &'static str {
    let text = format!(
        "{} (prng {PRNG_ID}, code format {CODE_FORMAT_VERSION})",
        env!("CARGO_PKG_VERSION")
    );
    Box::leak(text.into_boxed_str())
}

#[derive(Parser)]
#[command(name = "localsym", version = version_string(), about = "k-local and global graph symmetry analysis")]
struct Cli {
    /// Cap on worker threads (default: all available cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Gnp,
    Gnm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random graph and write it as an edge list.
    Gen {
        #[arg(long, value_enum)]
        model: Model,
        /// Vertex count.
        #[arg(long)]
        n: usize,
        /// Edge probability (gnp only).
        #[arg(long)]
        p: Option<f64>,
        /// Exact edge count (gnm only).
        #[arg(long)]
        m: Option<u64>,
        /// Required: sampling is reproducible, never wall-clock seeded.
        #[arg(long)]
        seed: u64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print basic statistics of a graph as `key value` lines.
    Stats {
        /// Edge-list file, or `-` for stdin.
        input: PathBuf,
    },
    /// Partition all vertices into symmetry classes.
    Classes {
        /// Edge-list file, or `-` for stdin.
        input: PathBuf,
        /// Locality order, or `global`.
        #[arg(long, default_value = "1", value_parser = parse_locality)]
        k: Locality,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Canonicalization node budget per vertex.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Decide whether two vertices are k-locally symmetric.
    Pair {
        /// Edge-list file, or `-` for stdin.
        input: PathBuf,
        v1: u32,
        v2: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Global symmetry of a vertex pair, or of the whole graph when no
    /// pair is given.
    Global {
        /// Edge-list file, or `-` for stdin.
        input: PathBuf,
        #[arg(long, requires = "v2")]
        v1: Option<u32>,
        #[arg(long, requires = "v1")]
        v2: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Degree-sequence edit distance between two graphs.
    Dsed {
        input1: PathBuf,
        input2: PathBuf,
        /// Also print per-degree contributions as CSV.
        #[arg(long)]
        explain: bool,
    },
    /// Run a Monte Carlo experiment grid from a config file.
    Experiment {
        config: PathBuf,
        /// CSV output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_locality(s: &str) -> Result<Locality, String> {
    if s == "global" {
        return Ok(Locality::Global);
    }
    s.parse::<u32>()
        .map(Locality::K)
        .map_err(|_| format!("expected a locality order or `global`, got {s:?}"))
}

fn read_input(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        return Ok(buf);
    }
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph, String> {
    let text = read_input(path)?;
    let build = read_graph_str(&text, true).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(build.graph)
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>, String> {
    match out {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) => {
            let f = fs::File::create(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
    }
}

fn check_vertex(g: &Graph, v: u32) -> Result<(), String> {
    if (v as usize) < g.n() {
        Ok(())
    } else {
        Err(format!("vertex {v} outside graph with {} vertices", g.n()))
    }
}

fn verdict_exit(verdict: PairVerdict) -> ExitCode {
    match verdict {
        PairVerdict::Symmetric => ExitCode::SUCCESS,
        PairVerdict::Asymmetric => ExitCode::from(1),
        PairVerdict::Undecided => ExitCode::from(3),
    }
}

fn cmd_gen(
    model: Model,
    n: usize,
    p: Option<f64>,
    m: Option<u64>,
    seed: u64,
    out: Option<&Path>,
) -> Result<ExitCode, String> {
    if n < 1 {
        return Err("--n must be at least 1".into());
    }
    let graph = match model {
        Model::Gnp => {
            let p = p.ok_or("--model gnp requires --p")?;
            if m.is_some() {
                return Err("--m only applies to --model gnm".into());
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("--p must lie in [0,1], got {p}"));
            }
            sample_gnp(&GnpSpec { n, p, seed })
        }
        Model::Gnm => {
            let m = m.ok_or("--model gnm requires --m")?;
            if p.is_some() {
                return Err("--p only applies to --model gnp".into());
            }
            let total = n as u64 * (n as u64 - 1) / 2;
            if m > total {
                return Err(format!("--m {m} exceeds the {total} vertex pairs of n={n}"));
            }
            sample_gnm(&GnmSpec { n, m, seed })
        }
    };
    let mut w = open_out(out)?;
    w.write_all(localsym::io::write_edge_list(&graph).as_bytes())
        .and_then(|()| w.flush())
        .map_err(|e| format!("writing output: {e}"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(input: &Path) -> Result<ExitCode, String> {
    let g = load_graph(input)?;
    // degree_sequence is non-decreasing.
    let degrees = g.degree_sequence();
    let (min_d, max_d) = (
        degrees.first().copied().unwrap_or(0),
        degrees.last().copied().unwrap_or(0),
    );
    let mean_d = if g.n() == 0 { 0.0 } else { 2.0 * g.m() as f64 / g.n() as f64 };
    let mut w = io::stdout().lock();
    let diameter = match g.diameter() {
        Diameter::Finite(d) => d.to_string(),
        Diameter::Infinite => "infinite".into(),
    };
    writeln!(w, "n {}", g.n())
        .and_then(|()| writeln!(w, "m {}", g.m()))
        .and_then(|()| writeln!(w, "min_degree {min_d}"))
        .and_then(|()| writeln!(w, "max_degree {max_d}"))
        .and_then(|()| writeln!(w, "mean_degree {mean_d}"))
        .and_then(|()| writeln!(w, "triangles {}", triangle_count(&g)))
        .and_then(|()| writeln!(w, "diameter {diameter}"))
        .map_err(|e| format!("writing output: {e}"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classes(input: &Path, k: Locality, format: Format, budget: u64) -> Result<ExitCode, String> {
    let g = load_graph(input)?;
    let part = symmetry_partition_with_budget(&g, k, budget);
    let mut w = io::stdout().lock();
    match format {
        Format::Json => {
            writeln!(w, "{}", part.to_json()).map_err(|e| format!("writing output: {e}"))?;
        }
        Format::Tsv => {
            for (i, class) in part.classes.iter().enumerate() {
                let code = part.codes[i]
                    .as_ref()
                    .map(|c| c.to_hex())
                    .unwrap_or_default();
                let members = class
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                writeln!(w, "{i}\t{}\t{code}\t{members}", class.len())
                    .map_err(|e| format!("writing output: {e}"))?;
            }
        }
    }
    if part.undecided.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "warning: {} vertices exceeded the canonicalization budget; their classes are unresolved singletons",
            part.undecided.len()
        );
        Ok(ExitCode::from(3))
    }
}

fn cmd_pair(input: &Path, v1: u32, v2: u32, k: u32, budget: u64) -> Result<ExitCode, String> {
    let g = load_graph(input)?;
    check_vertex(&g, v1)?;
    check_vertex(&g, v2)?;
    if v1 == v2 {
        return Err("pair queries need two distinct vertices".into());
    }
    let verdict = k_locally_symmetric_with_budget(&g, v1, v2, k, budget);
    println!("{verdict}");
    Ok(verdict_exit(verdict))
}

fn cmd_global(
    input: &Path,
    v1: Option<u32>,
    v2: Option<u32>,
    budget: u64,
) -> Result<ExitCode, String> {
    let g = load_graph(input)?;
    if let (Some(v1), Some(v2)) = (v1, v2) {
        check_vertex(&g, v1)?;
        check_vertex(&g, v2)?;
        if v1 == v2 {
            return Err("pair queries need two distinct vertices".into());
        }
        let verdict = globally_symmetric_pair_with_budget(&g, v1, v2, budget);
        println!("{verdict}");
        return Ok(verdict_exit(verdict));
    }
    let opts = QueryOpts { budget, ..QueryOpts::default() };
    let verdict = graph_globally_symmetric(&g, &opts);
    let status = verdict.status();
    println!("{status}");
    if let Some((a, b)) = verdict.witness {
        println!("witness {a} {b}");
    }
    Ok(verdict_exit(status))
}

fn cmd_dsed(input1: &Path, input2: &Path, explain: bool) -> Result<ExitCode, String> {
    let g1 = load_graph(input1)?;
    let g2 = load_graph(input2)?;
    let mut w = io::stdout().lock();
    writeln!(w, "{}", dsed(&g1, &g2)).map_err(|e| format!("writing output: {e}"))?;
    if explain {
        let (f1, f2) = (degree_function(&g1), degree_function(&g2));
        let mut degrees: Vec<u32> = f1.iter().map(|(d, _)| d).collect();
        degrees.extend(f2.iter().map(|(d, _)| d));
        degrees.sort_unstable();
        degrees.dedup();
        writeln!(w, "degree,count1,count2,diff").map_err(|e| format!("writing output: {e}"))?;
        for d in degrees {
            let (c1, c2) = (f1.get(d), f2.get(d));
            writeln!(w, "{d},{c1},{c2},{}", c1.abs_diff(c2))
                .map_err(|e| format!("writing output: {e}"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(config: &Path, out: Option<&Path>) -> Result<ExitCode, String> {
    let text = read_input(config)?;
    let spec =
        parse_experiment_config(&text).map_err(|e| format!("{}: {e}", config.display()))?;
    let warnings = spec
        .validate()
        .map_err(|e| format!("{}: {e}", config.display()))?;
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
    let mut w = open_out(out)?;
    writeln!(w, "{CSV_HEADER}").map_err(|e| format!("writing output: {e}"))?;
    run_experiment(&spec, |row| writeln!(w, "{}", row.csv_line()))
        .map_err(|e| format!("writing output: {e}"))?;
    w.flush().map_err(|e| format!("writing output: {e}"))?;
    Ok(ExitCode::SUCCESS)
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Gen { model, n, p, m, seed, out } => {
            cmd_gen(model, n, p, m, seed, out.as_deref())
        }
        Command::Stats { input } => cmd_stats(&input),
        Command::Classes { input, k, format, budget } => cmd_classes(&input, k, format, budget),
        Command::Pair { input, v1, v2, k, budget } => cmd_pair(&input, v1, v2, k, budget),
        Command::Global { input, v1, v2, budget } => cmd_global(&input, v1, v2, budget),
        Command::Dsed { input1, input2, explain } => cmd_dsed(&input1, &input2, explain),
        Command::Experiment { config, out } => cmd_experiment(&config, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build_global()
        {
            eprintln!("error: configuring {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
