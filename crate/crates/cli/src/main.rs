use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use epart::baselines::{default_partition, greedy_partition, random_partition};
use epart::graph::{
    degree_distribution, from_edge_list, from_matrix_market, DataAffinityGraph, MatrixMode,
    DEFAULT_REUSE_THRESHOLD,
};
use epart::layout::{cpack_reorder, simulate_loads};
use epart::pipeline::{schedule, Options};
use epart::reconstruct::vertex_cut_cost;
use epart::transform::{clone_and_connect, dump_transformed};
use epart::vpart::DEFAULT_EPSILON;
use epart::{EdgePartition, Error};

/// Balanced edge partitioning of data-affinity graphs.
#[derive(Parser)]
#[command(name = "epart", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// "u v" per line, optional "n <count>" header
    Edgelist,
    /// Matrix Market, one task per nonzero joining x_j and y_i
    MmSpmv,
    /// Matrix Market, square matrix read as an undirected adjacency pattern
    MmAdj,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Ep,
    Greedy,
    Random,
    Default,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Ep => "ep",
            Method::Greedy => "greedy",
            Method::Random => "random",
            Method::Default => "default",
        }
    }
}

#[derive(clap::Args)]
struct Input {
    /// Graph file, or "-" for standard input
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "edgelist")]
    format: Format,
}

#[derive(clap::Args)]
struct Tuning {
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, env = "EPART_SEED", default_value_t = 0)]
    seed: u64,
    /// Mean degree below which partitioning is skipped
    #[arg(long, default_value_t = DEFAULT_REUSE_THRESHOLD)]
    reuse_threshold: f64,
    /// Always run the partitioner
    #[arg(long)]
    skip_precheck: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Partition tasks into k clusters; prints the cost report as JSON
    Partition {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        tuning: Tuning,
        /// Write the partition file here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare partitioning methods; prints a TSV table
    Compare {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "ep,greedy,random,default"
        )]
        methods: Vec<Method>,
        /// Number of consecutive seeds, starting at --seed
        #[arg(long, default_value_t = 1)]
        seeds: u64,
    },
    /// Count memory loads for a partition; prints the load report as JSON
    Simulate {
        #[command(flatten)]
        input: Input,
        /// Partition file to evaluate
        #[arg(long, conflicts_with = "method")]
        partition: Option<PathBuf>,
        /// Generate the partition with this method instead
        #[arg(long, value_enum, requires = "k")]
        method: Option<Method>,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        tuning: Tuning,
        /// Write the first-touch layout plan as JSON here
        #[arg(long)]
        emit_layout: Option<PathBuf>,
    },
    /// Vertex-degree histogram as TSV
    Degrees {
        #[command(flatten)]
        input: Input,
    },
    /// Clone-and-connect transformed graph as weighted edge-list text
    TransformDump {
        #[command(flatten)]
        input: Input,
    },
}

/// Failure with its exit code: 2 for input errors, 3 for infeasible
/// configurations.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) | Error::TooLarge(_) | Error::NotPreset => 3,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn input_error(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: 2,
        msg: format!("{}: {e}", path.display()),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(path, e))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| input_error(path, e))
}

fn load(input: &Input) -> Result<DataAffinityGraph, Failure> {
    let text = read_text(&input.input)?;
    let g = match input.format {
        Format::Edgelist => from_edge_list(&text),
        Format::MmSpmv => from_matrix_market(&text, MatrixMode::SpmvBipartite),
        Format::MmAdj => from_matrix_market(&text, MatrixMode::SymmetricAdjacency),
    };
    g.map_err(|e| {
        let mut f = Failure::from(e);
        f.msg = format!("{}: {}", input.input.display(), f.msg);
        f
    })
}

fn options(k: usize, t: &Tuning) -> Options {
    Options {
        k,
        epsilon: t.epsilon,
        seed: t.seed,
        reuse_threshold: t.reuse_threshold,
        skip_precheck: t.skip_precheck,
    }
}

fn run_method(
    g: &DataAffinityGraph,
    method: Method,
    k: usize,
    t: &Tuning,
    seed: u64,
) -> Result<EdgePartition, Failure> {
    Ok(match method {
        Method::Ep => {
            let opts = Options {
                seed,
                ..options(k, t)
            };
            schedule(g, &opts)?.partition
        }
        Method::Greedy => greedy_partition(g, k)?,
        Method::Random => random_partition(g, k, seed)?,
        Method::Default => default_partition(g, k)?,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        code: 2,
        msg: format!("{}: {e}", path.display()),
    })
}

fn cmd_partition(
    input: &Input,
    k: usize,
    tuning: &Tuning,
    out: Option<&Path>,
) -> Result<String, Failure> {
    let g = load(input)?;
    let s = schedule(&g, &options(k, tuning))?;
    if let Some(path) = out {
        write_file(path, &s.partition.to_text())?;
    }
    let mut report = serde_json::to_value(&s.report).expect("report serializes");
    report["route"] = serde_json::to_value(s.route).expect("route serializes");
    report["uneven"] = s.uneven.into();
    if let Some(run) = &s.run {
        report["aux_cut"] = run.aux_cut().into();
        report["pre_fix_balance_factor"] = run.raw.balance_factor().into();
    }
    eprintln!(
        "{}: n = {}, m = {}, k = {k}, route {:?}, C = {}, balance {:.6}",
        input.input.display(),
        g.n(),
        g.m(),
        s.route,
        s.report.cost,
        s.report.balance_factor
    );
    Ok(format!("{report}\n"))
}

fn cmd_compare(
    input: &Input,
    k: usize,
    tuning: &Tuning,
    methods: &[Method],
    seeds: u64,
) -> Result<String, Failure> {
    let g = load(input)?;
    let mut out = String::from("method\tseed\tC\tbalance_factor\twall_time_ms\n");
    for &method in methods {
        for seed in tuning.seed..tuning.seed + seeds.max(1) {
            let start = Instant::now();
            let ep = run_method(&g, method, k, tuning, seed)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let r = vertex_cut_cost(&g, &ep)?;
            out.push_str(&format!(
                "{}\t{seed}\t{}\t{:.6}\t{ms:.3}\n",
                method.name(),
                r.cost,
                r.balance_factor
            ));
        }
    }
    Ok(out)
}

fn cmd_simulate(
    input: &Input,
    partition: Option<&Path>,
    method: Option<Method>,
    k: Option<usize>,
    tuning: &Tuning,
    emit_layout: Option<&Path>,
) -> Result<String, Failure> {
    let g = load(input)?;
    let ep = match (partition, method, k) {
        (Some(path), _, _) => EdgePartition::from_text(&read_text(path)?).map_err(|e| {
            let mut f = Failure::from(e);
            f.msg = format!("{}: {}", path.display(), f.msg);
            f
        })?,
        (None, Some(m), Some(k)) => run_method(&g, m, k, tuning, tuning.seed)?,
        _ => {
            return Err(Failure {
                code: 2,
                msg: "give --partition, or --method with --k".into(),
            })
        }
    };
    let report = simulate_loads(&g, &ep)?;
    if let Some(path) = emit_layout {
        write_file(path, &format!("{}\n", cpack_reorder(&g, &ep)?.to_json()))?;
    }
    eprintln!(
        "{} loads, {} redundant ({:.2}%)",
        report.total_loads,
        report.redundant_loads,
        100.0 * report.redundant_fraction
    );
    Ok(format!("{}\n", report.to_json()))
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Partition {
            input,
            k,
            tuning,
            out,
        } => cmd_partition(&input, k, &tuning, out.as_deref()),
        Command::Compare {
            input,
            k,
            tuning,
            methods,
            seeds,
        } => cmd_compare(&input, k, &tuning, &methods, seeds),
        Command::Simulate {
            input,
            partition,
            method,
            k,
            tuning,
            emit_layout,
        } => cmd_simulate(
            &input,
            partition.as_deref(),
            method,
            k,
            &tuning,
            emit_layout.as_deref(),
        ),
        Command::Degrees { input } => Ok(degree_distribution(&load(&input)?).to_tsv()),
        Command::TransformDump { input } => {
            Ok(dump_transformed(&clone_and_connect(&load(&input)?)?))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("epart: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
