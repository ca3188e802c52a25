use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bfs1d::bench::{
    read_csv, run_plan, summarize, BackendKind, BenchPlan, GraphRecipe, GraphSource, ScalingMode,
    DEFAULT_ORACLE_LIMIT,
};
use bfs1d::bfs::{FrontierMode, Strategy};
use bfs1d::graph::{generate, write_edge_list_file, DEFAULT_CHUNK_SIZE};
use bfs1d::Error;

#[derive(Parser)]
#[command(
    name = "bfs1d",
    version,
    about = "1-D partitioned distributed BFS and scaling harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a scaling sweep and write one CSV row per run.
    Run(RunArgs),
    /// Print a scaling summary of a CSV produced by `run`.
    Summarize {
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Star,
    Er,
    Ws,
}

#[derive(Args, Clone)]
struct GraphArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<u64>,
    /// Erdős–Rényi edge probability (default: 16 / (n - 1)).
    #[arg(long)]
    edge_prob: Option<f64>,
    /// Small-world ring degree (even).
    #[arg(long, default_value_t = 6)]
    k: u64,
    /// Small-world rewiring probability.
    #[arg(long, default_value_t = 0.1)]
    rewire_prob: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Source vertices generated per chunk.
    #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE)]
    chunk_size: u64,
}

impl GraphArgs {
    fn recipe(&self, n_required: bool) -> Result<GraphRecipe, Error> {
        let family = self
            .family
            .ok_or_else(|| Error::InvalidParameter("--family or --graph is required".into()))?;
        let n = match self.n {
            Some(n) => n,
            None if n_required => return Err(Error::InvalidParameter("--n is required".into())),
            None => 0,
        };
        let mut recipe = GraphRecipe::new(
            match family {
                FamilyArg::Star => "star",
                FamilyArg::Er => "er",
                FamilyArg::Ws => "ws",
            },
            n,
        )?;
        recipe.edge_prob = self.edge_prob;
        recipe.ring_degree = self.k;
        recipe.rewire_prob = self.rewire_prob;
        recipe.seed = self.seed;
        recipe.chunk_size = self.chunk_size;
        Ok(recipe)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strong,
    Weak,
    Single,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Inproc,
    Socket,
}

#[derive(Args)]
struct RunArgs {
    /// Edge-list file to load instead of generating a graph.
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    #[command(flatten)]
    gen: GraphArgs,
    #[arg(long, value_enum, default_value = "strong")]
    mode: ModeArg,
    /// Vertices per rank for weak scaling.
    #[arg(long)]
    per_rank_n: Option<u64>,
    #[arg(long, default_value_t = 0)]
    source: u64,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    ranks: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "baseline,optimized")]
    strategy: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "master,distributed")]
    frontier: Vec<String>,
    #[arg(long, value_enum, default_value = "inproc")]
    backend: BackendArg,
    #[arg(long, default_value_t = 3)]
    reps: u32,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    oracle_limit: u64,
    /// Per-receive timeout in seconds.
    #[arg(long, default_value_t = 30)]
    timeout_secs: u64,
}

impl RunArgs {
    fn plan(&self) -> Result<BenchPlan, Error> {
        let mode = match self.mode {
            ModeArg::Strong => ScalingMode::Strong,
            ModeArg::Single => ScalingMode::Single,
            ModeArg::Weak => ScalingMode::Weak {
                per_rank_n: self.per_rank_n.ok_or_else(|| {
                    Error::InvalidParameter("--per-rank-n is required for weak scaling".into())
                })?,
            },
        };
        let graph = match &self.graph {
            Some(path) => GraphSource::File(path.clone()),
            None => {
                GraphSource::Generated(self.gen.recipe(!matches!(mode, ScalingMode::Weak { .. }))?)
            }
        };
        let mut plan = BenchPlan::new(mode, graph, self.ranks.clone());
        plan.source = self.source;
        plan.strategies = self
            .strategy
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Strategy>, _>>()?;
        plan.frontier_modes = self
            .frontier
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<FrontierMode>, _>>()?;
        plan.backend = match self.backend {
            BackendArg::Inproc => BackendKind::InProcess,
            BackendArg::Socket => BackendKind::Socket,
        };
        plan.repetitions = self.reps;
        plan.output = self.csv.clone();
        plan.oracle_limit = self.oracle_limit;
        plan.timeout = Duration::from_secs(self.timeout_secs);
        Ok(plan)
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) | Error::InvalidVertex { .. } | Error::InvalidRank { .. } => 1,
        Error::CorrectnessViolation(_) => 3,
        _ => 2,
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Gen { graph, out } => {
            let spec = graph.recipe(true)?.spec(graph.n.unwrap_or_default());
            let edges = generate(&spec)?;
            write_edge_list_file(&edges, &out)?;
            println!(
                "wrote {} vertices, {} edges to {}",
                edges.vertex_count(),
                edges.len(),
                out.display()
            );
        }
        Command::Run(args) => {
            let plan = args.plan()?;
            let records = run_plan(&plan)?;
            let mut out = io::stdout().lock();
            write!(out, "{}", summarize(&records)?)?;
            if let Some(csv) = &plan.output {
                writeln!(out, "wrote {} records to {}", records.len(), csv.display())?;
            }
        }
        Command::Summarize { csv } => {
            let records = read_csv(&csv)?;
            write!(io::stdout().lock(), "{}", summarize(&records)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
