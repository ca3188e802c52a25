//! Strong / weak scaling sweeps over the distributed BFS.
//!
//! A [`BenchPlan`] expands into one run per rank count × strategy ×
//! frontier mode × repetition. Every run is checked against the serial BFS
//! when the graph is small enough, and the resulting [`BenchRecord`]s are
//! written as CSV.

mod record;
mod summary;

pub use record::{read_csv, write_csv, BenchRecord};
pub use summary::{summarize, GroupSummary, RatioRow, ScalingRow, Summary};

use std::path::PathBuf;
use std::time::{Duration, Instant};

use crate::bfs::{self, bfs_distributed, bfs_serial, BfsConfig, FrontierMode, Strategy};
use crate::graph::{
    self, build_graph, read_edge_list_file, Family, GeneratorSpec, Graph, DEFAULT_CHUNK_SIZE,
};
use crate::partition::PartitionMap;
use crate::transport::{WorldConfig, DEFAULT_TIMEOUT};
use crate::{Error, Level, Result, VertexId};

pub const DEFAULT_ORACLE_LIMIT: u64 = 1_000_000;
pub const DEFAULT_REPETITIONS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingMode {
    /// Fixed graph, growing rank count.
    Strong,
    /// `n = per_rank_n * p` for each rank count.
    Weak { per_rank_n: u64 },
    /// One rank count, one graph.
    Single,
}

impl ScalingMode {
    pub fn name(&self) -> &'static str {
        match self {
            ScalingMode::Strong => "strong",
            ScalingMode::Weak { .. } => "weak",
            ScalingMode::Single => "single",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    InProcess,
    Socket,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::InProcess => "inproc",
            BackendKind::Socket => "socket",
        }
    }

    fn world(self, ranks: usize, timeout: Duration) -> WorldConfig {
        match self {
            BackendKind::InProcess => WorldConfig::in_process(ranks),
            BackendKind::Socket => WorldConfig::socket_loopback(ranks),
        }
        .with_timeout(timeout)
    }
}

/// Generator parameters with the vertex count left open, so weak scaling
/// can resize the graph per rank count.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphRecipe {
    pub family: &'static str,
    pub n: u64,
    /// `None` picks the default density (expected degree 16) for each `n`.
    pub edge_prob: Option<f64>,
    pub ring_degree: u64,
    pub rewire_prob: f64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl GraphRecipe {
    pub fn new(family: &str, n: u64) -> Result<Self> {
        let family = match family {
            "star" => "star",
            "er" | "erdos_renyi" => "er",
            "ws" | "small_world" => "ws",
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown graph family {other:?}"
                )))
            }
        };
        Ok(Self {
            family,
            n,
            edge_prob: None,
            ring_degree: 6,
            rewire_prob: 0.1,
            seed: 1,
            chunk_size: DEFAULT_CHUNK_SIZE,
        })
    }

    pub fn spec(&self, n: u64) -> GeneratorSpec {
        let family = match self.family {
            "star" => Family::Star,
            "er" => Family::ErdosRenyi {
                edge_prob: self
                    .edge_prob
                    .unwrap_or_else(|| graph::default_edge_prob(n)),
            },
            _ => Family::SmallWorld {
                ring_degree: self.ring_degree,
                rewire_prob: self.rewire_prob,
            },
        };
        GeneratorSpec {
            family,
            n,
            seed: self.seed,
            chunk_size: self.chunk_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Generated(GraphRecipe),
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub mode: ScalingMode,
    pub graph: GraphSource,
    pub source: VertexId,
    /// Ascending rank counts.
    pub ranks: Vec<usize>,
    pub strategies: Vec<Strategy>,
    pub frontier_modes: Vec<FrontierMode>,
    pub backend: BackendKind,
    pub repetitions: u32,
    pub output: Option<PathBuf>,
    /// Runs on graphs with more vertices than this skip the serial check.
    pub oracle_limit: u64,
    pub timeout: Duration,
}

impl BenchPlan {
    pub fn new(mode: ScalingMode, graph: GraphSource, ranks: Vec<usize>) -> Self {
        Self {
            mode,
            graph,
            source: 0,
            ranks,
            strategies: Strategy::ALL.to_vec(),
            frontier_modes: FrontierMode::ALL.to_vec(),
            backend: BackendKind::InProcess,
            repetitions: DEFAULT_REPETITIONS,
            output: None,
            oracle_limit: DEFAULT_ORACLE_LIMIT,
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.ranks.is_empty() || self.ranks.contains(&0) {
            return bad("rank counts must be non-empty and positive");
        }
        if self.ranks.windows(2).any(|w| w[0] >= w[1]) {
            return bad("rank counts must be strictly ascending");
        }
        if self.strategies.is_empty() || self.frontier_modes.is_empty() {
            return bad("at least one strategy and one frontier mode are required");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be positive");
        }
        match self.mode {
            ScalingMode::Single if self.ranks.len() != 1 => {
                bad("single mode takes exactly one rank count")
            }
            ScalingMode::Weak { per_rank_n: 0 } => {
                bad("weak scaling needs a positive per-rank vertex count")
            }
            ScalingMode::Weak { .. } if matches!(self.graph, GraphSource::File(_)) => {
                bad("weak scaling needs a generated graph")
            }
            _ => Ok(()),
        }
    }
}

struct PreparedGraph {
    family: String,
    graph: Graph,
    oracle: Option<Vec<Level>>,
}

fn prepare(plan: &BenchPlan, n_override: Option<u64>) -> Result<PreparedGraph> {
    let (family, edges) = match &plan.graph {
        GraphSource::File(path) => ("file".to_string(), read_edge_list_file(path)?),
        GraphSource::Generated(recipe) => {
            let spec = recipe.spec(n_override.unwrap_or(recipe.n));
            (recipe.family.to_string(), graph::generate(&spec)?)
        }
    };
    let graph = build_graph(&edges)?;
    drop(edges);
    if plan.source >= graph.vertex_count() {
        return Err(Error::InvalidVertex {
            vertex: plan.source,
            n: graph.vertex_count(),
        });
    }
    let oracle = if graph.vertex_count() <= plan.oracle_limit {
        Some(bfs_serial(&graph, plan.source)?)
    } else {
        log::warn!(
            "n = {} exceeds the oracle limit {}; skipping serial verification",
            graph.vertex_count(),
            plan.oracle_limit
        );
        None
    };
    Ok(PreparedGraph {
        family,
        graph,
        oracle,
    })
}

/// Executes every run of `plan`, verifying each against the serial BFS
/// where enabled, and writes the CSV if an output path is set.
pub fn run_plan(plan: &BenchPlan) -> Result<Vec<BenchRecord>> {
    plan.validate()?;
    let mut records = Vec::new();
    let mut shared: Option<PreparedGraph> = None;

    for &p in &plan.ranks {
        let weak;
        let prepared = match plan.mode {
            ScalingMode::Weak { per_rank_n } => {
                weak = prepare(plan, Some(per_rank_n * p as u64))?;
                &weak
            }
            _ => {
                if shared.is_none() {
                    shared = Some(prepare(plan, None)?);
                }
                shared.as_ref().unwrap()
            }
        };
        let g = &prepared.graph;
        let map = PartitionMap::new(g.vertex_count(), p)?;
        let world = plan.backend.world(p, plan.timeout);

        for &strategy in &plan.strategies {
            for &frontier_mode in &plan.frontier_modes {
                for repetition in 0..plan.repetitions {
                    let cfg = BfsConfig::new(plan.source, strategy, frontier_mode);
                    let start = Instant::now();
                    let out = bfs_distributed(g, &map, &cfg, &world)?;
                    let total_ns = start.elapsed().as_nanos() as u64;

                    if let Some(expected) = &prepared.oracle {
                        if let Some(v) = bfs::first_mismatch(expected, &out.levels) {
                            return Err(Error::CorrectnessViolation(format!(
                                "p = {p}, {strategy}/{frontier_mode}: vertex {v} has level {} (serial BFS says {})",
                                out.levels[v], expected[v]
                            )));
                        }
                    }

                    let t = out.metrics.totals();
                    records.push(BenchRecord {
                        mode: plan.mode.name().to_string(),
                        family: prepared.family.clone(),
                        n: g.vertex_count(),
                        edges: g.edge_count(),
                        p,
                        strategy,
                        frontier_mode,
                        backend: plan.backend.name().to_string(),
                        repetition,
                        levels_traversed: out.levels_traversed(),
                        total_wire_bytes: t.wire_bytes,
                        total_messages: t.messages,
                        aggregation_copy_bytes: t.aggregation_copy_bytes,
                        shortcircuit_hits: t.local_shortcircuit_hits,
                        compute_ns: t.compute_ns,
                        comm_ns: t.comm_ns,
                        total_ns,
                    });
                }
            }
        }
    }

    if let Some(path) = &plan.output {
        write_csv(&records, path)?;
    }
    Ok(records)
}
