//! Level-synchronous BFS: a serial reference and the 1-D distributed engine.

mod engine;
mod metrics;

pub use engine::bfs_distributed;
pub use metrics::{LevelRecord, RunMetrics, Totals};

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::partition::PartitionMap;
use crate::transport::WorldConfig;
use crate::{Error, Level, Result, VertexId, UNVISITED};

/// How discovered vertices reach their owners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Every neighbour goes into a per-owner buffer (self-owned ones are
    /// settled after communication); remote buffers are merged and
    /// exchanged with one all-to-all collective.
    Baseline,
    /// Self-owned neighbours are settled during expansion; remote buffers
    /// are sent point-to-point straight to their owners.
    Optimized,
}

/// How the next frontier is formed once the owners have settled levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontierMode {
    /// Gather every rank's next frontier on rank 0, broadcast the merged
    /// frontier, each rank keeps its own share.
    MasterMerge,
    /// Each rank promotes its own next frontier directly.
    Distributed,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::Baseline, Strategy::Optimized];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Baseline => "baseline",
            Strategy::Optimized => "optimized",
        }
    }
}

impl FrontierMode {
    pub const ALL: [FrontierMode; 2] = [FrontierMode::MasterMerge, FrontierMode::Distributed];

    pub fn name(self) -> &'static str {
        match self {
            FrontierMode::MasterMerge => "master_merge",
            FrontierMode::Distributed => "distributed",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for FrontierMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Strategy::Baseline),
            "optimized" => Ok(Strategy::Optimized),
            _ => Err(Error::InvalidParameter(format!("unknown strategy {s:?}"))),
        }
    }
}

impl FromStr for FrontierMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "master" | "master_merge" => Ok(FrontierMode::MasterMerge),
            "distributed" => Ok(FrontierMode::Distributed),
            _ => Err(Error::InvalidParameter(format!(
                "unknown frontier mode {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BfsConfig {
    pub source: VertexId,
    pub strategy: Strategy,
    pub frontier_mode: FrontierMode,
}

impl BfsConfig {
    pub fn new(source: VertexId, strategy: Strategy, frontier_mode: FrontierMode) -> Self {
        Self {
            source,
            strategy,
            frontier_mode,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BfsOutcome {
    /// Global level vector, `UNVISITED` for unreachable vertices.
    pub levels: Vec<Level>,
    pub metrics: RunMetrics,
}

impl BfsOutcome {
    pub fn levels_traversed(&self) -> u64 {
        levels_traversed(&self.levels)
    }
}

/// Number of distinct BFS levels reached (deepest level + 1).
pub fn levels_traversed(levels: &[Level]) -> u64 {
    levels
        .iter()
        .filter(|&&l| l != UNVISITED)
        .max()
        .map_or(0, |&l| l + 1)
}

/// Textbook queue BFS.
pub fn bfs_serial(g: &Graph, source: VertexId) -> Result<Vec<Level>> {
    let n = g.vertex_count();
    if source >= n {
        return Err(Error::InvalidVertex { vertex: source, n });
    }
    let mut levels = vec![UNVISITED; n as usize];
    let mut queue = VecDeque::new();
    levels[source as usize] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = levels[u as usize] + 1;
        for &v in g.neighbors(u) {
            if levels[v as usize] == UNVISITED {
                levels[v as usize] = next;
                queue.push_back(v);
            }
        }
    }
    Ok(levels)
}

/// One (strategy, frontier mode) run inside a [`StrategyReport`].
#[derive(Debug, Clone)]
pub struct StrategyRun {
    pub strategy: Strategy,
    pub frontier_mode: FrontierMode,
    pub metrics: RunMetrics,
}

#[derive(Debug, Clone)]
pub struct StrategyReport {
    pub levels: Vec<Level>,
    pub runs: Vec<StrategyRun>,
}

impl StrategyReport {
    pub fn run(&self, strategy: Strategy, frontier_mode: FrontierMode) -> Option<&StrategyRun> {
        self.runs
            .iter()
            .find(|r| r.strategy == strategy && r.frontier_mode == frontier_mode)
    }

    /// Wire bytes of master-merge over distributed frontier formation.
    pub fn frontier_byte_ratio(&self, strategy: Strategy) -> Option<f64> {
        let master = self
            .run(strategy, FrontierMode::MasterMerge)?
            .metrics
            .totals()
            .wire_bytes;
        let dist = self
            .run(strategy, FrontierMode::Distributed)?
            .metrics
            .totals()
            .wire_bytes;
        (dist > 0).then(|| master as f64 / dist as f64)
    }

    /// Wire bytes of baseline over optimized communication.
    pub fn strategy_byte_ratio(&self, frontier_mode: FrontierMode) -> Option<f64> {
        let base = self
            .run(Strategy::Baseline, frontier_mode)?
            .metrics
            .totals()
            .wire_bytes;
        let opt = self
            .run(Strategy::Optimized, frontier_mode)?
            .metrics
            .totals()
            .wire_bytes;
        (opt > 0).then(|| base as f64 / opt as f64)
    }
}

impl fmt::Display for StrategyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:<13} {:>7} {:>14} {:>10} {:>14} {:>10} {:>12}",
            "strategy",
            "frontier",
            "levels",
            "wire_bytes",
            "messages",
            "agg_copy",
            "hits",
            "elapsed_us"
        )?;
        for run in &self.runs {
            let t = run.metrics.totals();
            writeln!(
                f,
                "{:<10} {:<13} {:>7} {:>14} {:>10} {:>14} {:>10} {:>12}",
                run.strategy.name(),
                run.frontier_mode.name(),
                run.metrics.levels.len(),
                t.wire_bytes,
                t.messages,
                t.aggregation_copy_bytes,
                t.local_shortcircuit_hits,
                t.elapsed_ns / 1_000
            )?;
        }
        for s in Strategy::ALL {
            if let Some(r) = self.frontier_byte_ratio(s) {
                writeln!(f, "{s}: master_merge / distributed wire bytes = {r:.3}")?;
            }
        }
        for m in FrontierMode::ALL {
            if let Some(r) = self.strategy_byte_ratio(m) {
                writeln!(f, "{m}: baseline / optimized wire bytes = {r:.3}")?;
            }
        }
        Ok(())
    }
}

/// Runs all four strategy × frontier-mode combinations and insists they
/// produce the same level vector.
pub fn compare_strategies(
    g: &Graph,
    map: &PartitionMap,
    source: VertexId,
    world: &WorldConfig,
) -> Result<StrategyReport> {
    let mut levels: Option<Vec<Level>> = None;
    let mut runs = Vec::with_capacity(4);
    for strategy in Strategy::ALL {
        for frontier_mode in FrontierMode::ALL {
            let out = bfs_distributed(
                g,
                map,
                &BfsConfig::new(source, strategy, frontier_mode),
                world,
            )?;
            match &levels {
                None => levels = Some(out.levels),
                Some(reference) => {
                    if let Some(v) = first_mismatch(reference, &out.levels) {
                        return Err(Error::CorrectnessViolation(format!(
                            "{strategy}/{frontier_mode} disagrees at vertex {v}: {} vs {}",
                            out.levels[v], reference[v]
                        )));
                    }
                }
            }
            runs.push(StrategyRun {
                strategy,
                frontier_mode,
                metrics: out.metrics,
            });
        }
    }
    Ok(StrategyReport {
        levels: levels.unwrap_or_default(),
        runs,
    })
}

pub(crate) fn first_mismatch(a: &[Level], b: &[Level]) -> Option<usize> {
    if a.len() != b.len() {
        return Some(a.len().min(b.len()));
    }
    a.iter().zip(b).position(|(x, y)| x != y)
}

#[cfg(test)]
mod tests;
