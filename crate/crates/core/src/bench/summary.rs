use std::collections::BTreeMap;
use std::fmt;

use super::BenchRecord;
use crate::bfs::{FrontierMode, Strategy};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub p: usize,
    pub n: u64,
    pub median_total_ns: f64,
    /// Median time at the smallest rank count over the median time here.
    pub speedup: f64,
    pub median_wire_bytes: f64,
    /// Median time went up compared with the previous rank count.
    pub crossover: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub mode: String,
    pub backend: String,
    pub strategy: Strategy,
    pub frontier_mode: FrontierMode,
    pub rows: Vec<ScalingRow>,
}

/// Wire-byte ratio between two configurations at one rank count.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub mode: String,
    pub backend: String,
    /// The setting held fixed (a frontier mode or a strategy name).
    pub fixed: String,
    pub p: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub groups: Vec<GroupSummary>,
    /// baseline / optimized, per frontier mode.
    pub strategy_ratios: Vec<RatioRow>,
    /// master_merge / distributed, per strategy.
    pub frontier_ratios: Vec<RatioRow>,
}

pub(super) fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    }
}

type GroupKey = (String, String, Strategy, FrontierMode);

/// Per rank count: vertex count, run times, wire bytes.
type Samples = BTreeMap<usize, (u64, Vec<f64>, Vec<f64>)>;

pub fn summarize(records: &[BenchRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::InvalidParameter(
            "no benchmark records to summarize".into(),
        ));
    }

    let mut by_group: BTreeMap<GroupKey, Samples> = BTreeMap::new();
    for r in records {
        let key = (
            r.mode.clone(),
            r.backend.clone(),
            r.strategy,
            r.frontier_mode,
        );
        let slot = by_group
            .entry(key)
            .or_default()
            .entry(r.p)
            .or_insert((r.n, vec![], vec![]));
        slot.1.push(r.total_ns as f64);
        slot.2.push(r.total_wire_bytes as f64);
    }

    let mut groups = Vec::new();
    let mut wire: BTreeMap<(GroupKey, usize), f64> = BTreeMap::new();
    for (key, per_p) in by_group {
        let mut rows: Vec<ScalingRow> = Vec::new();
        for (p, (n, times, bytes)) in per_p {
            let t = median(times);
            let b = median(bytes);
            wire.insert((key.clone(), p), b);
            let base = rows.first().map_or(t, |r| r.median_total_ns);
            rows.push(ScalingRow {
                p,
                n,
                median_total_ns: t,
                speedup: if t > 0.0 { base / t } else { 1.0 },
                median_wire_bytes: b,
                crossover: rows.last().is_some_and(|prev| t > prev.median_total_ns),
            });
        }
        let (mode, backend, strategy, frontier_mode) = key;
        groups.push(GroupSummary {
            mode,
            backend,
            strategy,
            frontier_mode,
            rows,
        });
    }

    let mut strategy_ratios = Vec::new();
    let mut frontier_ratios = Vec::new();
    for ((key, p), &bytes) in &wire {
        let (mode, backend, strategy, frontier) = key;
        let lookup = |s: Strategy, f: FrontierMode| {
            wire.get(&((mode.clone(), backend.clone(), s, f), *p))
                .copied()
        };
        if *strategy == Strategy::Baseline {
            if let Some(opt) = lookup(Strategy::Optimized, *frontier).filter(|&b| b > 0.0) {
                strategy_ratios.push(RatioRow {
                    mode: mode.clone(),
                    backend: backend.clone(),
                    fixed: frontier.name().into(),
                    p: *p,
                    ratio: bytes / opt,
                });
            }
        }
        if *frontier == FrontierMode::MasterMerge {
            if let Some(dist) = lookup(*strategy, FrontierMode::Distributed).filter(|&b| b > 0.0) {
                frontier_ratios.push(RatioRow {
                    mode: mode.clone(),
                    backend: backend.clone(),
                    fixed: strategy.name().into(),
                    p: *p,
                    ratio: bytes / dist,
                });
            }
        }
    }

    Ok(Summary {
        groups,
        strategy_ratios,
        frontier_ratios,
    })
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.groups {
            writeln!(
                f,
                "== {} scaling, {} backend, {} / {}",
                g.mode, g.backend, g.strategy, g.frontier_mode
            )?;
            writeln!(
                f,
                "{:>5} {:>10} {:>14} {:>9} {:>16}",
                "p", "n", "median_ms", "speedup", "wire_bytes"
            )?;
            for r in &g.rows {
                writeln!(
                    f,
                    "{:>5} {:>10} {:>14.3} {:>9.2} {:>16.0}{}",
                    r.p,
                    r.n,
                    r.median_total_ns / 1e6,
                    r.speedup,
                    r.median_wire_bytes,
                    if r.crossover {
                        "  <- slower than previous p (communication-bound)"
                    } else {
                        ""
                    }
                )?;
            }
        }
        if !self.strategy_ratios.is_empty() {
            writeln!(f, "== wire bytes, baseline / optimized")?;
            for r in &self.strategy_ratios {
                writeln!(
                    f,
                    "{} {} {:<13} p={:<4} {:.3}",
                    r.mode, r.backend, r.fixed, r.p, r.ratio
                )?;
            }
        }
        if !self.frontier_ratios.is_empty() {
            writeln!(f, "== wire bytes, master_merge / distributed")?;
            for r in &self.frontier_ratios {
                writeln!(
                    f,
                    "{} {} {:<13} p={:<4} {:.3}",
                    r.mode, r.backend, r.fixed, r.p, r.ratio
                )?;
            }
        }
        Ok(())
    }
}
