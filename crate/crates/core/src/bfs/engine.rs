use std::mem;
use std::ops::Range;
use std::time::Instant;

use super::metrics::{LevelRecord, RunMetrics};
use super::{BfsConfig, BfsOutcome, FrontierMode, Strategy};
use crate::graph::Graph;
use crate::partition::PartitionMap;
use crate::transport::{spawn_world, Endpoint, VertexMessage, WorldConfig};
use crate::{Error, Level, Result, VertexId, UNVISITED};

const MASTER: usize = 0;

/// Rank-local traversal state. Every vertex in `frontier` and `next` is
/// owned by this rank.
struct LevelState {
    rank: usize,
    owned: Range<VertexId>,
    levels: Vec<Level>,
    frontier: Vec<VertexId>,
    next: Vec<VertexId>,
    current_level: Level,
}

impl LevelState {
    fn new(rank: usize, owned: Range<VertexId>) -> Self {
        let len = (owned.end - owned.start) as usize;
        Self {
            rank,
            owned,
            levels: vec![UNVISITED; len],
            frontier: Vec::new(),
            next: Vec::new(),
            current_level: 0,
        }
    }

    /// Owner-side check: assigns `level` to `v` if it has none yet and
    /// queues it for the next frontier. Levels are write-once.
    #[inline]
    fn settle(&mut self, v: VertexId, level: Level) -> bool {
        debug_assert!(
            self.owned.contains(&v),
            "rank {} settling foreign vertex {v}",
            self.rank
        );
        let slot = &mut self.levels[(v - self.owned.start) as usize];
        if *slot == UNVISITED {
            *slot = level;
            self.next.push(v);
            true
        } else {
            debug_assert!(
                *slot <= level,
                "level of {v} would move from {} to {level}",
                *slot
            );
            false
        }
    }
}

struct RankOutput {
    levels: Vec<Level>,
    records: Vec<LevelRecord>,
}

/// Distributed BFS over `world.ranks` ranks with 1-D block ownership.
///
/// Each superstep expands the rank's share of the frontier, routes
/// discovered vertices to their owners, lets owners settle levels, forms
/// the next frontier and stops once an all-reduce reports it empty. The
/// returned level vector is the owned slices concatenated in rank order.
pub fn bfs_distributed(
    g: &Graph,
    map: &PartitionMap,
    cfg: &BfsConfig,
    world: &WorldConfig,
) -> Result<BfsOutcome> {
    let n = g.vertex_count();
    if map.vertex_count() != n {
        return Err(Error::InvalidParameter(format!(
            "partition covers {} vertices, graph has {n}",
            map.vertex_count()
        )));
    }
    if map.ranks() != world.ranks {
        return Err(Error::InvalidParameter(format!(
            "partition is for {} ranks, world has {}",
            map.ranks(),
            world.ranks
        )));
    }
    if cfg.source >= n {
        return Err(Error::InvalidVertex {
            vertex: cfg.source,
            n,
        });
    }

    let out = spawn_world(world, |ep| run_rank(ep, g, map, cfg))?;

    let mut levels = Vec::with_capacity(n as usize);
    let mut records: Vec<LevelRecord> = Vec::new();
    for part in out.results {
        levels.extend(part.levels);
        if records.is_empty() {
            records = part.records;
        } else {
            debug_assert_eq!(records.len(), part.records.len());
            for (acc, r) in records.iter_mut().zip(&part.records) {
                acc.merge(r);
            }
        }
    }
    Ok(BfsOutcome {
        levels,
        metrics: RunMetrics {
            levels: records,
            rank_counters: out.counters,
        },
    })
}

fn run_rank(
    ep: &mut Endpoint,
    g: &Graph,
    map: &PartitionMap,
    cfg: &BfsConfig,
) -> Result<RankOutput> {
    let rank = ep.rank();
    let p = ep.size();
    let mut st = LevelState::new(rank, map.local_range(rank)?);
    if st.owned.contains(&cfg.source) {
        st.levels[(cfg.source - st.owned.start) as usize] = 0;
        st.frontier.push(cfg.source);
    }

    let mut records = Vec::new();
    loop {
        let level = st.current_level;
        let next_level = level + 1;
        let before = ep.counters();
        let mut rec = LevelRecord {
            level,
            frontier_size_global: st.frontier.len() as u64,
            ..Default::default()
        };

        // expansion
        let t_compute = Instant::now();
        let mut buffers: Vec<Vec<VertexId>> = vec![Vec::new(); p];
        let frontier = mem::take(&mut st.frontier);
        for &u in &frontier {
            for &v in g.neighbors(u) {
                let owner = map.owner_unchecked(v);
                if cfg.strategy == Strategy::Optimized && owner == rank {
                    if st.settle(v, next_level) {
                        rec.local_shortcircuit_hits += 1;
                    }
                } else {
                    buffers[owner].push(v);
                }
            }
        }
        let self_buffer = mem::take(&mut buffers[rank]);
        rec.self_buffered = self_buffer.len() as u64;
        if cfg.strategy == Strategy::Optimized {
            assert!(
                self_buffer.is_empty(),
                "optimized strategy buffered a self-owned vertex"
            );
        }
        let mut compute_ns = t_compute.elapsed().as_nanos() as u64;

        // routing
        let t_comm = Instant::now();
        let received: Vec<VertexMessage> = match cfg.strategy {
            Strategy::Baseline => {
                let outgoing = buffers
                    .into_iter()
                    .map(|b| VertexMessage::new(next_level, b))
                    .collect();
                ep.exchange_all(outgoing)?
            }
            Strategy::Optimized => {
                // header-only messages for empty buffers keep receive counts fixed
                for (dest, buf) in buffers.into_iter().enumerate() {
                    if dest != rank {
                        ep.send(dest, VertexMessage::new(next_level, buf))?;
                    }
                }
                (0..p)
                    .filter(|&src| src != rank)
                    .map(|src| ep.recv(src))
                    .collect::<Result<_>>()?
            }
        };
        let mut comm_ns = t_comm.elapsed().as_nanos() as u64;

        // owners settle
        let t_apply = Instant::now();
        for v in self_buffer {
            st.settle(v, next_level);
        }
        for msg in received {
            if msg.level != next_level {
                return Err(Error::CollectiveMisuse {
                    rank,
                    op: "bfs superstep",
                    detail: format!("message for level {} during level {next_level}", msg.level),
                });
            }
            for v in msg.vertices {
                if !st.owned.contains(&v) {
                    return Err(Error::NotOwned { vertex: v, rank });
                }
                st.settle(v, next_level);
            }
        }
        compute_ns += t_apply.elapsed().as_nanos() as u64;
        rec.discovered = st.next.len() as u64;

        // next frontier and termination
        let t_front = Instant::now();
        let next = mem::take(&mut st.next);
        let next_len = next.len() as u64;
        st.frontier = match cfg.frontier_mode {
            FrontierMode::Distributed => next,
            FrontierMode::MasterMerge => {
                let merged = ep.gather_to_root(VertexMessage::new(next_level, next), MASTER)?;
                let global = ep.broadcast(merged, MASTER)?;
                global
                    .vertices
                    .into_iter()
                    .filter(|v| st.owned.contains(v))
                    .collect()
            }
        };
        let remaining = ep.allreduce_sum(next_len)?;
        comm_ns += t_front.elapsed().as_nanos() as u64;

        let delta = ep.counters() - before;
        rec.wire_bytes = delta.bytes_sent;
        rec.messages = delta.messages_sent;
        rec.aggregation_copy_bytes = delta.aggregation_copy_bytes;
        rec.compute_ns = compute_ns;
        rec.comm_ns = comm_ns;
        rec.elapsed_ns = compute_ns + comm_ns;
        records.push(rec);

        if remaining == 0 {
            break;
        }
        st.current_level = next_level;
    }

    Ok(RankOutput {
        levels: st.levels,
        records,
    })
}
