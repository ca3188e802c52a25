use crate::transport::Counters;
use crate::Level;

/// Counters for one superstep, summed over ranks (timings take the slowest rank).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LevelRecord {
    pub level: Level,
    /// Size of the frontier expanded in this superstep.
    pub frontier_size_global: u64,
    /// Vertices first reached in this superstep (the next frontier).
    pub discovered: u64,
    pub wire_bytes: u64,
    pub messages: u64,
    pub aggregation_copy_bytes: u64,
    /// Neighbours settled in place because the expanding rank owns them.
    pub local_shortcircuit_hits: u64,
    /// Vertices placed in a rank's own buffer during expansion.
    pub self_buffered: u64,
    pub compute_ns: u64,
    pub comm_ns: u64,
    pub elapsed_ns: u64,
}

impl LevelRecord {
    pub(crate) fn merge(&mut self, other: &LevelRecord) {
        debug_assert_eq!(self.level, other.level);
        self.frontier_size_global += other.frontier_size_global;
        self.discovered += other.discovered;
        self.wire_bytes += other.wire_bytes;
        self.messages += other.messages;
        self.aggregation_copy_bytes += other.aggregation_copy_bytes;
        self.local_shortcircuit_hits += other.local_shortcircuit_hits;
        self.self_buffered += other.self_buffered;
        self.compute_ns = self.compute_ns.max(other.compute_ns);
        self.comm_ns = self.comm_ns.max(other.comm_ns);
        self.elapsed_ns = self.elapsed_ns.max(other.elapsed_ns);
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Totals {
    pub wire_bytes: u64,
    pub messages: u64,
    pub aggregation_copy_bytes: u64,
    pub local_shortcircuit_hits: u64,
    pub self_buffered: u64,
    pub compute_ns: u64,
    pub comm_ns: u64,
    pub elapsed_ns: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunMetrics {
    pub levels: Vec<LevelRecord>,
    /// Final transport counters of each rank, in rank order.
    pub rank_counters: Vec<Counters>,
}

impl RunMetrics {
    pub fn totals(&self) -> Totals {
        self.levels.iter().fold(Totals::default(), |mut t, l| {
            t.wire_bytes += l.wire_bytes;
            t.messages += l.messages;
            t.aggregation_copy_bytes += l.aggregation_copy_bytes;
            t.local_shortcircuit_hits += l.local_shortcircuit_hits;
            t.self_buffered += l.self_buffered;
            t.compute_ns += l.compute_ns;
            t.comm_ns += l.comm_ns;
            t.elapsed_ns += l.elapsed_ns;
            t
        })
    }

    /// Supersteps that discovered at least one vertex.
    pub fn productive_levels(&self) -> usize {
        self.levels.iter().filter(|l| l.discovered > 0).count()
    }
}
