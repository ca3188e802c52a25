use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

use crate::bfs::{FrontierMode, Strategy};
use crate::Result;

/// One CSV row. Field order is the column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub mode: String,
    pub family: String,
    pub n: u64,
    pub edges: u64,
    pub p: usize,
    pub strategy: Strategy,
    pub frontier_mode: FrontierMode,
    pub backend: String,
    pub repetition: u32,
    pub levels_traversed: u64,
    pub total_wire_bytes: u64,
    pub total_messages: u64,
    pub aggregation_copy_bytes: u64,
    pub shortcircuit_hits: u64,
    pub compute_ns: u64,
    pub comm_ns: u64,
    pub total_ns: u64,
}

/// Writes to a temporary file beside `path`, then renames it into place.
pub fn write_csv(records: &[BenchRecord], path: &Path) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let tmp = NamedTempFile::new_in(dir)?;
    {
        let mut w = csv::Writer::from_writer(tmp.as_file());
        if records.is_empty() {
            w.write_record(HEADER)?;
        }
        for r in records {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_reader(File::open(path)?);
    let records = r
        .deserialize()
        .collect::<std::result::Result<Vec<BenchRecord>, _>>()?;
    Ok(records)
}

pub(crate) const HEADER: [&str; 17] = [
    "mode",
    "family",
    "n",
    "edges",
    "p",
    "strategy",
    "frontier_mode",
    "backend",
    "repetition",
    "levels_traversed",
    "total_wire_bytes",
    "total_messages",
    "aggregation_copy_bytes",
    "shortcircuit_hits",
    "compute_ns",
    "comm_ns",
    "total_ns",
];
