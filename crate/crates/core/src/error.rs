use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vertex {vertex} out of range (n = {n})")]
    InvalidVertex { vertex: VertexId, n: u64 },

    #[error("vertex {vertex} is not owned by rank {rank}")]
    NotOwned { vertex: VertexId, rank: usize },

    #[error("invalid rank {rank} (world size {size})")]
    InvalidRank { rank: usize, size: usize },

    #[error("{}:{line}: {message}", path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<input>".into()))]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("collective misuse on rank {rank} during {op}: {detail}")]
    CollectiveMisuse {
        rank: usize,
        op: &'static str,
        detail: String,
    },

    #[error("receive on rank {rank} from rank {from} timed out")]
    Timeout { rank: usize, from: usize },

    #[error("world shut down")]
    Shutdown,

    #[error("malformed frame: {0}")]
    Frame(String),

    #[error("rank {rank} failed: {source}")]
    RankFailed {
        rank: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("rank {rank} panicked: {message}")]
    RankPanicked { rank: usize, message: String },

    #[error("correctness violation: {0}")]
    CorrectnessViolation(String),
}

impl Error {
    /// True for the error a rank sees when some *other* rank brought the world down.
    pub fn is_shutdown(&self) -> bool {
        matches!(self, Error::Shutdown)
    }
}
