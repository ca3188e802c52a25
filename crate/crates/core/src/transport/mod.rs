//! Message-passing world for rank-local code.
//!
//! Every rank gets an [`Endpoint`] offering buffered point-to-point sends,
//! blocking receives and a handful of collectives built on top of them.
//! Collectives are implemented once, over point-to-point frames, so both
//! backends charge identical byte and message counts for the same schedule.
//!
//! Byte accounting uses the serialized [`VertexMessage`] size: a 16-byte
//! header (level, count) plus 8 bytes per vertex. The destination-rank word
//! of the socket frame is framing and is not charged.

mod frame;
mod inproc;
mod socket;

pub use frame::{encode as encode_frame, read_frame, FRAME_HEADER_BYTES};

use std::any::Any;
use std::net::{SocketAddr, TcpListener};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{Receiver, RecvTimeoutError};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use crate::{Error, Level, Result, VertexId};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

const POLL: Duration = Duration::from_millis(20);

/// Vertices discovered for one destination rank at one BFS level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexMessage {
    pub level: Level,
    pub vertices: Vec<VertexId>,
}

impl VertexMessage {
    pub const HEADER_BYTES: u64 = 16;

    pub fn new(level: Level, vertices: Vec<VertexId>) -> Self {
        Self { level, vertices }
    }

    pub fn empty(level: Level) -> Self {
        Self::new(level, Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn serialized_len(&self) -> u64 {
        Self::HEADER_BYTES + 8 * self.vertices.len() as u64
    }
}

/// Per-rank traffic counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub bytes_sent: u64,
    pub bytes_received: u64,
    pub messages_sent: u64,
    pub messages_received: u64,
    /// Bytes merged into a single send buffer ahead of an all-to-all exchange.
    pub aggregation_copy_bytes: u64,
}

impl std::ops::Sub for Counters {
    type Output = Counters;

    fn sub(self, rhs: Counters) -> Counters {
        Counters {
            bytes_sent: self.bytes_sent - rhs.bytes_sent,
            bytes_received: self.bytes_received - rhs.bytes_received,
            messages_sent: self.messages_sent - rhs.messages_sent,
            messages_received: self.messages_received - rhs.messages_received,
            aggregation_copy_bytes: self.aggregation_copy_bytes - rhs.aggregation_copy_bytes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    InProcess,
    /// One listen address per rank. Port 0 binds an ephemeral port.
    Socket {
        addrs: Vec<SocketAddr>,
    },
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::InProcess => "inproc",
            Backend::Socket { .. } => "socket",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldConfig {
    pub ranks: usize,
    pub backend: Backend,
    /// Upper bound on any single blocking receive.
    pub timeout: Duration,
}

impl WorldConfig {
    pub fn in_process(ranks: usize) -> Self {
        Self {
            ranks,
            backend: Backend::InProcess,
            timeout: DEFAULT_TIMEOUT,
        }
    }

    /// Socket mesh over loopback with ephemeral ports.
    pub fn socket_loopback(ranks: usize) -> Self {
        let addr = SocketAddr::from(([127, 0, 0, 1], 0));
        Self {
            ranks,
            backend: Backend::Socket {
                addrs: vec![addr; ranks],
            },
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn socket(addrs: Vec<SocketAddr>) -> Self {
        Self {
            ranks: addrs.len(),
            backend: Backend::Socket { addrs },
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_ranks(&self, ranks: usize) -> Self {
        match &self.backend {
            Backend::InProcess => Self::in_process(ranks).with_timeout(self.timeout),
            Backend::Socket { .. } => Self::socket_loopback(ranks).with_timeout(self.timeout),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ranks == 0 {
            return Err(Error::InvalidParameter(
                "world needs at least one rank".into(),
            ));
        }
        if let Backend::Socket { addrs } = &self.backend {
            if addrs.len() != self.ranks {
                return Err(Error::InvalidParameter(format!(
                    "socket backend needs {} addresses, got {}",
                    self.ranks,
                    addrs.len()
                )));
            }
        }
        Ok(())
    }
}

trait PeerSender: Send {
    fn send(&mut self, msg: VertexMessage) -> Result<()>;
}

type Incoming = Receiver<Result<VertexMessage>>;

/// A rank's handle on the world. Confined to the rank's thread.
pub struct Endpoint {
    rank: usize,
    size: usize,
    outgoing: Vec<Option<Box<dyn PeerSender>>>,
    incoming: Vec<Option<Incoming>>,
    counters: Counters,
    abort: Arc<AtomicBool>,
    timeout: Duration,
}

impl Endpoint {
    /// Joins a socket world from a standalone process: binds `addrs[rank]`
    /// and connects to every other address.
    pub fn connect_socket(rank: usize, addrs: &[SocketAddr], timeout: Duration) -> Result<Self> {
        if rank >= addrs.len() {
            return Err(Error::InvalidRank {
                rank,
                size: addrs.len(),
            });
        }
        let listener = TcpListener::bind(addrs[rank])?;
        let (outgoing, incoming) = socket::connect_mesh(rank, listener, addrs, timeout)?;
        Ok(Self::assemble(
            rank,
            outgoing,
            incoming,
            Arc::new(AtomicBool::new(false)),
            timeout,
        ))
    }

    fn assemble(
        rank: usize,
        outgoing: Vec<Option<Box<dyn PeerSender>>>,
        incoming: Vec<Option<Incoming>>,
        abort: Arc<AtomicBool>,
        timeout: Duration,
    ) -> Self {
        Self {
            rank,
            size: outgoing.len(),
            outgoing,
            incoming,
            counters: Counters::default(),
            abort,
            timeout,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    fn check_peer(&self, peer: usize) -> Result<()> {
        if peer >= self.size || peer == self.rank {
            return Err(Error::InvalidRank {
                rank: peer,
                size: self.size,
            });
        }
        Ok(())
    }

    fn check_root(&self, root: usize) -> Result<()> {
        if root >= self.size {
            return Err(Error::InvalidRank {
                rank: root,
                size: self.size,
            });
        }
        Ok(())
    }

    fn post(&mut self, to: usize, msg: VertexMessage, charge: bool) -> Result<()> {
        if self.abort.load(Ordering::Acquire) {
            return Err(Error::Shutdown);
        }
        if charge {
            self.counters.bytes_sent += msg.serialized_len();
            self.counters.messages_sent += 1;
        }
        self.outgoing[to]
            .as_mut()
            .expect("sender for every peer")
            .send(msg)
    }

    /// Blocking receive from `from`. `collective` names the enclosing
    /// collective, turning timeouts into collective-misuse errors.
    /// Empty messages are charged only when `charge_empty` is set.
    fn take(
        &mut self,
        from: usize,
        collective: Option<&'static str>,
        charge_empty: bool,
    ) -> Result<VertexMessage> {
        let deadline = Instant::now() + self.timeout;
        let rx = self.incoming[from]
            .as_ref()
            .expect("receiver for every peer");
        let msg = loop {
            if self.abort.load(Ordering::Acquire) {
                return Err(Error::Shutdown);
            }
            let now = Instant::now();
            if now >= deadline {
                return Err(match collective {
                    Some(op) => Error::CollectiveMisuse {
                        rank: self.rank,
                        op,
                        detail: format!("no message from rank {from} within {:?}", self.timeout),
                    },
                    None => Error::Timeout {
                        rank: self.rank,
                        from,
                    },
                });
            }
            match rx.recv_timeout(POLL.min(deadline - now)) {
                Ok(Ok(msg)) => break msg,
                Ok(Err(_)) if self.abort.load(Ordering::Acquire) => return Err(Error::Shutdown),
                Ok(Err(e)) => return Err(e),
                Err(RecvTimeoutError::Timeout) => continue,
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(match collective {
                        Some(op) if !self.abort.load(Ordering::Acquire) => {
                            Error::CollectiveMisuse {
                                rank: self.rank,
                                op,
                                detail: format!("rank {from} left the world"),
                            }
                        }
                        _ => Error::Shutdown,
                    })
                }
            }
        };
        if charge_empty || !msg.is_empty() {
            self.counters.bytes_received += msg.serialized_len();
            self.counters.messages_received += 1;
        }
        Ok(msg)
    }

    /// Buffered send; never waits for the receiver.
    pub fn send(&mut self, to: usize, msg: VertexMessage) -> Result<()> {
        self.check_peer(to)?;
        self.post(to, msg, true)
    }

    /// Next message from `from`, in send order.
    pub fn recv(&mut self, from: usize) -> Result<VertexMessage> {
        self.check_peer(from)?;
        self.take(from, None, true)
    }

    /// All-to-all personalised exchange of per-destination buffers.
    ///
    /// `outgoing` is indexed by destination; the returned vector is indexed
    /// by source. The caller's own slot must be empty. The buffers are
    /// charged as aggregated into one send buffer before the exchange, and
    /// empty segments carry no payload.
    pub fn exchange_all(&mut self, outgoing: Vec<VertexMessage>) -> Result<Vec<VertexMessage>> {
        const OP: &str = "exchange_all";
        if outgoing.len() != self.size {
            return Err(Error::InvalidParameter(format!(
                "exchange_all needs {} buffers, got {}",
                self.size,
                outgoing.len()
            )));
        }
        if !outgoing[self.rank].is_empty() {
            return Err(Error::InvalidParameter(
                "exchange_all self slot must be empty".into(),
            ));
        }
        let own_level = outgoing[self.rank].level;
        self.counters.aggregation_copy_bytes += outgoing
            .iter()
            .filter(|m| !m.is_empty())
            .map(VertexMessage::serialized_len)
            .sum::<u64>();

        for (dest, msg) in outgoing.into_iter().enumerate() {
            if dest != self.rank {
                let charge = !msg.is_empty();
                self.post(dest, msg, charge)?;
            }
        }
        (0..self.size)
            .map(|src| {
                if src == self.rank {
                    Ok(VertexMessage::empty(own_level))
                } else {
                    self.take(src, Some(OP), false)
                }
            })
            .collect()
    }

    /// Concatenates every rank's contribution on `root`, in rank order.
    /// Non-root ranks get an empty message back.
    pub fn gather_to_root(
        &mut self,
        contribution: VertexMessage,
        root: usize,
    ) -> Result<VertexMessage> {
        const OP: &str = "gather_to_root";
        self.check_root(root)?;
        let level = contribution.level;
        if self.rank != root {
            self.post(root, contribution, true)?;
            return Ok(VertexMessage::empty(level));
        }
        let mut own = Some(contribution);
        let mut merged = VertexMessage::empty(level);
        for src in 0..self.size {
            let part = if src == root {
                own.take().unwrap()
            } else {
                self.take(src, Some(OP), true)?
            };
            if part.level != level {
                return Err(Error::CollectiveMisuse {
                    rank: self.rank,
                    op: OP,
                    detail: format!(
                        "rank {src} contributed level {}, root is at {level}",
                        part.level
                    ),
                });
            }
            merged.vertices.extend(part.vertices);
        }
        Ok(merged)
    }

    /// Every rank returns `root`'s message; other ranks' `msg` is ignored.
    pub fn broadcast(&mut self, msg: VertexMessage, root: usize) -> Result<VertexMessage> {
        self.check_root(root)?;
        if self.rank == root {
            for dest in (0..self.size).filter(|&d| d != root) {
                self.post(dest, msg.clone(), true)?;
            }
            Ok(msg)
        } else {
            self.take(root, Some("broadcast"), true)
        }
    }

    /// Sum over all ranks (gather to rank 0, then broadcast).
    pub fn allreduce_sum(&mut self, value: u64) -> Result<u64> {
        let gathered = self.gather_to_root(VertexMessage::new(0, vec![value]), 0)?;
        let total = VertexMessage::new(0, vec![gathered.vertices.iter().sum()]);
        let reply = self.broadcast(total, 0)?;
        reply
            .vertices
            .first()
            .copied()
            .ok_or_else(|| Error::CollectiveMisuse {
                rank: self.rank,
                op: "allreduce_sum",
                detail: "empty reduction result".into(),
            })
    }

    pub fn barrier(&mut self) -> Result<()> {
        self.allreduce_sum(0).map(|_| ())
    }
}

/// Per-rank results of a completed world, in rank order.
#[derive(Debug)]
pub struct WorldOutput<T> {
    pub results: Vec<T>,
    pub counters: Vec<Counters>,
}

/// Runs `rank_main` once per rank on its own thread and waits for all of
/// them. If any rank fails, the rest are released with a shutdown error and
/// the first root-cause failure is returned.
pub fn spawn_world<T, F>(config: &WorldConfig, rank_main: F) -> Result<WorldOutput<T>>
where
    T: Send,
    F: Fn(&mut Endpoint) -> Result<T> + Sync,
{
    config.validate()?;
    let p = config.ranks;
    let abort = Arc::new(AtomicBool::new(false));

    enum Wiring {
        Ready(Vec<Option<Box<dyn PeerSender>>>, Vec<Option<Incoming>>),
        Socket(TcpListener, Arc<Vec<SocketAddr>>),
    }

    let wiring: Vec<Wiring> = match &config.backend {
        Backend::InProcess => inproc::mesh(p)
            .into_iter()
            .map(|(o, i)| Wiring::Ready(o, i))
            .collect(),
        Backend::Socket { addrs } => {
            let listeners = addrs
                .iter()
                .map(TcpListener::bind)
                .collect::<std::io::Result<Vec<_>>>()?;
            let bound = Arc::new(
                listeners
                    .iter()
                    .map(TcpListener::local_addr)
                    .collect::<std::io::Result<Vec<_>>>()?,
            );
            listeners
                .into_iter()
                .map(|l| Wiring::Socket(l, Arc::clone(&bound)))
                .collect()
        }
    };

    let rank_main = &rank_main;
    // When several ranks fail, the report prefers panics, then rank errors,
    // then transport timeouts, then shutdown notices caused by someone else.
    let outcomes: Vec<std::result::Result<Result<(T, Counters)>, String>> = thread::scope(|s| {
        let handles: Vec<_> = wiring
            .into_iter()
            .enumerate()
            .map(|(rank, wiring)| {
                let abort = Arc::clone(&abort);
                let timeout = config.timeout;
                thread::Builder::new()
                    .name(format!("bfs1d-rank-{rank}"))
                    .spawn_scoped(s, move || {
                        let wired = match wiring {
                            Wiring::Ready(o, i) => Ok((o, i)),
                            Wiring::Socket(listener, addrs) => {
                                socket::connect_mesh(rank, listener, &addrs, timeout)
                            }
                        };
                        let (outgoing, incoming) = match wired {
                            Ok(w) => w,
                            Err(e) => {
                                abort.store(true, Ordering::Release);
                                return Ok(Err(e));
                            }
                        };
                        let mut ep = Endpoint::assemble(
                            rank,
                            outgoing,
                            incoming,
                            Arc::clone(&abort),
                            timeout,
                        );
                        let run = catch_unwind(AssertUnwindSafe(|| {
                            rank_main(&mut ep).map(|value| (value, ep.counters()))
                        }));
                        // raise the flag before dropping the endpoint so peers
                        // see a shutdown rather than a vanished rank
                        if !matches!(run, Ok(Ok(_))) {
                            abort.store(true, Ordering::Release);
                        }
                        drop(ep);
                        run.map_err(panic_message)
                    })
                    .expect("spawn rank thread")
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|p| Err(panic_message(p))))
            .collect()
    });

    let mut results = Vec::with_capacity(p);
    let mut counters = Vec::with_capacity(p);
    let mut failure: Option<(u8, Error)> = None;
    for (rank, outcome) in outcomes.into_iter().enumerate() {
        let (severity, err) = match outcome {
            Ok(Ok((value, c))) => {
                results.push(value);
                counters.push(c);
                continue;
            }
            Err(message) => (0, Error::RankPanicked { rank, message }),
            Ok(Err(e)) => {
                let severity = match e {
                    Error::Shutdown => 3,
                    Error::CollectiveMisuse { .. } | Error::Timeout { .. } => 2,
                    _ => 1,
                };
                (
                    severity,
                    Error::RankFailed {
                        rank,
                        source: Box::new(e),
                    },
                )
            }
        };
        if failure.as_ref().is_none_or(|(s, _)| severity < *s) {
            failure = Some((severity, err));
        }
    }
    match failure {
        Some((_, e)) => Err(e),
        None => Ok(WorldOutput { results, counters }),
    }
}

fn panic_message(payload: Box<dyn Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "non-string panic payload".into())
}
