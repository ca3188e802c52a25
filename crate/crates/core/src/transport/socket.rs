//! Full TCP mesh. Rank `r` accepts connections from every higher rank and
//! dials every lower rank; the dialling side announces its rank as an
//! 8-byte little-endian handshake. Each inbound stream gets a reader thread
//! that decodes frames into a channel, so sends never wait on the receiver.

use std::io::{self, Read, Write};
use std::net::{Shutdown, SocketAddr, TcpListener, TcpStream};
use std::sync::mpsc::{channel, Sender};
use std::thread;
use std::time::{Duration, Instant};

use super::frame::{read_frame, write_frame};
use super::{Incoming, PeerSender, VertexMessage};
use crate::{Error, Result};

const POLL: Duration = Duration::from_millis(5);

struct SocketSender {
    stream: TcpStream,
    dest: usize,
}

impl PeerSender for SocketSender {
    fn send(&mut self, msg: VertexMessage) -> Result<()> {
        write_frame(&mut self.stream, self.dest, &msg).map_err(|e| match e.kind() {
            io::ErrorKind::BrokenPipe | io::ErrorKind::ConnectionReset => Error::Shutdown,
            _ => Error::Io(e),
        })
    }
}

impl Drop for SocketSender {
    fn drop(&mut self) {
        // FIN lets the peer's reader thread drain and exit
        let _ = self.stream.shutdown(Shutdown::Write);
    }
}

#[allow(clippy::type_complexity)]
pub(super) fn connect_mesh(
    rank: usize,
    listener: TcpListener,
    addrs: &[SocketAddr],
    timeout: Duration,
) -> Result<(Vec<Option<Box<dyn PeerSender>>>, Vec<Option<Incoming>>)> {
    let p = addrs.len();
    let deadline = Instant::now() + timeout;
    let mut streams: Vec<Option<TcpStream>> = (0..p).map(|_| None).collect();

    for (peer, addr) in addrs.iter().enumerate().take(rank) {
        let mut stream = dial(*addr, deadline)?;
        stream.write_all(&(rank as u64).to_le_bytes())?;
        streams[peer] = Some(stream);
    }

    listener.set_nonblocking(true)?;
    let mut pending = p - rank - 1;
    while pending > 0 {
        match listener.accept() {
            Ok((mut stream, _)) => {
                stream.set_nonblocking(false)?;
                stream.set_read_timeout(Some(timeout))?;
                let mut hello = [0u8; 8];
                stream.read_exact(&mut hello)?;
                stream.set_read_timeout(None)?;
                let peer = u64::from_le_bytes(hello) as usize;
                if peer <= rank || peer >= p || streams[peer].is_some() {
                    return Err(Error::Frame(format!(
                        "rank {rank} got an unexpected handshake from rank {peer}"
                    )));
                }
                streams[peer] = Some(stream);
                pending -= 1;
            }
            Err(e) if e.kind() == io::ErrorKind::WouldBlock => {
                if Instant::now() >= deadline {
                    return Err(Error::Timeout {
                        rank,
                        from: streams.iter().rposition(Option::is_none).unwrap_or(rank),
                    });
                }
                thread::sleep(POLL);
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut outgoing: Vec<Option<Box<dyn PeerSender>>> = (0..p).map(|_| None).collect();
    let mut incoming: Vec<Option<Incoming>> = (0..p).map(|_| None).collect();
    for (peer, stream) in streams.into_iter().enumerate() {
        let Some(stream) = stream else { continue };
        stream.set_nodelay(true)?;
        let read_half = stream.try_clone()?;
        let (tx, rx) = channel();
        spawn_reader(rank, peer, read_half, tx);
        outgoing[peer] = Some(Box::new(SocketSender { stream, dest: peer }));
        incoming[peer] = Some(rx);
    }
    Ok((outgoing, incoming))
}

fn dial(addr: SocketAddr, deadline: Instant) -> Result<TcpStream> {
    loop {
        match TcpStream::connect(addr) {
            Ok(s) => return Ok(s),
            Err(e) if Instant::now() >= deadline => return Err(e.into()),
            Err(_) => thread::sleep(POLL),
        }
    }
}

fn spawn_reader(
    rank: usize,
    peer: usize,
    mut stream: TcpStream,
    tx: Sender<Result<VertexMessage>>,
) {
    thread::Builder::new()
        .name(format!("bfs1d-rx-{rank}<-{peer}"))
        .spawn(move || loop {
            match read_frame(&mut stream) {
                Ok(Some((dest, msg))) => {
                    let item = if dest == rank {
                        Ok(msg)
                    } else {
                        Err(Error::Frame(format!(
                            "rank {rank} received a frame addressed to rank {dest}"
                        )))
                    };
                    let failed = item.is_err();
                    if tx.send(item).is_err() || failed {
                        return;
                    }
                }
                Ok(None) => return,
                Err(e) => {
                    let _ = tx.send(Err(e));
                    return;
                }
            }
        })
        .expect("spawn socket reader thread");
}
