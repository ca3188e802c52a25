use std::sync::mpsc::{channel, Receiver, Sender};

use super::{Incoming, PeerSender, VertexMessage};
use crate::{Error, Result};

struct ChannelSender(Sender<Result<VertexMessage>>);

impl PeerSender for ChannelSender {
    fn send(&mut self, msg: VertexMessage) -> Result<()> {
        self.0.send(Ok(msg)).map_err(|_| Error::Shutdown)
    }
}

/// One unbounded channel per ordered rank pair. Returns, per rank, its
/// outgoing senders indexed by destination and incoming receivers indexed
/// by source (self slots are `None`).
#[allow(clippy::type_complexity)]
pub(super) fn mesh(p: usize) -> Vec<(Vec<Option<Box<dyn PeerSender>>>, Vec<Option<Incoming>>)> {
    let mut out: Vec<Vec<Option<Box<dyn PeerSender>>>> =
        (0..p).map(|_| (0..p).map(|_| None).collect()).collect();
    let mut inc: Vec<Vec<Option<Receiver<Result<VertexMessage>>>>> =
        (0..p).map(|_| (0..p).map(|_| None).collect()).collect();
    for src in 0..p {
        for dst in 0..p {
            if src != dst {
                let (tx, rx) = channel();
                out[src][dst] = Some(Box::new(ChannelSender(tx)));
                inc[dst][src] = Some(rx);
            }
        }
    }
    out.into_iter().zip(inc).collect()
}
