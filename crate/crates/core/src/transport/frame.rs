//! Fixed-width little-endian wire encoding:
//! `[dest-rank:8][level:8][count:8][ids:8*count]`.

use std::io::{self, Read, Write};

use super::VertexMessage;
use crate::{Error, Result};

pub const FRAME_HEADER_BYTES: usize = 24;

/// Refuse absurd counts from a corrupted stream rather than allocating them.
const MAX_FRAME_IDS: u64 = 1 << 32;

pub fn encode(dest: usize, msg: &VertexMessage) -> Vec<u8> {
    let mut buf = Vec::with_capacity(FRAME_HEADER_BYTES + 8 * msg.vertices.len());
    buf.extend_from_slice(&(dest as u64).to_le_bytes());
    buf.extend_from_slice(&msg.level.to_le_bytes());
    buf.extend_from_slice(&(msg.vertices.len() as u64).to_le_bytes());
    for v in &msg.vertices {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf
}

pub fn write_frame<W: Write>(out: &mut W, dest: usize, msg: &VertexMessage) -> io::Result<()> {
    out.write_all(&encode(dest, msg))
}

/// Reads one frame. `Ok(None)` on a clean end of stream before any header byte.
pub fn read_frame<R: Read>(input: &mut R) -> Result<Option<(usize, VertexMessage)>> {
    let mut header = [0u8; FRAME_HEADER_BYTES];
    let mut filled = 0;
    while filled < header.len() {
        match input.read(&mut header[filled..]) {
            Ok(0) if filled == 0 => return Ok(None),
            Ok(0) => return Err(Error::Frame("stream ended inside a frame header".into())),
            Ok(k) => filled += k,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
    let word = |i: usize| u64::from_le_bytes(header[i * 8..i * 8 + 8].try_into().unwrap());
    let (dest, level, count) = (word(0), word(1), word(2));
    if count > MAX_FRAME_IDS {
        return Err(Error::Frame(format!("frame claims {count} vertices")));
    }
    let mut body = vec![0u8; count as usize * 8];
    input
        .read_exact(&mut body)
        .map_err(|e| Error::Frame(format!("truncated frame body: {e}")))?;
    let vertices = body
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Some((dest as usize, VertexMessage { level, vertices })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn layout_is_little_endian() {
        let bytes = encode(2, &VertexMessage::new(1, vec![5]));
        assert_eq!(bytes.len(), 32);
        assert_eq!(&bytes[0..8], &[2, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&bytes[8..16], &[1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&bytes[16..24], &[1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&bytes[24..32], &[5, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn truncated_frames_are_errors() {
        let bytes = encode(0, &VertexMessage::new(3, vec![1, 2]));
        assert!(read_frame(&mut &bytes[..10]).is_err());
        assert!(read_frame(&mut &bytes[..30]).is_err());
        assert!(read_frame(&mut &bytes[..0]).unwrap().is_none());
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(dest in 0usize..64, level: u64, ids in proptest::collection::vec(any::<u64>(), 0..50)) {
            let msg = VertexMessage::new(level, ids);
            let bytes = encode(dest, &msg);
            prop_assert_eq!(bytes.len() as u64, 8 + msg.serialized_len());
            let (d, back) = read_frame(&mut bytes.as_slice()).unwrap().unwrap();
            prop_assert_eq!(d, dest);
            prop_assert_eq!(back, msg);
        }
    }
}
