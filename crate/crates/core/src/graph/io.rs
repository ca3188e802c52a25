//! Plain-text edge lists.
//!
//! ```text
//! # optional comments
//! <vertex_count> <edge_count>
//! <u> <v>
//! ...
//! ```
//!
//! Edges are written with `u < v`, one per line.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::EdgeList;
use crate::{Error, Result};

pub fn write_edge_list<W: Write>(edges: &EdgeList, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{} {}", edges.vertex_count(), edges.len())?;
    for &(u, v) in edges.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_edge_list_file(edges: &EdgeList, path: &Path) -> Result<()> {
    write_edge_list(edges, File::create(path)?)
}

pub fn read_edge_list<R: Read>(input: R) -> Result<EdgeList> {
    parse(BufReader::new(input), None)
}

pub fn read_edge_list_file(path: &Path) -> Result<EdgeList> {
    parse(BufReader::new(File::open(path)?), Some(path))
}

fn parse<R: BufRead>(input: R, path: Option<&Path>) -> Result<EdgeList> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.map(Path::to_path_buf),
        line,
        message,
    };

    let mut header: Option<(u64, u64)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = 0;

    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_ascii_whitespace();
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(err(
                    lineno,
                    format!("expected two integers, got {trimmed:?}"),
                ))
            }
        };
        let a: u64 = a
            .parse()
            .map_err(|_| err(lineno, format!("not a non-negative integer: {a:?}")))?;
        let b: u64 = b
            .parse()
            .map_err(|_| err(lineno, format!("not a non-negative integer: {b:?}")))?;

        let Some((n, _)) = header else {
            header = Some((a, b));
            edges.reserve(b.min(1 << 24) as usize);
            continue;
        };
        if a >= n || b >= n {
            return Err(err(
                lineno,
                format!("vertex id out of range [0, {n}): {a} {b}"),
            ));
        }
        if a == b {
            return Err(err(lineno, format!("self-loop {a} {b}")));
        }
        let e = (a.min(b), a.max(b));
        if !seen.insert(e) {
            return Err(err(lineno, format!("duplicate edge {a} {b}")));
        }
        edges.push(e);
    }

    let Some((n, m)) = header else {
        return Err(err(last_line.max(1), "missing header line".into()));
    };
    if edges.len() as u64 != m {
        return Err(err(
            last_line,
            format!("header declares {m} edges but {} were read", edges.len()),
        ));
    }
    Ok(EdgeList::from_normalised(n, edges))
}
