//! Plain-text edge-list format.
//!
//! One edge per line: `u v conductance`, whitespace-separated, with vertex ids
//! as non-negative integers. The conductance may be omitted and defaults to
//! 1.0. Everything after `#` on a line is a comment. The vertex count is one
//! past the largest id mentioned.

use crate::error::{Error, Result};
use crate::network::{Network, VertexId};

pub fn parse_edge_list(text: &str) -> Result<Network> {
    let mut raw: Vec<(usize, usize, f64)> = Vec::new();
    let mut max_vertex: Option<usize> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let u = parse_vertex(parts.next(), lineno + 1)?;
        let v = parse_vertex(parts.next(), lineno + 1)?;
        let conductance = match parts.next() {
            None => 1.0,
            Some(tok) => tok.parse::<f64>().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("bad conductance {tok:?}"),
            })?,
        };
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "expected `u v [conductance]`".into(),
            });
        }
        max_vertex = Some(max_vertex.unwrap_or(0).max(u).max(v));
        raw.push((u, v, conductance));
    }
    let vertex_count = max_vertex.map_or(0, |m| m + 1);
    let mut net = Network::new(vertex_count);
    for (u, v, c) in raw {
        net.add_edge(VertexId(u), VertexId(v), c)?;
    }
    Ok(net)
}

fn parse_vertex(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        message: "expected `u v [conductance]`".into(),
    })?;
    tok.parse::<usize>().map_err(|_| Error::Parse {
        line,
        message: format!("bad vertex id {tok:?}"),
    })
}

pub fn write_edge_list(net: &Network) -> String {
    let mut out = String::new();
    for e in net.edges() {
        if e.conductance == 1.0 {
            out.push_str(&format!("{} {}\n", e.tail.0, e.head.0));
        } else {
            out.push_str(&format!("{} {} {}\n", e.tail.0, e.head.0, e.conductance));
        }
    }
    out
}
