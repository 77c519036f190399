//! graph6 encoding (undirected, up to 64 vertices here).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Graph, MAX_VERTICES};
use crate::error::{Error, Result};

const HEADER: &str = ">>graph6<<";

fn g6err(msg: impl Into<String>) -> Error {
    Error::Graph6(msg.into())
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let text = text.trim_end_matches(['\n', '\r']);
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(g6err("empty input"));
    }
    if let Some(pos) = bytes.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(g6err(format!("byte {pos} outside the printable range 63..=126")));
    }
    let (n, body) = if bytes[0] == 126 {
        if bytes.get(1) == Some(&126) {
            return Err(g6err("graphs with more than 258047 vertices are not supported"));
        }
        if bytes.len() < 4 {
            return Err(g6err("truncated size header"));
        }
        let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        if n < 63 {
            return Err(g6err("long size header used for fewer than 63 vertices"));
        }
        (n, &bytes[4..])
    } else {
        ((bytes[0] - 63) as usize, &bytes[1..])
    };
    if n > MAX_VERTICES {
        return Err(Error::TooManyQubits { n, max: MAX_VERTICES });
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(g6err(format!("expected {expected} data bytes for {n} vertices, found {}", body.len())));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    for pad in nbits..expected * 6 {
        if bit(pad) {
            return Err(g6err("nonzero padding bits"));
        }
    }
    Ok(g)
}

pub fn format_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    // every byte is in 63..=126
    String::from_utf8(out).expect("graph6 output is ASCII")
}
