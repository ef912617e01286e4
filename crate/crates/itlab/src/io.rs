//! The canonical instance file format and its JSON mirror.
//!
//! Text format (UTF-8, line based, `#` starts a comment):
//!
//! ```text
//! ith r=2 m=3
//! part 0: 0 1
//! part 1: 2 3
//! part 2: 4 5
//! edge: 0 2
//! edge: 1 4
//! ```
//!
//! Writers are byte-deterministic for a fixed instance: parts in index order
//! with sorted vertex lists, edges in sorted order (instances are already
//! canonical, see [`crate::hypergraph::PartitionedHypergraph::new`]).

use crate::hypergraph::{BuildError, PartitionedHypergraph, VertexId};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: instance invalid: {source}")]
    Invalid { line: usize, source: BuildError },
    #[error("invalid json instance: {0}")]
    Json(#[from] serde_json::Error),
    #[error("json instance invalid: {0}")]
    JsonInvalid(#[from] BuildError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Serialize to the canonical text format.
pub fn write_instance(g: &PartitionedHypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ith r={} m={}", g.uniformity(), g.num_parts());
    for (i, part) in g.parts().iter().enumerate() {
        let _ = write!(out, "part {}:", i);
        for v in part {
            let _ = write!(out, " {}", v);
        }
        out.push('\n');
    }
    for e in g.edges() {
        let _ = write!(out, "edge:");
        for v in e {
            let _ = write!(out, " {}", v);
        }
        out.push('\n');
    }
    out
}

/// Parse the canonical text format.
pub fn read_instance(text: &str) -> Result<PartitionedHypergraph, ParseError> {
    let mut r: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut parts: Vec<Vec<VertexId>> = Vec::new();
    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if r.is_none() {
            // header must come first
            let mut toks = line.split_whitespace();
            if toks.next() != Some("ith") {
                return Err(syntax(lineno, "expected header `ith r=<r> m=<m>`"));
            }
            for tok in toks {
                if let Some(val) = tok.strip_prefix("r=") {
                    r = Some(
                        val.parse()
                            .map_err(|_| syntax(lineno, format!("bad r value `{val}`")))?,
                    );
                } else if let Some(val) = tok.strip_prefix("m=") {
                    m = Some(
                        val.parse()
                            .map_err(|_| syntax(lineno, format!("bad m value `{val}`")))?,
                    );
                } else {
                    return Err(syntax(lineno, format!("unexpected header token `{tok}`")));
                }
            }
            if r.is_none() || m.is_none() {
                return Err(syntax(lineno, "header must carry both r= and m="));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("part") {
            let (idx_str, verts) = rest
                .split_once(':')
                .ok_or_else(|| syntax(lineno, "part line missing `:`"))?;
            let pi: usize = idx_str
                .trim()
                .parse()
                .map_err(|_| syntax(lineno, format!("bad part index `{}`", idx_str.trim())))?;
            if pi != parts.len() {
                return Err(syntax(
                    lineno,
                    format!("expected part {}, found part {}", parts.len(), pi),
                ));
            }
            let vs = parse_ids(verts, lineno)?;
            parts.push(vs);
        } else if let Some(rest) = line.strip_prefix("edge") {
            let (_, verts) = rest
                .split_once(':')
                .ok_or_else(|| syntax(lineno, "edge line missing `:`"))?;
            let vs = parse_ids(verts, lineno)?;
            let r = r.unwrap();
            if vs.len() != r {
                return Err(syntax(
                    lineno,
                    format!("edge arity mismatch: expected {} vertices, found {}", r, vs.len()),
                ));
            }
            edges.push(vs);
        } else {
            return Err(syntax(lineno, format!("unrecognized line `{line}`")));
        }
    }

    let r = r.ok_or_else(|| syntax(last_line.max(1), "missing header"))?;
    let m = m.unwrap();
    if parts.len() != m {
        return Err(syntax(
            last_line,
            format!("header promised m={} parts, found {}", m, parts.len()),
        ));
    }
    PartitionedHypergraph::new(r, parts, edges)
        .map_err(|source| ParseError::Invalid {
            line: last_line,
            source,
        })
}

fn parse_ids(s: &str, lineno: usize) -> Result<Vec<VertexId>, ParseError> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<VertexId>()
                .map_err(|_| syntax(lineno, format!("bad vertex id `{tok}`")))
        })
        .collect()
}

/// JSON mirror with keys `r`, `parts`, `edges`.
#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceJson {
    pub r: usize,
    pub parts: Vec<Vec<VertexId>>,
    pub edges: Vec<Vec<VertexId>>,
}

impl From<&PartitionedHypergraph> for InstanceJson {
    fn from(g: &PartitionedHypergraph) -> Self {
        InstanceJson {
            r: g.uniformity(),
            parts: g.parts().to_vec(),
            edges: g.edges().to_vec(),
        }
    }
}

pub fn write_instance_json(g: &PartitionedHypergraph) -> String {
    serde_json::to_string_pretty(&InstanceJson::from(g)).expect("instance serializes")
}

pub fn read_instance_json(text: &str) -> Result<PartitionedHypergraph, ParseError> {
    let raw: InstanceJson = serde_json::from_str(text)?;
    Ok(PartitionedHypergraph::new(raw.r, raw.parts, raw.edges)?)
}

/// Read either format, keyed on a leading `{`.
pub fn read_instance_auto(text: &str) -> Result<PartitionedHypergraph, ParseError> {
    if text.trim_start().starts_with('{') {
        read_instance_json(text)
    } else {
        read_instance(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PartitionedHypergraph {
        PartitionedHypergraph::new(
            2,
            vec![vec![0, 1], vec![2, 3], vec![4, 5]],
            vec![vec![0, 2], vec![1, 4], vec![3, 5]],
        )
        .unwrap()
    }

    #[test]
    fn round_trip_text() {
        let g = sample();
        let text = write_instance(&g);
        let h = read_instance(&text).unwrap();
        assert_eq!(g, h);
        // byte determinism
        assert_eq!(text, write_instance(&h));
    }

    #[test]
    fn round_trip_json() {
        let g = sample();
        let h = read_instance_json(&write_instance_json(&g)).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a comment\n\nith r=2 m=2  # trailing\npart 0: 0\npart 1: 1\nedge: 0 1\n";
        let g = read_instance(text).unwrap();
        assert_eq!(g.num_parts(), 2);
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn arity_error_carries_line() {
        let text = "ith r=2 m=2\npart 0: 0\npart 1: 1 2\nedge: 0\n";
        match read_instance(text) {
            Err(ParseError::Syntax { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("arity"));
            }
            other => panic!("expected arity error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_vertex_rejected() {
        let text = "ith r=2 m=2\npart 0: 0 1\npart 1: 1\n";
        assert!(matches!(
            read_instance(text),
            Err(ParseError::Invalid {
                source: BuildError::DuplicateVertex(1),
                ..
            })
        ));
    }

    #[test]
    fn part_order_enforced() {
        let text = "ith r=2 m=2\npart 1: 0\npart 0: 1\n";
        assert!(matches!(read_instance(text), Err(ParseError::Syntax { line: 2, .. })));
    }
}
