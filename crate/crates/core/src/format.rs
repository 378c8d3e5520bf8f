//! Line-oriented text format.
//!
//! ```text
//! # comment
//! hypergraph 4
//! 0 1 2
//! 2 3
//! ```
//!
//! The header is `graph <n>` or `hypergraph <n>`; every following
//! non-comment line is one (hyper)edge given as space-separated node ids.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::hypercore::{Graph, Hypergraph, Input, ModelError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("missing header line (expected `graph <n>` or `hypergraph <n>`)")]
    MissingHeader,
    #[error("line {line}: bad header {text:?}")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: {token:?} is not a node id")]
    BadToken { line: usize, token: String },
    #[error("line {line}: node {node} out of range (n = {n})")]
    OutOfRange { line: usize, node: usize, n: usize },
    #[error("line {line}: graph edge needs exactly 2 ids, found {found}")]
    EdgeArity { line: usize, found: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A parsed file plus non-fatal findings.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub input: Input,
    pub warnings: Vec<String>,
}

enum Header {
    Graph(usize),
    Hypergraph(usize),
}

pub fn parse(text: &str) -> Result<Parsed, ParseError> {
    let mut header = None;
    let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(h) = &header else {
            header = Some(parse_header(line_no, line)?);
            continue;
        };
        let n = match h {
            Header::Graph(n) | Header::Hypergraph(n) => *n,
        };
        let mut ids = Vec::new();
        for token in line.split_whitespace() {
            let node: usize = token.parse().map_err(|_| ParseError::BadToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if node >= n {
                return Err(ParseError::OutOfRange { line: line_no, node, n });
            }
            ids.push(node);
        }
        if matches!(h, Header::Graph(_)) && ids.len() != 2 {
            return Err(ParseError::EdgeArity { line: line_no, found: ids.len() });
        }
        rows.push((line_no, ids));
    }
    let mut warnings = Vec::new();
    let input = match header.ok_or(ParseError::MissingHeader)? {
        Header::Graph(n) => {
            let edges: Vec<_> = rows.iter().map(|(_, ids)| (ids[0], ids[1])).collect();
            Input::Graph(Graph::new(n, &edges)?)
        }
        Header::Hypergraph(n) => {
            let h = Hypergraph::new(n, rows.into_iter().map(|(_, ids)| ids).collect())?;
            for (a, b) in h.duplicate_hyperedges() {
                warnings.push(format!("hyperedge {b} duplicates hyperedge {a}; kept"));
            }
            Input::Hypergraph(h)
        }
    };
    Ok(Parsed { input, warnings })
}

fn parse_header(line_no: usize, line: &str) -> Result<Header, ParseError> {
    let bad = || ParseError::BadHeader { line: line_no, text: line.to_string() };
    let mut parts = line.split_whitespace();
    let kind = parts.next().ok_or_else(bad)?;
    let n: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if parts.next().is_some() {
        return Err(bad());
    }
    match kind {
        "graph" => Ok(Header::Graph(n)),
        "hypergraph" => Ok(Header::Hypergraph(n)),
        _ => Err(bad()),
    }
}

pub fn read_file(path: &Path) -> Result<Parsed, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

/// Serializes in edge order (graphs: sorted `u < v`; hypergraphs: as stored).
pub fn emit(input: &Input) -> String {
    let mut out = String::new();
    match input {
        Input::Graph(g) => {
            writeln!(out, "graph {}", g.node_count()).unwrap();
            for &(u, v) in g.edges() {
                writeln!(out, "{u} {v}").unwrap();
            }
        }
        Input::Hypergraph(h) => {
            writeln!(out, "hypergraph {}", h.node_count()).unwrap();
            for e in h.hyperedges() {
                let ids: Vec<String> = e.iter().map(usize::to_string).collect();
                writeln!(out, "{}", ids.join(" ")).unwrap();
            }
        }
    }
    out
}
