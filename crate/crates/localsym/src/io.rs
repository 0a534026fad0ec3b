//! Plain-text edge list parsing and writing.
//!
//! Format: one edge per line as two whitespace-separated vertex ids, `#`
//! starts a comment that runs to end of line, blank lines are ignored, and
//! an optional `n <count>` header line declares the vertex count. Without a
//! header the vertex count is one more than the largest id mentioned (zero
//! for an empty file).

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{EdgeListBuild, Graph, GraphError, Vertex};

/// Syntax error with the 1-based line it occurred on.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// Parse or construction error when reading a graph.
#[derive(Debug, Error)]
pub enum ReadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Build(#[from] GraphError),
}

/// Parsed edge list file, before graph construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListFile {
    pub declared_n: Option<usize>,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl EdgeListFile {
    /// Vertex count: the declared header value, or one more than the
    /// largest endpoint mentioned.
    pub fn vertex_count(&self) -> usize {
        match self.declared_n {
            Some(n) => n,
            None => self
                .edges
                .iter()
                .map(|&(u, v)| u.max(v) as usize + 1)
                .max()
                .unwrap_or(0),
        }
    }
}

fn parse_vertex(tok: &str, line: usize) -> Result<Vertex, ParseError> {
    let id: u64 = tok.parse().map_err(|_| ParseError {
        line,
        message: format!("expected a vertex id, found {tok:?}"),
    })?;
    Vertex::try_from(id).map_err(|_| ParseError {
        line,
        message: format!("vertex id {id} is too large"),
    })
}

/// Parses edge list text. Pure syntax: endpoint range, self-loop, and
/// duplicate checks happen at graph construction.
pub fn parse_edge_list(src: &str) -> Result<EdgeListFile, ParseError> {
    let mut declared_n = None;
    let mut edges = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let Some(first) = toks.next() else { continue };
        if first == "n" {
            if declared_n.is_some() {
                return Err(ParseError {
                    line,
                    message: "duplicate n header".to_string(),
                });
            }
            if !edges.is_empty() {
                return Err(ParseError {
                    line,
                    message: "n header must precede all edges".to_string(),
                });
            }
            let tok = toks.next().ok_or_else(|| ParseError {
                line,
                message: "n header is missing its count".to_string(),
            })?;
            let n: usize = tok.parse().map_err(|_| ParseError {
                line,
                message: format!("expected a vertex count, found {tok:?}"),
            })?;
            if n > u32::MAX as usize {
                return Err(ParseError {
                    line,
                    message: format!("vertex count {n} is too large"),
                });
            }
            if toks.next().is_some() {
                return Err(ParseError {
                    line,
                    message: "trailing tokens after n header".to_string(),
                });
            }
            declared_n = Some(n);
            continue;
        }
        let u = parse_vertex(first, line)?;
        let v = parse_vertex(
            toks.next().ok_or_else(|| ParseError {
                line,
                message: "edge line needs two vertex ids".to_string(),
            })?,
            line,
        )?;
        if toks.next().is_some() {
            return Err(ParseError {
                line,
                message: "trailing tokens after edge".to_string(),
            });
        }
        edges.push((u, v));
    }
    Ok(EdgeListFile { declared_n, edges })
}

/// Parses edge list text and builds the graph in one step.
pub fn read_graph_str(src: &str, strict: bool) -> Result<EdgeListBuild, ReadError> {
    let file = parse_edge_list(src)?;
    Ok(Graph::from_edge_list(file.vertex_count(), &file.edges, strict)?)
}

/// Writes a graph in the edge list format, always with an `n` header so
/// isolated vertices and edgeless graphs round-trip.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", g.n()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
