//! Edge-list ingestion and plain-text serialization, plus the run
//! record header embedded in every output artifact.
//!
//! The edge-list dialect is the usual one for public network datasets:
//! whitespace-separated "u v" lines with '#' comments. Vertex ids are
//! compacted to [0, n) in sorted order, which makes
//! parse -> serialize -> parse a fixed point.

use crate::error::{invalid, Error, Result};
use crate::graph::{GraphInstance, GraphMeta};
use serde::Serialize;
use std::collections::HashSet;
use std::io::{BufRead, Write};

/// Dialect of the edge-list format.
#[derive(Debug, Clone)]
pub struct EdgeListFormat {
    pub comment_prefix: char,
}

impl Default for EdgeListFormat {
    fn default() -> Self {
        EdgeListFormat { comment_prefix: '#' }
    }
}

/// What ingestion saw and dropped.
#[derive(Debug, Clone, Serialize)]
pub struct ParseReport {
    pub duplicate_edges: usize,
    pub self_loops: usize,
    /// Whether any raw vertex id 0 appeared (ids are compacted either way).
    pub zero_indexed: bool,
    pub edge_lines: usize,
}

/// Parse an edge list into a simple undirected graph. Duplicate edges
/// and self-loops are dropped and counted; vertices get unit weights
/// until estimation or a weight file replaces them.
pub fn parse_edge_list<R: BufRead>(
    reader: R,
    format: &EdgeListFormat,
    source: impl Into<String>,
) -> Result<(GraphInstance, ParseReport)> {
    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    let mut self_loops = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(Error::Io)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(format.comment_prefix) {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let u = parse_id(it.next(), line_no)?;
        let v = parse_id(it.next(), line_no)?;
        if it.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: "expected exactly two vertex ids".into(),
            });
        }
        if u == v {
            self_loops += 1;
        } else {
            raw_edges.push((u, v));
        }
    }
    if raw_edges.is_empty() && self_loops == 0 {
        return Err(invalid("edge list is empty"));
    }

    let mut ids: Vec<u64> = raw_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.is_empty() {
        return Err(invalid("edge list contains only self-loops"));
    }
    let zero_indexed = ids[0] == 0;
    let compact = |id: u64| ids.binary_search(&id).expect("id collected above") as u32;

    let mut seen: HashSet<(u32, u32)> = HashSet::with_capacity(raw_edges.len());
    let mut duplicate_edges = 0usize;
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(raw_edges.len());
    let edge_lines = raw_edges.len() + self_loops;
    for (u, v) in raw_edges {
        let (a, b) = (compact(u), compact(v));
        let key = if a < b { (a, b) } else { (b, a) };
        if seen.insert(key) {
            edges.push(key);
        } else {
            duplicate_edges += 1;
        }
    }

    let n = ids.len();
    let meta = GraphMeta::Ingested {
        source: source.into(),
        duplicate_edges,
        self_loops,
    };
    let graph = GraphInstance::from_edges(n, &edges, vec![1.0; n], None, meta)?;
    Ok((graph, ParseReport { duplicate_edges, self_loops, zero_indexed, edge_lines }))
}

fn parse_id(token: Option<&str>, line: usize) -> Result<u64> {
    let token = token.ok_or(Error::Parse {
        line,
        message: "expected two vertex ids".into(),
    })?;
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("not a vertex id: {token:?}"),
    })
}

/// Write "u v" lines preceded by '#' header lines.
pub fn write_edge_list<W: Write>(g: &GraphInstance, mut out: W, header: &[String]) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Write "v w" lines aligned to compacted ids.
pub fn write_weights<W: Write>(g: &GraphInstance, mut out: W, header: &[String]) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    for (v, w) in g.weights().iter().enumerate() {
        writeln!(out, "{v} {w}")?;
    }
    Ok(())
}

/// Write "v x_1 ... x_d" position rows; an error when the graph carries
/// no positions.
pub fn write_positions<W: Write>(g: &GraphInstance, mut out: W, header: &[String]) -> Result<()> {
    if !g.has_positions() {
        return Err(invalid("graph has no positions to serialize"));
    }
    for line in header {
        writeln!(out, "# {line}")?;
    }
    for v in 0..g.n() {
        let pos = g.position(v).expect("checked above");
        write!(out, "{v}")?;
        for x in pos {
            write!(out, " {x}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Parse a "v w" weight file covering every vertex exactly once.
pub fn parse_weight_file<R: BufRead>(reader: R, n: usize) -> Result<Vec<f64>> {
    let mut weights = vec![f64::NAN; n];
    let mut filled = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(Error::Io)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let v = parse_id(it.next(), line_no)? as usize;
        let w: f64 = it
            .next()
            .ok_or(Error::Parse { line: line_no, message: "expected a weight".into() })?
            .parse()
            .map_err(|_| Error::Parse { line: line_no, message: "not a weight".into() })?;
        if v >= n {
            return Err(Error::Parse {
                line: line_no,
                message: format!("vertex {v} out of range for n = {n}"),
            });
        }
        if !(w > 0.0) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("weights must be positive, got {w}"),
            });
        }
        if !weights[v].is_nan() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate weight for vertex {v}"),
            });
        }
        weights[v] = w;
        filled += 1;
    }
    if filled != n {
        return Err(invalid(format!("weight file covers {filled} of {n} vertices")));
    }
    Ok(weights)
}

/// The reproducibility header carried by every output artifact. Two
/// runs with an identical record must produce byte-identical data
/// files; wall-clock time therefore lives outside the record, in the
/// run log only.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub schema: &'static str,
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub version: &'static str,
}

impl RunRecord {
    pub fn new(command: impl Into<String>) -> Self {
        RunRecord {
            schema: crate::SCHEMA_VERSION,
            command: command.into(),
            parameters: Vec::new(),
            seed: None,
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.parameters.push((key.into(), value.to_string()));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Lines for '#'-style embedding in text outputs.
    pub fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("schema: {}", self.schema),
            format!("command: {}", self.command),
            format!("version: {}", self.version),
        ];
        if let Some(seed) = self.seed {
            lines.push(format!("seed: {seed}"));
        }
        for (k, v) in &self.parameters {
            lines.push(format!("{k}: {v}"));
        }
        lines
    }
}
