//! Compact undirected simple-graph storage with per-vertex weights,
//! optional torus positions, and weight-band induced subgraphs.
//!
//! Adjacency is a CSR layout: one flat sorted neighbor array plus an
//! offset index. Graphs are immutable once built, so every query is
//! safe to run concurrently.

use crate::error::{invalid, Error, Result};
use crate::generate::GirgParams;
use serde::Serialize;

/// Where a graph came from; carried along for run records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GraphMeta {
    Girg(GirgParams),
    ChungLu { n: usize, beta: f64, w0: f64, lambda: f64, seed: u64 },
    Ingested { source: String, duplicate_edges: usize, self_loops: usize },
    Synthetic,
}

/// Undirected simple graph with weights and optional positions.
#[derive(Debug, Clone)]
pub struct GraphInstance {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<f64>,
    /// Flat row-major positions, `dim` coordinates per vertex.
    positions: Option<Vec<f64>>,
    dim: usize,
    meta: GraphMeta,
}

impl GraphInstance {
    /// Builds a graph from an edge list. Self-loops and duplicate edges
    /// are dropped silently here; ingestion counts them in [`GraphMeta`].
    pub fn from_edges(
        n: usize,
        edges: &[(u32, u32)],
        weights: Vec<f64>,
        positions: Option<(usize, Vec<f64>)>,
        meta: GraphMeta,
    ) -> Result<Self> {
        if weights.len() != n {
            return Err(invalid(format!(
                "weight vector length {} does not match n = {n}",
                weights.len()
            )));
        }
        let (dim, positions) = match positions {
            Some((dim, pos)) => {
                if pos.len() != n * dim {
                    return Err(invalid(format!(
                        "position vector length {} does not match n * d = {}",
                        pos.len(),
                        n * dim
                    )));
                }
                (dim, Some(pos))
            }
            None => (0, None),
        };

        let mut directed: Vec<(u32, u32)> = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            if u as usize >= n || v as usize >= n {
                return Err(invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            directed.push((u, v));
            directed.push((v, u));
        }
        directed.sort_unstable();
        directed.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &directed {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let neighbors = directed.into_iter().map(|(_, v)| v).collect();

        Ok(GraphInstance { offsets, neighbors, weights, positions, dim, meta })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn meta(&self) -> &GraphMeta {
        &self.meta
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Position of vertex v as a coordinate slice, if positions exist.
    pub fn position(&self, v: usize) -> Option<&[f64]> {
        self.positions
            .as_ref()
            .map(|p| &p[v * self.dim..(v + 1) * self.dim])
    }

    pub fn has_positions(&self) -> bool {
        self.positions.is_some()
    }

    /// Drop isolated vertices and relabel the rest in order. The
    /// edge-list text format carries only edge endpoints, so this is
    /// the graph a serialize/parse round trip preserves.
    pub fn compact(&self) -> GraphInstance {
        let retained: Vec<u32> = (0..self.n())
            .filter(|&v| self.degree(v).expect("v < n") > 0)
            .map(|v| v as u32)
            .collect();
        let mut new_id = vec![u32::MAX; self.n()];
        for (new, &old) in retained.iter().enumerate() {
            new_id[old as usize] = new as u32;
        }
        let edges: Vec<(u32, u32)> = self
            .edges()
            .map(|(u, v)| (new_id[u as usize], new_id[v as usize]))
            .collect();
        let weights = retained.iter().map(|&v| self.weights[v as usize]).collect();
        let positions = self.positions.as_ref().map(|p| {
            let mut out = Vec::with_capacity(retained.len() * self.dim);
            for &v in &retained {
                out.extend_from_slice(&p[v as usize * self.dim..(v as usize + 1) * self.dim]);
            }
            (self.dim, out)
        });
        GraphInstance::from_edges(retained.len(), &edges, weights, positions, self.meta.clone())
            .expect("compaction is structure-preserving")
    }

    /// Replace the weight vector (estimated or file-supplied weights
    /// for ingested graphs).
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n() {
            return Err(invalid(format!(
                "weight vector length {} does not match n = {}",
                weights.len(),
                self.n()
            )));
        }
        self.weights = weights;
        Ok(self)
    }

    /// Sorted neighbor list of v.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
        }
        Ok(self.offsets[v + 1] - self.offsets[v])
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (u as u32) < v)
                .map(move |&v| (u as u32, v))
        })
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Number of unordered neighbor pairs {s, t} of v with s ~ t,
    /// via sorted-list merge intersection.
    pub fn neighbor_pairs_adjacent_count(&self, v: usize) -> Result<u64> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
        }
        let nv = self.neighbors(v);
        let mut paired = 0u64;
        for &u in nv {
            paired += sorted_intersection_count(nv, self.neighbors(u as usize));
        }
        // Each adjacent pair {s, t} was found twice: from s and from t.
        Ok(paired / 2)
    }

    /// Subgraph induced by vertices with weight in the closed band,
    /// ids relabeled; returns the subgraph and the retained-id map.
    pub fn induced_band_subgraph(&self, band: &WeightBand) -> (GraphInstance, Vec<u32>) {
        let lo = band.w_c;
        let hi = band.c * band.w_c;
        let retained: Vec<u32> = (0..self.n())
            .filter(|&v| {
                let w = self.weights[v];
                w >= lo && w <= hi
            })
            .map(|v| v as u32)
            .collect();

        let mut new_id = vec![u32::MAX; self.n()];
        for (new, &old) in retained.iter().enumerate() {
            new_id[old as usize] = new as u32;
        }

        let mut edges = Vec::new();
        for &old_u in &retained {
            for &old_v in self.neighbors(old_u as usize) {
                if old_u < old_v && new_id[old_v as usize] != u32::MAX {
                    edges.push((new_id[old_u as usize], new_id[old_v as usize]));
                }
            }
        }

        let weights = retained.iter().map(|&v| self.weights[v as usize]).collect();
        let positions = self.positions.as_ref().map(|p| {
            let mut out = Vec::with_capacity(retained.len() * self.dim);
            for &v in &retained {
                out.extend_from_slice(&p[v as usize * self.dim..(v as usize + 1) * self.dim]);
            }
            (self.dim, out)
        });

        let sub = GraphInstance::from_edges(
            retained.len(),
            &edges,
            weights,
            positions,
            self.meta.clone(),
        )
        .expect("band subgraph construction is always consistent");
        (sub, retained)
    }
}

/// Count of common elements of two sorted slices.
pub(crate) fn sorted_intersection_count(a: &[u32], b: &[u32]) -> u64 {
    let mut count = 0u64;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Weight band [w_c, c w_c]; the ratio must satisfy 1 < c < 2/sqrt(3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightBand {
    pub w_c: f64,
    pub c: f64,
}

/// Upper limit for the band ratio.
pub const MAX_BAND_RATIO: f64 = 1.1547005383792515; // 2 / sqrt(3)

impl WeightBand {
    pub fn new(w_c: f64, c: f64) -> Result<Self> {
        if !(w_c > 0.0) {
            return Err(invalid(format!("band base weight must be positive, got {w_c}")));
        }
        Self::check_ratio(c)?;
        Ok(WeightBand { w_c, c })
    }

    /// Validates 1 < c < 2/sqrt(3).
    pub fn check_ratio(c: f64) -> Result<()> {
        if !(c > 1.0 && c < MAX_BAND_RATIO) {
            return Err(invalid(format!(
                "band ratio must satisfy 1 < c < 2/sqrt(3) ~= 1.1547, got {c}"
            )));
        }
        Ok(())
    }

    /// Band with a ratio above the strict bound; only reachable through
    /// an explicit override (c = 1.155 is a common choice that sits
    /// marginally past 2/sqrt(3)).
    pub fn new_with_ratio_override(w_c: f64, c: f64) -> Result<Self> {
        if !(w_c > 0.0) {
            return Err(invalid(format!("band base weight must be positive, got {w_c}")));
        }
        if !(c > 1.0 && c < 4.0 / 3.0) {
            return Err(invalid(format!("override band ratio must be in (1, 4/3), got {c}")));
        }
        Ok(WeightBand { w_c, c })
    }
}
