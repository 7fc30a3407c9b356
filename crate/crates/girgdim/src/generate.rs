//! Samplers for the geometric model and its non-geometric Chung–Lu
//! counterpart, drawing from identical weight sequences.
//!
//! Stream layout: weights always come from substream 0, so the two
//! models share a weight sequence for the same seed. Positions (GIRG)
//! and edge rows (Chung–Lu) each own a per-vertex substream, which
//! makes generation deterministic regardless of thread count.

use crate::dist::ParetoParams;
use crate::error::{invalid, Result};
use crate::geometry::{
    connection_threshold_with_volume, lp_ball_volume, torus_distance_slice, NormOrder,
};
use crate::graph::{GraphInstance, GraphMeta};
use crate::rng::SeededStream;
use rand::Rng;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::Serialize;

const STREAM_WEIGHTS: u64 = 0;
const STREAM_VERTEX_BASE: u64 = 1;

/// Above this size the exact pairwise Chung–Lu sampler gives way to
/// weight-sorted skip sampling.
pub const CHUNG_LU_EXACT_MAX: usize = 20_000;

/// Below this size the quadratic reference edge sampler is used as-is.
const GIRG_REFERENCE_MAX: usize = 1_024;

/// Generation parameters for the geometric model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GirgParams {
    pub n: usize,
    pub d: usize,
    pub beta: f64,
    pub w0: f64,
    pub lambda: f64,
    pub norm: NormOrder,
    pub seed: u64,
}

impl GirgParams {
    pub fn new(
        n: usize,
        d: usize,
        beta: f64,
        w0: f64,
        lambda: f64,
        norm: NormOrder,
        seed: u64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("need n >= 2 vertices, got {n}")));
        }
        if d == 0 {
            return Err(invalid("need dimension d >= 1"));
        }
        ParetoParams::new(w0, beta)?;
        if !(lambda > 0.0) {
            return Err(invalid(format!("lambda must be positive, got {lambda}")));
        }
        Ok(GirgParams { n, d, beta, w0, lambda, norm, seed })
    }

    fn pareto(&self) -> ParetoParams {
        ParetoParams::new(self.w0, self.beta).expect("validated at construction")
    }
}

/// Which edge sampler to run; both produce the identical edge set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeAlgorithm {
    /// Exact O(n^2) pair testing.
    Reference,
    /// Cell grid over the torus for light vertices, direct scan for
    /// heavy ones.
    Grid,
}

/// The i.i.d. Pareto weight sequence for a seed (substream 0).
pub fn draw_weights(n: usize, pareto: &ParetoParams, seed: u64) -> Vec<f64> {
    let mut rng = SeededStream::new(seed, STREAM_WEIGHTS).rng();
    (0..n).map(|_| pareto.sample(&mut rng)).collect()
}

fn draw_positions(n: usize, d: usize, seed: u64) -> Vec<f64> {
    let mut positions = vec![0.0f64; n * d];
    positions
        .par_chunks_mut(d)
        .enumerate()
        .for_each(|(v, chunk)| {
            let mut rng = SeededStream::new(seed, STREAM_VERTEX_BASE + v as u64).rng();
            for x in chunk.iter_mut() {
                *x = rng.random::<f64>();
            }
        });
    positions
}

/// Sample a graph from the geometric model. Weights are i.i.d. Pareto,
/// positions i.i.d. uniform on the torus, and {u, v} is an edge iff
/// their torus distance is at most the connection threshold.
pub fn generate_girg(params: &GirgParams) -> Result<GraphInstance> {
    let algorithm = if params.n <= GIRG_REFERENCE_MAX {
        EdgeAlgorithm::Reference
    } else {
        EdgeAlgorithm::Grid
    };
    generate_girg_using(params, algorithm)
}

/// Sample with the exact quadratic pair scan; the correctness oracle
/// for the grid path.
pub fn generate_girg_reference(params: &GirgParams) -> Result<GraphInstance> {
    generate_girg_using(params, EdgeAlgorithm::Reference)
}

pub fn generate_girg_using(params: &GirgParams, algorithm: EdgeAlgorithm) -> Result<GraphInstance> {
    let weights = draw_weights(params.n, &params.pareto(), params.seed);
    let positions = draw_positions(params.n, params.d, params.seed);
    girg_from_data(params, weights, positions, algorithm)
}

/// Deterministic edge construction from explicit weights and positions;
/// also the injection hook for tests with pinned coordinates.
pub fn girg_from_data(
    params: &GirgParams,
    weights: Vec<f64>,
    positions: Vec<f64>,
    algorithm: EdgeAlgorithm,
) -> Result<GraphInstance> {
    if weights.len() != params.n {
        return Err(invalid("weight vector length must equal n"));
    }
    if positions.len() != params.n * params.d {
        return Err(invalid("position vector length must equal n * d"));
    }
    let geo = PairGeometry::new(params)?;
    let edges = match algorithm {
        EdgeAlgorithm::Reference => reference_edges(&geo, &weights, &positions),
        EdgeAlgorithm::Grid => grid_edges(&geo, &weights, &positions),
    };
    GraphInstance::from_edges(
        params.n,
        &edges,
        weights,
        Some((params.d, positions)),
        GraphMeta::Girg(*params),
    )
}

/// Shared pair predicate context. Both edge samplers must route every
/// adjacency decision through [`PairGeometry::adjacent`] so they agree
/// edge for edge.
struct PairGeometry {
    n: usize,
    d: usize,
    lambda: f64,
    norm: NormOrder,
    vol1: f64,
}

impl PairGeometry {
    fn new(params: &GirgParams) -> Result<Self> {
        Ok(PairGeometry {
            n: params.n,
            d: params.d,
            lambda: params.lambda,
            norm: params.norm,
            vol1: lp_ball_volume(params.d, params.norm)?,
        })
    }

    fn threshold(&self, w_u: f64, w_v: f64) -> f64 {
        connection_threshold_with_volume(w_u, w_v, self.n, self.lambda, self.d, self.norm, self.vol1)
    }

    #[inline]
    fn adjacent(&self, u: usize, v: usize, weights: &[f64], positions: &[f64]) -> bool {
        let t = self.threshold(weights[u], weights[v]);
        let pu = &positions[u * self.d..(u + 1) * self.d];
        let pv = &positions[v * self.d..(v + 1) * self.d];
        torus_distance_slice(pu, pv, self.norm) <= t
    }
}

fn reference_edges(geo: &PairGeometry, weights: &[f64], positions: &[f64]) -> Vec<(u32, u32)> {
    let n = geo.n;
    let per_u: Vec<Vec<(u32, u32)>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut row = Vec::new();
            for v in u + 1..n {
                if geo.adjacent(u, v, weights, positions) {
                    row.push((u as u32, v as u32));
                }
            }
            row
        })
        .collect();
    per_u.into_iter().flatten().collect()
}

/// Grid sampler: vertices light enough that their mutual thresholds fit
/// in a grid cell are paired only across neighboring cells; the few
/// heavy vertices are scanned directly against everyone.
fn grid_edges(geo: &PairGeometry, weights: &[f64], positions: &[f64]) -> Vec<(u32, u32)> {
    let n = geo.n;

    // Weight-descending vertex order; a prefix becomes the heavy set.
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        weights[b as usize]
            .partial_cmp(&weights[a as usize])
            .unwrap()
            .then(a.cmp(&b))
    });

    let heavy_count = choose_heavy_count(geo, weights, &order);
    let (heavy, light) = order.split_at(heavy_count);

    let mut heavy_rank = vec![u32::MAX; n];
    for (rank, &v) in heavy.iter().enumerate() {
        heavy_rank[v as usize] = rank as u32;
    }

    let cells_per_dim = if light.len() < 2 {
        0
    } else {
        let max_light_w = weights[light[0] as usize];
        grid_resolution(geo, max_light_w)
    };

    let mut edges: Vec<(u32, u32)> = if cells_per_dim >= 3 {
        light_edges_gridded(geo, weights, positions, light, cells_per_dim)
    } else {
        // Grid too coarse to help; exact scan over the light set.
        light
            .par_iter()
            .enumerate()
            .map(|(i, &u)| {
                let mut row = Vec::new();
                for &v in &light[i + 1..] {
                    let (a, b) = ordered(u, v);
                    if geo.adjacent(a as usize, b as usize, weights, positions) {
                        row.push((a, b));
                    }
                }
                row
            })
            .flatten_iter()
            .collect()
    };

    // Heavy scans: rank r pairs with every light vertex and with heavier
    // ranks only once (r' > r).
    let heavy_edges: Vec<Vec<(u32, u32)>> = heavy
        .par_iter()
        .enumerate()
        .map(|(r, &h)| {
            let mut row = Vec::new();
            for v in 0..n as u32 {
                if v == h {
                    continue;
                }
                let vr = heavy_rank[v as usize];
                if vr != u32::MAX && (vr as usize) <= r {
                    continue;
                }
                if geo.adjacent(h as usize, v as usize, weights, positions) {
                    row.push(ordered(h, v));
                }
            }
            row
        })
        .collect();
    edges.extend(heavy_edges.into_iter().flatten());
    edges
}

fn ordered(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Cells per dimension for a light cutoff weight; 0 when no useful grid
/// exists. Cell side must be at least the largest light-light threshold.
fn grid_resolution(geo: &PairGeometry, max_light_w: f64) -> usize {
    let side = geo.threshold(max_light_w, max_light_w);
    if side <= 0.0 {
        return 0;
    }
    let k = (1.0 / side).floor();
    if !k.is_finite() {
        return 0;
    }
    // Cap the cell count near the vertex count.
    let mem_cap = (4.0 * geo.n as f64).powf(1.0 / geo.d as f64).floor();
    (k.min(mem_cap) as usize).min(1 << 20)
}

/// Pick the heavy-prefix size minimizing the modeled pair-test cost.
fn choose_heavy_count(geo: &PairGeometry, weights: &[f64], order: &[u32]) -> usize {
    let n = geo.n;
    let mut best = (f64::INFINITY, 0usize);
    let mut h = 0usize;
    loop {
        let n_light = n - h;
        let cost_light = if n_light >= 2 {
            let k = grid_resolution(geo, weights[order[h] as usize]);
            let pair_fraction = if k >= 3 {
                (3.0 / k as f64).powi(geo.d as i32).min(1.0)
            } else {
                1.0
            };
            (n_light as f64).powi(2) * pair_fraction / 2.0
        } else {
            0.0
        };
        let cost = cost_light + (h as f64) * n as f64;
        if cost < best.0 {
            best = (cost, h);
        }
        if h >= n {
            break;
        }
        h = if h == 0 { 1 } else { (h * 2).min(n) };
    }
    best.1
}

fn light_edges_gridded(
    geo: &PairGeometry,
    weights: &[f64],
    positions: &[f64],
    light: &[u32],
    k: usize,
) -> Vec<(u32, u32)> {
    let d = geo.d;
    let num_cells = k.pow(d as u32);
    let cell_of = |v: u32| -> usize {
        let pos = &positions[v as usize * d..(v as usize + 1) * d];
        let mut idx = 0usize;
        for &x in pos {
            // Positions live in [0, 1); the min guards the 1.0 edge case.
            let c = ((x * k as f64) as usize).min(k - 1);
            idx = idx * k + c;
        }
        idx
    };

    // Bucket light vertices by cell (CSR over cells).
    let mut keyed: Vec<(usize, u32)> = light.iter().map(|&v| (cell_of(v), v)).collect();
    keyed.sort_unstable();
    let mut cell_offsets = vec![0usize; num_cells + 1];
    for &(c, _) in &keyed {
        cell_offsets[c + 1] += 1;
    }
    for i in 0..num_cells {
        cell_offsets[i + 1] += cell_offsets[i];
    }
    let members: Vec<u32> = keyed.into_iter().map(|(_, v)| v).collect();

    // Lexicographically positive offsets enumerate each unordered pair of
    // neighboring cells exactly once (k >= 3 keeps them distinct mod k).
    let offsets = positive_offsets(d);

    (0..num_cells)
        .into_par_iter()
        .map(|cell| {
            let mine = &members[cell_offsets[cell]..cell_offsets[cell + 1]];
            if mine.is_empty() {
                return Vec::new();
            }
            let mut row = Vec::new();
            for (i, &u) in mine.iter().enumerate() {
                for &v in &mine[i + 1..] {
                    let (a, b) = ordered(u, v);
                    if geo.adjacent(a as usize, b as usize, weights, positions) {
                        row.push((a, b));
                    }
                }
            }
            let coords = cell_coords(cell, k, d);
            for off in &offsets {
                let mut other = 0usize;
                for (i, &o) in off.iter().enumerate() {
                    let c = (coords[i] as isize + o).rem_euclid(k as isize) as usize;
                    other = other * k + c;
                }
                let theirs = &members[cell_offsets[other]..cell_offsets[other + 1]];
                for &u in mine {
                    for &v in theirs {
                        let (a, b) = ordered(u, v);
                        if geo.adjacent(a as usize, b as usize, weights, positions) {
                            row.push((a, b));
                        }
                    }
                }
            }
            row
        })
        .flatten_iter()
        .collect()
}

fn cell_coords(mut cell: usize, k: usize, d: usize) -> Vec<usize> {
    let mut coords = vec![0usize; d];
    for i in (0..d).rev() {
        coords[i] = cell % k;
        cell /= k;
    }
    coords
}

/// All offsets in {-1, 0, 1}^d whose first nonzero component is +1.
fn positive_offsets(d: usize) -> Vec<Vec<isize>> {
    let mut out = Vec::new();
    let mut current = vec![0isize; d];
    fn recurse(current: &mut Vec<isize>, i: usize, out: &mut Vec<Vec<isize>>) {
        if i == current.len() {
            if current.iter().find(|&&o| o != 0).copied() == Some(1) {
                out.push(current.clone());
            }
            return;
        }
        for o in [-1isize, 0, 1] {
            current[i] = o;
            recurse(current, i + 1, out);
        }
        current[i] = 0;
    }
    recurse(&mut current, 0, &mut out);
    out
}

/// Sample the non-geometric counterpart: identical weight law, each
/// pair independently an edge with probability min{1, lambda w_u w_v / n}.
pub fn generate_chung_lu(
    n: usize,
    beta: f64,
    w0: f64,
    lambda: f64,
    seed: u64,
) -> Result<GraphInstance> {
    if n < 2 {
        return Err(invalid(format!("need n >= 2 vertices, got {n}")));
    }
    let pareto = ParetoParams::new(w0, beta)?;
    if !(lambda > 0.0) {
        return Err(invalid(format!("lambda must be positive, got {lambda}")));
    }
    let weights = draw_weights(n, &pareto, seed);
    let edges = if n <= CHUNG_LU_EXACT_MAX {
        chung_lu_edges_exact(&weights, lambda, seed)
    } else {
        chung_lu_edges_skip(&weights, lambda, seed)
    };
    GraphInstance::from_edges(
        n,
        &edges,
        weights,
        None,
        GraphMeta::ChungLu { n, beta, w0, lambda, seed },
    )
}

/// Exact pairwise sampling: one uniform per unordered pair.
pub(crate) fn chung_lu_edges_exact(weights: &[f64], lambda: f64, seed: u64) -> Vec<(u32, u32)> {
    let n = weights.len();
    let nf = n as f64;
    (0..n)
        .into_par_iter()
        .map(|u| {
            let mut rng = SeededStream::new(seed, STREAM_VERTEX_BASE + u as u64).rng();
            let mut row = Vec::new();
            for v in u + 1..n {
                let p = (lambda * weights[u] * weights[v] / nf).min(1.0);
                if rng.random::<f64>() < p {
                    row.push((u as u32, v as u32));
                }
            }
            row
        })
        .flatten_iter()
        .collect()
}

/// Weight-sorted geometric skip sampling with the same marginal law
/// (Miller & Hagberg style): within a row the success probability is
/// non-increasing, so a geometric jump under the current bound plus a
/// thinning accept preserves independent Bernoulli marginals.
pub(crate) fn chung_lu_edges_skip(weights: &[f64], lambda: f64, seed: u64) -> Vec<(u32, u32)> {
    let n = weights.len();
    let nf = n as f64;
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        weights[b as usize]
            .partial_cmp(&weights[a as usize])
            .unwrap()
            .then(a.cmp(&b))
    });
    let sorted_w: Vec<f64> = order.iter().map(|&v| weights[v as usize]).collect();

    (0..n.saturating_sub(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededStream::new(seed, STREAM_VERTEX_BASE + i as u64).rng();
            let mut row = Vec::new();
            let base = lambda * sorted_w[i] / nf;
            let mut j = i + 1;
            let mut p = (base * sorted_w[j]).min(1.0);
            while j < n {
                if p >= 1.0 {
                    row.push(ordered(order[i], order[j]));
                    j += 1;
                    if j < n {
                        p = (base * sorted_w[j]).min(1.0);
                    }
                    continue;
                }
                if p <= 0.0 {
                    break;
                }
                let r: f64 = rng.random();
                let skip = ((1.0 - r).ln() / (1.0 - p).ln()).floor();
                if !skip.is_finite() || skip >= (n - j) as f64 {
                    break;
                }
                j += skip as usize;
                let q = (base * sorted_w[j]).min(1.0);
                if rng.random::<f64>() < q / p {
                    row.push(ordered(order[i], order[j]));
                }
                p = q;
                j += 1;
            }
            row
        })
        .flatten_iter()
        .collect()
}

const CALIBRATION_SEED: u64 = 0x6c61_6d62_6461_2e31;
const CALIBRATION_SAMPLES: usize = 200_000;

/// Solve for the lambda giving a target average degree, by bisection on
/// a Monte Carlo estimate of (n-1) E[min{1, lambda w w' / n}] over the
/// weight law. Uses a fixed internal calibration seed so the result is
/// a pure function of (n, beta, w0, target).
pub fn calibrate_lambda(n: usize, beta: f64, w0: f64, target_avg_degree: f64) -> Result<f64> {
    calibrate_lambda_seeded(n, beta, w0, target_avg_degree, CALIBRATION_SEED)
}

pub fn calibrate_lambda_seeded(
    n: usize,
    beta: f64,
    w0: f64,
    target_avg_degree: f64,
    calibration_seed: u64,
) -> Result<f64> {
    if n < 2 {
        return Err(invalid("calibration needs n >= 2"));
    }
    if !(target_avg_degree > 0.0) {
        return Err(invalid(format!("target average degree must be > 0, got {target_avg_degree}")));
    }
    if target_avg_degree >= (n - 1) as f64 {
        return Err(invalid(format!(
            "target average degree {target_avg_degree} is unattainable for n = {n}"
        )));
    }
    let pareto = ParetoParams::new(w0, beta)?;
    let m = CALIBRATION_SAMPLES;
    let mut rng = SeededStream::new(calibration_seed, 0).rng();
    let mut sample: Vec<f64> = (0..m).map(|_| pareto.sample(&mut rng)).collect();
    sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut prefix = vec![0.0f64; m + 1];
    for (i, &w) in sample.iter().enumerate() {
        prefix[i + 1] = prefix[i] + w;
    }

    let avg_degree = |lambda: f64| -> f64 {
        // Mean over ordered sample pairs (i != j) of min{1, lambda w_i w_j / n}.
        let nf = n as f64;
        let mut acc = 0.0f64;
        for (i, &wi) in sample.iter().enumerate() {
            // Pairs with lambda w_i w_j >= n saturate at 1.
            let cut = nf / (lambda * wi);
            let idx = sample.partition_point(|&w| w < cut);
            let mut linear = prefix[idx];
            let mut saturated = (m - idx) as f64;
            if i < idx {
                linear -= wi;
            } else {
                saturated -= 1.0;
            }
            acc += lambda * wi * linear / nf + saturated;
        }
        (nf - 1.0) * acc / (m as f64 * (m as f64 - 1.0))
    };

    let mut hi = 1.0f64;
    let mut grow = 0;
    while avg_degree(hi) < target_avg_degree {
        hi *= 2.0;
        grow += 1;
        if grow > 80 {
            return Err(invalid("calibration failed to bracket the target average degree"));
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if avg_degree(mid) < target_avg_degree {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-9 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
