//! Local and global clustering coefficients, and the weight-band
//! statistic CC+ that drives the dimension test.

use crate::error::{invalid, Result};
use crate::graph::{GraphInstance, WeightBand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

/// Fixed reduction granularity so parallel sums are independent of the
/// thread count.
const CHUNK: usize = 4_096;

/// Fraction of adjacent neighbor pairs of v; 0 for degree below 2.
pub fn local_cc(g: &GraphInstance, v: usize) -> Result<f64> {
    let deg = g.degree(v)?;
    if deg < 2 {
        return Ok(0.0);
    }
    let closed = g.neighbor_pairs_adjacent_count(v)? as f64;
    let pairs = (deg * (deg - 1) / 2) as f64;
    Ok(closed / pairs)
}

/// Mean of the local clustering coefficient over all vertices.
pub fn global_cc(g: &GraphInstance) -> Result<f64> {
    if g.n() == 0 {
        return Err(invalid("clustering coefficient of the empty graph"));
    }
    let partials: Vec<f64> = (0..g.n())
        .into_par_iter()
        .chunks(CHUNK)
        .map(|chunk| {
            chunk
                .into_iter()
                .map(|v| local_cc(g, v).expect("v < n"))
                .sum::<f64>()
        })
        .collect();
    Ok(partials.iter().sum::<f64>() / g.n() as f64)
}

/// Exact rational global clustering coefficient from the same adjacency
/// kernel; pairs with the brute-force oracle for equality testing.
pub fn global_cc_exact(g: &GraphInstance) -> Result<BigRational> {
    if g.n() == 0 {
        return Err(invalid("clustering coefficient of the empty graph"));
    }
    let mut sum = BigRational::zero();
    for v in 0..g.n() {
        let deg = g.degree(v)?;
        if deg < 2 {
            continue;
        }
        let closed = g.neighbor_pairs_adjacent_count(v)?;
        let pairs = (deg as u64) * (deg as u64 - 1) / 2;
        sum += BigRational::new(BigInt::from(closed), BigInt::from(pairs));
    }
    Ok(sum / BigRational::from(BigInt::from(g.n() as u64)))
}

/// CC+ of a weight band: the mean local clustering coefficient, inside
/// the induced band subgraph, over vertices with at least two in-band
/// neighbors.
#[derive(Debug, Clone, Serialize)]
pub struct BandStatistic {
    /// None when the support set S is empty: an undefined statistic is
    /// distinct from zero clustering.
    pub cc_plus: Option<f64>,
    pub band: WeightBand,
    /// |S|: vertices of the band subgraph with degree >= 2 there.
    pub s_size: usize,
    pub subgraph_n: usize,
    pub subgraph_m: usize,
}

impl BandStatistic {
    pub fn is_defined(&self) -> bool {
        self.cc_plus.is_some()
    }
}

pub fn band_cc_plus(g: &GraphInstance, band: &WeightBand) -> BandStatistic {
    let (sub, _) = g.induced_band_subgraph(band);
    let mut sum = 0.0f64;
    let mut support = 0usize;
    for v in 0..sub.n() {
        if sub.degree(v).expect("v < n") >= 2 {
            sum += local_cc(&sub, v).expect("v < n");
            support += 1;
        }
    }
    BandStatistic {
        cc_plus: if support > 0 { Some(sum / support as f64) } else { None },
        band: *band,
        s_size: support,
        subgraph_n: sub.n(),
        subgraph_m: sub.m(),
    }
}
