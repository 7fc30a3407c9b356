//! The weight-band dimension test: per-dimension acceptance intervals
//! around (3/4)^d, per-band inference, weighted-median aggregation, and
//! classification of non-geometric inputs.

use crate::clustering::{band_cc_plus, BandStatistic};
use crate::error::{domain, invalid, Error, Result};
use crate::graph::{GraphInstance, WeightBand};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Default band ratio: truncated to stay strictly below 2/sqrt(3).
pub const DEFAULT_BAND_RATIO: f64 = 1.1547;

/// Bands whose support set is smaller than this are flagged low
/// confidence and excluded from aggregation by default.
pub const DEFAULT_MIN_BAND_SUPPORT: usize = 50;

/// Default weight sweep endpoints (the base weight grid runs
/// geometrically from max(w0, SWEEP_LO) to SWEEP_HI with ratio c).
pub const DEFAULT_SWEEP_LO: f64 = 2.0;
pub const DEFAULT_SWEEP_HI: f64 = 300.0;

const LN_THREE_QUARTERS: f64 = -0.2876820724517809; // ln(3/4)

/// Acceptance interval for dimension d:
/// ((1/c)(3/4)^d - n^(-1/5), c (3/4)^d + n^(-1/5)), lower end clamped
/// at zero.
pub fn acceptance_interval(d: usize, c: f64, n: usize) -> Result<(f64, f64)> {
    if d == 0 {
        return Err(domain("dimension must be >= 1"));
    }
    if n < 2 {
        return Err(domain("interval needs n >= 2"));
    }
    WeightBand::check_ratio(c)?;
    Ok(interval_unchecked(d, c, n))
}

fn interval_unchecked(d: usize, c: f64, n: usize) -> (f64, f64) {
    let margin = (n as f64).powf(-0.2);
    let base = 0.75f64.powi(d as i32);
    ((base / c - margin).max(0.0), c * base + margin)
}

/// Accept dimension d iff the band statistic falls strictly inside the
/// acceptance interval. n is the vertex count of the original graph,
/// not of the band subgraph.
pub fn test_dimension(stat: &BandStatistic, d: usize, c: f64, n: usize) -> Result<bool> {
    let cc = stat
        .cc_plus
        .ok_or_else(|| Error::UndefinedStatistic("band has an empty support set".into()))?;
    let (lo, hi) = acceptance_interval(d, c, n)?;
    Ok(lo < cc && cc < hi)
}

/// Largest d whose acceptance interval still has a positive lower
/// bound; dimensions beyond it cannot be distinguished from
/// non-geometric inputs at this n (any near-zero statistic would pass
/// their one-sided test). 0 when no dimension is testable.
pub fn max_testable_dimension(c: f64, n: usize) -> usize {
    let margin = (n as f64).powf(-0.2);
    let mut d = 0usize;
    while d < 64 {
        let base = 0.75f64.powi(d as i32 + 1);
        if base / c - margin <= 0.0 {
            break;
        }
        d += 1;
    }
    d
}

/// Why a band produced no inferred dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoInference {
    /// Empty support set: the statistic itself is undefined.
    UndefinedStatistic,
    /// No dimension in range has a usable (positive-lower-bound) interval.
    NoTestableDimension,
    /// The statistic fell outside every acceptance interval.
    NoAcceptedDimension,
}

/// Outcome of the per-band test sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BandInference {
    pub stat: BandStatistic,
    pub inferred_d: Option<usize>,
    pub accepted_ds: Vec<usize>,
    pub no_inference: Option<NoInference>,
    pub low_confidence: bool,
}

/// Per-band inference: intersect the interval tests over d in
/// [1, d_max], then pick by log-ratio rounding of the statistic.
pub fn infer_band_dimension(
    stat: &BandStatistic,
    c: f64,
    n: usize,
    d_max: usize,
) -> Result<(Option<usize>, Vec<usize>, Option<NoInference>)> {
    if d_max == 0 {
        return Err(invalid("d_max must be >= 1"));
    }
    WeightBand::check_ratio(c).or_else(|_| {
        // Ratios past the strict bound arrive only through the explicit
        // override path; the intervals stay well-defined for c < 4/3.
        if c > 1.0 && c < 4.0 / 3.0 {
            Ok(())
        } else {
            Err(invalid(format!("band ratio {c} outside (1, 4/3)")))
        }
    })?;
    let cc = match stat.cc_plus {
        Some(cc) => cc,
        None => return Ok((None, Vec::new(), Some(NoInference::UndefinedStatistic))),
    };

    let cap = d_max.min(max_testable_dimension(c, n));
    if cap == 0 {
        return Ok((None, Vec::new(), Some(NoInference::NoTestableDimension)));
    }
    let accepted: Vec<usize> = (1..=cap)
        .filter(|&d| {
            let (lo, hi) = interval_unchecked(d, c, n);
            lo < cc && cc < hi
        })
        .collect();
    if accepted.is_empty() {
        return Ok((None, Vec::new(), Some(NoInference::NoAcceptedDimension)));
    }

    let log_ratio = cc.ln() / LN_THREE_QUARTERS;
    let rounded = (log_ratio.round().max(1.0) as usize).min(d_max);
    let inferred = if accepted.contains(&rounded) {
        rounded
    } else {
        *accepted
            .iter()
            .min_by(|&&a, &&b| {
                let da = (cc.ln() - a as f64 * LN_THREE_QUARTERS).abs();
                let db = (cc.ln() - b as f64 * LN_THREE_QUARTERS).abs();
                da.partial_cmp(&db).unwrap().then(a.cmp(&b))
            })
            .expect("accepted is nonempty")
    };
    Ok((Some(inferred), accepted, None))
}

/// Which weights the verdict was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSource {
    Model,
    DegreeEstimated,
}

/// Configuration of the band sweep.
#[derive(Debug, Clone, Copy)]
pub struct InferenceConfig {
    pub c: f64,
    /// Upper end of the dimension scan; further capped by
    /// [`max_testable_dimension`].
    pub d_max: usize,
    pub min_band_support: usize,
    pub weight_source: WeightSource,
    /// Permits ratios in (1, 4/3) past the strict 2/sqrt(3) bound.
    pub allow_ratio_override: bool,
}

impl InferenceConfig {
    pub fn for_graph(n: usize) -> Self {
        InferenceConfig {
            c: DEFAULT_BAND_RATIO,
            d_max: (n.max(2) as f64).log2().ceil() as usize,
            min_band_support: DEFAULT_MIN_BAND_SUPPORT,
            weight_source: WeightSource::Model,
            allow_ratio_override: false,
        }
    }

    fn band(&self, w_c: f64) -> Result<WeightBand> {
        if self.allow_ratio_override {
            WeightBand::new_with_ratio_override(w_c, self.c)
        } else {
            WeightBand::new(w_c, self.c)
        }
    }
}

/// Aggregated verdict over a sweep of band base weights.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionVerdict {
    pub per_band: Vec<BandInference>,
    pub aggregate_d: Option<usize>,
    pub aggregate_rule: String,
    pub c: f64,
    pub n: usize,
    pub d_max: usize,
    pub weight_source: WeightSource,
}

/// The geometric grid of band base weights from max(w0, 2) to 300 with
/// ratio c, mirroring the sweep protocol the test was tuned on.
pub fn default_w_c_grid(w0: f64, c: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut w = w0.max(DEFAULT_SWEEP_LO);
    while w <= DEFAULT_SWEEP_HI {
        grid.push(w);
        w *= c;
    }
    grid
}

/// Run the band test across a w_c sweep and aggregate with the weighted
/// median (weights: band subgraph order; ties break to the lower
/// dimension). Bands with undefined statistics or support below the
/// configured minimum are excluded from aggregation.
pub fn infer_dimension(
    g: &GraphInstance,
    config: &InferenceConfig,
    w_c_values: &[f64],
) -> Result<DimensionVerdict> {
    if w_c_values.is_empty() {
        return Err(invalid("weight sweep needs at least one w_c value"));
    }
    let n = g.n();
    let per_band: Vec<BandInference> = w_c_values
        .par_iter()
        .map(|&w_c| {
            let band = config.band(w_c)?;
            let stat = band_cc_plus(g, &band);
            let (inferred_d, accepted_ds, no_inference) =
                infer_band_dimension(&stat, config.c, n, config.d_max)?;
            let low_confidence = stat.s_size < config.min_band_support;
            Ok(BandInference { stat, inferred_d, accepted_ds, no_inference, low_confidence })
        })
        .collect::<Result<_>>()?;

    // Aggregation universe: bands with a defined statistic and enough
    // support. The median is only declared when the bands that actually
    // inferred a dimension carry at least half of that mass; otherwise
    // a single fluke band (one stray triangle in an otherwise
    // clustering-free graph) could outvote the rest.
    let eligible = per_band
        .iter()
        .filter(|b| b.stat.is_defined() && !b.low_confidence);
    let eligible_mass: u64 = eligible.clone().map(|b| b.stat.subgraph_n as u64).sum();
    let mut weighted: Vec<(usize, u64)> = eligible
        .filter_map(|b| b.inferred_d.map(|d| (d, b.stat.subgraph_n as u64)))
        .collect();
    let inferring_mass: u64 = weighted.iter().map(|&(_, w)| w).sum();
    let aggregate_d = if 2 * inferring_mass >= eligible_mass {
        weighted_median_lower(&mut weighted)
    } else {
        None
    };

    Ok(DimensionVerdict {
        per_band,
        aggregate_d,
        aggregate_rule:
            "weighted median by band subgraph order over majority-mass inferring bands, lower tie-break"
                .into(),
        c: config.c,
        n,
        d_max: config.d_max,
        weight_source: config.weight_source,
    })
}

/// Lower weighted median: smallest value whose cumulative weight
/// reaches half the total.
fn weighted_median_lower(entries: &mut [(usize, u64)]) -> Option<usize> {
    if entries.is_empty() {
        return None;
    }
    entries.sort_unstable();
    let total: u64 = entries.iter().map(|&(_, w)| w).sum();
    let mut acc = 0u64;
    for &(value, weight) in entries.iter() {
        acc += weight;
        if 2 * acc >= total {
            return Some(value);
        }
    }
    entries.last().map(|&(v, _)| v)
}

/// Classification of the input graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryLabel {
    Geometric(usize),
    NonGeometric,
    Inconclusive,
}

impl fmt::Display for GeometryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryLabel::Geometric(d) => write!(f, "geometric({d})"),
            GeometryLabel::NonGeometric => write!(f, "non_geometric"),
            GeometryLabel::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Label the verdict: geometric when an aggregate dimension exists,
/// non-geometric when at least half the band mass (by subgraph order)
/// sits below the lower interval bound of the largest testable
/// dimension, inconclusive otherwise.
pub fn classify_geometry(verdict: &DimensionVerdict, n: usize) -> GeometryLabel {
    if let Some(d) = verdict.aggregate_d {
        return GeometryLabel::Geometric(d);
    }
    let d_star = verdict.d_max.min(max_testable_dimension(verdict.c, n));
    if d_star == 0 {
        return GeometryLabel::Inconclusive;
    }
    let (lo_star, _) = interval_unchecked(d_star, verdict.c, n);
    let mut below = 0u64;
    let mut total = 0u64;
    for band in &verdict.per_band {
        if let Some(cc) = band.stat.cc_plus {
            let w = band.stat.subgraph_n as u64;
            total += w;
            if cc < lo_star {
                below += w;
            }
        }
    }
    if total > 0 && 2 * below >= total {
        GeometryLabel::NonGeometric
    } else {
        GeometryLabel::Inconclusive
    }
}
