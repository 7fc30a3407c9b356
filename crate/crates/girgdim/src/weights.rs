//! Weight and tail-exponent estimation for ingested graphs, so the
//! dimension test can run without ground-truth weights.
//!
//! Expected degree is proportional to weight in the model, and the band
//! statistic is invariant to a global weight rescaling (the sweep over
//! band base weights absorbs the unknown constant), so plain degrees
//! serve as weight estimates.

use crate::error::{invalid, Result};
use crate::graph::GraphInstance;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct WeightEstimate {
    pub weights: Vec<f64>,
    /// Hill tail-exponent estimate; absent when the degree sequence has
    /// too little tail to estimate from.
    pub beta_hat: Option<f64>,
    pub w0_hat: f64,
    pub method: String,
}

/// Degree-proportional weights: w_v = deg(v) for non-isolated vertices,
/// the minimum positive degree for isolated ones (they can never enter
/// a band support set anyway).
pub fn estimate_weights_from_degrees(g: &GraphInstance) -> Result<WeightEstimate> {
    if g.m() == 0 {
        return Err(invalid("cannot estimate weights for an edgeless graph"));
    }
    let degrees: Vec<usize> = (0..g.n()).map(|v| g.degree(v).expect("v < n")).collect();
    let w0_hat = degrees.iter().copied().filter(|&d| d > 0).min().expect("has edges") as f64;
    let weights = degrees
        .iter()
        .map(|&d| if d > 0 { d as f64 } else { w0_hat })
        .collect();

    // Place the Hill cutoff inside the tail: the 90th-percentile degree,
    // falling back to small fixed cutoffs for short degree sequences.
    let mut sorted = degrees.clone();
    sorted.sort_unstable();
    let q90 = sorted[(sorted.len() * 9) / 10].max(2);
    let beta_hat = std::iter::once(q90)
        .chain([10, 5, 3, 2])
        .find_map(|d_min| estimate_beta(&degrees, d_min).ok());

    Ok(WeightEstimate {
        weights,
        beta_hat,
        w0_hat,
        method: "degree-proportional".into(),
    })
}

/// Continuous Hill estimator over the degree tail:
/// beta = 1 + m / sum(ln(deg_i / (d_min - 1/2))) over the m degrees at
/// least d_min. The half-integer shift compensates for the
/// discreteness of degrees.
pub fn estimate_beta(degrees: &[usize], d_min: usize) -> Result<f64> {
    if d_min == 0 {
        return Err(invalid("d_min must be >= 1"));
    }
    let tail: Vec<usize> = degrees.iter().copied().filter(|&d| d >= d_min).collect();
    if tail.len() < 100 {
        return Err(invalid(format!(
            "need >= 100 degrees >= {d_min} for a tail estimate, got {}",
            tail.len()
        )));
    }
    let lo = tail.iter().min().copied().unwrap();
    let hi = tail.iter().max().copied().unwrap();
    if lo == hi {
        return Err(invalid("degenerate degree tail: all tail degrees equal"));
    }
    let shift = d_min as f64 - 0.5;
    let log_sum: f64 = tail.iter().map(|&d| (d as f64 / shift).ln()).sum();
    Ok(1.0 + tail.len() as f64 / log_sum)
}

#[cfg(test)]
mod tests {


    use super::*;
    use crate::dist::ParetoParams;
    use crate::graph::GraphMeta;
    use crate::SeededStream;
    use rand_distr::Distribution;

    #[test]
    fn star_degrees() {
        let g = GraphInstance::from_edges(
            5,
            &[(0, 1), (0, 2), (0, 3), (0, 4)],
            vec![1.0; 5],
            None,
            GraphMeta::Synthetic,
        )
        .unwrap();
        let est = estimate_weights_from_degrees(&g).unwrap();
        assert_eq!(est.weights, vec![4.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(est.w0_hat, 1.0);
    }

    #[test]
    fn isolated_vertices_get_minimum_weight() {
        let g = GraphInstance::from_edges(
            4,
            &[(0, 1), (0, 2)],
            vec![1.0; 4],
            None,
            GraphMeta::Synthetic,
        )
        .unwrap();
        let est = estimate_weights_from_degrees(&g).unwrap();
        assert_eq!(est.weights, vec![2.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn regular_graph_is_flat() {
        let g = GraphInstance::from_edges(
            4,
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
            vec![1.0; 4],
            None,
            GraphMeta::Synthetic,
        )
        .unwrap();
        let est = estimate_weights_from_degrees(&g).unwrap();
        assert!(est.weights.iter().all(|&w| w == 2.0));
        assert!(est.beta_hat.is_none());
    }

    #[test]
    fn edgeless_graph_is_an_error() {
        let g = GraphInstance::from_edges(3, &[], vec![1.0; 3], None, GraphMeta::Synthetic)
            .unwrap();
        assert!(estimate_weights_from_degrees(&g).is_err());
    }

    #[test]
    fn hill_estimator_recovers_known_exponents() {
        for &(beta, tol) in &[(2.5f64, 0.05), (3.5, 0.1)] {
            let pareto = ParetoParams::new(1.0, beta).unwrap();
            let mut rng = SeededStream::new(31, beta as u64).rng();
            let degrees: Vec<usize> = (0..100_000)
                .map(|_| pareto.sample(&mut rng).round() as usize)
                .collect();
            let beta_hat = estimate_beta(&degrees, 10).unwrap();
            assert!(
                (beta_hat - beta).abs() < tol,
                "beta {beta}: estimate {beta_hat}"
            );
        }
    }

    #[test]
    fn hill_estimator_rejects_degenerate_tails() {
        let flat = vec![7usize; 500];
        assert!(estimate_beta(&flat, 2).is_err());
        let few = vec![20usize; 50];
        assert!(estimate_beta(&few, 2).is_err());
    }

    #[test]
    fn estimated_weights_track_true_weights() {
        // Spearman rank correlation between degree estimates and the
        // generating weights on a synthetic instance.
        let n = 100_000usize;
        let lambda = crate::generate::calibrate_lambda(n, 3.5, 1.0, 40.0).unwrap();
        let params = crate::generate::GirgParams::new(
            n,
            2,
            3.5,
            1.0,
            lambda,
            crate::geometry::NormOrder::Inf,
            200,
        )
        .unwrap();
        let g = crate::generate::generate_girg(&params).unwrap();
        let est = estimate_weights_from_degrees(&g).unwrap();
        let rho = spearman(&est.weights, g.weights());
        assert!(rho >= 0.8, "spearman {rho}");
        let beta_hat = est.beta_hat.expect("tail is estimable");
        assert!(beta_hat > 2.0 && beta_hat < 5.0, "beta_hat {beta_hat}");
    }

    fn ranks(xs: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..xs.len()).collect();
        idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
        let mut out = vec![0.0; xs.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
                j += 1;
            }
            let rank = (i + j) as f64 / 2.0;
            for &k in &idx[i..=j] {
                out[k] = rank;
            }
            i = j + 1;
        }
        out
    }

    fn spearman(a: &[f64], b: &[f64]) -> f64 {
        let (ra, rb) = (ranks(a), ranks(b));
        let n = a.len() as f64;
        let ma = ra.iter().sum::<f64>() / n;
        let mb = rb.iter().sum::<f64>() / n;
        let mut cov = 0.0;
        let mut va = 0.0;
        let mut vb = 0.0;
        for (x, y) in ra.iter().zip(&rb) {
            cov += (x - ma) * (y - mb);
            va += (x - ma).powi(2);
            vb += (y - mb).powi(2);
        }
        cov / (va.sqrt() * vb.sqrt())
    }
}
