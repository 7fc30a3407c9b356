//! Independent verification oracles: Monte Carlo estimates of the
//! model's distributional facts and brute-force re-implementations of
//! the clustering statistics, built deliberately apart from the main
//! code paths they check.

use crate::clustering::global_cc;
use crate::dist::UnitBall;
use crate::error::{domain, invalid, Result};
use crate::generate::{generate_girg_reference, GirgParams};
use crate::geometry::{connection_threshold, NormOrder};
use crate::graph::GraphInstance;
use crate::rng::SeededStream;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

/// Monte Carlo trials per substream block; fixed so results do not
/// depend on the thread count.
const BLOCK: u64 = 1 << 16;

/// A Monte Carlo point estimate with its uncertainty and the value it
/// is checked against.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    pub reference: Option<f64>,
    pub reference_source: String,
}

impl OracleReport {
    fn bernoulli(hits: u64, trials: u64, reference: Option<f64>, source: &str) -> Self {
        let estimate = hits as f64 / trials as f64;
        let stderr = (estimate * (1.0 - estimate) / trials as f64).sqrt();
        OracleReport {
            estimate,
            stderr,
            trials,
            reference,
            reference_source: source.into(),
        }
    }

    /// |estimate - reference| measured in standard errors.
    pub fn deviation_sigmas(&self) -> Option<f64> {
        self.reference
            .map(|r| (self.estimate - r).abs() / self.stderr.max(f64::MIN_POSITIVE))
    }

    pub fn within_sigmas(&self, k: f64) -> bool {
        self.deviation_sigmas().map(|s| s <= k).unwrap_or(false)
    }
}

/// Plain (non-torus) L_p norm of a coordinate difference.
fn lp_norm(diff: &[f64], norm: NormOrder) -> f64 {
    match norm {
        NormOrder::Inf => diff.iter().fold(0.0f64, |m, x| m.max(x.abs())),
        NormOrder::Finite(p) => diff.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p),
    }
}

/// Monte Carlo estimate of the probability that the star {v; s, t}
/// closes into a triangle, conditioned on v ~ s and v ~ t.
///
/// Conditioned on adjacency, s and t are uniform in the balls of radii
/// t_vs and t_vt around v; the estimate is the chance that their
/// distance is below t_st. Requires the largest threshold to stay at
/// most 1/4 so the torus topology can be ignored.
#[allow(clippy::too_many_arguments)]
pub fn mc_triangle_prob(
    d: usize,
    norm: NormOrder,
    w_v: f64,
    w_s: f64,
    w_t: f64,
    n: usize,
    lambda: f64,
    trials: u64,
    seed: u64,
) -> Result<OracleReport> {
    if !(w_v <= w_s && w_s <= w_t) {
        return Err(invalid(format!(
            "weights must be ordered w_v <= w_s <= w_t, got ({w_v}, {w_s}, {w_t})"
        )));
    }
    if trials == 0 {
        return Err(invalid("need at least one trial"));
    }
    let t_tt = connection_threshold(w_t, w_t, n, lambda, d, norm)?;
    if t_tt > 0.25 {
        return Err(domain(format!(
            "hypothesis violated: largest connection threshold {t_tt} exceeds 1/4, \
             so ball geometry no longer embeds flatly in the torus"
        )));
    }
    let t_vs = connection_threshold(w_v, w_s, n, lambda, d, norm)?;
    let t_vt = connection_threshold(w_v, w_t, n, lambda, d, norm)?;
    let t_st = connection_threshold(w_s, w_t, n, lambda, d, norm)?;
    let ball = UnitBall::new(d, norm)?;

    let blocks = trials.div_ceil(BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = SeededStream::new(seed, b).rng();
            let todo = BLOCK.min(trials - b * BLOCK);
            let mut s_pos = vec![0.0f64; d];
            let mut t_pos = vec![0.0f64; d];
            let mut diff = vec![0.0f64; d];
            let mut local = 0u64;
            for _ in 0..todo {
                ball.sample_into(&mut rng, &mut s_pos);
                ball.sample_into(&mut rng, &mut t_pos);
                for i in 0..d {
                    diff[i] = t_vs * s_pos[i] - t_vt * t_pos[i];
                }
                if lp_norm(&diff, norm) <= t_st {
                    local += 1;
                }
            }
            local
        })
        .sum();

    Ok(OracleReport::bernoulli(
        hits,
        trials,
        Some(0.75f64.powi(d as i32)),
        "(3/4)^d conditional triangle probability",
    ))
}

/// Exact global clustering coefficient by full triple enumeration over
/// a dense adjacency matrix; the equality oracle for the CSR kernels.
pub fn brute_force_global_cc(g: &GraphInstance) -> Result<BigRational> {
    let n = g.n();
    if n == 0 {
        return Err(invalid("clustering coefficient of the empty graph"));
    }
    if n > 500 {
        return Err(invalid(format!("brute force is cubic; refusing n = {n} > 500")));
    }
    let mut adj = vec![false; n * n];
    for (u, v) in g.edges() {
        adj[u as usize * n + v as usize] = true;
        adj[v as usize * n + u as usize] = true;
    }
    let mut sum = BigRational::zero();
    for v in 0..n {
        let mut pairs = 0u64;
        let mut closed = 0u64;
        for s in 0..n {
            if s == v || !adj[v * n + s] {
                continue;
            }
            for t in s + 1..n {
                if t == v || !adj[v * n + t] {
                    continue;
                }
                pairs += 1;
                if adj[s * n + t] {
                    closed += 1;
                }
            }
        }
        if pairs > 0 {
            sum += BigRational::new(BigInt::from(closed), BigInt::from(pairs));
        }
    }
    Ok(sum / BigRational::from(BigInt::from(n as u64)))
}

/// Both sides of the identity E[CC(G)] = Pr[triangle | star] Pr[deg >= 2],
/// estimated over independent replicas of a small instance.
#[derive(Debug, Clone, Serialize)]
pub struct CcIdentityReport {
    /// Mean global clustering coefficient (left side).
    pub lhs: f64,
    /// Pooled triangle-given-star probability times Pr[deg >= 2].
    pub rhs: f64,
    pub difference: f64,
    /// Delta-method standard error of the difference.
    pub stderr: f64,
    pub replicas: u64,
}

pub fn mc_cc_identity_check(params: &GirgParams, replicas: u64) -> Result<CcIdentityReport> {
    if params.n > 2_000 {
        return Err(invalid("identity check replicates generation; keep n <= 2000"));
    }
    if replicas < 2 {
        return Err(invalid("need at least two replicas"));
    }
    // Per replica: (global cc, closed star pairs, star pairs, frac deg >= 2).
    let rows: Vec<[f64; 4]> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut p = *params;
            p.seed = params.seed.wrapping_add(r);
            let g = generate_girg_reference(&p).expect("params validated");
            let cc = global_cc(&g).expect("n >= 1");
            let mut closed = 0u64;
            let mut stars = 0u64;
            let mut deg2 = 0u64;
            for v in 0..g.n() {
                let deg = g.degree(v).expect("v < n") as u64;
                if deg >= 2 {
                    deg2 += 1;
                    stars += deg * (deg - 1) / 2;
                    closed += g.neighbor_pairs_adjacent_count(v).expect("v < n");
                }
            }
            [cc, closed as f64, stars as f64, deg2 as f64 / g.n() as f64]
        })
        .collect();

    let r = replicas as f64;
    let mut mean = [0.0f64; 4];
    for row in &rows {
        for i in 0..4 {
            mean[i] += row[i] / r;
        }
    }
    let mut cov = [[0.0f64; 4]; 4];
    for row in &rows {
        for i in 0..4 {
            for j in 0..4 {
                cov[i][j] += (row[i] - mean[i]) * (row[j] - mean[j]) / (r - 1.0);
            }
        }
    }

    let (a, b, c, s) = (mean[0], mean[1], mean[2], mean[3]);
    let (rhs, grad) = if c > 0.0 {
        (b / c * s, [1.0, -s / c, b * s / (c * c), -b / c])
    } else {
        // No stars anywhere: the conditional side is vacuous and both
        // sides are zero.
        (0.0, [1.0, 0.0, 0.0, 0.0])
    };
    let mut var = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            var += grad[i] * cov[i][j] * grad[j];
        }
    }
    var /= r;

    Ok(CcIdentityReport {
        lhs: a,
        rhs,
        difference: a - rhs,
        stderr: var.max(0.0).sqrt(),
        replicas,
    })
}

/// Ordinary least-squares slope of ln(cc) against d.
pub fn decay_fit(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 4 {
        return Err(invalid(format!(
            "decay fit needs at least 4 points, got {}",
            points.len()
        )));
    }
    if let Some((d, cc)) = points.iter().find(|&&(_, cc)| !(cc > 0.0)) {
        return Err(domain(format!("nonpositive clustering value {cc} at d = {d}")));
    }
    let n = points.len() as f64;
    let mean_d = points.iter().map(|&(d, _)| d).sum::<f64>() / n;
    let mean_y = points.iter().map(|&(_, cc)| cc.ln()).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(d, cc) in points {
        num += (d - mean_d) * (cc.ln() - mean_y);
        den += (d - mean_d) * (d - mean_d);
    }
    Ok(num / den)
}

/// Kolmogorov-Smirnov distance between an ascending sample and U(0,1).
pub fn ks_uniform_statistic(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let below = x - i as f64 / n;
            let above = (i + 1) as f64 / n - x;
            below.max(above)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::global_cc_exact;
    use crate::graph::GraphMeta;
    use rand::Rng;

    #[test]
    fn triangle_prob_equal_weights() {
        for (d, norm, expect) in [
            (1usize, NormOrder::Inf, 0.75),
            (2, NormOrder::Inf, 0.5625),
            (1, NormOrder::Finite(2.0), 0.75),
        ] {
            let report =
                mc_triangle_prob(d, norm, 1.0, 1.0, 1.0, 1_000_000, 1.0, 1_000_000, 42).unwrap();
            assert!(
                (report.estimate - expect).abs() <= 3.0 * report.stderr,
                "d={d} norm={norm}: {} vs {expect}",
                report.estimate
            );
        }
    }

    #[test]
    fn triangle_prob_respects_weight_ratio_bounds() {
        let trials = 200_000u64;
        for c in [1.0f64, 1.1] {
            for d in 1..=8usize {
                let report = mc_triangle_prob(
                    d,
                    NormOrder::Inf,
                    1.0,
                    c,
                    c,
                    1_000_000,
                    1.0,
                    trials,
                    7,
                )
                .unwrap();
                let base = 0.75f64.powi(d as i32);
                assert!(
                    report.estimate >= base - 3.0 * report.stderr,
                    "c={c} d={d}: {} below lower bound {base}",
                    report.estimate
                );
                assert!(
                    report.estimate <= c * base + 3.0 * report.stderr,
                    "c={c} d={d}: {} above upper bound {}",
                    report.estimate,
                    c * base
                );
            }
        }
    }

    #[test]
    fn triangle_prob_hypothesis_violation() {
        // Heavy top weight pushes the threshold past 1/4.
        let err = mc_triangle_prob(2, NormOrder::Inf, 1.0, 1.0, 400.0, 1_000, 1.0, 100, 0)
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("1/4"), "unexpected message: {msg}");
        // Unordered weights are rejected too.
        assert!(
            mc_triangle_prob(2, NormOrder::Inf, 2.0, 1.0, 3.0, 1_000_000, 1.0, 100, 0).is_err()
        );
    }

    #[test]
    fn brute_force_known_graphs() {
        let diamond = GraphInstance::from_edges(
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)],
            vec![1.0; 4],
            None,
            GraphMeta::Synthetic,
        )
        .unwrap();
        assert_eq!(
            brute_force_global_cc(&diamond).unwrap(),
            BigRational::new(BigInt::from(5), BigInt::from(6))
        );

        let mut k5_edges = Vec::new();
        for u in 0..5u32 {
            for v in u + 1..5 {
                k5_edges.push((u, v));
            }
        }
        let k5 =
            GraphInstance::from_edges(5, &k5_edges, vec![1.0; 5], None, GraphMeta::Synthetic)
                .unwrap();
        assert_eq!(brute_force_global_cc(&k5).unwrap(), BigRational::from(BigInt::from(1)));

        let too_big =
            GraphInstance::from_edges(501, &[(0, 1)], vec![1.0; 501], None, GraphMeta::Synthetic)
                .unwrap();
        assert!(brute_force_global_cc(&too_big).is_err());
    }

    #[test]
    fn brute_force_agrees_with_kernel() {
        let mut rng = SeededStream::new(77, 0).rng();
        for round in 0..20 {
            let n = 10 + (rng.random::<u64>() % 191) as usize;
            let p = 0.02 + 0.1 * rng.random::<f64>();
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if rng.random::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            let g = GraphInstance::from_edges(n, &edges, vec![1.0; n], None, GraphMeta::Synthetic)
                .unwrap();
            assert_eq!(
                brute_force_global_cc(&g).unwrap(),
                global_cc_exact(&g).unwrap(),
                "round {round}, n {n}"
            );
        }
    }

    #[test]
    fn identity_check_balances_for_homogeneous_weights() {
        // With (near-)homogeneous weights the closure probability does
        // not depend on the degree of the center, and the identity is
        // exact.
        let params =
            GirgParams::new(300, 1, 100.0, 1.0, 2.0, NormOrder::Inf, 1000).unwrap();
        let report = mc_cc_identity_check(&params, 400).unwrap();
        assert!(
            report.difference.abs() <= 3.0 * report.stderr,
            "difference {} vs stderr {}",
            report.difference,
            report.stderr
        );
    }

    #[test]
    fn identity_check_limits() {
        // Near-zero edge probability: both sides vanish.
        let sparse = GirgParams::new(200, 1, 6.0, 1.0, 1e-7, NormOrder::Inf, 5).unwrap();
        let report = mc_cc_identity_check(&sparse, 50).unwrap();
        assert!(report.lhs.abs() < 1e-3 && report.rhs.abs() < 1e-3);

        // Saturated edges: complete graphs on both sides.
        let dense = GirgParams::new(100, 1, 6.0, 1.0, 1e6, NormOrder::Inf, 5).unwrap();
        let report = mc_cc_identity_check(&dense, 10).unwrap();
        assert!((report.lhs - 1.0).abs() < 1e-12);
        assert!((report.rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decay_fit_exact_log_linear() {
        let pts: Vec<(f64, f64)> = (1..=6).map(|d| (d as f64, 0.75f64.powi(d))).collect();
        let slope = decay_fit(&pts).unwrap();
        assert!((slope - 0.75f64.ln()).abs() < 1e-12);

        let scaled: Vec<(f64, f64)> =
            (1..=6).map(|d| (d as f64, 2.0 * 0.75f64.powi(d))).collect();
        let slope2 = decay_fit(&scaled).unwrap();
        assert!((slope - slope2).abs() < 1e-12);

        assert!(decay_fit(&pts[..3]).is_err());
        let bad = vec![(1.0, 0.5), (2.0, 0.0), (3.0, 0.1), (4.0, 0.1)];
        assert!(decay_fit(&bad).is_err());
    }

    #[test]
    fn ks_statistic_detects_uniformity() {
        let mut rng = SeededStream::new(123, 0).rng();
        let n = 50_000;
        let mut uniform: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        uniform.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(ks_uniform_statistic(&uniform) < 1.63 / (n as f64).sqrt());

        let mut skewed: Vec<f64> = (0..n).map(|_| rng.random::<f64>().powi(2)).collect();
        skewed.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(ks_uniform_statistic(&skewed) > 1.63 / (n as f64).sqrt());
    }
}
