//! Acceptance suite: one test per release criterion, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them as they
//! finish). Tolerances are pinned here, not configurable.

use girgdim::clustering::{band_cc_plus, global_cc, global_cc_exact};
use girgdim::dimension::{
    acceptance_interval, classify_geometry, infer_dimension, GeometryLabel, InferenceConfig,
    WeightSource,
};
use girgdim::dist::{chi_p_tail_bound, ChiP, UnitBall};
use girgdim::generate::{calibrate_lambda, generate_chung_lu, generate_girg, GirgParams};
use girgdim::geometry::NormOrder;
use girgdim::graph::{GraphInstance, GraphMeta, WeightBand};
use girgdim::io::{parse_edge_list, write_edge_list, EdgeListFormat};
use girgdim::oracle::{
    brute_force_global_cc, decay_fit, ks_uniform_statistic, mc_cc_identity_check,
    mc_triangle_prob,
};
use girgdim::weights::estimate_weights_from_degrees;
use girgdim::SeededStream;
use rand::Rng;
use std::sync::OnceLock;
use std::time::Instant;

const N_LARGE: usize = 200_000;
const BETA: f64 = 3.5;
const AVG_DEGREE: f64 = 10.0;

/// Calibrated density for the shared large-graph configuration.
fn lambda_large() -> f64 {
    static LAMBDA: OnceLock<f64> = OnceLock::new();
    *LAMBDA.get_or_init(|| calibrate_lambda(N_LARGE, BETA, 1.0, AVG_DEGREE).expect("calibrates"))
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_01_triangle_probability_oracle() {
    // d in 1..=8, max norm, equal weights, 1e6 trials each:
    // |estimate - (3/4)^d| <= 4 sqrt(p(1-p)/trials).
    let start = Instant::now();
    let trials = 1_000_000u64;
    let mut worst = 0.0f64;
    let mut pass = true;
    for d in 1..=8usize {
        let r = mc_triangle_prob(d, NormOrder::Inf, 1.0, 1.0, 1.0, 1_000_000, 1.0, trials, 90 + d as u64)
            .expect("hypothesis holds");
        let sigmas = r.deviation_sigmas().expect("reference set");
        worst = worst.max(sigmas);
        if sigmas > 4.0 {
            pass = false;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "01 (triangle-probability oracle)",
        pass && elapsed < 120.0,
        &format!("d=1..8 worst deviation {worst:.2} sigma (gate 4), {elapsed:.1}s (gate 120s)"),
    );
    assert!(pass, "triangle probability deviates more than 4 sigma (worst {worst:.2})");
    assert!(elapsed < 120.0, "oracle too slow: {elapsed:.1}s");
}

#[test]
fn criterion_02_chi_power_mean() {
    // p in {1, 2, 3}, d = 64, 1e5 samples: mean of Z within 1% of 2d/p.
    let start = Instant::now();
    let samples = 100_000usize;
    let d = 64usize;
    let mut worst = 0.0f64;
    for (i, p) in [1.0f64, 2.0, 3.0].into_iter().enumerate() {
        let chi = ChiP::new(p).unwrap();
        let mut rng = SeededStream::new(200 + i as u64, 0).rng();
        let mean: f64 = (0..samples)
            .map(|_| (0..d).map(|_| chi.sample_power(&mut rng)).sum::<f64>())
            .sum::<f64>()
            / samples as f64;
        let expect = 2.0 * d as f64 / p;
        worst = worst.max(((mean - expect) / expect).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "02 (chi^p mean)",
        worst <= 0.01 && elapsed < 10.0,
        &format!("worst relative error {worst:.4} (gate 0.01), {elapsed:.1}s (gate 10s)"),
    );
    assert!(worst <= 0.01, "mean off by {worst:.4} relative");
    assert!(elapsed < 10.0, "too slow: {elapsed:.1}s");
}

#[test]
fn criterion_03_moment_generating_function() {
    // p = 2, lambda = 0.1, d = 1, 1e6 samples: within 1% of 0.8^(-1/2).
    let start = Instant::now();
    let chi = ChiP::new(2.0).unwrap();
    let mut rng = SeededStream::new(300, 0).rng();
    let samples = 1_000_000usize;
    let mean: f64 = (0..samples)
        .map(|_| (0.1 * chi.sample_power(&mut rng)).exp())
        .sum::<f64>()
        / samples as f64;
    let exact = 0.8f64.powf(-0.5);
    let rel = ((mean - exact) / exact).abs();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "03 (moment generating function)",
        rel <= 0.01 && elapsed < 10.0,
        &format!("empirical {mean:.5} vs {exact:.5}, rel {rel:.5} (gate 0.01), {elapsed:.1}s"),
    );
    assert!(rel <= 0.01, "MGF off by {rel:.5}");
    assert!(elapsed < 10.0, "too slow: {elapsed:.1}s");
}

#[test]
fn criterion_04_tail_bound() {
    // (p, d, eps) in {(1, 32, 1), (2, 64, 1)}: observed exceedance
    // frequency <= bound + 3 binomial stderr over 1e5 samples.
    let samples = 100_000usize;
    let mut pass = true;
    let mut detail = String::new();
    for (p, d, eps) in [(1.0f64, 32usize, 1.0f64), (2.0, 64, 1.0)] {
        let bound = chi_p_tail_bound(p, d, eps).unwrap();
        let chi = ChiP::new(p).unwrap();
        let expect = 2.0 * d as f64 / p;
        let mut rng = SeededStream::new(400 + d as u64, 0).rng();
        let exceed = (0..samples)
            .filter(|_| {
                let z: f64 = (0..d).map(|_| chi.sample_power(&mut rng)).sum();
                (z - expect).abs() >= eps * expect
            })
            .count();
        let freq = exceed as f64 / samples as f64;
        let se = (freq * (1.0 - freq) / samples as f64).sqrt();
        if freq > bound + 3.0 * se {
            pass = false;
        }
        detail.push_str(&format!("(p={p},d={d}): {freq:.2e} <= {bound:.2e}+3se; "));
    }
    report("04 (concentration tail bound)", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_05_ball_norm_law() {
    // KS statistic of ||x||_p^d against U(0,1) below 1.63/sqrt(1e5) for
    // (d, p) in {(2, 2), (5, 1), (8, inf)}.
    let trials = 100_000usize;
    let gate = 1.63 / (trials as f64).sqrt();
    let mut pass = true;
    let mut detail = String::new();
    for (d, norm) in [
        (2usize, NormOrder::finite(2.0).unwrap()),
        (5, NormOrder::finite(1.0).unwrap()),
        (8, NormOrder::Inf),
    ] {
        let ball = UnitBall::new(d, norm).unwrap();
        let mut rng = SeededStream::new(500 + d as u64, 0).rng();
        let mut buf = vec![0.0f64; d];
        let mut values: Vec<f64> = (0..trials)
            .map(|_| {
                ball.sample_into(&mut rng, &mut buf);
                let norm_val = match norm {
                    NormOrder::Inf => buf.iter().fold(0.0f64, |m, x| m.max(x.abs())),
                    NormOrder::Finite(p) => {
                        buf.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
                    }
                };
                norm_val.powi(d as i32)
            })
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ks = ks_uniform_statistic(&values);
        if ks >= gate {
            pass = false;
        }
        detail.push_str(&format!("(d={d},p={norm}): ks {ks:.5}; "));
    }
    report(
        "05 (ball-norm law)",
        pass,
        &format!("{detail}gate {gate:.5}"),
    );
    assert!(pass, "{detail}");
}

#[test]
fn criteria_06_07_interval_hit_and_dimension_recovery() {
    // Shared ensemble: 10 seeds per d in 1..=5 at n = 2e5, beta = 3.5,
    // max norm, average degree 10.
    //
    // 6: CC+ at w_c = w0, c = 1.15 lands in the acceptance interval in
    //    >= 9 of 10 seeds for the true d (runtime < 5 min per d).
    // 7: infer_dimension recovers d with true weights in >= 90% of the
    //    50 runs, and with degree-estimated weights in >= 80%.
    let lambda = lambda_large();
    let band = WeightBand::new(1.0, 1.15).unwrap();
    let mut interval_hits = Vec::new();
    let mut slowest_d = 0.0f64;
    let mut true_hits = 0usize;
    let mut est_hits = 0usize;
    let total = 50usize;

    for d in 1..=5usize {
        let started = Instant::now();
        let mut hits = 0usize;
        for seed in 0..10u64 {
            let params = GirgParams::new(
                N_LARGE,
                d,
                BETA,
                1.0,
                lambda,
                NormOrder::Inf,
                d as u64 * 1_000 + seed,
            )
            .unwrap();
            let g = generate_girg(&params).unwrap();

            let stat = band_cc_plus(&g, &band);
            let cc = stat.cc_plus.expect("large band is populated");
            let (lo, hi) = acceptance_interval(d, 1.15, N_LARGE).unwrap();
            if lo < cc && cc < hi {
                hits += 1;
            }

            let config = InferenceConfig::for_graph(g.n());
            let grid = girgdim::dimension::default_w_c_grid(1.0, config.c);
            let verdict = infer_dimension(&g, &config, &grid).unwrap();
            if verdict.aggregate_d == Some(d) {
                true_hits += 1;
            }

            let estimate = estimate_weights_from_degrees(&g).unwrap();
            let w0_hat = estimate.w0_hat;
            let est_graph = g.with_weights(estimate.weights).unwrap();
            let mut est_config = InferenceConfig::for_graph(est_graph.n());
            est_config.weight_source = WeightSource::DegreeEstimated;
            let est_grid = girgdim::dimension::default_w_c_grid(w0_hat, est_config.c);
            let est_verdict = infer_dimension(&est_graph, &est_config, &est_grid).unwrap();
            if est_verdict.aggregate_d == Some(d) {
                est_hits += 1;
            }
        }
        interval_hits.push((d, hits));
        slowest_d = slowest_d.max(started.elapsed().as_secs_f64());
    }

    let pass6 = interval_hits.iter().all(|&(_, h)| h >= 9) && slowest_d < 300.0;
    let detail6: String = interval_hits
        .iter()
        .map(|(d, h)| format!("d={d}: {h}/10; "))
        .collect();
    report(
        "06 (band statistic interval hit)",
        pass6,
        &format!("{detail6}slowest d {slowest_d:.0}s (gate 300s)"),
    );

    let pass7 = true_hits * 10 >= total * 9 && est_hits * 10 >= total * 8;
    report(
        "07 (dimension recovery)",
        pass7,
        &format!(
            "true weights {true_hits}/{total} (gate 45), estimated {est_hits}/{total} (gate 40)"
        ),
    );
    assert!(pass6, "interval hits per d: {detail6}, slowest {slowest_d:.0}s");
    assert!(
        pass7,
        "recovery: true {true_hits}/{total} (need 45), estimated {est_hits}/{total} (need 40)"
    );
}

#[test]
fn criterion_08_chung_lu_rejection() {
    // 10 Chung-Lu graphs at n = 2e5: classified non-geometric in >= 9.
    let lambda = lambda_large();
    let mut rejected = 0usize;
    for seed in 0..10u64 {
        let g = generate_chung_lu(N_LARGE, BETA, 1.0, lambda, 7_000 + seed).unwrap();
        let config = InferenceConfig::for_graph(g.n());
        let grid = girgdim::dimension::default_w_c_grid(1.0, config.c);
        let verdict = infer_dimension(&g, &config, &grid).unwrap();
        if classify_geometry(&verdict, g.n()) == GeometryLabel::NonGeometric {
            rejected += 1;
        }
    }
    report(
        "08 (Chung-Lu rejection)",
        rejected >= 9,
        &format!("non_geometric in {rejected}/10 (gate 9)"),
    );
    assert!(rejected >= 9, "only {rejected}/10 rejected");
}

#[test]
fn criteria_09_12_decay_slopes() {
    // 9: max norm, d = 1..6 at n = 2e5, beta = 3.5: OLS slope of
    //    ln CC+ vs d within 10% of ln(3/4); for p = 2 the slope is
    //    negative with magnitude >= 0.1.
    // 12 (second half): at beta = 2.2 the global clustering decay over
    //    d = 1..5 is strictly shallower than at beta = 3.5. The band
    //    statistic is beta-independent by construction, so the global
    //    coefficient carries the beta effect.
    let lambda = lambda_large();
    let c = girgdim::dimension::DEFAULT_BAND_RATIO;
    let band = WeightBand::new(1.0, c).unwrap();

    let mut band_pts_inf = Vec::new();
    let mut global_35 = Vec::new();
    for d in 1..=6usize {
        let params =
            GirgParams::new(N_LARGE, d, BETA, 1.0, lambda, NormOrder::Inf, 9_000 + d as u64)
                .unwrap();
        let g = generate_girg(&params).unwrap();
        let stat = band_cc_plus(&g, &band);
        band_pts_inf.push((d as f64, stat.cc_plus.expect("band populated")));
        if d <= 5 {
            global_35.push((d as f64, global_cc(&g).unwrap()));
        }
    }
    let slope_inf = decay_fit(&band_pts_inf).unwrap();
    let reference = 0.75f64.ln();
    let rel = ((slope_inf - reference) / reference).abs();

    let mut band_pts_p2 = Vec::new();
    for d in 1..=6usize {
        let params = GirgParams::new(
            N_LARGE,
            d,
            BETA,
            1.0,
            lambda,
            NormOrder::finite(2.0).unwrap(),
            9_100 + d as u64,
        )
        .unwrap();
        let g = generate_girg(&params).unwrap();
        let stat = band_cc_plus(&g, &band);
        band_pts_p2.push((d as f64, stat.cc_plus.expect("band populated")));
    }
    let slope_p2 = decay_fit(&band_pts_p2).unwrap();

    let pass9 = rel <= 0.10 && slope_p2 < 0.0 && slope_p2.abs() >= 0.1;
    report(
        "09 (clustering decay slope)",
        pass9,
        &format!(
            "max-norm slope {slope_inf:.4} vs {reference:.4} (rel {rel:.3}, gate 0.10); p=2 slope {slope_p2:.4}"
        ),
    );

    // beta = 2.2 global decay, same n and average degree.
    let lambda_22 = calibrate_lambda(N_LARGE, 2.2, 1.0, AVG_DEGREE).unwrap();
    let mut global_22 = Vec::new();
    for d in 1..=5usize {
        let params = GirgParams::new(
            N_LARGE,
            d,
            2.2,
            1.0,
            lambda_22,
            NormOrder::Inf,
            9_200 + d as u64,
        )
        .unwrap();
        let g = generate_girg(&params).unwrap();
        global_22.push((d as f64, global_cc(&g).unwrap()));
    }
    let slope_g35 = decay_fit(&global_35).unwrap();
    let slope_g22 = decay_fit(&global_22).unwrap();
    let pass12b = slope_g22 > slope_g35;
    report(
        "12b (heavy-tail decay is shallower)",
        pass12b,
        &format!("global slope at beta=2.2 {slope_g22:.4} vs beta=3.5 {slope_g35:.4}"),
    );

    assert!(pass9, "slope {slope_inf:.4} (rel {rel:.3}), p2 {slope_p2:.4}");
    assert!(pass12b, "global slopes: beta2.2 {slope_g22:.4}, beta3.5 {slope_g35:.4}");
}

#[test]
fn criterion_10_exact_oracle_equivalence() {
    // Exact rational equality of the clustering kernel against full
    // triple enumeration on 100 random graphs with n <= 200.
    let mut rng = SeededStream::new(1_000, 0).rng();
    for round in 0..100 {
        let n = 10 + (rng.random::<u64>() % 191) as usize;
        let p = 0.01 + 0.15 * rng.random::<f64>();
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
            global_cc_exact(&g).unwrap(),
            brute_force_global_cc(&g).unwrap(),
            "mismatch on round {round} (n = {n})"
        );
    }
    report("10 (exact oracle equivalence)", true, "100/100 graphs agree exactly");
}

#[test]
fn criterion_11_star_triangle_identity() {
    // Pinned configuration: n = 500, beta = 6, d = 1, 2000 replicas,
    // difference within 3 combined standard errors.
    //
    // A control at essentially homogeneous weights (beta = 1e6) is
    // printed alongside: there the factorization is exact. At beta = 6
    // the closure probability still depends on the degree of the
    // center (heavier centers close less often), and the two sides
    // differ by a thread-count-independent ~0.04 at any replica count,
    // so this criterion documents a genuine finite-size gap rather
    // than a sampling artifact.
    let params = GirgParams::new(500, 1, 6.0, 1.0, 2.0, NormOrder::Inf, 11_000).unwrap();
    let r = mc_cc_identity_check(&params, 2_000).unwrap();

    let control_params =
        GirgParams::new(500, 1, 1e6, 1.0, 2.0, NormOrder::Inf, 11_000).unwrap();
    let control = mc_cc_identity_check(&control_params, 2_000).unwrap();

    let pass = r.difference.abs() <= 3.0 * r.stderr;
    report(
        "11 (star-triangle identity)",
        pass,
        &format!(
            "beta=6: |{:.5}| vs 3se {:.5}; homogeneous control: |{:.5}| vs 3se {:.5}",
            r.difference,
            3.0 * r.stderr,
            control.difference,
            3.0 * control.stderr
        ),
    );
    assert!(
        control.difference.abs() <= 3.0 * control.stderr,
        "homogeneous control should balance: |{:.5}| vs {:.5}",
        control.difference,
        3.0 * control.stderr
    );
    assert!(
        pass,
        "identity gap at beta = 6: lhs {:.5}, rhs {:.5}, |diff| {:.5} > 3se {:.5} \
         (the factorization is exact only for homogeneous weights; see the control)",
        r.lhs,
        r.rhs,
        r.difference.abs(),
        3.0 * r.stderr
    );
}

#[test]
fn criterion_12a_real_network_smoke() {
    // Full file pipeline at collaboration-network scale in under 30s:
    // parse -> estimate weights -> infer -> complete verdict. Runs on
    // the real dataset when provided (GIRGDIM_CA_GRQC or
    // data/ca-GrQc.txt); otherwise on a generated stand-in of the same
    // size, since datasets are user-supplied by design.
    let start = Instant::now();
    let candidates = [
        std::env::var("GIRGDIM_CA_GRQC").unwrap_or_default(),
        format!("{}/../../data/ca-GrQc.txt", env!("CARGO_MANIFEST_DIR")),
    ];
    let real = candidates
        .iter()
        .find(|p| !p.is_empty() && std::path::Path::new(p).exists());

    let (text, source) = match real {
        Some(path) => (std::fs::read_to_string(path).unwrap(), path.as_str()),
        None => {
            let lambda = calibrate_lambda(5_242, BETA, 1.0, 5.53).unwrap();
            let params =
                GirgParams::new(5_242, 2, BETA, 1.0, lambda, NormOrder::Inf, 12_000).unwrap();
            let g = generate_girg(&params).unwrap().compact();
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf, &[]).unwrap();
            (String::from_utf8(buf).unwrap(), "generated stand-in (dataset not provided)")
        }
    };

    let (graph, _) = parse_edge_list(
        std::io::Cursor::new(text.as_bytes()),
        &EdgeListFormat::default(),
        source,
    )
    .unwrap();
    if real.is_some() {
        assert!((4_000..6_500).contains(&graph.n()), "unexpected n = {}", graph.n());
        assert!((12_000..17_000).contains(&graph.m()), "unexpected m = {}", graph.m());
    }
    let estimate = estimate_weights_from_degrees(&graph).unwrap();
    let w0_hat = estimate.w0_hat;
    let graph = graph.with_weights(estimate.weights).unwrap();
    let mut config = InferenceConfig::for_graph(graph.n());
    config.weight_source = WeightSource::DegreeEstimated;
    let grid = girgdim::dimension::default_w_c_grid(w0_hat, config.c);
    let verdict = infer_dimension(&graph, &config, &grid).unwrap();
    let defined = verdict.per_band.iter().filter(|b| b.stat.is_defined()).count();
    let elapsed = start.elapsed().as_secs_f64();

    let pass = elapsed < 30.0 && defined > 0;
    report(
        "12a (network pipeline smoke)",
        pass,
        &format!(
            "{source}: n={}, m={}, {defined} defined bands, aggregate {:?}, {elapsed:.1}s (gate 30s)",
            graph.n(),
            graph.m(),
            verdict.aggregate_d
        ),
    );
    assert!(pass, "smoke run took {elapsed:.1}s or produced no defined bands");
}
