//! Command-line driver: graph generation, dimension inference, decay
//! sweeps over d, and the Monte Carlo verification oracles.
//!
//! Exit codes: 0 success, 1 inconclusive result or failed verification,
//! 2 usage or parameter domain error.

mod output;

use clap::{ArgGroup, Args, Parser, Subcommand};
use girgdim::clustering::{band_cc_plus, global_cc};
use girgdim::dimension::{
    classify_geometry, infer_dimension, max_testable_dimension, GeometryLabel, InferenceConfig,
    WeightSource, DEFAULT_BAND_RATIO, DEFAULT_MIN_BAND_SUPPORT, DEFAULT_SWEEP_HI, DEFAULT_SWEEP_LO,
};
use girgdim::dist::{chi_p_mgf, chi_p_tail_bound, ChiP, ParetoParams, UnitBall};
use girgdim::generate::{
    calibrate_lambda, generate_chung_lu, generate_girg, generate_girg_using, EdgeAlgorithm,
    GirgParams,
};
use girgdim::geometry::NormOrder;
use girgdim::graph::WeightBand;
use girgdim::io::{
    parse_edge_list, parse_weight_file, write_edge_list, write_positions, write_weights,
    EdgeListFormat, RunRecord,
};
use girgdim::oracle::{decay_fit, ks_uniform_statistic, mc_cc_identity_check, mc_triangle_prob};
use girgdim::weights::estimate_weights_from_degrees;
use girgdim::{Error, Result};
use girgdim::rng::SeededStream;
use output::OutputDir;
use rand_distr::Distribution;
use serde::Serialize;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "girgdim", version, about = "Geometric inhomogeneous random graphs and latent-dimension inference")]
struct Cli {
    /// Cap internal parallelism (overrides the GIRGDIM_THREADS env var).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a geometric or Chung-Lu graph and write it as text files.
    Generate(GenerateArgs),
    /// Infer the latent dimension of an edge-list graph.
    Infer(InferArgs),
    /// Generate graphs across a dimension grid and fit the clustering decay.
    Sweep(SweepArgs),
    /// Run a Monte Carlo verification oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("density").required(true).args(["avg_deg", "lambda"])))]
struct GenerateArgs {
    #[arg(long, value_parser = ["girg", "chunglu"])]
    model: String,
    #[arg(long)]
    n: usize,
    /// Torus dimension (geometric model only).
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    w0: f64,
    /// Target average degree; lambda is calibrated to reach it.
    #[arg(long)]
    avg_deg: Option<f64>,
    /// Edge-density parameter, if fixed directly.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value = "inf")]
    norm: NormOrder,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Edge sampler: auto picks the grid above a size cutoff.
    #[arg(long, default_value = "auto", value_parser = ["auto", "grid", "reference"])]
    algorithm: String,
}

#[derive(Args)]
struct InferArgs {
    /// Edge-list file ("u v" lines, '#' comments).
    #[arg(long)]
    graph: PathBuf,
    /// Optional "v w" weight file aligned to compacted vertex ids;
    /// without it weights are estimated from degrees.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Band ratio c.
    #[arg(long, default_value_t = DEFAULT_BAND_RATIO)]
    c: f64,
    /// Accept a band ratio past the strict 2/sqrt(3) bound (up to 4/3).
    #[arg(long)]
    force_c: bool,
    #[arg(long)]
    d_max: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MIN_BAND_SUPPORT)]
    min_band_support: usize,
    /// Lower end of the w_c sweep (clamped up to the minimum weight).
    #[arg(long, default_value_t = DEFAULT_SWEEP_LO)]
    sweep_lo: f64,
    #[arg(long, default_value_t = DEFAULT_SWEEP_HI)]
    sweep_hi: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(group(ArgGroup::new("density").required(true).args(["avg_deg", "lambda"])))]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    w0: f64,
    #[arg(long)]
    avg_deg: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value = "inf")]
    norm: NormOrder,
    #[arg(long, default_value_t = 1)]
    d_min: usize,
    #[arg(long)]
    d_max: usize,
    /// Band ratio for the w_c = w0 statistic.
    #[arg(long, default_value_t = DEFAULT_BAND_RATIO)]
    c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = ["triangle-prob", "chi-mean", "mgf", "tail", "ball-norm", "cc-identity", "pareto"])]
    claim: String,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value = "inf")]
    norm: NormOrder,
    /// MGF argument (must be below 1/2).
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    w0: f64,
    /// Model density for triangle-prob / cc-identity.
    #[arg(long, default_value_t = 1.0)]
    model_lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    w_v: f64,
    #[arg(long, default_value_t = 1.0)]
    w_s: f64,
    #[arg(long, default_value_t = 1.0)]
    w_t: f64,
    #[arg(long, default_value_t = 500)]
    replicas: u64,
    /// Relative tolerance for mean/MGF claims.
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("GIRGDIM_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(k) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Infer(args) => cmd_infer(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_)
                | Error::Invalid(_)
                | Error::Parse { .. }
                | Error::DimensionMismatch { .. }
                | Error::VertexOutOfRange { .. } => ExitCode::from(2),
                Error::Io(_) | Error::UndefinedStatistic(_) => ExitCode::from(1),
            }
        }
    }
}

fn resolve_lambda(
    n: usize,
    beta: f64,
    w0: f64,
    avg_deg: Option<f64>,
    lambda: Option<f64>,
) -> Result<f64> {
    match (avg_deg, lambda) {
        (Some(target), None) => calibrate_lambda(n, beta, w0, target),
        (None, Some(l)) => Ok(l),
        _ => unreachable!("clap enforces exactly one"),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    let lambda = resolve_lambda(args.n, args.beta, args.w0, args.avg_deg, args.lambda)?;
    let graph = match args.model.as_str() {
        "girg" => {
            let params = GirgParams::new(
                args.n, args.d, args.beta, args.w0, lambda, args.norm, args.seed,
            )?;
            match args.algorithm.as_str() {
                "auto" => generate_girg(&params)?,
                "grid" => generate_girg_using(&params, EdgeAlgorithm::Grid)?,
                "reference" => generate_girg_using(&params, EdgeAlgorithm::Reference)?,
                _ => unreachable!("clap restricts values"),
            }
        }
        "chunglu" => generate_chung_lu(args.n, args.beta, args.w0, lambda, args.seed)?,
        _ => unreachable!("clap restricts values"),
    };

    // The text format carries only edge endpoints; serialize the
    // compacted graph so edges, weights, and positions stay aligned
    // across a parse round trip.
    let isolated = graph.n() - graph.compact().n();
    let graph = graph.compact();

    let mut record = RunRecord::new("generate")
        .seed(args.seed)
        .param("model", &args.model)
        .param("n", args.n)
        .param("beta", args.beta)
        .param("w0", args.w0)
        .param("lambda", lambda)
        .param("norm", args.norm);
    if args.model == "girg" {
        record = record.param("d", args.d).param("algorithm", &args.algorithm);
    }
    if let Some(target) = args.avg_deg {
        record = record.param("avg_deg", target);
    }
    let header = record.header_lines();

    let mut out = OutputDir::create(&args.out)?;
    let mut edges = Vec::new();
    write_edge_list(&graph, &mut edges, &header)?;
    out.write("edges.txt", &edges)?;
    let mut weights = Vec::new();
    write_weights(&graph, &mut weights, &header)?;
    out.write("weights.txt", &weights)?;
    if graph.has_positions() {
        let mut positions = Vec::new();
        write_positions(&graph, &mut positions, &header)?;
        out.write("positions.txt", &positions)?;
    }
    out.finish(&record)?;
    println!(
        "generated {} graph: n = {}, m = {}, lambda = {lambda} ({isolated} isolated vertices not serialized)",
        args.model,
        graph.n(),
        graph.m()
    );
    Ok(ExitCode::SUCCESS)
}

/// Geometric w_c grid from max(lowest weight, lo) to hi with ratio c.
fn w_c_grid(min_weight: f64, lo: f64, hi: f64, c: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut w = min_weight.max(lo);
    while w <= hi {
        grid.push(w);
        w *= c;
    }
    grid
}

#[derive(Serialize)]
struct VerdictDocument<'a> {
    run: &'a RunRecord,
    graph: GraphSummary,
    weight_source: WeightSource,
    beta_hat: Option<f64>,
    aggregate_d: Option<usize>,
    label: String,
    aggregate_rule: &'a str,
    c: f64,
    d_max: usize,
    max_testable_d: usize,
    bands: &'a [girgdim::dimension::BandInference],
}

#[derive(Serialize)]
struct GraphSummary {
    source: String,
    n: usize,
    m: usize,
    duplicate_edges: usize,
    self_loops: usize,
}

fn cmd_infer(args: InferArgs) -> Result<ExitCode> {
    if args.force_c {
        if !(args.c > 1.0 && args.c < 4.0 / 3.0) {
            return Err(Error::Invalid(format!(
                "band ratio {} outside (1, 4/3) even for --force-c",
                args.c
            )));
        }
    } else {
        WeightBand::check_ratio(args.c)?;
    }

    let file = File::open(&args.graph)?;
    let source = args.graph.display().to_string();
    let (graph, report) =
        parse_edge_list(BufReader::new(file), &EdgeListFormat::default(), source.clone())?;

    let (graph, weight_source, beta_hat) = match &args.weights {
        Some(path) => {
            let weights = parse_weight_file(BufReader::new(File::open(path)?), graph.n())?;
            (graph.with_weights(weights)?, WeightSource::Model, None)
        }
        None => {
            let estimate = estimate_weights_from_degrees(&graph)?;
            let beta_hat = estimate.beta_hat;
            (
                graph.with_weights(estimate.weights)?,
                WeightSource::DegreeEstimated,
                beta_hat,
            )
        }
    };

    let mut config = InferenceConfig::for_graph(graph.n());
    config.c = args.c;
    config.allow_ratio_override = args.force_c;
    config.min_band_support = args.min_band_support;
    config.weight_source = weight_source;
    if let Some(d_max) = args.d_max {
        config.d_max = d_max;
    }

    let min_weight = graph.weights().iter().cloned().fold(f64::INFINITY, f64::min);
    let grid = w_c_grid(min_weight, args.sweep_lo, args.sweep_hi, args.c);
    if grid.is_empty() {
        return Err(Error::Invalid(format!(
            "empty w_c sweep: weights start at {min_weight}, sweep ends at {}",
            args.sweep_hi
        )));
    }

    let verdict = infer_dimension(&graph, &config, &grid)?;
    let label = classify_geometry(&verdict, graph.n());

    let record = RunRecord::new("infer")
        .param("graph", &source)
        .param("weight_source", format!("{weight_source:?}"))
        .param("c", args.c)
        .param("d_max", config.d_max)
        .param("min_band_support", config.min_band_support)
        .param("sweep_lo", args.sweep_lo)
        .param("sweep_hi", args.sweep_hi);
    let header = record.header_lines();

    let mut out = OutputDir::create(&args.out)?;

    let mut csv_buf = Vec::new();
    for line in &header {
        writeln!(csv_buf, "# {line}")?;
    }
    let mut writer = csv::Writer::from_writer(csv_buf);
    writer
        .write_record(["w_c", "c", "n_band", "s_size", "cc_plus", "inferred_d", "accepted_ds"])
        .map_err(csv_error)?;
    for band in &verdict.per_band {
        let accepted = band
            .accepted_ds
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("|");
        writer
            .write_record([
                band.stat.band.w_c.to_string(),
                band.stat.band.c.to_string(),
                band.stat.subgraph_n.to_string(),
                band.stat.s_size.to_string(),
                band.stat.cc_plus.map(|v| v.to_string()).unwrap_or_default(),
                band.inferred_d.map(|d| d.to_string()).unwrap_or_default(),
                accepted,
            ])
            .map_err(csv_error)?;
    }
    let csv_bytes = writer.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    out.write("bands.csv", &csv_bytes)?;

    let document = VerdictDocument {
        run: &record,
        graph: GraphSummary {
            source,
            n: graph.n(),
            m: graph.m(),
            duplicate_edges: report.duplicate_edges,
            self_loops: report.self_loops,
        },
        weight_source,
        beta_hat,
        aggregate_d: verdict.aggregate_d,
        label: label.to_string(),
        aggregate_rule: &verdict.aggregate_rule,
        c: verdict.c,
        d_max: verdict.d_max,
        max_testable_d: max_testable_dimension(verdict.c, graph.n()),
        bands: &verdict.per_band,
    };
    out.write("verdict.json", &serde_json::to_vec_pretty(&document).expect("serializable"))?;
    out.finish(&record)?;

    println!("label: {label}");
    if let Some(d) = verdict.aggregate_d {
        println!("aggregate dimension: {d}");
    }
    Ok(if label == GeometryLabel::Inconclusive {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

#[derive(Serialize)]
struct FitDocument<'a> {
    run: &'a RunRecord,
    band_cc_slope: Option<f64>,
    global_cc_slope: Option<f64>,
    reference_slope: f64,
    points_used: usize,
    points_total: usize,
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    if args.d_min == 0 || args.d_max < args.d_min {
        return Err(Error::Invalid(format!(
            "bad dimension grid [{}, {}]",
            args.d_min, args.d_max
        )));
    }
    WeightBand::check_ratio(args.c)?;
    let lambda = resolve_lambda(args.n, args.beta, args.w0, args.avg_deg, args.lambda)?;
    let band = WeightBand::new(args.w0, args.c)?;

    struct Row {
        d: usize,
        cc_plus: Option<f64>,
        s_size: usize,
        band_n: usize,
        global_cc: f64,
    }
    let mut rows = Vec::new();
    for d in args.d_min..=args.d_max {
        let params =
            GirgParams::new(args.n, d, args.beta, args.w0, lambda, args.norm, args.seed)?;
        let g = generate_girg(&params)?;
        let stat = band_cc_plus(&g, &band);
        rows.push(Row {
            d,
            cc_plus: stat.cc_plus,
            s_size: stat.s_size,
            band_n: stat.subgraph_n,
            global_cc: global_cc(&g)?,
        });
    }

    let record = RunRecord::new("sweep")
        .seed(args.seed)
        .param("n", args.n)
        .param("beta", args.beta)
        .param("w0", args.w0)
        .param("lambda", lambda)
        .param("norm", args.norm)
        .param("d_min", args.d_min)
        .param("d_max", args.d_max)
        .param("c", args.c);
    let header = record.header_lines();

    let mut out = OutputDir::create(&args.out)?;
    let mut csv_buf = Vec::new();
    for line in &header {
        writeln!(csv_buf, "# {line}")?;
    }
    let mut writer = csv::Writer::from_writer(csv_buf);
    writer
        .write_record(["d", "cc_plus", "s_size", "band_n", "global_cc", "defined"])
        .map_err(csv_error)?;
    for row in &rows {
        writer
            .write_record([
                row.d.to_string(),
                row.cc_plus.map(|v| v.to_string()).unwrap_or_default(),
                row.s_size.to_string(),
                row.band_n.to_string(),
                row.global_cc.to_string(),
                row.cc_plus.is_some().to_string(),
            ])
            .map_err(csv_error)?;
    }
    let csv_bytes = writer.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    out.write("sweep.csv", &csv_bytes)?;

    // Undefined bands are flagged in the CSV and left out of the fit;
    // fits on fewer than four points are refused, rows still stand.
    let band_points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.cc_plus.map(|cc| (r.d as f64, cc)))
        .collect();
    let global_points: Vec<(f64, f64)> =
        rows.iter().map(|r| (r.d as f64, r.global_cc)).collect();
    let band_cc_slope = decay_fit(&band_points).ok();
    let global_cc_slope = decay_fit(&global_points).ok();

    let fit = FitDocument {
        run: &record,
        band_cc_slope,
        global_cc_slope,
        reference_slope: 0.75f64.ln(),
        points_used: band_points.len(),
        points_total: rows.len(),
    };
    out.write("fit.json", &serde_json::to_vec_pretty(&fit).expect("serializable"))?;
    out.finish(&record)?;

    match band_cc_slope {
        Some(slope) => println!("band cc decay slope: {slope} (ln(3/4) = {})", 0.75f64.ln()),
        None => println!("fit refused: fewer than 4 defined points"),
    }
    Ok(ExitCode::SUCCESS)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Invalid(format!("csv: {e}"))
}

struct ClaimOutcome {
    name: &'static str,
    detail: String,
    pass: bool,
}

impl ClaimOutcome {
    fn print(&self) {
        println!(
            "claim {}: {} -> {}",
            self.name,
            self.detail,
            if self.pass { "pass" } else { "FAIL" }
        );
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let outcome = match args.claim.as_str() {
        "triangle-prob" => verify_triangle_prob(&args)?,
        "chi-mean" => verify_chi_mean(&args)?,
        "mgf" => verify_mgf(&args)?,
        "tail" => verify_tail(&args)?,
        "ball-norm" => verify_ball_norm(&args)?,
        "cc-identity" => verify_cc_identity(&args)?,
        "pareto" => verify_pareto(&args)?,
        _ => unreachable!("clap restricts values"),
    };
    outcome.print();
    Ok(if outcome.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify_triangle_prob(args: &VerifyArgs) -> Result<ClaimOutcome> {
    let d = args.d.ok_or_else(|| Error::Invalid("triangle-prob needs --d".into()))?;
    let n = args.n.unwrap_or(1_000_000);
    let report = mc_triangle_prob(
        d,
        args.norm,
        args.w_v,
        args.w_s,
        args.w_t,
        n,
        args.model_lambda,
        args.trials,
        args.seed,
    )?;
    let base = 0.75f64.powi(d as i32);
    let ratio = args.w_t / args.w_v;
    let pass = report.estimate >= base - 4.0 * report.stderr
        && report.estimate <= ratio * base + 4.0 * report.stderr;
    Ok(ClaimOutcome {
        name: "triangle-prob",
        detail: format!(
            "estimate {:.6} +- {:.6}, bounds [{:.6}, {:.6}]",
            report.estimate,
            report.stderr,
            base,
            ratio * base
        ),
        pass,
    })
}

fn verify_chi_mean(args: &VerifyArgs) -> Result<ClaimOutcome> {
    let p = args.p.ok_or_else(|| Error::Invalid("chi-mean needs --p".into()))?;
    let d = args.d.ok_or_else(|| Error::Invalid("chi-mean needs --d".into()))?;
    let chi = ChiP::new(p)?;
    if d == 0 {
        return Err(Error::Domain("chi-mean needs d >= 1".into()));
    }
    let mut rng = SeededStream::new(args.seed, 0).rng();
    let mut sum = 0.0f64;
    for _ in 0..args.trials {
        let z: f64 = (0..d).map(|_| chi.sample_power(&mut rng)).sum();
        sum += z;
    }
    let mean = sum / args.trials as f64;
    let expect = 2.0 * d as f64 / p;
    let rel = ((mean - expect) / expect).abs();
    Ok(ClaimOutcome {
        name: "chi-mean",
        detail: format!("mean {mean:.4}, expected {expect:.4}, rel err {rel:.5} (tol {})", args.tol),
        pass: rel <= args.tol,
    })
}

fn verify_mgf(args: &VerifyArgs) -> Result<ClaimOutcome> {
    let p = args.p.ok_or_else(|| Error::Invalid("mgf needs --p".into()))?;
    let lambda = args.lambda.ok_or_else(|| Error::Invalid("mgf needs --lambda".into()))?;
    let d = args.d.unwrap_or(1);
    let exact = chi_p_mgf(p, lambda)?.powi(d as i32);
    let chi = ChiP::new(p)?;
    let mut rng = SeededStream::new(args.seed, 0).rng();
    let mut sum = 0.0f64;
    for _ in 0..args.trials {
        let z: f64 = (0..d).map(|_| chi.sample_power(&mut rng)).sum();
        sum += (lambda * z).exp();
    }
    let mean = sum / args.trials as f64;
    let rel = ((mean - exact) / exact).abs();
    Ok(ClaimOutcome {
        name: "mgf",
        detail: format!("empirical {mean:.5}, exact {exact:.5}, rel err {rel:.5} (tol {})", args.tol),
        pass: rel <= args.tol,
    })
}

fn verify_tail(args: &VerifyArgs) -> Result<ClaimOutcome> {
    let p = args.p.ok_or_else(|| Error::Invalid("tail needs --p".into()))?;
    let d = args.d.ok_or_else(|| Error::Invalid("tail needs --d".into()))?;
    let eps = args.epsilon.ok_or_else(|| Error::Invalid("tail needs --epsilon".into()))?;
    let bound = chi_p_tail_bound(p, d, eps)?;
    let chi = ChiP::new(p)?;
    let expect = 2.0 * d as f64 / p;
    let mut rng = SeededStream::new(args.seed, 0).rng();
    let mut exceed = 0u64;
    for _ in 0..args.trials {
        let z: f64 = (0..d).map(|_| chi.sample_power(&mut rng)).sum();
        if (z - expect).abs() >= eps * expect {
            exceed += 1;
        }
    }
    let freq = exceed as f64 / args.trials as f64;
    let se = (freq * (1.0 - freq) / args.trials as f64).sqrt();
    Ok(ClaimOutcome {
        name: "tail",
        detail: format!("exceedance {freq:.6} + 3se {:.6} vs bound {bound:.6}", 3.0 * se),
        pass: freq <= bound + 3.0 * se,
    })
}

fn verify_ball_norm(args: &VerifyArgs) -> Result<ClaimOutcome> {
    let d = args.d.ok_or_else(|| Error::Invalid("ball-norm needs --d".into()))?;
    let ball = UnitBall::new(d, args.norm)?;
    let mut rng = SeededStream::new(args.seed, 0).rng();
    let mut buf = vec![0.0f64; d];
    let mut values: Vec<f64> = (0..args.trials)
        .map(|_| {
            ball.sample_into(&mut rng, &mut buf);
            let norm_val = match args.norm {
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
    let gate = 1.63 / (args.trials as f64).sqrt();
    Ok(ClaimOutcome {
        name: "ball-norm",
        detail: format!("ks {ks:.6} vs gate {gate:.6}"),
        pass: ks < gate,
    })
}

fn verify_cc_identity(args: &VerifyArgs) -> Result<ClaimOutcome> {
    let n = args.n.unwrap_or(500);
    let beta = args.beta.unwrap_or(100.0);
    let d = args.d.unwrap_or(1);
    let params = GirgParams::new(n, d, beta, args.w0, args.model_lambda, args.norm, args.seed)?;
    let report = mc_cc_identity_check(&params, args.replicas)?;
    Ok(ClaimOutcome {
        name: "cc-identity",
        detail: format!(
            "lhs {:.6}, rhs {:.6}, |diff| {:.6} vs 3se {:.6}",
            report.lhs,
            report.rhs,
            report.difference.abs(),
            3.0 * report.stderr
        ),
        pass: report.difference.abs() <= 3.0 * report.stderr,
    })
}

fn verify_pareto(args: &VerifyArgs) -> Result<ClaimOutcome> {
    let beta = args.beta.ok_or_else(|| Error::Invalid("pareto needs --beta".into()))?;
    let pareto = ParetoParams::new(args.w0, beta)?;
    let mut rng = SeededStream::new(args.seed, 0).rng();
    let samples: Vec<f64> = (0..args.trials).map(|_| pareto.sample(&mut rng)).collect();
    let mut detail = String::new();
    let mut pass = true;
    for mult in [1.0, 2.0, 4.0] {
        let x = args.w0 * mult;
        let expect = mult.powf(1.0 - beta);
        let hits = samples.iter().filter(|&&w| w >= x).count() as f64;
        let freq = hits / args.trials as f64;
        let se = (expect * (1.0 - expect) / args.trials as f64).sqrt().max(1e-12);
        if (freq - expect).abs() > 3.0 * se {
            pass = false;
        }
        detail.push_str(&format!("ccdf({x}) = {freq:.5} vs {expect:.5}; "));
    }
    Ok(ClaimOutcome { name: "pareto", detail, pass })
}
