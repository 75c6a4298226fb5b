//! Command-line entry point: experiments driven by JSON configs, with CSV,
//! JSON and SVG outputs.
//!
//! Exit codes: 0 — all asserted properties hold; 1 — a property or fit
//! failed; 2 — usage or configuration error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::constructions::{
    construction_energy, flat_trace_inequality_check, optimized_lens_construction, reflect,
    small_volume_construction, ConstructionReport, EnergyMethod,
};
use crate::core::{predicted_exponent, Exponent, RankOneTensor, Regime};
use crate::error::{Error, Result};
use crate::field_solver::{dense_oracle, minimize_elastic, Grid};
use crate::geometry::{build_cages, verify_cage_inclusions, VoxelMask};
use crate::linalg;
use crate::scaling_lab::{
    dichotomy_scan, fit_exponent, nu1_path, probe_lower_bound, run_sweep, svg, write_rows_csv,
    SweepMethod, SweepSpec,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(name = "nuclab", version, about = "Nucleation-barrier scaling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Volume sweep with a log-log exponent fit against the predicted slope.
    Sweep(CommonArgs),
    /// Direction scan toward ±e_d with the branch crossover bracket.
    Dichotomy(CommonArgs),
    /// Elastic minimization on a voxel mask file.
    Solve(SolveArgs),
    /// Tilted-cage inclusion certificates over a direction grid.
    Cages(CommonArgs),
    /// Reflection of a constructed pair with the energy sandwich report.
    Reflect(CommonArgs),
    /// Localized lower-bound probe with random admissible inclusions.
    Probe(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: NUCLAB_THREADS, then all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Override the pass/fail tolerance from the config.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Cross-check the iterative solve against the dense direct oracle.
    #[arg(long)]
    oracle: bool,
}

/// Entry point used by the `nuclab` binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let common = match &cli.command {
        Command::Sweep(c)
        | Command::Dichotomy(c)
        | Command::Cages(c)
        | Command::Reflect(c)
        | Command::Probe(c) => c,
        Command::Solve(s) => &s.common,
    };
    let threads = common
        .threads
        .or_else(|| std::env::var("NUCLAB_THREADS").ok().and_then(|v| v.parse().ok()));
    let outcome = match threads {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::Config(format!("thread pool: {e}"))),
        },
        _ => dispatch(&cli),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Sweep(c) => cmd_sweep(c),
        Command::Dichotomy(c) => cmd_dichotomy(c),
        Command::Solve(s) => cmd_solve(s),
        Command::Cages(c) => cmd_cages(c),
        Command::Reflect(c) => cmd_reflect(c),
        Command::Probe(c) => cmd_probe(c),
    }
}

fn load_config<C: for<'de> Deserialize<'de>>(path: &Path) -> Result<C> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn ensure_out(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

// ---------------------------------------------------------------- sweep

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepConfig {
    d: usize,
    nu: Vec<f64>,
    a: Vec<f64>,
    mu_min: f64,
    mu_max: f64,
    points: usize,
    method: SweepMethod,
    #[serde(default)]
    seed: u64,
    /// Maximum |fitted slope − predicted exponent| for exit code 0.
    tolerance: f64,
}

#[derive(Serialize)]
struct SweepSummary {
    spec: SweepSpec,
    fit: crate::scaling_lab::FitResult,
    target_exponent: Exponent,
    target: f64,
    tolerance: f64,
    slope_error: f64,
    flagged_rows: usize,
    pass: bool,
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| {
            let t = k as f64 / (n - 1) as f64;
            (lo.ln() + (hi.ln() - lo.ln()) * t).exp()
        })
        .collect()
}

fn cmd_sweep(args: &CommonArgs) -> Result<i32> {
    let cfg: SweepConfig = load_config(&args.config)?;
    ensure_out(&args.out)?;
    let tolerance = args.tolerance.unwrap_or(cfg.tolerance);
    let spec = SweepSpec {
        d: cfg.d,
        nu: cfg.nu.clone(),
        a: cfg.a.clone(),
        volumes: log_spaced(cfg.mu_min, cfg.mu_max, cfg.points),
        method: cfg.method,
        seed: args.seed.unwrap_or(cfg.seed),
    };
    let rows = run_sweep(&spec)?;
    let fit = fit_exponent(&rows)?;
    // the regime is uniform across the sweep (validated by run_sweep)
    let threshold = linalg::norm(&spec.a).powi(-2 * spec.d as i32);
    let regime =
        if spec.volumes[0] < threshold { Regime::SmallVolume } else { Regime::LargeVolume };
    let target_exponent = predicted_exponent(spec.d, &spec.nu, regime);
    let target = target_exponent.value();
    let slope_error = (fit.slope - target).abs();
    let flagged_rows = rows.iter().filter(|r| r.flagged).count();
    let pass = slope_error <= tolerance;

    write_rows_csv(&args.out.join("rows.csv"), &rows)?;
    svg::plot_loglog(
        &args.out.join("plot.svg"),
        &rows,
        &fit,
        target,
        &format!("sweep d={} target {}", spec.d, target_exponent),
    )?;
    let summary = SweepSummary {
        spec,
        fit,
        target_exponent,
        target,
        tolerance,
        slope_error,
        flagged_rows,
        pass,
    };
    write_json(&args.out.join("summary.json"), &summary)?;
    println!(
        "sweep: slope {:.5} target {:.5} (|err| {:.5} <= {:.5}: {})",
        fit.slope, target, slope_error, tolerance, summary.pass
    );
    Ok(if summary.pass { EXIT_PASS } else { EXIT_PROPERTY_FAILURE })
}

// ------------------------------------------------------------ dichotomy

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DichotomyConfig {
    d: usize,
    a: Vec<f64>,
    mu: f64,
    nu1_start: f64,
    nu1_end: f64,
    points: usize,
    /// Accepted for config symmetry; the scan itself is deterministic.
    #[serde(default)]
    #[allow(dead_code)]
    seed: u64,
}

fn cmd_dichotomy(args: &CommonArgs) -> Result<i32> {
    let cfg: DichotomyConfig = load_config(&args.config)?;
    ensure_out(&args.out)?;
    let path = nu1_path(cfg.d, cfg.nu1_start, cfg.nu1_end, cfg.points);
    let report = dichotomy_scan(cfg.d, &cfg.a, cfg.mu, &path)?;

    let mut csv = String::from("dist,theta,branch,total,proxy\n");
    for e in &report.entries {
        csv.push_str(&format!("{},{},{},{},{}\n", e.dist, e.theta, e.branch, e.total, e.proxy));
    }
    std::fs::write(args.out.join("scan.csv"), csv)?;

    let bracket_ok = report
        .crossover
        .as_ref()
        .map(|c| c.theta_after <= report.threshold && report.threshold < c.theta_before)
        .unwrap_or(false);
    let pass = bracket_ok && report.proxy_decreased;

    #[derive(Serialize)]
    struct CrossoverSummary<'a> {
        threshold: f64,
        crossover: &'a Option<crate::scaling_lab::CrossoverBracket>,
        theta_end: f64,
        proxy_decreased: bool,
        pass: bool,
    }
    write_json(
        &args.out.join("crossover.json"),
        &CrossoverSummary {
            threshold: report.threshold,
            crossover: &report.crossover,
            theta_end: report.theta_end,
            proxy_decreased: report.proxy_decreased,
            pass,
        },
    )?;
    println!(
        "dichotomy: threshold {:.5}, crossover {}, pass {}",
        report.threshold,
        report
            .crossover
            .as_ref()
            .map(|c| format!("theta in ({:.5}, {:.5}]", c.theta_after, c.theta_before))
            .unwrap_or_else(|| "none".into()),
        pass
    );
    Ok(if pass { EXIT_PASS } else { EXIT_PROPERTY_FAILURE })
}

// ---------------------------------------------------------------- solve

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveConfig {
    /// Path of the voxel mask (binary format), absolute or relative to the
    /// config file.
    mask: PathBuf,
    nu: Vec<f64>,
    a: Vec<f64>,
    #[serde(default = "default_solver_tol")]
    tol: f64,
    #[serde(default = "default_max_iter")]
    max_iter: usize,
}

fn default_solver_tol() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    50_000
}

fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    let cfg: SolveConfig = load_config(&args.common.config)?;
    ensure_out(&args.common.out)?;
    let mask_path = if cfg.mask.is_absolute() {
        cfg.mask.clone()
    } else {
        args.common.config.parent().unwrap_or_else(|| Path::new(".")).join(&cfg.mask)
    };
    let mask = VoxelMask::read_binary(&mask_path)?;
    let grid = Grid::from_mask(&mask)?;
    let g = RankOneTensor::new(cfg.a.clone(), cfg.nu.clone())?;
    let report = minimize_elastic(&mask, &g, &grid, cfg.tol, cfg.max_iter)?;

    let oracle_result = if args.oracle { Some(dense_oracle(&mask, &g, &grid)?) } else { None };
    let oracle_gap = oracle_result.map(|o| (report.energy - o).abs() / o.abs().max(1e-300));

    #[derive(Serialize)]
    struct SolveSummary {
        report: crate::field_solver::SolveReport,
        grid_perimeter: f64,
        mask_volume: f64,
        oracle_energy: Option<f64>,
        oracle_gap: Option<f64>,
        pass: bool,
    }
    let pass = report.converged && oracle_gap.map(|g| g <= 1e-8).unwrap_or(true);
    let summary = SolveSummary {
        report,
        grid_perimeter: crate::field_solver::grid_perimeter(&mask),
        mask_volume: mask.volume(),
        oracle_energy: oracle_result,
        oracle_gap,
        pass,
    };
    write_json(&args.common.out.join("solve.json"), &summary)?;
    println!(
        "solve: energy {:.6e}, converged {}, oracle gap {:?}",
        summary.report.energy, summary.report.converged, summary.oracle_gap
    );
    Ok(if pass { EXIT_PASS } else { EXIT_PROPERTY_FAILURE })
}

// ---------------------------------------------------------------- cages

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CagesConfig {
    nu1_values: Vec<f64>,
    /// Multipliers of γ for σ, each in [2, 4].
    sigma_factors: Vec<f64>,
}

fn cmd_cages(args: &CommonArgs) -> Result<i32> {
    let cfg: CagesConfig = load_config(&args.config)?;
    ensure_out(&args.out)?;
    #[derive(Serialize)]
    struct CageRow {
        nu1: f64,
        sigma: f64,
        certificate: crate::geometry::CageCertificate,
    }
    let mut rows = Vec::new();
    let mut all_hold = true;
    let mut offender = None;
    for &nu1 in &cfg.nu1_values {
        for &k in &cfg.sigma_factors {
            let sigma = k * nu1 / 50.0;
            let cage = build_cages(nu1, sigma)?;
            let certificate = verify_cage_inclusions(&cage);
            if !certificate.holds && offender.is_none() {
                offender = Some((nu1, sigma));
            }
            all_hold &= certificate.holds;
            rows.push(CageRow { nu1, sigma, certificate });
        }
    }
    #[derive(Serialize)]
    struct CageSummary {
        checks: usize,
        all_hold: bool,
        offender: Option<(f64, f64)>,
        rows: Vec<CageRow>,
    }
    let summary = CageSummary { checks: rows.len(), all_hold, offender, rows };
    write_json(&args.out.join("cages.json"), &summary)?;
    println!("cages: {} checks, all hold: {all_hold}", summary.checks);
    Ok(if all_hold { EXIT_PASS } else { EXIT_PROPERTY_FAILURE })
}

// -------------------------------------------------------------- reflect

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReflectConfig {
    d: usize,
    nu: Vec<f64>,
    a: Vec<f64>,
    mu: f64,
    /// Optional randomized flat-trace check on voxel masks.
    masks: Option<MaskCheckConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaskCheckConfig {
    count: usize,
    d: usize,
    seed: u64,
}

fn cmd_reflect(args: &CommonArgs) -> Result<i32> {
    let cfg: ReflectConfig = load_config(&args.config)?;
    ensure_out(&args.out)?;
    let g = RankOneTensor::new(cfg.a.clone(), cfg.nu.clone())?;
    let threshold = g.frobenius_norm().powi(-2 * cfg.d as i32);
    let (field, shape, branch) = if cfg.mu < threshold {
        let (f, s, _) = small_volume_construction(cfg.mu, &g, cfg.d)?;
        (f, s, "half-ball".to_string())
    } else {
        match optimized_lens_construction(cfg.d, cfg.mu, &cfg.nu, &cfg.a) {
            Ok((f, s, params)) => (f, s, params.branch.to_string()),
            Err(Error::Regime(_)) => {
                let (f, s, _) = small_volume_construction(cfg.mu, &g, cfg.d)?;
                (f, s, "half-ball".to_string())
            }
            Err(e) => return Err(e),
        }
    };
    let method = match &field {
        crate::constructions::ConstructionField::LensN(_) => EnergyMethod::Sampled,
        _ => EnergyMethod::ExactPiecewise,
    };
    let energy = construction_energy(&field, &shape, &g, method)?;
    let construction = ConstructionReport::new(&field, &shape, branch, &energy);
    let (_, _, report) = reflect(&field, &shape)?;

    let mut mask_failures = 0usize;
    let mut mask_checks = 0usize;
    let mut offending_mask: Option<PathBuf> = None;
    if let Some(mc) = &cfg.masks {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(mc.seed);
        for i in 0..mc.count {
            let n = 10usize;
            let mut mask = VoxelMask::new(0.25, vec![0.0; mc.d], vec![n; mc.d])?;
            let mut cur: Vec<usize> = (0..mc.d).map(|_| rng.gen_range(0..n)).collect();
            for _ in 0..rng.gen_range(5..40) {
                mask.set(&cur, true);
                let axis = rng.gen_range(0..mc.d);
                let step: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
                let moved = cur[axis] as i64 + step;
                if moved >= 0 && (moved as usize) < n {
                    cur[axis] = moved as usize;
                }
            }
            mask_checks += 1;
            let check = flat_trace_inequality_check(&mask);
            if !check.holds {
                mask_failures += 1;
                // serialize the offending instance for reproduction
                if offending_mask.is_none() {
                    let p = args.out.join(format!("offending_mask_{i}.bin"));
                    mask.write_binary(&p)?;
                    offending_mask = Some(p);
                }
            }
        }
    }

    #[derive(Serialize)]
    struct ReflectSummary {
        construction: ConstructionReport,
        report: crate::constructions::ReflectionReport,
        mask_checks: usize,
        mask_failures: usize,
        offending_mask: Option<PathBuf>,
        pass: bool,
    }
    let pass = report.sandwich_holds && report.trace_inequality_holds && mask_failures == 0;
    let summary =
        ReflectSummary { construction, report, mask_checks, mask_failures, offending_mask, pass };
    write_json(&args.out.join("reflect.json"), &summary)?;
    println!(
        "reflect: sandwich {}, trace {}, mask checks {}/{} ok",
        report.sandwich_holds,
        report.trace_inequality_holds,
        mask_checks - mask_failures,
        mask_checks
    );
    Ok(if pass { EXIT_PASS } else { EXIT_PROPERTY_FAILURE })
}

// ---------------------------------------------------------------- probe

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeConfig {
    d: usize,
    nu: Vec<f64>,
    n_samples: usize,
    rho: f64,
    #[serde(default)]
    z_height: f64,
    #[serde(default)]
    seed: u64,
    /// Also run with twice the samples and report the stability ratio.
    #[serde(default)]
    check_doubling: bool,
}

fn cmd_probe(args: &CommonArgs) -> Result<i32> {
    let cfg: ProbeConfig = load_config(&args.config)?;
    ensure_out(&args.out)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    let report = probe_lower_bound(cfg.d, &cfg.nu, cfg.n_samples, cfg.rho, cfg.z_height, seed)?;
    let doubled = if cfg.check_doubling {
        Some(probe_lower_bound(cfg.d, &cfg.nu, 2 * cfg.n_samples, cfg.rho, cfg.z_height, seed)?)
    } else {
        None
    };
    let stability = doubled.as_ref().map(|r| r.min_ratio / report.min_ratio);

    #[derive(Serialize)]
    struct ProbeSummary {
        report: crate::scaling_lab::ProbeReport,
        doubled_min_ratio: Option<f64>,
        stability: Option<f64>,
        pass: bool,
    }
    let pass = report.min_ratio > 0.0 && stability.map(|s| s >= 0.5).unwrap_or(true);
    let summary = ProbeSummary {
        doubled_min_ratio: doubled.map(|r| r.min_ratio),
        stability,
        pass,
        report,
    };
    write_json(&args.out.join("probe.json"), &summary)?;
    println!(
        "probe: min ratio {:.6e}, stability {:?}, pass {}",
        summary.report.min_ratio, summary.stability, summary.pass
    );
    Ok(if summary.pass { EXIT_PASS } else { EXIT_PROPERTY_FAILURE })
}
