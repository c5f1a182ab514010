//! The `trisplit` command-line tool.
//!
//! Exit codes: 0 on success, 2 when an iterative solve stopped at its
//! iteration limit, 1 for configuration, input and validation errors.
//!
//! Parameters come from, in decreasing precedence: command-line flags, the
//! `--config` TOML file, built-in defaults. The output directory falls back to
//! `$TRISPLIT_OUT_DIR`, then to the working directory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{Experiment, Method, RunConfigFile, SweepVariant};
use trisplit::experiments::{
    build_deblur, grid_sweep, synthetic_image, GridSpec, HardSoft, ImageProblemSpec, Measure,
    SweepCase, TwoBall, Variant,
};
use trisplit::io::{read_pgm, write_float_csv, write_pgm, Image};
use trisplit::operators::Zero;
use trisplit::splitting::{fmt_f64, relaxation_bound, solve, Status};
use trisplit::strengthened::{
    resolvent_of_sum, resolvent_via_shift, validate_strengthen, ResolventOutcome,
};
use trisplit::{RelaxationSchedule, SolverConfig, StrengthenConfig, ThreeOperatorProblem, Vector};

pub const OUT_DIR_ENV: &str = "TRISPLIT_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "trisplit",
    version,
    about = "Three-operator splitting solver and experiment runner"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve 0 ∈ A(x) + B(x) + T(x) for one experiment and write its trace.
    Solve(SolveArgs),
    /// Compute the resolvent of A + B + T at a point.
    Resolvent(ResolventArgs),
    /// Sweep a normalized (gamma, lambda) grid and write the results.
    Sweep(SweepArgs),
    /// Restore a blurred, noisy image and write the images and objective history.
    Deblur(DeblurArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolverFlags {
    /// Stepsize gamma.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Constant relaxation lambda.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Residual tolerance ‖v_k − u_k‖.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ImageFlags {
    /// Ground-truth image (plain PGM); a synthetic picture is used otherwise.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Image width in pixels.
    #[arg(long)]
    pub width: Option<usize>,
    /// Image height in pixels.
    #[arg(long)]
    pub height: Option<usize>,
    /// Odd side length of the Gaussian blur kernel; 1 disables blurring.
    #[arg(long)]
    pub kernel_size: Option<usize>,
    /// Standard deviation of the blur kernel.
    #[arg(long)]
    pub kernel_std: Option<f64>,
    /// Standard deviation of the added Gaussian noise.
    #[arg(long)]
    pub noise_std: Option<f64>,
    /// Noise seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Weight of the l1 penalty on wavelet coefficients.
    #[arg(long)]
    pub reg_weight: Option<f64>,
    /// Haar transform levels.
    #[arg(long)]
    pub stages: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Starting point, comma separated (2-D experiments).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<f64>>,
    /// Soft-constraint weight of the hard-soft experiment.
    #[arg(long)]
    pub rho: Option<f64>,
    #[command(flatten)]
    pub image: ImageFlags,
}

#[derive(Debug, Args)]
pub struct ResolventArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Strengthening factor theta.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Shifts sigma_A,sigma_B,sigma_T.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    pub sigma: Option<Vec<f64>>,
    /// Resolvent parameter for the shift method.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Query point, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Option<Vec<f64>>,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Also run the other method and report the distance between the results.
    #[arg(long)]
    pub cross_check: bool,
    /// Soft-constraint weight of the hard-soft experiment.
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,
    #[arg(long, value_enum)]
    pub variant: Option<SweepVariant>,
    /// Interior grid points for gamma/scale in ]0, 4[.
    #[arg(long)]
    pub gamma_steps: Option<usize>,
    /// Interior grid points for lambda in ]0, 2[.
    #[arg(long)]
    pub lambda_steps: Option<usize>,
    /// Worker threads; 0 uses all available cores.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Iteration cap per cell for shadow-error stopping.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Shadow-error tolerance for iteration-count sweeps.
    #[arg(long)]
    pub shadow_tol: Option<f64>,
    /// Fixed iteration count per cell for objective sweeps (deblur).
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Soft-constraint weight of the hard-soft experiment.
    #[arg(long)]
    pub rho: Option<f64>,
    #[command(flatten)]
    pub image: ImageFlags,
}

#[derive(Debug, Args)]
pub struct DeblurArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Number of iterations.
    #[arg(long)]
    pub iterations: Option<usize>,
    #[command(flatten)]
    pub image: ImageFlags,
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to standard error. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve(args) => cmd_solve(args, out),
        Command::Resolvent(args) => cmd_resolvent(args, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::Deblur(args) => cmd_deblur(args, out),
    }
}

fn load_config(common: &Common) -> Result<RunConfigFile> {
    match &common.config {
        Some(path) => RunConfigFile::load(path),
        None => Ok(RunConfigFile::default()),
    }
}

fn output_dir(common: &Common, cfg: &RunConfigFile) -> Result<PathBuf> {
    let dir = common
        .out_dir
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    if !dir.is_dir() {
        bail!("output path {} is not a directory", dir.display());
    }
    Ok(dir)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn fmt_vector(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| fmt_f64(*v)).collect();
    format!("[{}]", parts.join(", "))
}

fn status_name(status: Status) -> &'static str {
    match status {
        Status::Converged(_) => "converged",
        Status::MaxIterations => "saturated",
    }
}

fn exit_code(status: Status) -> i32 {
    match status {
        Status::Converged(_) => 0,
        Status::MaxIterations => 2,
    }
}

fn point2(values: &[f64], what: &str) -> Result<Vector> {
    if values.len() != 2 {
        bail!("{what} must have 2 components, got {}", values.len());
    }
    Ok(Vector::from(values))
}

fn hard_soft(rho: Option<f64>, cfg: &RunConfigFile) -> Result<HardSoft> {
    let rho = rho.or(cfg.hard_soft.rho).unwrap_or(1.0);
    if !(rho > 0.0) {
        bail!("rho = {rho} must be positive");
    }
    Ok(HardSoft::standard().with_rho(rho))
}

fn image_spec(flags: &ImageFlags, cfg: &RunConfigFile) -> ImageProblemSpec {
    let c = &cfg.image;
    let d = ImageProblemSpec::default();
    ImageProblemSpec {
        width: flags.width.or(c.width).unwrap_or(d.width),
        height: flags.height.or(c.height).unwrap_or(d.height),
        kernel_size: flags.kernel_size.or(c.kernel_size).unwrap_or(d.kernel_size),
        kernel_std: flags.kernel_std.or(c.kernel_std).unwrap_or(d.kernel_std),
        noise_std: flags.noise_std.or(c.noise_std).unwrap_or(d.noise_std),
        seed: flags.seed.or(c.seed).unwrap_or(d.seed),
        reg_weight: flags.reg_weight.or(c.reg_weight).unwrap_or(d.reg_weight),
        stages: flags.stages.or(c.stages).unwrap_or(d.stages),
    }
}

/// Reads the ground truth (or synthesizes it) and fixes the image size in `spec`.
fn ground_truth(
    flags: &ImageFlags,
    cfg: &RunConfigFile,
    spec: &mut ImageProblemSpec,
) -> Result<Image> {
    match flags.input.clone().or_else(|| cfg.image.input.clone()) {
        Some(path) => {
            let file =
                File::open(&path).with_context(|| format!("cannot open {}", path.display()))?;
            let img = read_pgm(BufReader::new(file))
                .with_context(|| format!("cannot read {}", path.display()))?;
            let requested_w = flags.width.or(cfg.image.width);
            let requested_h = flags.height.or(cfg.image.height);
            if requested_w.is_some_and(|w| w != img.width())
                || requested_h.is_some_and(|h| h != img.height())
            {
                bail!(
                    "requested size disagrees with the {}x{} input image",
                    img.width(),
                    img.height()
                );
            }
            spec.width = img.width();
            spec.height = img.height();
            Ok(img)
        }
        None => Ok(synthetic_image(spec.width, spec.height)),
    }
}

fn cmd_solve(args: SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(&args.common)?;
    let experiment = args
        .experiment
        .or(cfg.experiment)
        .unwrap_or(Experiment::TwoBall);
    let s = &cfg.solver;
    let x0_flag = args.x0.clone().or_else(|| s.x0.clone());

    let (problem, default_x0): (ThreeOperatorProblem, Vector) = match experiment {
        Experiment::TwoBall => {
            let tb = TwoBall::standard();
            (tb.problem(), tb.x0)
        }
        Experiment::HardSoft => {
            let hs = hard_soft(args.rho, &cfg)?;
            (hs.problem()?, hs.x0)
        }
        Experiment::Deblur => {
            let mut spec = image_spec(&args.image, &cfg);
            let truth = ground_truth(&args.image, &cfg, &mut spec)?;
            let dp = build_deblur(&spec, &truth)?;
            (dp.problem, dp.x0)
        }
    };
    let x0 = match x0_flag {
        Some(_) if experiment == Experiment::Deblur => {
            bail!("x0 cannot be set for the deblur experiment")
        }
        Some(v) => point2(&v, "x0")?,
        None => default_x0,
    };

    let gamma = args.solver.gamma.or(s.gamma).unwrap_or(problem.beta());
    let schedule = match (args.solver.lambda, &s.lambda_table, s.lambda) {
        (Some(l), _, _) => RelaxationSchedule::Constant(l),
        (None, Some(table), _) => RelaxationSchedule::Table(table.clone()),
        (None, None, Some(l)) => RelaxationSchedule::Constant(l),
        (None, None, None) => {
            RelaxationSchedule::Constant(0.99 * relaxation_bound(gamma, problem.beta()))
        }
    };
    let config = SolverConfig::new(gamma, schedule)
        .with_max_iter(args.solver.max_iter.or(s.max_iter).unwrap_or(100_000))
        .with_tol_residual(args.solver.tol.or(s.tol).unwrap_or(1e-12));
    let dir = output_dir(&args.common, &cfg)?;

    let outcome = solve(&problem, &config, &x0)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let mut trace_file = create(&dir, &format!("solve_{}_trace.csv", experiment.name()))?;
    outcome.trace.write_csv(&mut trace_file)?;
    trace_file.flush()?;

    write!(
        out,
        "status={} iterations={} residual={}",
        status_name(outcome.status),
        outcome.iterations(),
        fmt_f64(outcome.trace.final_residual)
    )?;
    if outcome.solution.dim() <= 8 {
        write!(out, " solution={}", fmt_vector(&outcome.solution))?;
    }
    writeln!(out)?;
    Ok(exit_code(outcome.status))
}

fn cmd_resolvent(args: ResolventArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(&args.common)?;
    let r = &cfg.resolvent;
    let s = &cfg.solver;
    let experiment = args
        .experiment
        .or(cfg.experiment)
        .unwrap_or(Experiment::HardSoft);
    let (problem, default_q, x0) = match experiment {
        Experiment::HardSoft => {
            let hs = hard_soft(args.rho, &cfg)?;
            (hs.problem()?, hs.q.clone(), hs.x0)
        }
        Experiment::TwoBall => {
            let tb = TwoBall::standard();
            (tb.problem(), Vector::zeros(2), tb.x0)
        }
        Experiment::Deblur => {
            bail!("the resolvent command supports the two-ball and hard-soft experiments")
        }
    };
    let q = match args.q.clone().or_else(|| r.q.clone()) {
        Some(v) => point2(&v, "q")?,
        None => default_q,
    };
    let method = args.method.or(r.method).unwrap_or(Method::Strengthened);
    let theta = args.theta.or(r.theta);
    let sigma = match args.sigma.clone() {
        Some(v) => Some(
            <[f64; 3]>::try_from(v.as_slice())
                .map_err(|_| anyhow!("sigma needs exactly 3 values"))?,
        ),
        None => r.sigma,
    };
    let mu = args.mu.or(r.mu);
    let strengthen = match (theta, sigma, mu) {
        (None, None, Some(mu)) => StrengthenConfig::for_resolvent_parameter(mu, q.clone()),
        (_, _, Some(_)) if method == Method::Strengthened => {
            bail!(
                "--mu selects the (0, 0, 1/mu) shifts and cannot be combined with --theta/--sigma"
            )
        }
        (theta, sigma, _) => StrengthenConfig::new(
            theta.unwrap_or(2.0),
            sigma.unwrap_or([0.0, 1.0, 1.0]),
            q.clone(),
        ),
    };
    let beta = problem.beta();
    let shift_mu = mu.unwrap_or_else(|| strengthen.served_parameter());

    let lambda = args.solver.lambda.or(s.lambda);
    let gamma = args.solver.gamma.or(s.gamma);
    let tol = args.solver.tol.or(s.tol).unwrap_or(1e-12);
    let max_iter = args.solver.max_iter.or(s.max_iter).unwrap_or(100_000);
    let cross_check = args.cross_check || r.cross_check.unwrap_or(false);
    let dir = output_dir(&args.common, &cfg)?;

    let run_method =
        |method: Method, gamma: Option<f64>, lambda: Option<f64>| -> Result<ResolventOutcome> {
            match method {
                Method::Strengthened => {
                    let scale = strengthen.mu(beta);
                    let g = gamma.unwrap_or(2.0 * scale);
                    validate_strengthen(&strengthen, beta, g)?;
                    let l = lambda.unwrap_or(0.9 * (2.0 - g / (2.0 * scale)));
                    Ok(resolvent_of_sum(
                        &problem,
                        &strengthen,
                        g,
                        RelaxationSchedule::Constant(l),
                        &x0,
                        tol,
                        max_iter,
                    )?)
                }
                Method::Shift => {
                    // the shift route still rejects an invalid triple
                    validate_strengthen(&strengthen, beta, strengthen.mu(beta) * 2.0)?;
                    if !(shift_mu > 0.0 && shift_mu.is_finite()) {
                        bail!("resolvent parameter mu = {shift_mu} must be positive and finite");
                    }
                    let scale = 1.0 / (1.0 / beta + 1.0 / shift_mu);
                    let g = gamma.unwrap_or(2.0 * scale);
                    let l = lambda.unwrap_or(0.9 * relaxation_bound(g, scale));
                    Ok(resolvent_via_shift(
                        &problem,
                        shift_mu,
                        &q,
                        g,
                        RelaxationSchedule::Constant(l),
                        &x0,
                        tol,
                        max_iter,
                    )?)
                }
            }
        };

    let result = run_method(method, gamma, lambda)?;
    for w in result.warnings() {
        eprintln!("warning: {w}");
    }
    let name = match method {
        Method::Strengthened => "strengthened",
        Method::Shift => "shift",
    };
    let mut trace_file = create(&dir, &format!("resolvent_{name}_trace.csv"))?;
    result.outcome.trace.write_csv(&mut trace_file)?;
    trace_file.flush()?;
    writeln!(
        out,
        "status={} iterations={} parameter={} point={}",
        status_name(result.outcome.status),
        result.outcome.iterations(),
        fmt_f64(result.parameter),
        fmt_vector(&result.point)
    )?;
    let mut code = exit_code(result.outcome.status);
    if cross_check {
        let other_method = match method {
            Method::Strengthened => Method::Shift,
            Method::Shift => Method::Strengthened,
        };
        let other = run_method(other_method, None, None)?;
        if (other.parameter - result.parameter).abs() > 1e-12 * result.parameter.abs().max(1.0) {
            eprintln!(
                "warning: methods serve different parameters ({} vs {})",
                result.parameter, other.parameter
            );
        }
        writeln!(
            out,
            "cross_check_delta={}",
            fmt_f64(other.point.distance(&result.point))
        )?;
        code = code.max(exit_code(other.outcome.status));
    }
    Ok(code)
}

fn cmd_sweep(args: SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(&args.common)?;
    let c = &cfg.sweep;
    let experiment = args
        .experiment
        .or(cfg.experiment)
        .unwrap_or(Experiment::HardSoft);
    let variant = args.variant.or(c.variant).unwrap_or(SweepVariant::Dy);
    let grid = GridSpec::uniform(
        args.gamma_steps.or(c.gamma_steps).unwrap_or(99),
        args.lambda_steps.or(c.lambda_steps).unwrap_or(50),
    );
    grid.validate()?;
    let workers = args.workers.or(c.workers).unwrap_or(0);
    let max_iter = args.max_iter.or(c.max_iter).unwrap_or(5000);
    let shadow_tol = args.shadow_tol.or(c.shadow_tol).unwrap_or(1e-8);
    let iterations = args.iterations.or(c.iterations).unwrap_or(200);
    if max_iter == 0 || iterations == 0 {
        bail!("iteration limits must be at least 1");
    }

    let case = match experiment {
        Experiment::TwoBall | Experiment::HardSoft => {
            let (problem, x0, variant, reference) = match (experiment, variant) {
                (Experiment::TwoBall, SweepVariant::Strengthened) => {
                    bail!("the strengthened variant needs a resolvent problem (use --experiment hard-soft)")
                }
                (Experiment::TwoBall, v) => {
                    let tb = TwoBall::standard();
                    let variant = if v == SweepVariant::Dy {
                        Variant::DavisYin
                    } else {
                        Variant::ForwardBackward
                    };
                    let reference = match variant {
                        Variant::DavisYin => tb.oracle_solution(1e-11)?,
                        _ => fb_reference(&tb.problem(), &tb.x0)?,
                    };
                    (tb.problem(), tb.x0, variant, reference)
                }
                (_, v) => {
                    let hs = hard_soft(args.rho, &cfg)?;
                    let problem = hs.problem()?;
                    match v {
                        SweepVariant::Dy => (
                            problem,
                            hs.x0.clone(),
                            Variant::Strengthened(hs.dy_config()),
                            hs.reference_solution()?,
                        ),
                        SweepVariant::Strengthened => (
                            problem,
                            hs.x0.clone(),
                            Variant::Strengthened(hs.strengthened_config()),
                            hs.reference_solution()?,
                        ),
                        SweepVariant::Fb => {
                            let reference = fb_reference(&problem, &hs.x0)?;
                            (problem, hs.x0.clone(), Variant::ForwardBackward, reference)
                        }
                    }
                }
            };
            SweepCase {
                problem,
                x0,
                variant,
                measure: Measure::Iterations {
                    reference,
                    tol: shadow_tol,
                    max_iter,
                },
            }
        }
        Experiment::Deblur => {
            let variant = match variant {
                SweepVariant::Dy => Variant::DavisYin,
                SweepVariant::Fb => Variant::ForwardBackward,
                SweepVariant::Strengthened => {
                    bail!("the strengthened variant is not available for deblurring")
                }
            };
            let mut spec = image_spec(&args.image, &cfg);
            let truth = ground_truth(&args.image, &cfg, &mut spec)?;
            let dp = Arc::new(build_deblur(&spec, &truth)?);
            let evaluator = dp.clone();
            SweepCase {
                problem: dp.problem.clone(),
                x0: dp.x0.clone(),
                variant,
                measure: Measure::Objective {
                    iterations,
                    objective: Arc::new(move |x| evaluator.objective(x)),
                },
            }
        }
    };
    let dir = output_dir(&args.common, &cfg)?;

    let result = grid_sweep(&case, &grid, workers)?;
    let mut csv = create(
        &dir,
        &format!("sweep_{}_{}.csv", experiment.name(), variant.name()),
    )?;
    result.write_csv(&mut csv)?;
    csv.flush()?;

    let count = |status: &str| result.cells.iter().filter(|c| c.status() == status).count();
    writeln!(
        out,
        "cells={} infeasible={} saturated={}",
        result.cells.len(),
        count("infeasible"),
        count("saturated")
    )?;
    let best = result.argmin();
    if best.is_empty() {
        writeln!(out, "argmin none")?;
        return Ok(2);
    }
    for (i, j) in best {
        let (g, l) = result.coords(i, j);
        writeln!(
            out,
            "argmin gamma_norm={} lambda={} value={}",
            fmt_f64(g),
            fmt_f64(l),
            fmt_f64(result.min_value().unwrap_or(f64::NAN))
        )?;
    }
    Ok(0)
}

/// Limit of forward-backward splitting from `x0`, by a long run at `γ = β`, `λ = 1`.
fn fb_reference(problem: &ThreeOperatorProblem, x0: &Vector) -> Result<Vector> {
    let fb = ThreeOperatorProblem::new(
        Arc::new(Zero::new(problem.dim())),
        problem.b_arc(),
        problem.t_arc(),
    )?;
    let config = SolverConfig::constant(fb.beta(), 1.0)
        .with_max_iter(1_000_000)
        .with_tol_residual(1e-14)
        .recording(false);
    let outcome = solve(&fb, &config, x0)?;
    if !outcome.converged() {
        bail!("reference solve did not converge");
    }
    Ok(outcome.solution)
}

fn cmd_deblur(args: DeblurArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(&args.common)?;
    let mut spec = image_spec(&args.image, &cfg);
    let truth = ground_truth(&args.image, &cfg, &mut spec)?;
    let gamma = args.gamma.or(cfg.solver.gamma).unwrap_or(1.98);
    let lambda = args.lambda.or(cfg.solver.lambda).unwrap_or(0.99);
    let iterations = args.iterations.or(cfg.sweep.iterations).unwrap_or(200);
    let dir = output_dir(&args.common, &cfg)?;

    let dp = build_deblur(&spec, &truth)?;
    let run = dp.run(gamma, lambda, iterations)?;

    for (name, image) in [
        ("deblur_blurred.pgm", dp.blurred_image()),
        ("deblur_observed.pgm", dp.observed_image()),
        ("deblur_restored.pgm", dp.image(&run.coeffs)),
    ] {
        let mut f = create(&dir, name)?;
        write_pgm(&image, &mut f)?;
        f.flush()?;
    }
    let mut f = create(&dir, "deblur_restored.csv")?;
    write_float_csv(&dp.image(&run.coeffs), &mut f)?;
    f.flush()?;
    let mut f = create(&dir, "deblur_objective.csv")?;
    writeln!(f, "k,objective")?;
    for (k, v) in run.objectives.iter().enumerate() {
        writeln!(f, "{k},{}", fmt_f64(*v))?;
    }
    f.flush()?;

    writeln!(
        out,
        "iterations={} beta={} final_objective={}",
        run.objectives.len(),
        fmt_f64(dp.beta()),
        fmt_f64(run.final_objective())
    )?;
    Ok(0)
}
