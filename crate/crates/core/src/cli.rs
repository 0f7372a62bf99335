//! Command-line front end. The `orcomp` binary only forwards its arguments
//! to [`main_with_args`].
//!
//! Exit codes: 0 when every hard check passes, 2 when an exact check fails
//! or a run aborts, 3 for configuration and input errors.

use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{curvature_diagnostic, shape_from_snapshots, square_profile, write_ppm};
use crate::dual::DualEngine;
use crate::error::{Error, Result};
use crate::fpp::{diagonal_walk, first_step_summary, greedy_two_step, mu_estimate};
use crate::models::{coupled_run, init_default, read_snapshot_csv, write_snapshot_csv, BoxPolicy, CellState, ModelKind, RunManifest};
use crate::percolation::{EventWindow, LatticeBox, Site};
use crate::stats::Summary;
use crate::verify::{self, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "orcomp", version, about = "Oriented two-type competition on the first quadrant")]
pub struct Cli {
    /// Worker threads for replicate-level parallelism.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one or several coupled models and write snapshots.
    Simulate(SimulateArgs),
    /// Run a verification suite and print a JSON verdict.
    Verify(VerifyArgs),
    /// Radial shape profile and curvature report.
    Shape(ShapeArgs),
    /// Two-step block walk along the diagonal.
    Walk(WalkArgs),
    /// Render snapshot CSVs as PPM images.
    Render(RenderArgs),
    /// Time constant estimate in one direction.
    Mu(MuArgs),
    /// Reverse path and dual colors of one space-time point.
    Trace(TraceArgs),
}

/// Parameters shared by every command.
#[derive(Args, Debug, Clone)]
pub struct Params {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exponent of the finite-time corrections; reported only.
    #[arg(long, default_value_t = 0.75)]
    pub alpha: f64,
    /// Margin used by containment checks, in scaled units.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Cone half-opening offset.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Minimum arc measure in radians.
    #[arg(long, default_value_t = 0.2)]
    pub rho: f64,
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: String| if ok { Ok(()) } else { Err(Error::InvalidParameter(msg)) };
        check(self.alpha > 0.5 && self.alpha < 1.0, format!("alpha must lie in (1/2, 1), got {}", self.alpha))?;
        check(self.delta > 0.0 && self.delta < 1.0, format!("delta must lie in (0, 1), got {}", self.delta))?;
        check(
            self.epsilon > 0.0 && self.epsilon < std::f64::consts::FRAC_PI_4,
            format!("epsilon must lie in (0, pi/4), got {}", self.epsilon),
        )?;
        check(self.rho > 0.0 && self.rho.is_finite(), format!("rho must be positive, got {}", self.rho))
    }
}

#[derive(Serialize)]
struct ParamsReport {
    seed: u64,
    alpha: f64,
    beta_lower_bound: f64,
    delta: f64,
    epsilon: f64,
    rho: f64,
}

impl From<&Params> for ParamsReport {
    fn from(p: &Params) -> Self {
        ParamsReport { seed: p.seed, alpha: p.alpha, beta_lower_bound: (p.alpha + 1.0) / 2.0, delta: p.delta, epsilon: p.epsilon, rho: p.rho }
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: Params,
    /// Model to run; repeat to couple several on one arrow stream.
    #[arg(long = "model", required = true, value_parser = parse_model)]
    pub models: Vec<ModelKind>,
    #[arg(long = "t")]
    pub t_max: f64,
    /// Comma-separated checkpoint times; defaults to `t`.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<f64>,
    /// Box side override; the default is `ceil(3 t) + 32`.
    #[arg(long = "box")]
    pub box_side: Option<u32>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Also write a PPM image per snapshot.
    #[arg(long)]
    pub render: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Coupling,
    Dual,
    Shape,
    Halfcolor,
    /// Two-step block statistics, time constants, DP oracle and passage-law equivalence.
    #[value(name = "lemma1")]
    TwoStep,
    Sectors,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub suite: Suite,
    #[command(flatten)]
    pub params: Params,
    /// Number of seeds for multi-run suites.
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long = "t")]
    pub t: Option<f64>,
    /// Total dual samples, spread over the seeds.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 500)]
    pub n: u32,
    #[arg(long, default_value_t = 50)]
    pub replicates: usize,
    /// Write the JSON verdict here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ShapeArgs {
    #[command(flatten)]
    pub params: Params,
    #[arg(long, value_parser = parse_model, default_value = "richardson")]
    pub model: ModelKind,
    #[arg(long = "t", default_value_t = 150.0)]
    pub t: f64,
    #[arg(long, default_value_t = 20)]
    pub replicates: usize,
    #[arg(long, default_value_t = 91)]
    pub angles: usize,
    /// Circumradius above which a boundary stretch counts as flat.
    #[arg(long, default_value_t = 10.0)]
    pub flat_cap: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct WalkArgs {
    #[command(flatten)]
    pub params: Params,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 10_000)]
    pub k_max: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// Run manifest; every snapshot it lists is rendered next to it.
    #[arg(long, conflicts_with = "snapshot")]
    pub manifest: Option<PathBuf>,
    /// Single snapshot CSV; needs --model and --box.
    #[arg(long, requires_all = ["model", "box_side"])]
    pub snapshot: Option<PathBuf>,
    #[arg(long, value_parser = parse_model)]
    pub model: Option<ModelKind>,
    #[arg(long = "box")]
    pub box_side: Option<u32>,
    /// Output file for --snapshot.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MuArgs {
    #[command(flatten)]
    pub params: Params,
    /// Direction `a,b` in the closed first quadrant.
    #[arg(long, value_parser = parse_direction, default_value = "1,1")]
    pub direction: (f64, f64),
    #[arg(long, default_value_t = 500)]
    pub n: u32,
    #[arg(long, default_value_t = 50)]
    pub replicates: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    pub params: Params,
    #[arg(long)]
    pub x: u32,
    #[arg(long)]
    pub y: u32,
    #[arg(long = "t")]
    pub t: f64,
    #[arg(long = "box")]
    pub box_side: Option<u32>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn parse_direction(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let f = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((f(a)?, f(b)?))
}

fn parse_model(s: &str) -> std::result::Result<ModelKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::DepthExceeded(_) | Error::Truncated => EXIT_CHECK_FAILED,
                _ => EXIT_CONFIG,
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    if cli.jobs == 0 {
        return Err(Error::invalid("--jobs must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Shape(a) => cmd_shape(&a),
        Command::Walk(a) => cmd_walk(&a),
        Command::Render(a) => cmd_render(&a),
        Command::Mu(a) => cmd_mu(&a),
        Command::Trace(a) => cmd_trace(&a),
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    fs::write(path, bytes)?;
    Ok(())
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    match out {
        Some(p) => write_json(p, value),
        None => {
            let s = serde_json::to_string_pretty(value)?;
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{s}")?;
            Ok(())
        }
    }
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    Ok(std::io::BufWriter::new(fs::File::create(path)?))
}

fn snapshot_name(kind: ModelKind, t: f64, ext: &str) -> String {
    format!("{kind}_t{t}.{ext}")
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<i32> {
    a.params.validate()?;
    let checkpoints = if a.checkpoints.is_empty() { vec![a.t_max] } else { a.checkpoints.clone() };
    let policy = a.box_side.map_or(BoxPolicy::Default, BoxPolicy::Fixed);
    let series = coupled_run(a.params.seed, &a.models, a.t_max, &checkpoints, policy)?;
    fs::create_dir_all(&a.out)?;
    let mut files = Vec::new();
    for cp in &series.checkpoints {
        for state in &cp.states {
            let name = snapshot_name(state.kind, cp.time, "csv");
            let mut w = create(&a.out.join(&name))?;
            write_snapshot_csv(&mut w, state)?;
            w.flush()?;
            files.push(name);
            if a.render {
                let mut w = create(&a.out.join(snapshot_name(state.kind, cp.time, "ppm")))?;
                write_ppm(&mut w, state)?;
                w.flush()?;
            }
        }
    }
    if series.truncation_flag {
        eprintln!("warning: the colored set reached the box boundary; in-box states are exact but the run is flagged");
    }
    write_json(&a.out.join("manifest.json"), &RunManifest::from_series(&series, files))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyOutput {
    parameters: ParamsReport,
    suites: Vec<SuiteReport>,
    hard_failure: bool,
    all_passed: bool,
}

/// Runs one suite with the given (or default) sizes.
pub fn run_suite(suite: Suite, a: &VerifyArgs) -> Result<Vec<SuiteReport>> {
    let p = &a.params;
    let seed = p.seed;
    Ok(match suite {
        Suite::Coupling => {
            let o = verify::coupling_suite(seed, a.seeds.unwrap_or(20), a.t.unwrap_or(100.0), 10)?;
            vec![SuiteReport::new("coupling", o.checks()).with_details(&o)?]
        }
        Suite::Dual => {
            let runs = a.seeds.unwrap_or(10).max(1);
            let o = verify::dual_suite(seed, runs, a.samples.div_ceil(runs), a.t.unwrap_or(30.0))?;
            vec![SuiteReport::new("dual", o.checks()).with_details(&o)?]
        }
        Suite::Shape => {
            let o = verify::shape_suite(seed, a.seeds.unwrap_or(20), a.t.unwrap_or(150.0), p.delta)?;
            vec![SuiteReport::new("shape", o.checks(0.95, 0.01)).with_details(&o)?]
        }
        Suite::Halfcolor => {
            let o = verify::halfcolor_suite(seed, a.seeds.unwrap_or(20), a.t.unwrap_or(150.0), p.delta)?;
            vec![SuiteReport::new("halfcolor", o.checks(0.95, 0.01)).with_details(&o)?]
        }
        Suite::TwoStep => {
            let o = verify::two_step_suite(seed, a.trials, a.n, a.replicates)?;
            let dp = verify::dp_oracle_suite(seed, a.seeds.unwrap_or(100), 6)?;
            let eq = verify::equivalence_suite(seed, 400, 80.0, &[Site::new(20, 20), Site::new(0, 20)])?;
            let mut checks = o.checks();
            checks.extend(dp.checks());
            checks.extend(verify::equivalence_checks(&eq));
            let details = serde_json::json!({ "first_step_and_mu": o, "dp_oracle": dp });
            vec![SuiteReport::new("lemma1", checks).with_details(&details)?]
        }
        Suite::Sectors => {
            let t_to = a.t.unwrap_or(400.0);
            let o = verify::sectors_suite(seed, a.seeds.unwrap_or(50), t_to / 2.0, t_to, p.rho)?;
            vec![SuiteReport::new("sectors", o.checks()).with_details(&o)?]
        }
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Coupling, Suite::Dual, Suite::Shape, Suite::Halfcolor, Suite::TwoStep, Suite::Sectors] {
                all.extend(run_suite(s, a)?);
            }
            all
        }
    })
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    a.params.validate()?;
    if a.seeds == Some(0) || a.samples == 0 || a.trials == 0 || a.replicates == 0 || a.n == 0 {
        return Err(Error::invalid("sizes must be at least 1"));
    }
    let suites = run_suite(a.suite, a)?;
    let hard_failure = suites.iter().any(|s| s.hard_failure);
    let all_passed = suites.iter().all(|s| s.all_passed);
    emit_json(a.out.as_deref(), &VerifyOutput { parameters: (&a.params).into(), suites, hard_failure, all_passed })?;
    Ok(if hard_failure { EXIT_CHECK_FAILED } else { EXIT_OK })
}

#[derive(Serialize)]
struct ShapeOutput {
    parameters: ParamsReport,
    model: ModelKind,
    t: f64,
    replicates: usize,
    max_deviation_from_square: f64,
    profile: crate::analysis::ShapeEstimate,
}

pub fn cmd_shape(a: &ShapeArgs) -> Result<i32> {
    a.params.validate()?;
    if a.replicates == 0 || !(a.t > 0.0) {
        return Err(Error::invalid("shape needs t > 0 and at least one replicate"));
    }
    use rayon::prelude::*;
    let series: Vec<_> = (0..a.replicates as u64)
        .into_par_iter()
        .map(|i| crate::models::run(a.params.seed.wrapping_add(i), a.model, a.t, &[a.t], BoxPolicy::Default))
        .collect::<Result<_>>()?;
    let shape = shape_from_snapshots(&series, a.model, a.angles)?;
    let curvature = curvature_diagnostic(&shape, a.params.epsilon, a.flat_cap)?;
    fs::create_dir_all(&a.out)?;
    let mut w = create(&a.out.join("profile.csv"))?;
    shape.write_csv(&mut w)?;
    w.flush()?;
    write_json(&a.out.join("curvature.json"), &curvature)?;
    let out = ShapeOutput {
        parameters: (&a.params).into(),
        model: a.model,
        t: a.t,
        replicates: a.replicates,
        max_deviation_from_square: shape.max_deviation(square_profile),
        profile: shape,
    };
    write_json(&a.out.join("shape.json"), &out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct WalkOutput {
    seed: u64,
    first_step: crate::fpp::FirstStepSummary,
    k_max: usize,
    final_position: Site,
    mean_step_time: f64,
    diagonal_visits: usize,
    greedy_same_blocks: Summary,
}

pub fn cmd_walk(a: &WalkArgs) -> Result<i32> {
    a.params.validate()?;
    let seed = a.params.seed;
    let first = first_step_summary(seed, a.trials)?;
    let walk = diagonal_walk(seed, a.k_max)?;
    let greedy = greedy_two_step(seed, a.k_max)?;
    fs::create_dir_all(&a.out)?;
    let mut w = create(&a.out.join("walk.csv"))?;
    walk.write_csv(&mut w)?;
    w.flush()?;
    let out = WalkOutput {
        seed,
        first_step: first,
        k_max: a.k_max,
        final_position: walk.position(),
        mean_step_time: walk.elapsed() / a.k_max as f64,
        diagonal_visits: walk.steps.iter().filter(|s| s.position.x == s.position.y).count(),
        greedy_same_blocks: Summary::of(&greedy),
    };
    write_json(&a.out.join("walk.json"), &out)?;
    Ok(EXIT_OK)
}

fn render_one(csv: &Path, kind: ModelKind, bounds: LatticeBox, time: f64, out: &Path) -> Result<()> {
    let state = read_snapshot_csv(BufReader::new(fs::File::open(csv)?), kind, bounds, time)?;
    let mut w = create(out)?;
    write_ppm(&mut w, &state)?;
    w.flush()?;
    Ok(())
}

pub fn cmd_render(a: &RenderArgs) -> Result<i32> {
    if let Some(m) = &a.manifest {
        let manifest: RunManifest = serde_json::from_reader(BufReader::new(fs::File::open(m)?))?;
        let dir = m.parent().unwrap_or(Path::new("."));
        let expected = manifest.checkpoint_times.len() * manifest.kinds.len();
        if manifest.snapshot_files.len() != expected {
            return Err(Error::invalid(format!("manifest lists {} snapshots, expected {expected}", manifest.snapshot_files.len())));
        }
        // files are listed checkpoint by checkpoint, kinds in run order
        let mut files = manifest.snapshot_files.iter();
        for &t in &manifest.checkpoint_times {
            for &kind in &manifest.kinds {
                let name = files.next().expect("length checked");
                let out = dir.join(Path::new(name).with_extension("ppm"));
                render_one(&dir.join(name), kind, manifest.bounds, t, &out)?;
            }
        }
        return Ok(EXIT_OK);
    }
    let (Some(csv), Some(kind), Some(side)) = (&a.snapshot, a.model, a.box_side) else {
        return Err(Error::invalid("render needs --manifest, or --snapshot with --model and --box"));
    };
    let out = a.out.clone().unwrap_or_else(|| csv.with_extension("ppm"));
    render_one(csv, kind, LatticeBox::square(side)?, 0.0, &out)?;
    Ok(EXIT_OK)
}

pub fn cmd_mu(a: &MuArgs) -> Result<i32> {
    a.params.validate()?;
    let m = mu_estimate(a.params.seed, a.direction, a.n, a.replicates)?;
    emit_json(a.out.as_deref(), &m)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TraceOutput {
    seed: u64,
    site: Site,
    t: f64,
    terminus: Site,
    jumps: usize,
    hostile_growth: CellState,
    hostile_competition: CellState,
    competition: CellState,
    potential_ancestors: Vec<Site>,
}

pub fn cmd_trace(a: &TraceArgs) -> Result<i32> {
    a.params.validate()?;
    let side = a.box_side.unwrap_or_else(|| BoxPolicy::Default.side(a.t)).max(a.x.max(a.y));
    let bounds = LatticeBox::square(side)?;
    let window = EventWindow::new(bounds, a.t, a.params.seed)?;
    let z = Site::new(a.x, a.y);
    let mut dual = DualEngine::new(window);
    let trace = dual.trace_voter_path(z, a.t)?;
    let init = |k| init_default(k, bounds);
    let out = TraceOutput {
        seed: a.params.seed,
        site: z,
        t: a.t,
        terminus: trace.terminus,
        jumps: trace.jumps(),
        hostile_growth: dual.voter_color(z, a.t, &init(ModelKind::HostileGrowth)?)?,
        hostile_competition: dual.voter_color(z, a.t, &init(ModelKind::HostileCompetition)?)?,
        competition: dual.competition_color(z, a.t, &init(ModelKind::Competition)?)?,
        potential_ancestors: dual.potential_ancestors(z, a.t, &init(ModelKind::Richardson)?)?.members,
    };
    fs::create_dir_all(&a.out)?;
    let mut w = create(&a.out.join("trace.csv"))?;
    trace.write_csv(&mut w)?;
    w.flush()?;
    write_json(&a.out.join("trace.json"), &out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        main_with_args(std::iter::once("orcomp").chain(args.iter().copied()))
    }

    #[test]
    fn config_errors_exit_with_three() {
        assert_eq!(code(&["simulate", "--model", "nope", "--t", "1"]), EXIT_CONFIG);
        assert_eq!(code(&["verify", "coupling", "--alpha", "0.4"]), EXIT_CONFIG);
        assert_eq!(code(&["verify", "unknown"]), EXIT_CONFIG);
        assert_eq!(code(&["mu", "--epsilon", "1.0"]), EXIT_CONFIG);
        assert_eq!(code(&["render", "--snapshot", "/nonexistent.csv", "--model", "competition", "--box", "4"]), EXIT_CONFIG);
    }

    #[test]
    fn help_exits_cleanly() {
        assert_eq!(code(&["--help"]), EXIT_OK);
    }
}
