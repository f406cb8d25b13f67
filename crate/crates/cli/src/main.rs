//! `polycover` command-line front end.
//!
//! Exit codes: 0 on success, 1 on invalid input or a failed check, 2 on
//! file-system errors. Results go to stdout and files, timings to stderr.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polycover::coverage::{solve_cover, verify_cover, CoverOptions};
use polycover::gadget::{assemble_structure, skeleton_samples};
use polycover::geometry::FootprintKind;
use polycover::hardness::{
    bound_report, residual_sweep, solve_junction_system, JunctionSystem, Reading, Variant, BRACKET_HI, BRACKET_LO,
};
use polycover::io::{self, IoError, Scene};
use polycover::oracle::{continuous_cover_bounds, ratio_csv, ratio_experiment, RatioConfig};
use polycover::sampling::SampleMode;

/// `println!` that tolerates a closed stdout (e.g. piped into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser, Debug)]
#[command(
    name = "polycover",
    version,
    about = "Cover polygons with k equal squares or circles"
)]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "POLYCOVER_THREADS", value_parser = clap::value_parser!(usize))]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample, cluster and inflate: write a k-footprint cover.
    Cover(CoverArgs),
    /// Check a solution file against a polygon.
    Verify(VerifyArgs),
    /// Bracket the optimal cover length of a small instance.
    Oracle(OracleArgs),
    /// Compare solver and oracle over a directory of polygons.
    Ratio(RatioArgs),
    /// Build a gadget layout and render it.
    Gadget(GadgetArgs),
    /// Print the hardness constants, or one system's residuals.
    Bounds(BoundsArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Circle,
    Square,
}

impl From<Kind> for FootprintKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Circle => FootprintKind::Circle,
            Kind::Square => FootprintKind::AxisSquare,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Boundary,
    Region,
}

impl From<Mode> for SampleMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Boundary => SampleMode::Boundary,
            Mode::Region => SampleMode::Region,
        }
    }
}

#[derive(Args, Debug)]
struct CoverArgs {
    #[arg(long)]
    polygon: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum, default_value = "boundary")]
    mode: Mode,
    /// Only place centers inside the polygon (on its boundary in boundary mode).
    #[arg(long)]
    constrained: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Shuffle the samples with this seed before clustering.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    polygon: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    /// Verification density; defaults to half the solution's eps.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    polygon: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    resolution: f64,
    #[arg(long, value_enum, default_value = "boundary")]
    mode: Mode,
}

#[derive(Args, Debug)]
struct RatioArgs {
    /// Directory of polygon JSON files.
    #[arg(long)]
    suite: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum, default_value = "boundary")]
    mode: Mode,
    /// Oracle resolution is the larger bbox extent divided by this.
    #[arg(long, default_value_t = 40.0)]
    grid_steps: f64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GadgetArgs {
    #[arg(long)]
    layout: PathBuf,
    #[arg(long)]
    out_svg: PathBuf,
    /// Sample the skeleton at this density.
    #[arg(long, requires = "out_samples")]
    samples: Option<f64>,
    #[arg(long, requires = "samples")]
    out_samples: Option<PathBuf>,
    /// Overlay a hand pattern file.
    #[arg(long)]
    pattern: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Solve one system and print its unknowns.
    #[arg(long)]
    variant: Option<Variant>,
    /// Print the reduced residual along a sweep of ell as CSV.
    #[arg(long, requires = "variant")]
    sweep: bool,
    /// Use the constants as printed instead of the drawing readings.
    #[arg(long, requires = "variant")]
    printed: bool,
    #[arg(long, default_value_t = 300, requires = "sweep")]
    steps: usize,
}

/// A failed command with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Display) -> Self {
        Self {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Self {
            code: if e.is_io() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn invalid<E: Display>(e: E) -> Failure {
    Failure::invalid(e)
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    std::fs::write(path, text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn cover(a: CoverArgs) -> CmdResult {
    let poly = io::read_polygon::<f64>(&a.polygon)?;
    let opts = CoverOptions::new(a.k as usize, a.eps, a.mode.into())
        .constrained(a.constrained)
        .seed(a.seed);
    let t = Instant::now();
    let out = solve_cover(&poly, a.kind.into(), &opts).map_err(invalid)?;
    let elapsed = t.elapsed();
    let sol = &out.solution;
    io::write_solution(sol, &a.out)?;
    if let Some(svg) = &a.svg {
        io::render_svg(
            &Scene {
                polygon: Some(&poly),
                samples: &out.samples.points,
                footprints: &sol.footprints,
                ..Scene::default()
            },
            svg,
        )?;
    }
    out!("kind: {}", sol.kind().map_err(invalid)?.name());
    out!("k: {}", sol.k());
    out!("length: {}", sol.length);
    out!("raw_cluster_radius: {}", sol.raw_cluster_radius);
    out!("samples: {}", out.samples.len());
    eprintln!("wall time: {:.3} s", elapsed.as_secs_f64());
    Ok(())
}

fn verify(a: VerifyArgs) -> CmdResult {
    let poly = io::read_polygon::<f64>(&a.polygon)?;
    let sol = io::read_solution::<f64>(&a.solution)?;
    let eps = a.eps.unwrap_or(sol.eps / 2.0);
    let t = Instant::now();
    let r = verify_cover(&poly, &sol, eps).map_err(invalid)?;
    eprintln!("wall time: {:.3} s", t.elapsed().as_secs_f64());
    out!("covered: {}", r.covered);
    out!("worst_gap: {}", r.worst_gap);
    out!("verify_eps: {}", r.verify_eps);
    out!("samples_checked: {}", r.samples_checked);
    if r.covered {
        Ok(())
    } else {
        Err(Failure::invalid(format!("not covered, worst gap {}", r.worst_gap)))
    }
}

fn oracle(a: OracleArgs) -> CmdResult {
    let poly = io::read_polygon::<f64>(&a.polygon)?;
    let t = Instant::now();
    let b =
        continuous_cover_bounds(&poly, a.k as usize, a.kind.into(), a.resolution, a.mode.into()).map_err(invalid)?;
    eprintln!("wall time: {:.3} s", t.elapsed().as_secs_f64());
    out!("lower: {}", b.lower);
    out!("upper: {}", b.upper);
    out!("method: {}", b.method.name());
    out!("resolution: {}", b.resolution);
    out!("samples: {}", b.samples);
    out!("verified: {}", b.verified);
    Ok(())
}

fn ratio(a: RatioArgs) -> CmdResult {
    let suite = io::read_suite::<f64>(&a.suite)?;
    if suite.is_empty() {
        return Err(Failure::invalid(format!("no polygon files in {}", a.suite.display())));
    }
    let cfg = RatioConfig {
        k: a.k as usize,
        kind: a.kind.into(),
        eps: a.eps,
        mode: a.mode.into(),
        grid_steps: a.grid_steps,
    };
    let t = Instant::now();
    let rows = ratio_experiment(&suite, &cfg).map_err(invalid)?;
    eprintln!("wall time: {:.3} s", t.elapsed().as_secs_f64());
    let csv = ratio_csv(&rows);
    match &a.out {
        Some(p) => write_file(p, &csv),
        None => {
            let _ = std::io::stdout().write_all(csv.as_bytes());
            Ok(())
        }
    }
}

fn gadget(a: GadgetArgs) -> CmdResult {
    let layout = io::read_layout::<f64>(&a.layout)?;
    let pattern = a.pattern.as_ref().map(io::read_pattern::<f64>).transpose()?;
    let t = Instant::now();
    let sk = assemble_structure(&layout).map_err(invalid)?;
    let samples = a
        .samples
        .map(|eps| skeleton_samples(&sk, eps))
        .transpose()
        .map_err(invalid)?;
    eprintln!("wall time: {:.3} s", t.elapsed().as_secs_f64());
    io::render_svg(
        &Scene {
            skeleton: Some(&sk),
            pattern: pattern.as_ref(),
            ..Scene::default()
        },
        &a.out_svg,
    )?;
    if let (Some(s), Some(path)) = (&samples, &a.out_samples) {
        io::write_samples(s, path)?;
    }
    let r = sk.structure_report();
    out!("variant: {}", layout.variant.name());
    out!("links: {}", sk.links.len());
    out!("junctions: {}", sk.junctions.len());
    out!("spine_segments: {}", sk.spine_segments.len());
    out!("bars: {}", sk.bars.len());
    out!("counts_ok: {}", r.counts_ok);
    out!("max_perpendicular_dot: {:e}", r.max_perpendicular_dot);
    out!("max_bisection_gap: {:e}", r.max_bisection_gap);
    out!("max_junction_dot_error: {:e}", r.max_junction_dot_error);
    if let Some(s) = &samples {
        out!("samples: {}", s.len());
    }
    Ok(())
}

fn bounds(a: BoundsArgs) -> CmdResult {
    let Some(variant) = a.variant else {
        out!("variant,bound,computed_ell,residual,reported_bound,guarantee,gap");
        for r in bound_report() {
            out!(
                "{},{:.3},{:.6},{:.1e},{:.6},{:.6},{:.3}",
                r.variant,
                r.bound,
                r.computed_ell,
                r.residual,
                r.reported_bound,
                r.guarantee,
                r.gap
            );
        }
        return Ok(());
    };
    let reading = if a.printed { Reading::Printed } else { Reading::Drawing };
    let sys = JunctionSystem::new(variant, reading);
    if a.sweep {
        out!("ell,residual");
        for (x, y) in residual_sweep(&sys, BRACKET_LO, BRACKET_HI, a.steps) {
            out!("{x},{y}");
        }
        return Ok(());
    }
    let r = solve_junction_system(&sys).map_err(invalid)?;
    out!("variant: {variant}");
    out!("ell: {}", r.ell);
    out!("residual: {:e}", r.residual);
    if let Some(cap) = r.applied_cap {
        out!("cap: {cap}");
    }
    out!("reported_bound: {}", r.reported_bound);
    out!("roots: {:?}", r.roots);
    out!("ambiguous: {}", r.ambiguous);
    for (name, v) in &r.unknowns {
        out!("{name}: {v}");
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(invalid)?;
    }
    match cli.command {
        Command::Cover(a) => cover(a),
        Command::Verify(a) => verify(a),
        Command::Oracle(a) => oracle(a),
        Command::Ratio(a) => ratio(a),
        Command::Gadget(a) => gadget(a),
        Command::Bounds(a) => bounds(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
