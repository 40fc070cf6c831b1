//! `hawk`: play, tournament, certify, calibrate, render and replay.
//!
//! Exit codes: 0 Alice wins (ALICE_DEFAULT or TARGET_CERTIFIED, or a
//! successful non-match command), 2 BOB_WITNESS, 3 INCONCLUSIVE, 4 no
//! calibration grid value passes, 64 invalid config or usage, 65 unreadable
//! or inconsistent input data.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hawk_core::diophantine::{badness_score, certify_ball, Params};
use hawk_core::geometry::{Ball, Point2};
use hawk_core::harness::calibrate::{densest_violation, params_snippet, run_calibration};
use hawk_core::harness::config::{prepare, ConfigError, MatchConfig};
use hawk_core::harness::render::render_svg;
use hawk_core::harness::runner::{replay, run_match, RunError, Trace};
use hawk_core::harness::tournament::{prepare_cells, run_tournament, table, TournamentConfig};
use hawk_core::scalar::{Scalar, DEFAULT_PRECISION};

// Like `print!`, but a closed pipe ends output quietly instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($arg)*);
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

const EXIT_CALIBRATION: u8 = 4;
const EXIT_CONFIG: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser, Debug)]
#[command(name = "hawk", version, about = "Hyperplane games and Bad(s,t) certification")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Match, tournament or calibration config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config and HAWK_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Working precision in bits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Denominator cap for enumeration.
    #[arg(long = "q-cap", global = true)]
    q_cap: Option<u64>,
    /// Output path: trace file, trace directory, params file or SVG.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play one match and print the report.
    Play,
    /// Play every cell of a matrix and print the summary table.
    Tournament,
    /// Badness bound at a point, or certification of a ball.
    Certify(CertifyArgs),
    /// Search the ε grid and persist the result.
    Calibrate,
    /// Draw a trace as SVG.
    Render {
        trace: PathBuf,
        /// Maximum number of stage panels.
        #[arg(long, default_value_t = 12)]
        panels: usize,
    },
    /// Re-adjudicate a trace and compare it byte for byte.
    Replay { trace: PathBuf },
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Point `x y`.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], conflicts_with_all = ["ball", "trace"])]
    point: Option<Vec<String>>,
    /// Ball `x y r`.
    #[arg(long, num_args = 3, value_names = ["X", "Y", "R"], conflicts_with = "trace")]
    ball: Option<Vec<String>>,
    /// Final ball of a trace, with the trace's parameters.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Resolution Q.
    #[arg(long, short = 'q', default_value_t = 1000)]
    q: u64,
    #[arg(long, default_value = "1/2")]
    s: String,
    #[arg(long)]
    t: Option<String>,
    #[arg(long, default_value = "2^-40")]
    epsilon: String,
}

enum Failure {
    Config(String),
    Data(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(c) => Failure::Config(c.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn config_text(g: &Global) -> Result<String, Failure> {
    let path = g
        .config
        .as_ref()
        .ok_or_else(|| Failure::Config("--config is required".into()))?;
    read(path).map_err(|f| match f {
        Failure::Data(m) => Failure::Config(m),
        other => other,
    })
}

fn apply_overrides(c: &mut MatchConfig, g: &Global) -> Result<(), Failure> {
    c.apply_env()?;
    if let Some(s) = g.seed {
        c.run.seed = s;
    }
    if let Some(p) = g.precision {
        c.run.precision = p;
    }
    if let Some(q) = g.q_cap {
        c.params.q_cap = q;
    }
    Ok(())
}

fn load_config(g: &Global) -> Result<MatchConfig, Failure> {
    let mut c = MatchConfig::parse(&config_text(g)?)?;
    apply_overrides(&mut c, g)?;
    Ok(c)
}

fn play(g: &Global) -> Result<u8, Failure> {
    let mut setup = prepare(&load_config(g)?)?;
    if setup.needs_calibration() {
        let report = run_calibration(&setup).map_err(|e| Failure::Data(e.to_string()))?;
        setup = setup.with_epsilon(report.epsilon)?;
    }
    let result = run_match(&setup)?;
    let out = g.out.clone().unwrap_or_else(|| PathBuf::from("trace.jsonl"));
    write(&out, &result.trace)?;
    out!("{}", result.report(&setup));
    outln!("trace: {}", out.display());
    Ok(result.verdict.kind.exit_code() as u8)
}

fn tournament(g: &Global) -> Result<u8, Failure> {
    let mut tc = TournamentConfig::parse(&config_text(g)?)?;
    apply_overrides(&mut tc.base, g)?;
    let started = Instant::now();
    let setups = prepare_cells(&tc)?;
    let outcome = run_tournament(setups)?;
    eprintln!("wall time: {:.3}s", started.elapsed().as_secs_f64());
    if let Some(dir) = &g.out {
        fs::create_dir_all(dir).map_err(|e| Failure::Data(format!("{}: {e}", dir.display())))?;
        for (i, (s, r)) in outcome.setups.iter().zip(&outcome.results).enumerate() {
            let name = format!("{i:04}-{}-{}-{}.jsonl", r.alice, r.bob, s.seed());
            write(&dir.join(name), &r.trace)?;
        }
    }
    out!("{}", table(&outcome.rows));
    Ok(0)
}

fn certify(g: &Global, a: &CertifyArgs) -> Result<u8, Failure> {
    let prec = g.precision.unwrap_or(DEFAULT_PRECISION);
    let sc = |s: &str| Scalar::parse(s, prec).map_err(|e| Failure::Config(e.to_string()));
    let build_params = || -> Result<Params, Failure> {
        let one = Scalar::from_i64(1, 64);
        let (s, eps) = (sc(&a.s)?, sc(&a.epsilon)?);
        let q_cap = g.q_cap.unwrap_or(a.q).max(a.q);
        match &a.t {
            Some(t) => Params::with_weights(s, sc(t)?, eps, one.clone(), Scalar::from_i64(2, 64), q_cap, prec),
            None => Params::new(s, eps, one, Scalar::from_i64(2, 64), q_cap, prec),
        }
        .map_err(|e| Failure::Config(e.to_string()))
    };
    if let Some(path) = &a.trace {
        let trace = Trace::parse(&read(path)?)?;
        let t = trace.rebuild()?;
        let (params, q) = trace.params()?;
        let report = certify_ball(t.current_ball(), q, &params);
        out!("{}", report.text());
        let c = t.current_ball().center();
        let b = badness_score(&c.x, &c.y, q, &params);
        outln!(
            "center badness: >= {:.6e} (minimizer q = {})",
            b.score.lo().to_f64(),
            b.minimizer
        );
        return Ok(0);
    }
    let params = build_params()?;
    if let Some(v) = &a.ball {
        let ball =
            Ball::new(Point2::new(sc(&v[0])?, sc(&v[1])?), sc(&v[2])?).map_err(|e| Failure::Config(e.to_string()))?;
        out!("{}", certify_ball(&ball, a.q, &params).text());
        return Ok(0);
    }
    let v = a
        .point
        .as_ref()
        .ok_or_else(|| Failure::Config("give --point, --ball or --trace".into()))?;
    let (x, y) = (sc(&v[0])?, sc(&v[1])?);
    let b = badness_score(&x, &y, a.q, &params);
    outln!("point: ({}, {})", v[0], v[1]);
    outln!("Q: {}", a.q);
    outln!(
        "bound: [{:.17e}, {:.17e}]",
        b.score.lo().to_f64(),
        b.score.hi().to_f64()
    );
    outln!("minimizer: q = {}", b.minimizer);
    Ok(0)
}

fn calibrate(g: &Global) -> Result<u8, Failure> {
    let setup = prepare(&load_config(g)?)?;
    let report = run_calibration(&setup).map_err(|e| Failure::Data(e.to_string()))?;
    outln!("epsilon: {}", report.epsilon);
    outln!("passed: {}", report.passed);
    outln!("probes skipped (not in B_m): {}", report.skipped);
    outln!("violations: {}", report.violations.len());
    if !report.passed {
        if let Some(v) = densest_violation(&report) {
            outln!(
                "densest violating class: probe {} generation {} delta {} rects {} fitted {:.6e} bound {:.6e}",
                v.probe,
                v.generation,
                v.delta,
                v.rects,
                v.fitted_halfwidth,
                v.bound
            );
        }
        return Ok(EXIT_CALIBRATION);
    }
    let out = g.out.clone().unwrap_or_else(|| PathBuf::from("epsilon.toml"));
    write(&out, &params_snippet(&report))?;
    outln!("params: {}", out.display());
    Ok(0)
}

fn render(g: &Global, trace: &Path, panels: usize) -> Result<u8, Failure> {
    let svg = render_svg(&read(trace)?, panels).map_err(|e| Failure::Data(e.to_string()))?;
    match &g.out {
        Some(out) => write(out, &svg)?,
        None => out!("{svg}"),
    }
    Ok(0)
}

fn replay_cmd(trace: &Path) -> Result<u8, Failure> {
    let r = replay(&read(trace)?)?;
    outln!("verdict: {}", r.verdict.kind);
    outln!("identical adjudication: {}", r.same_adjudication);
    outln!("identical bytes: {}", r.same_bytes);
    if !(r.same_adjudication && r.same_bytes) {
        return Err(Failure::Data("replay diverges from the recorded trace".into()));
    }
    Ok(r.verdict.kind.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = &cli.global;
    let result = match &cli.command {
        Command::Play => play(g),
        Command::Tournament => tournament(g),
        Command::Certify(a) => certify(g, a),
        Command::Calibrate => calibrate(g),
        Command::Render { trace, panels } => render(g, trace, *panels),
        Command::Replay { trace } => replay_cmd(trace),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(m)) => {
            eprintln!("hawk: invalid config: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Data(m)) => {
            eprintln!("hawk: {m}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
