//! The `fracl` command line: argument parsing, config-file merging and
//! command dispatch. Exit codes: 0 success, 1 i/o failure, 2 usage error,
//! 3 divergence.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dynamics::{EquilibriumSpec, Family};
use crate::error::Error;
use crate::gamma::gamma;
use crate::integrator::{
    detect_convergence, integrate, IntegratorConfig, Trajectory, DEFAULT_CONVERGENCE_TOL,
    DEFAULT_CONVERGENCE_WINDOW,
};
use crate::output::{parse_key_values, trajectory_csv, trajectory_svg, RunManifest};
use crate::report::{
    existence_report, reproduce_table, stability_report, sweep, sweep_csv, table_csv, table_json,
    table_text,
};
use crate::types::{ControlParams, FractionalOrder, State3};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fracl",
    version,
    about = "Fractional-order Lagrange system: stability analysis and fractional Euler simulation"
)]
struct Cli {
    /// key=value file mirroring the long flags; flags on the command line win.
    /// A run manifest is a valid config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the controlled system with the fractional Euler scheme and write a j,t,x1,x2,x3 CSV.
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Eigenvalues, Matignon margins and verdict at one equilibrium.
    #[command(allow_negative_numbers = true)]
    Stability(StabilityArgs),
    /// Verdict and closed-form spectrum over a grid of m values.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Recompute the published table of controls, equilibria and eigenvalues.
    #[command(allow_negative_numbers = true)]
    Table(TableArgs),
    /// Lipschitz constant of the right-hand side on a box around x0.
    #[command(allow_negative_numbers = true)]
    Existence(ExistenceArgs),
    /// Print Gamma(x).
    #[command(allow_negative_numbers = true)]
    Gamma(GammaArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    E0,
    E1,
    E2,
    E3,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::E0 => Family::E0,
            FamilyArg::E1 => Family::E1,
            FamilyArg::E2 => Family::E2,
            FamilyArg::E3 => Family::E3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    Literal,
    Anchored,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Literal => "literal",
            Mode::Anchored => "anchored",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Table => "table",
        }
    }
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got '{s}'"));
    }
    let mut out = [0.0f64; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| format!("'{p}' is not a number"))?;
        if !o.is_finite() {
            return Err(format!("'{p}' is not finite"));
        }
    }
    Ok(out)
}

fn fmt_triple(v: [f64; 3]) -> String {
    format!("{},{},{}", v[0], v[1], v[2])
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Fractional order q in (0, 1].
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 0.0)]
    c1: f64,
    #[arg(long, default_value_t = 0.0)]
    c2: f64,
    /// Start near this equilibrium family (x0 = e + eps).
    #[arg(long, value_enum, required_unless_present = "x0")]
    family: Option<FamilyArg>,
    #[arg(long, default_value_t = 0.0)]
    m: f64,
    /// Offset added to every component of the equilibrium.
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Per-component offset, overrides --eps.
    #[arg(long = "eps-vec", value_parser = parse_triple, allow_hyphen_values = true, value_name = "A,B,C")]
    eps_vec: Option<[f64; 3]>,
    /// Explicit initial state.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, conflicts_with = "family", value_name = "A,B,C")]
    x0: Option<[f64; 3]>,
    /// Anchor for --mode anchored; defaults to the equilibrium point.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, value_name = "A,B,C")]
    target: Option<[f64; 3]>,
    #[arg(long, default_value_t = 0.01)]
    h: f64,
    #[arg(long, default_value_t = 500)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Mode::Literal)]
    mode: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also plot (n, x_i(n)) for each component.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StabilityArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 0.0)]
    m: f64,
    #[arg(long, default_value_t = 0.0)]
    c1: f64,
    #[arg(long, default_value_t = 0.0)]
    c2: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, value_enum, default_value_t = Mode::Literal)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 0.0)]
    c1: f64,
    #[arg(long, default_value_t = 0.0)]
    c2: f64,
    #[arg(long)]
    q: f64,
    #[arg(long = "m-min")]
    m_min: f64,
    #[arg(long = "m-max")]
    m_max: f64,
    /// Grid points, including both ends.
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Order used for the verdict column.
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExistenceArgs {
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, default_value = "0,0,0", value_name = "A,B,C")]
    x0: [f64; 3],
    #[arg(long)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GammaArgs {
    x: f64,
}

enum Failure {
    Usage(String),
    Io(String),
    Diverged(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => Failure::Io(e.to_string()),
            Error::Diverged(d) => {
                Failure::Diverged(format!("trajectory diverged at step {}", d.step))
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run(args: Vec<String>) -> i32 {
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Stability(a) => cmd_stability(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Table(a) => cmd_table(a),
        Command::Existence(a) => cmd_existence(a),
        Command::Gamma(a) => cmd_gamma(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            EXIT_IO
        }
        Err(Failure::Diverged(m)) => {
            eprintln!("error: {m}");
            EXIT_DIVERGED
        }
    }
}

/// Appends `--key=value` for every config entry whose flag is not already on
/// the command line. The `command` key supplies the subcommand when none is
/// given; `version` is informational.
fn merge_config(mut args: Vec<String>) -> Result<Vec<String>, String> {
    let mut path = None;
    let mut i = 1;
    while i < args.len() {
        if args[i] == "--config" {
            path = Some(args.get(i + 1).ok_or("--config needs a path")?.clone());
            i += 2;
            continue;
        }
        if let Some(p) = args[i].strip_prefix("--config=") {
            path = Some(p.to_string());
        }
        i += 1;
    }
    let Some(path) = path else { return Ok(args) };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let entries = parse_key_values(&text).map_err(|e| format!("{path}: {e}"))?;

    let subcommands = [
        "simulate",
        "stability",
        "sweep",
        "table",
        "existence",
        "gamma",
    ];
    let present = args
        .iter()
        .skip(1)
        .find(|a| subcommands.contains(&a.as_str()))
        .cloned();
    let mut command = present.clone();
    let mut extra = Vec::new();
    for (key, value) in entries {
        match key.as_str() {
            "command" => match &command {
                Some(c) if *c != value => {
                    return Err(format!("config is for '{value}' but the command is '{c}'"));
                }
                Some(_) => {}
                None => command = Some(value),
            },
            "version" => {}
            _ => {
                let flag = format!("--{key}");
                let given = args
                    .iter()
                    .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
                if !given {
                    extra.push(format!("{flag}={value}"));
                }
            }
        }
    }
    if present.is_none() {
        match command {
            Some(c) => args.push(c),
            None => return Err("no subcommand given and the config has no 'command' key".into()),
        }
    }
    args.extend(extra);
    Ok(args)
}

fn order(q: f64) -> Result<FractionalOrder, Failure> {
    FractionalOrder::new(q).map_err(Failure::from)
}

fn write_output(out: Option<&Path>, content: &str, manifest: &RunManifest) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, content)?;
            fs::write(
                RunManifest::sidecar_path(&path.to_string_lossy()),
                manifest.to_text(),
            )?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn cmd_simulate(a: SimulateArgs) -> Result<(), Failure> {
    let q = order(a.q)?;
    let mut manifest = RunManifest::new("simulate")
        .param("q", a.q)
        .param("c1", a.c1)
        .param("c2", a.c2)
        .param("mode", a.mode.as_str())
        .param("h", a.h)
        .param("steps", a.steps);

    let (x0, equilibrium) = match (a.x0, a.family) {
        (Some(x0), _) => {
            manifest = manifest.param("x0", fmt_triple(x0));
            (State3::from_array(x0), None)
        }
        (None, Some(fam)) => {
            let spec = EquilibriumSpec::new(fam.into(), a.m);
            let offset = a.eps_vec.unwrap_or([a.eps; 3]);
            manifest = manifest
                .param("family", spec.family)
                .param("m", a.m)
                .param("eps", a.eps);
            if let Some(v) = a.eps_vec {
                manifest = manifest.param("eps-vec", fmt_triple(v));
            }
            (
                spec.point() + State3::from_array(offset),
                Some(spec.point()),
            )
        }
        (None, None) => return Err(Failure::Usage("either --x0 or --family is required".into())),
    };

    let controls = match a.mode {
        Mode::Literal => ControlParams::literal(a.c1, a.c2),
        Mode::Anchored => {
            let target = match (a.target, equilibrium) {
                (Some(t), _) => State3::from_array(t),
                (None, Some(e)) => e,
                (None, None) => {
                    return Err(Failure::Usage(
                        "--mode anchored with --x0 needs --target".into(),
                    ));
                }
            };
            ControlParams::anchored(a.c1, a.c2, target)
        }
    };
    if let Some(t) = a.target {
        manifest = manifest.param("target", fmt_triple(t));
    }
    if let Some(out) = &a.out {
        manifest = manifest.param("out", path_str(out));
    }
    if let Some(svg) = &a.svg {
        manifest = manifest.param("svg", path_str(svg));
    }

    let cfg = IntegratorConfig::new(q, a.h, a.steps, x0, controls)?;
    let (traj, diverged) = match integrate(&cfg) {
        Ok(t) => (t, None),
        Err(Error::Diverged(d)) => {
            let step = d.step;
            (d.partial, Some(step))
        }
        Err(e) => return Err(e.into()),
    };

    write_output(a.out.as_deref(), &trajectory_csv(&traj), &manifest)?;
    if let Some(svg) = &a.svg {
        fs::write(svg, trajectory_svg(&traj, Some(&manifest)))?;
    }
    if let Some(step) = diverged {
        return Err(Failure::Diverged(format!(
            "trajectory left |x_i| <= 1e12 at step {step}; wrote {} finite samples",
            traj.len()
        )));
    }
    summarize(&traj, &controls);
    Ok(())
}

fn summarize(traj: &Trajectory, controls: &ControlParams) {
    let last = traj.last();
    let anchor = controls.anchor();
    let conv = detect_convergence(
        traj,
        anchor,
        DEFAULT_CONVERGENCE_TOL,
        DEFAULT_CONVERGENCE_WINDOW,
    );
    let sci = |x: State3| format!("({:.6e}, {:.6e}, {:.6e})", x.x1, x.x2, x.x3);
    eprintln!(
        "steps={} T={} coefficient={} final={} anchor={} distance={:.6e} convergence={:?}",
        traj.len() - 1,
        traj.config.horizon(),
        traj.coefficient,
        sci(last.x),
        sci(anchor),
        last.x.distance(anchor),
        conv
    );
}

fn cmd_stability(a: StabilityArgs) -> Result<(), Failure> {
    let q = order(a.q)?;
    let spec = EquilibriumSpec::new(a.family.into(), a.m);
    let report = stability_report(spec, a.c1, a.c2, q, a.mode == Mode::Anchored);
    let content = match a.format {
        Format::Json => report.to_json(),
        Format::Table => report.to_text(),
        Format::Csv => {
            return Err(Failure::Usage(
                "stability supports --format json or table".into(),
            ))
        }
    };
    let mut manifest = RunManifest::new("stability")
        .param("family", spec.family)
        .param("m", a.m)
        .param("c1", a.c1)
        .param("c2", a.c2)
        .param("q", a.q)
        .param("mode", a.mode.as_str())
        .param("format", a.format.as_str());
    if let Some(out) = &a.out {
        manifest = manifest.param("out", path_str(out));
    }
    write_output(a.out.as_deref(), &content, &manifest)
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Failure> {
    let q = order(a.q)?;
    let rows = sweep(a.family.into(), a.c1, a.c2, q, a.m_min, a.m_max, a.points)?;
    let content = match a.format {
        Format::Csv | Format::Table => sweep_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialise") + "\n",
    };
    let mut manifest = RunManifest::new("sweep")
        .param("family", Family::from(a.family))
        .param("c1", a.c1)
        .param("c2", a.c2)
        .param("q", a.q)
        .param("m-min", a.m_min)
        .param("m-max", a.m_max)
        .param("points", a.points)
        .param("format", a.format.as_str());
    if let Some(out) = &a.out {
        manifest = manifest.param("out", path_str(out));
    }
    write_output(a.out.as_deref(), &content, &manifest)
}

fn cmd_table(a: TableArgs) -> Result<(), Failure> {
    let rows = reproduce_table(order(a.q)?);
    let content = match a.format {
        Format::Table => table_text(&rows),
        Format::Json => table_json(&rows),
        Format::Csv => table_csv(&rows),
    };
    let mut manifest = RunManifest::new("table")
        .param("q", a.q)
        .param("format", a.format.as_str());
    if let Some(out) = &a.out {
        manifest = manifest.param("out", path_str(out));
    }
    write_output(a.out.as_deref(), &content, &manifest)
}

fn cmd_existence(a: ExistenceArgs) -> Result<(), Failure> {
    let report = existence_report(State3::from_array(a.x0), a.delta)?;
    let content = match a.format {
        Format::Json => report.to_json(),
        Format::Table => report.to_text(),
        Format::Csv => {
            return Err(Failure::Usage(
                "existence supports --format json or table".into(),
            ))
        }
    };
    let mut manifest = RunManifest::new("existence")
        .param("x0", fmt_triple(a.x0))
        .param("delta", a.delta)
        .param("format", a.format.as_str());
    if let Some(out) = &a.out {
        manifest = manifest.param("out", path_str(out));
    }
    write_output(a.out.as_deref(), &content, &manifest)
}

fn cmd_gamma(a: GammaArgs) -> Result<(), Failure> {
    println!("{}", gamma(a.x)?);
    Ok(())
}
