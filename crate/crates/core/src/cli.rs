//! Command-line front end: `spline`, `eigen`, `bands`, `dispersion` and
//! `validate`, each writing CSV or JSON.
//!
//! Option values come from flags, then a flat JSON `--config` file, then
//! defaults. Exit status is 0 on success, 1 on a numerical failure and 2 on
//! a usage or configuration error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{self, FourierTerm, Method};
use crate::error::Error;
use crate::floquet::{FloquetProblem, Mode, DEFAULT_SCAN_STEP};
use crate::potentials::{parse_tabulated, Potential, PotentialKind};
use crate::spline::{Grid, SplineInterpolant};

pub const DEFAULT_N: usize = 100;
pub const DEFAULT_M: usize = 5;
pub const DEFAULT_POINTS: usize = 20;
/// Largest `|Δ - 2cos(αT)|` at which `eigen` reports a near-tangency.
pub const EIGEN_TANGENCY: f64 = 1e-3;
pub const M_RANGE: std::ops::RangeInclusive<usize> = 3..=12;

#[derive(Debug, Parser)]
#[command(name = "spline-floquet", version, about = "Band structure of periodic 1D Schrödinger problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Fit the variational spline to a test function or potential.
    Spline,
    /// Energies admitting a Floquet solution with exponent i·alpha.
    Eigen,
    /// Allowed bands and gaps.
    Bands,
    /// (E, alpha) samples inside every band.
    Dispersion,
    /// Mathieu eigenvalue grid and eigenfunction error tables.
    Validate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Spline => "spline",
            Command::Eigen => "eigen",
            Command::Bands => "bands",
            Command::Dispersion => "dispersion",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// free | harmonic | quartic | power:<s> | mathieu:<q> | file:<path>
    #[arg(long, global = true)]
    pub potential: Option<String>,
    /// Test function for `spline`: abs | sin2pi | runge | square
    #[arg(long, global = true)]
    pub target: Option<String>,
    /// Number of pieces in one period.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Taylor order of the per-piece series (3..=12).
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Use exact local Taylor coefficients of the potential instead of the spline.
    #[arg(long, global = true)]
    pub cac: bool,
    /// Floquet exponent is i·alpha.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Energy interval to search.
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub range: Option<Vec<f64>>,
    /// Energy scan spacing.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Dispersion samples per band.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Also emit eigenfunction nodes (`eigen`).
    #[arg(long, global = true)]
    pub eigenfunctions: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat JSON object with any of the option names.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub potential: Option<String>,
    pub target: Option<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub cac: Option<bool>,
    #[serde(alias = "alpha")]
    pub lambda_alpha: Option<f64>,
    #[serde(rename = "E_range", alias = "range")]
    pub e_range: Option<(f64, f64)>,
    #[serde(alias = "step")]
    pub scan_step: Option<f64>,
    pub points: Option<usize>,
    pub eigenfunctions: Option<bool>,
    #[serde(alias = "format")]
    pub output_format: Option<Format>,
    #[serde(alias = "out")]
    pub output_path: Option<PathBuf>,
}

/// Fully resolved and validated options.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub potential: Option<String>,
    pub target: Option<String>,
    pub n: usize,
    pub m: usize,
    pub cac: bool,
    pub lambda_alpha: f64,
    pub e_range: Option<(f64, f64)>,
    pub scan_step: f64,
    pub points: usize,
    pub eigenfunctions: bool,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl RunConfig {
    /// Merges flags over the config file over defaults and validates.
    pub fn resolve(command: Command, flags: Options) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str::<ConfigFile>(&text)
                    .map_err(|e| usage(format!("bad config {}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        if let Some(c) = &file.command {
            if c != command.name() {
                return Err(usage(format!("config is for '{c}' but the command is '{}'", command.name())));
            }
        }
        let e_range = match flags.range {
            Some(v) => Some((v[0], v[1])),
            None => file.e_range,
        };
        let potential_spec = flags.potential.or(file.potential);
        let cfg = RunConfig {
            command,
            potential: potential_spec.clone(),
            target: flags.target.or(file.target),
            n: match flags.n.or(file.n) {
                Some(n) => n,
                None => table_pieces(potential_spec.as_deref())?.unwrap_or(DEFAULT_N),
            },
            m: flags.m.or(file.m).unwrap_or(DEFAULT_M),
            cac: flags.cac || file.cac.unwrap_or(false),
            lambda_alpha: flags.alpha.or(file.lambda_alpha).unwrap_or(0.0),
            e_range,
            scan_step: flags.step.or(file.scan_step).unwrap_or(DEFAULT_SCAN_STEP),
            points: flags.points.or(file.points).unwrap_or(DEFAULT_POINTS),
            eigenfunctions: flags.eigenfunctions || file.eigenfunctions.unwrap_or(false),
            output_format: flags.format.or(file.output_format).unwrap_or(Format::Csv),
            output_path: flags.out.or(file.output_path),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n < 1 {
            return Err(usage("n must be ≥ 1"));
        }
        if !M_RANGE.contains(&self.m) {
            return Err(usage(format!(
                "m must lie in {}..={} (got {})",
                M_RANGE.start(),
                M_RANGE.end(),
                self.m
            )));
        }
        if !(self.scan_step.is_finite() && self.scan_step > 0.0) {
            return Err(usage("step must be positive"));
        }
        if !self.lambda_alpha.is_finite() {
            return Err(usage("alpha must be finite"));
        }
        if let Some((lo, hi)) = self.e_range {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(usage(format!("range must satisfy LO ≤ HI (got {lo} {hi})")));
            }
        }
        Ok(())
    }

    fn range(&self) -> Result<(f64, f64), CliError> {
        self.e_range
            .ok_or_else(|| usage(format!("--range LO HI is required for {}", self.command.name())))
    }

    fn lambda(&self) -> Complex64 {
        Complex64::new(0.0, self.lambda_alpha)
    }

    fn load_potential(&self) -> Result<Potential, CliError> {
        let spec = self.potential.as_deref().unwrap_or("harmonic");
        load_potential(spec)
    }

    fn problem(&self) -> Result<FloquetProblem, CliError> {
        let potential = self.load_potential()?;
        let grid = potential.grid(self.n).map_err(|e| usage(e.to_string()))?;
        let mode = if self.cac { Mode::Cac { order: self.m } } else { Mode::Spline };
        FloquetProblem::new(potential, grid, self.m, mode).map_err(|e| match e {
            Error::Unsupported(_) | Error::InvalidInput(_) => usage(e.to_string()),
            other => other.into(),
        })
    }
}

/// Piece count of a `file:<path>` table, which is the default `n` for it.
fn table_pieces(spec: Option<&str>) -> Result<Option<usize>, CliError> {
    match spec {
        Some(s) if s.starts_with("file:") => Ok(match load_potential(s)?.kind() {
            PotentialKind::Tabulated { values } => Some(values.len() - 1),
            _ => None,
        }),
        _ => Ok(None),
    }
}

/// Resolves a `--potential` descriptor, reading `file:<path>` tables.
pub fn load_potential(spec: &str) -> Result<Potential, CliError> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
        let (potential, _) = parse_tabulated(&text).map_err(|e| usage(format!("{path}: {e}")))?;
        return Ok(potential);
    }
    spec.parse::<Potential>().map_err(|e| usage(e.to_string()))
}

/// A named test function for `spline`, with its interval.
pub fn test_function(name: &str) -> Option<(fn(f64) -> f64, (f64, f64))> {
    let f: fn(f64) -> f64 = match name {
        "abs" => f64::abs,
        "sin2pi" => |x| (2.0 * std::f64::consts::PI * x).sin(),
        "runge" => |x| 1.0 / (1.0 + 25.0 * x * x),
        "square" => |x| x * x,
        _ => return None,
    };
    Some((f, (-1.0, 1.0)))
}

/// 17 significant digits, enough for an exact round trip.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// JSON numbers rendered with 17 significant digits.
fn jnum(x: f64) -> Value {
    if x.is_finite() {
        serde_json::from_str(&fmt_num(x)).unwrap_or(Value::Null)
    } else {
        Value::Null
    }
}

fn jopt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, jnum)
}

fn emit(cfg: &RunConfig, csv: impl FnOnce() -> String, json: impl FnOnce() -> Value) -> Result<(), CliError> {
    let text = match cfg.output_format {
        Format::Csv => csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json()).map_err(|e| CliError::Numerical(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    write_output(cfg.output_path.as_deref(), &text)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Numerical(e.to_string()))
        }
    }
}

fn cmd_spline(cfg: &RunConfig) -> Result<(), CliError> {
    let (target, interval, label): (Box<dyn Fn(f64) -> f64>, (f64, f64), String) =
        match (cfg.target.as_deref(), cfg.potential.as_deref()) {
            (Some(name), _) => {
                let (f, iv) = test_function(name)
                    .ok_or_else(|| usage(format!("unknown target '{name}' (expected abs, sin2pi, runge or square)")))?;
                (Box::new(f), iv, name.to_string())
            }
            (None, Some(_)) => {
                let p = cfg.load_potential()?;
                let iv = p.interval();
                let label = p.descriptor();
                (Box::new(move |x| p.value(x)), iv, label)
            }
            (None, None) => return Err(usage("spline needs --target or --potential")),
        };
    let grid = Grid::new(interval.0, interval.1, cfg.n).map_err(|e| usage(e.to_string()))?;
    let samples: Vec<f64> = grid.nodes().iter().map(|&x| target(x)).collect();
    let spline = SplineInterpolant::fit(&samples, &grid)?;
    let error = analysis::spline_interp_error(&target, interval, cfg.n)?;
    let lagrange = if cfg.n >= 2 && cfg.target.is_some() {
        Some(analysis::lagrange_global_error(&target, interval, cfg.n)?)
    } else {
        None
    };
    eprintln!("target {label} on [{}, {}], n = {}", interval.0, interval.1, cfg.n);
    eprintln!("spline mean-square error e = {}", fmt_num(error));
    if let Some(l) = lagrange {
        eprintln!("global Lagrange error      = {}", fmt_num(l));
    }

    const PER_PIECE: usize = 10;
    let total = cfg.n * PER_PIECE;
    let mut rows = Vec::with_capacity(total + 1);
    for i in 0..=total {
        let x = if i == total {
            interval.1
        } else {
            interval.0 + (interval.1 - interval.0) * i as f64 / total as f64
        };
        rows.push((x, spline.evaluate(x)?, target(x)));
    }
    emit(
        cfg,
        || {
            let mut t = Table::new(&["x", "S", "target"]);
            for (x, s, y) in &rows {
                t.push(vec![fmt_num(*x), fmt_num(*s), fmt_num(*y)]);
            }
            t.to_csv()
        },
        || {
            json!({
                "target": label,
                "interval": [jnum(interval.0), jnum(interval.1)],
                "n": cfg.n,
                "error": jnum(error),
                "lagrange_error": jopt(lagrange),
                "a_coeffs": spline.a_coeffs().iter().map(|&a| jnum(a)).collect::<Vec<_>>(),
                "points": rows.iter().map(|(x, s, y)| json!({"x": jnum(*x), "S": jnum(*s), "target": jnum(*y)})).collect::<Vec<_>>(),
            })
        },
    )
}

fn cmd_eigen(cfg: &RunConfig) -> Result<(), CliError> {
    let range = cfg.range()?;
    let problem = cfg.problem()?;
    let lambda = cfg.lambda();
    // near-tangent gap pairs count as one degenerate eigenvalue, like the
    // energy tolerance of `eigenfunction`
    let roots = problem
        .find_roots_with_tangency(lambda, range, cfg.scan_step, EIGEN_TANGENCY)
        .map_err(|e| usage(e.to_string()))?;
    eprintln!("{} eigenvalue(s) for λ = i·{} in [{}, {}]", roots.len(), cfg.lambda_alpha, range.0, range.1);

    let mut solutions = Vec::new();
    if cfg.eigenfunctions {
        for r in &roots {
            let sol = problem.eigenfunction(r.energy, lambda)?;
            let fit = analysis::fit_eigenfunction(&sol, &[FourierTerm::Constant, FourierTerm::Cos(1), FourierTerm::Sin(1)])?;
            eprintln!(
                "E = {}: parity {:?}, boundary residual {:.3e}, fit {:.6} + {:.6} cos + {:.6} sin",
                fmt_num(sol.energy),
                sol.parity,
                sol.boundary_residual,
                fit.constant(),
                fit.cosine(1),
                fit.sine(1)
            );
            solutions.push(sol);
        }
    }
    emit(
        cfg,
        || {
            if cfg.eigenfunctions {
                let mut t = Table::new(&["index", "E", "x", "y", "dy"]);
                for (i, s) in solutions.iter().enumerate() {
                    for node in &s.nodes {
                        t.push(vec![
                            i.to_string(),
                            fmt_num(s.energy),
                            fmt_num(node.x),
                            fmt_num(node.y),
                            fmt_num(node.dy),
                        ]);
                    }
                }
                t.to_csv()
            } else {
                let mut t = Table::new(&["index", "E", "degenerate", "residual"]);
                for (i, r) in roots.iter().enumerate() {
                    t.push(vec![
                        i.to_string(),
                        fmt_num(r.energy),
                        r.degenerate.to_string(),
                        fmt_num(r.residual),
                    ]);
                }
                t.to_csv()
            }
        },
        || {
            let eig: Vec<Value> = roots
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut v = json!({
                        "index": i,
                        "E": jnum(r.energy),
                        "degenerate": r.degenerate,
                        "residual": jnum(r.residual),
                    });
                    if let Some(s) = solutions.get(i) {
                        v["eigenfunction"] = json!({
                            "E": jnum(s.energy),
                            "parity": s.parity,
                            "normalization": s.normalization,
                            "boundary_residual": jnum(s.boundary_residual),
                            "nodes": s.nodes.iter().map(|n| json!([jnum(n.x), jnum(n.y), jnum(n.dy)])).collect::<Vec<_>>(),
                        });
                    }
                    v
                })
                .collect();
            json!({
                "potential": problem.potential().descriptor(),
                "n": cfg.n,
                "m": cfg.m,
                "alpha": jnum(cfg.lambda_alpha),
                "range": [jnum(range.0), jnum(range.1)],
                "eigenvalues": eig,
            })
        },
    )
}

fn cmd_bands(cfg: &RunConfig, dispersion_only: bool) -> Result<(), CliError> {
    let range = cfg.range()?;
    let problem = cfg.problem()?;
    let bs = problem
        .band_structure(range, cfg.scan_step, cfg.points)
        .map_err(|e| usage(e.to_string()))?;
    eprintln!("{} band(s), {} gap(s) in [{}, {}]", bs.bands.len(), bs.gaps.len(), range.0, range.1);
    emit(
        cfg,
        || {
            if dispersion_only {
                let mut t = Table::new(&["E", "alpha"]);
                for d in &bs.dispersion {
                    t.push(vec![fmt_num(d.energy), fmt_num(d.alpha)]);
                }
                t.to_csv()
            } else {
                let mut t = Table::new(&["band_index", "E_lo", "E_hi"]);
                for (i, b) in bs.bands.iter().enumerate() {
                    t.push(vec![i.to_string(), fmt_num(b.lower), fmt_num(b.upper)]);
                }
                t.to_csv()
            }
        },
        || {
            let iv = |v: &[crate::floquet::Interval]| {
                v.iter().map(|b| json!([jnum(b.lower), jnum(b.upper)])).collect::<Vec<_>>()
            };
            let disp: Vec<Value> = bs
                .dispersion
                .iter()
                .map(|d| json!({"band": d.band, "branch": d.branch, "E": jnum(d.energy), "alpha": jnum(d.alpha)}))
                .collect();
            if dispersion_only {
                json!({"period": jnum(problem.period()), "dispersion": disp})
            } else {
                json!({
                    "potential": problem.potential().descriptor(),
                    "n": cfg.n,
                    "m": cfg.m,
                    "range": [jnum(range.0), jnum(range.1)],
                    "bands": iv(&bs.bands),
                    "gaps": iv(&bs.gaps),
                    "dispersion": disp,
                })
            }
        },
    )
}

fn cmd_validate(cfg: &RunConfig) -> Result<(), CliError> {
    const Q: f64 = 0.2;
    let cells = analysis::mathieu_table(Q, &[3, 5, 7], &[50, 100])?;
    let methods = [
        Method::Spline(5),
        Method::Spline(7),
        Method::Cac(4),
        Method::Cac(5),
        Method::Cac(6),
        Method::Cac(7),
    ];
    let harmonic = analysis::eigenfunction_error_table(&Potential::harmonic(), &[0.324942, 10.2601, 39.8253], 100, &methods)?;
    let mathieu = analysis::eigenfunction_error_table(&Potential::mathieu(Q)?, &[1.19487, 4.01658, 9.002719], 100, &methods)?;
    let flagged = cells.iter().filter(|c| c.flagged).count();
    eprintln!("Mathieu q = {Q}: {flagged} of {} cells exceed ten times the published error", cells.len());

    let method_label = |m: Method| match m {
        Method::Spline(o) => format!("spline{o}"),
        Method::Cac(o) => format!("cac{o}"),
    };
    let parity_label = |p: crate::floquet::Parity| format!("{p:?}").to_lowercase();
    emit(
        cfg,
        || {
            let mut t = Table::new(&[
                "suite", "potential", "method", "m", "n", "k", "parity", "target", "computed", "value", "published", "flagged",
            ]);
            for c in &cells {
                t.push(vec![
                    "eigenvalue".into(),
                    format!("mathieu:{Q}"),
                    "spline".into(),
                    c.m.to_string(),
                    c.n.to_string(),
                    c.k.to_string(),
                    parity_label(c.parity),
                    fmt_num(c.reference),
                    fmt_opt(c.computed),
                    fmt_opt(c.percent_error),
                    fmt_opt(c.published),
                    c.flagged.to_string(),
                ]);
            }
            for (name, table) in [("harmonic", &harmonic), ("mathieu:0.2", &mathieu)] {
                for c in table.iter() {
                    t.push(vec![
                        "eigenfunction".into(),
                        name.into(),
                        method_label(c.method),
                        String::new(),
                        "100".into(),
                        String::new(),
                        "even".into(),
                        fmt_num(c.target),
                        fmt_opt(c.energy),
                        fmt_opt(c.error),
                        String::new(),
                        String::new(),
                    ]);
                }
            }
            t.to_csv()
        },
        || {
            let cell_json: Vec<Value> = cells
                .iter()
                .map(|c| {
                    json!({
                        "m": c.m, "n": c.n, "k": c.k, "parity": parity_label(c.parity),
                        "reference": jnum(c.reference), "computed": jopt(c.computed),
                        "percent_error": jopt(c.percent_error), "published": jopt(c.published),
                        "flagged": c.flagged,
                    })
                })
                .collect();
            let err_json = |table: &[analysis::ErrorCell]| {
                table
                    .iter()
                    .map(|c| {
                        json!({
                            "method": method_label(c.method), "target": jnum(c.target),
                            "E": jopt(c.energy), "error": jopt(c.error),
                        })
                    })
                    .collect::<Vec<_>>()
            };
            json!({
                "mathieu_eigenvalues": cell_json,
                "eigenfunction_errors": {
                    "harmonic": err_json(&harmonic),
                    "mathieu": err_json(&mathieu),
                },
            })
        },
    )
}

pub fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.command {
        Command::Spline => cmd_spline(cfg),
        Command::Eigen => cmd_eigen(cfg),
        Command::Bands => cmd_bands(cfg, false),
        Command::Dispersion => cmd_bands(cfg, true),
        Command::Validate => cmd_validate(cfg),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = RunConfig::resolve(cli.command, cli.options).and_then(|cfg| execute(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut msg = String::new();
            let _ = write!(msg, "error: {e}");
            eprintln!("{msg}");
            ExitCode::from(e.code())
        }
    }
}

pub fn main() -> ExitCode {
    run(std::env::args_os())
}
