//! Command-line front end: argument parsing, the subcommands and their
//! artifacts. `main` only prints an [`Outcome`] and exits with its code.

pub mod config;
pub mod svg;

use std::ffi::OsString;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use planar_crn::construct::{check_invariant_curve, classify_transversality, Stability};
use planar_crn::crn::{self, parse_network, print_network, PlanarSystem};
use planar_crn::curves::{extract_ovals, CurveSpec, OvalSet};
use planar_crn::realize::{self, RealizeError};
use planar_crn::sim::{self, Target, Trajectory};

use config::{parse_pairs, RunConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input.
    #[error("{0}")]
    Input(String),
    /// Valid input on which the requested computation failed.
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

pub fn read(path: impl AsRef<Path>) -> Result<String, CliError> {
    let path = path.as_ref();
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// Figure presets shipped with the tool.
pub const REPRO: &[(&str, &str)] = &[
    ("fig5b", include_str!("../../../configs/v1/fig5b.cfg")),
    ("fig6", include_str!("../../../configs/v1/fig6.cfg")),
    ("fig8a", include_str!("../../../configs/v1/fig8a.cfg")),
    ("fig8b", include_str!("../../../configs/v1/fig8b.cfg")),
];

#[derive(Debug, Parser)]
#[command(
    name = "planar-crn",
    version,
    about = "Planar reaction networks with algebraic limit cycles"
)]
pub struct Cli {
    /// Key-value run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory for written artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Regenerate a figure preset (fig5b, fig6, fig8a, fig8b).
    #[arg(long, global = true, value_name = "NAME")]
    pub repro: Option<String>,
    /// Override one configuration key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    S,
    M,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mass-action ODEs of a network file.
    Derive { file: PathBuf },
    /// Network realizing a system file.
    Realize {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "s")]
        class: ClassArg,
        /// Class order; defaults to the system degree.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Class membership and weak reversibility; exit 1 if a check fails.
    Check {
        /// System file, or network file (detected by `->`).
        file: PathBuf,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        weakly_reversible: bool,
    },
    /// Build a system from a recipe.
    Construct {
        recipe: Option<PathBuf>,
        /// Also print a realizing network.
        #[arg(long)]
        realize: bool,
    },
    /// Closed components of the curve.
    Ovals(CurveArgs),
    /// Stability of each oval from the transversality sign.
    Classify(CurveArgs),
    /// Integrate trajectories from the configured starts.
    Simulate(CurveArgs),
    /// Phase portrait as SVG, with CSV side outputs.
    Plot(CurveArgs),
}

#[derive(Debug, Args, Default)]
pub struct CurveArgs {
    /// Catalog curve name.
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// Comma-separated deltas for the product curve.
    #[arg(long)]
    pub deltas: Option<String>,
    #[arg(long)]
    pub resolution: Option<usize>,
    /// `x0,x1,y0,y1`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// `x,y`; repeatable, replaces configured starts.
    #[arg(long = "start", allow_hyphen_values = true)]
    pub starts: Vec<String>,
    #[arg(long)]
    pub shade: bool,
    #[arg(long)]
    pub log_axes: bool,
}

impl CurveArgs {
    fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut push = |k: &str, v: &Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v.clone()));
            }
        };
        push("curve", &self.curve);
        push("mu", &self.mu);
        push("delta", &self.delta);
        push("deltas", &self.deltas);
        push("window", &self.window);
        push("resolution", &self.resolution.map(|r| r.to_string()));
        if !self.starts.is_empty() {
            out.push(("starts".into(), self.starts.join(";")));
        }
        if self.shade {
            out.push(("shade".into(), "true".into()));
        }
        if self.log_axes {
            out.push(("log_axes".into(), "true".into()));
        }
        out
    }
}

/// What a command produced: text for the terminal and files for `--out`.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub files: Vec<(String, String)>,
}

impl Report {
    fn text(stdout: String) -> Self {
        Report {
            stdout,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn system_from_text(text: &str) -> Result<PlanarSystem, CliError> {
    text.parse().map_err(|e| CliError::Input(format!("{e}")))
}

fn is_network(text: &str) -> bool {
    text.contains("->")
}

pub fn cmd_derive(text: &str) -> Result<String, CliError> {
    let net = parse_network(text).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(crn::derive_mass_action(&net).to_string())
}

pub fn cmd_realize(text: &str, class: ClassArg, n: Option<u32>) -> Result<String, CliError> {
    let sys = system_from_text(text)?;
    let net = match class {
        ClassArg::S => {
            if let Some(n) = n {
                let report = realize::check_s_n(&sys, n);
                if !report.member {
                    return Err(CliError::Compute(report.to_string()));
                }
            }
            realize::realize_s_n(&sys)
        }
        ClassArg::M => realize::realize_m_n(&sys, n.unwrap_or(sys.degree().max(0) as u32)),
    }
    .map_err(realize_error)?;
    Ok(print_network(&net))
}

fn realize_error(e: RealizeError) -> CliError {
    match e {
        RealizeError::NotInClass(r) => CliError::Compute(r.to_string()),
        other => CliError::Compute(other.to_string()),
    }
}

/// Returns whether every requested check passed, and the report text.
pub fn cmd_check(
    text: &str,
    class: Option<ClassArg>,
    n: Option<u32>,
    weakly_reversible: bool,
) -> Result<(bool, String), CliError> {
    let (sys, net) = if is_network(text) {
        let net = parse_network(text).map_err(|e| CliError::Input(e.to_string()))?;
        (crn::derive_mass_action(&net), Some(net))
    } else {
        (system_from_text(text)?, None)
    };
    let class = match (class, weakly_reversible, n) {
        (None, false, _) | (None, _, Some(_)) => Some(ClassArg::S),
        (c, _, _) => c,
    };
    let mut out = String::new();
    let mut pass = true;
    if let Some(class) = class {
        let n = n.unwrap_or(sys.degree().max(0) as u32);
        let report = match class {
            ClassArg::S => realize::check_s_n(&sys, n),
            ClassArg::M => realize::check_m_n(&sys, n),
        };
        pass &= report.member;
        out.push_str(&report.to_kv());
        for v in &report.violations {
            let _ = writeln!(out, "# {v}");
        }
    }
    if weakly_reversible {
        let net =
            net.ok_or_else(|| CliError::Input("--weakly-reversible needs a network file".into()))?;
        let wr = crn::is_weakly_reversible(&net);
        pass &= wr;
        let _ = writeln!(out, "weakly_reversible={wr}");
    }
    let _ = writeln!(out, "pass={pass}");
    Ok((pass, out))
}

pub fn cmd_construct(cfg: &RunConfig, realize_net: bool) -> Result<Report, CliError> {
    let (sys, spec) = cfg.build_system()?;
    let mut report = Report::text(sys.to_string());
    if sys.is_zero() {
        report
            .warnings
            .push("the constructed system is identically zero".into());
    }
    if let Some(spec) = &spec {
        if let Ok(res) = check_invariant_curve(&spec.poly, &sys) {
            if let Some(s) = res.cofactor {
                let _ = writeln!(report.stdout, "# cofactor = {s}");
            }
        }
    }
    report.files.push(("system.txt".into(), sys.to_string()));
    if realize_net {
        let net = realize::realize_s_n(&sys).map_err(realize_error)?;
        let text = print_network(&net);
        report.stdout.push('\n');
        report.stdout.push_str(&text);
        report.files.push(("network.crn".into(), text));
    }
    Ok(report)
}

fn ovals_for(cfg: &RunConfig, spec: &CurveSpec) -> Result<OvalSet, CliError> {
    extract_ovals(spec, cfg.resolution_for(spec)).map_err(|e| CliError::Compute(e.to_string()))
}

pub fn cmd_ovals(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = cfg.curve_spec()?;
    let set = ovals_for(cfg, &spec)?;
    let mut out = String::new();
    let _ = writeln!(out, "curve = {}", spec.name);
    let _ = writeln!(out, "resolution = {}", set.resolution);
    let _ = writeln!(out, "count = {}", set.len());
    let _ = writeln!(out, "open_components = {}", set.open_components.len());
    if set.degenerate {
        let _ = writeln!(out, "degenerate = true");
    }
    for i in 0..set.len() {
        let pts = &set.ovals[i][..set.ovals[i].len() - 1];
        let n = pts.len() as f64;
        let (cx, cy) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
        let radii: Vec<f64> = pts.iter().map(|&(x, y)| (x - cx).hypot(y - cy)).collect();
        let rmin = radii.iter().copied().fold(f64::INFINITY, f64::min);
        let rmax = radii.iter().copied().fold(0.0, f64::max);
        let (x0, x1, y0, y1) = set.bounds(i);
        let _ = writeln!(
            out,
            "oval {i}: area = {:.6}, x = [{x0:.6}, {x1:.6}], y = [{y0:.6}, {y1:.6}], \
             centroid = ({cx:.6}, {cy:.6}), radius = [{rmin:.6}, {rmax:.6}]",
            set.area(i)
        );
    }
    let mut report = Report::text(out);
    report.files.push(("ovals.csv".into(), set.to_csv()));
    Ok(report)
}

/// Labels for ovals: the sorted deltas of a product curve in order of
/// area, otherwise the oval index.
fn oval_labels(spec: &CurveSpec, set: &OvalSet) -> Vec<String> {
    let mut labels: Vec<String> = (0..set.len()).map(|i| i.to_string()).collect();
    if spec.name == "product" {
        let mut deltas: Vec<_> = spec.params.values().cloned().collect();
        deltas.sort();
        if deltas.len() == set.len() {
            for (rank, i) in set.by_area().into_iter().enumerate() {
                labels[i] = format!("delta={}", deltas[rank]);
            }
        }
    }
    labels
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = cfg.curve_spec()?;
    let (f0, g0) = cfg
        .drift_for(&spec.poly)
        .ok_or_else(|| CliError::Input("classify needs 'drift', 'f0'/'g0' or a builder".into()))?;
    let set = ovals_for(cfg, &spec)?;
    let verdict = classify_transversality(&spec.poly, &f0, &g0, &set, cfg.tau)
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let labels = oval_labels(&spec, &set);
    let mut out = String::new();
    let _ = writeln!(out, "curve = {}", spec.name);
    for o in &verdict.ovals {
        let _ = writeln!(
            out,
            "oval {} ({}): {}, T in [{:.6e}, {:.6e}]",
            o.index, labels[o.index], o.tag, o.min, o.max
        );
    }
    for tag in [Stability::Stable, Stability::Unstable, Stability::Mixed] {
        let order: Vec<usize> = if spec.name == "product" {
            set.by_area()
        } else {
            (0..set.len()).collect()
        };
        let names: Vec<&str> = order
            .into_iter()
            .filter(|&i| verdict.ovals[i].tag == tag)
            .map(|i| labels[i].as_str())
            .collect();
        let _ = writeln!(out, "{tag} = {{{}}}", names.join(", "));
    }
    Ok(Report::text(out))
}

struct Run {
    spec: Option<CurveSpec>,
    ovals: Option<OvalSet>,
    trajectories: Vec<Trajectory>,
}

fn run_sweep(cfg: &RunConfig, need_starts: bool) -> Result<Run, CliError> {
    let (sys, spec) = cfg.build_system()?;
    if need_starts && cfg.starts.is_empty() {
        return Err(CliError::Input("no 'starts' or 'grid' given".into()));
    }
    let ovals = spec.as_ref().map(|s| ovals_for(cfg, s)).transpose()?;
    let target = match (&spec, &ovals) {
        (Some(s), Some(o)) => Some(Target {
            h: s.poly.clone(),
            ovals: o.clone(),
        }),
        _ => None,
    };
    let trajectories = sim::sweep(&sys, &cfg.starts, &cfg.sim, target.as_ref());
    Ok(Run {
        spec,
        ovals,
        trajectories,
    })
}

fn summary(trajs: &[Trajectory]) -> String {
    let mut out = String::from("index,x0,y0,status,t,x,y,h_abs,monotone\n");
    for (i, tr) in trajs.iter().enumerate() {
        let (_, x0, y0) = tr.samples[0];
        let (t, x, y) = tr.terminal().unwrap_or((0.0, x0, y0));
        let h = tr
            .h_residuals
            .last()
            .map(|r| format!("{r:.3e}"))
            .unwrap_or_default();
        let mono = if tr.h_residuals.is_empty() {
            String::new()
        } else {
            sim::monotone_residual_check(tr).to_string()
        };
        let _ = writeln!(out, "{i},{x0},{y0},{},{t},{x},{y},{h},{mono}", tr.status);
    }
    out
}

pub fn cmd_simulate(cfg: &RunConfig, to_files: bool) -> Result<Report, CliError> {
    let run = run_sweep(cfg, true)?;
    let csv = sim::sweep_csv(&run.trajectories);
    if to_files {
        let mut report = Report::text(summary(&run.trajectories));
        report.files.push(("trajectories.csv".into(), csv));
        Ok(report)
    } else {
        Ok(Report::text(csv))
    }
}

pub fn cmd_plot(cfg: &RunConfig) -> Result<Report, CliError> {
    let run = run_sweep(cfg, false)?;
    let spec = run
        .spec
        .ok_or_else(|| CliError::Input("plot needs a curve".into()))?;
    let ovals = run.ovals.unwrap_or_default();
    let shading = if cfg.shade {
        let (f0, g0) = cfg
            .drift_for(&spec.poly)
            .ok_or_else(|| CliError::Input("shading needs a drift".into()))?;
        let t = &f0 * spec.poly.dx() + &g0 * spec.poly.dy();
        Some(svg::Shading {
            field: t.lower(),
            cells: 160,
        })
    } else {
        None
    };
    let image = svg::render(&svg::Plot {
        window: spec.window,
        curve: &ovals,
        trajectories: run
            .trajectories
            .iter()
            .map(|tr| tr.samples.iter().map(|&(_, x, y)| (x, y)).collect())
            .collect(),
        shading,
        log_axes: cfg.log_axes,
        title: cfg.title.clone(),
    });
    let mut report = Report::text(summary(&run.trajectories));
    report.files.push(("plot.svg".into(), image));
    report.files.push(("ovals.csv".into(), ovals.to_csv()));
    report
        .files
        .push(("trajectories.csv".into(), sim::sweep_csv(&run.trajectories)));
    Ok(report)
}

fn set_pairs(items: &[String]) -> Result<Vec<(String, String)>, CliError> {
    items
        .iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| CliError::Input(format!("--set expects KEY=VALUE, got '{s}'")))
        })
        .collect()
}

fn repro_text(name: &str) -> Result<&'static str, CliError> {
    REPRO
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            let names: Vec<&str> = REPRO.iter().map(|(n, _)| *n).collect();
            CliError::Input(format!(
                "unknown preset '{name}' (expected one of {})",
                names.join(", ")
            ))
        })
}

/// Preset, then `--config`, then the recipe, then flags, then `--set`.
fn load_config(
    cli: &Cli,
    recipe: Option<&Path>,
    flags: Vec<(String, String)>,
) -> Result<RunConfig, CliError> {
    let mut pairs = Vec::new();
    if let Some(name) = &cli.repro {
        pairs.extend(parse_pairs(repro_text(name)?)?);
    }
    for path in cli.config.iter().map(PathBuf::as_path).chain(recipe) {
        pairs.extend(parse_pairs(&read(path)?)?);
    }
    pairs.extend(flags);
    pairs.extend(set_pairs(&cli.set)?);
    RunConfig::from_pairs(&pairs)
}

fn write_files(dir: &Path, files: &[(String, String)], log: &mut String) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        let _ = writeln!(log, "wrote {}", path.display());
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(i32, Report), CliError> {
    let none = Vec::new;
    let report = match &cli.command {
        None => {
            if cli.repro.is_none() {
                return Err(CliError::Input("no subcommand given (see --help)".into()));
            }
            cmd_plot(&load_config(cli, None, none())?)?
        }
        Some(Command::Derive { file }) => Report::text(cmd_derive(&read(file)?)?),
        Some(Command::Realize { file, class, n }) => {
            Report::text(cmd_realize(&read(file)?, *class, *n)?)
        }
        Some(Command::Check {
            file,
            class,
            n,
            weakly_reversible,
        }) => {
            let (pass, text) = cmd_check(&read(file)?, *class, *n, *weakly_reversible)?;
            return Ok((if pass { 0 } else { 1 }, Report::text(text)));
        }
        Some(Command::Construct { recipe, realize }) => {
            let cfg = load_config(cli, recipe.as_deref(), none())?;
            let mut report = cmd_construct(&cfg, *realize)?;
            if cli.out.is_none() {
                report.files.clear();
            }
            report
        }
        Some(Command::Ovals(args)) => {
            let mut report = cmd_ovals(&load_config(cli, None, args.pairs())?)?;
            if cli.out.is_none() {
                report.files.clear();
            }
            report
        }
        Some(Command::Classify(args)) => cmd_classify(&load_config(cli, None, args.pairs())?)?,
        Some(Command::Simulate(args)) => {
            cmd_simulate(&load_config(cli, None, args.pairs())?, cli.out.is_some())?
        }
        Some(Command::Plot(args)) => cmd_plot(&load_config(cli, None, args.pairs())?)?,
    };
    Ok((0, report))
}

/// Output directory: `--out`, else `out/<preset>` for presets, else `.`.
fn out_dir(cli: &Cli) -> PathBuf {
    match (&cli.out, &cli.repro) {
        (Some(dir), _) => dir.clone(),
        (None, Some(name)) => Path::new("out").join(name),
        (None, None) => PathBuf::from("."),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut stderr = String::new();
    let result = dispatch(&cli).and_then(|(code, report)| {
        for w in &report.warnings {
            let _ = writeln!(stderr, "warning: {w}");
        }
        if !report.files.is_empty() {
            write_files(&out_dir(&cli), &report.files, &mut stderr)?;
        }
        Ok((code, report.stdout))
    });
    match result {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr,
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            Outcome {
                code: e.exit_code(),
                stdout: String::new(),
                stderr,
            }
        }
    }
}
