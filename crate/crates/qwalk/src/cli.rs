//! Argument parsing, config merging and the subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use qwalk_core::green::{watson_asymptotic, watson_c_with, watson_c1_with, GreenConfig};
use qwalk_core::model::{OneParticleParams, QuasiMomentum, TwoParticleParams};
use qwalk_core::spectrum::{
    classify, classify_fiber, surface_axis_units, SolverConfig, SpectrumReport,
};
use qwalk_core::wavefunction::{
    fiber_eigenvector, fit_decay, kernel_k, one_particle_eigenfunction, subspace_generator_g0,
    DecayFit,
};
use qwalk_core::Error as CoreError;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::checks::{self, Suite};
use crate::output::{csv_num, json_num, write_json, Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Spectra and bound states of interacting lattice quantum walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (default: json for tables of scalars, csv for lattice data).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads, 0 = one per core.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Relative tolerance override.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// TOML file with default values for any flag.
    #[arg(long, global = true, env = "QWALK_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Lattice dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// One-particle hopping.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    /// Interaction strength.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Quasi-momentum, comma separated, in units of pi.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// c(d), c1(d) and the three-term expansion.
    Watson {
        /// A dimension, an inclusive range `a..b`, or a list `a,b,c`.
        #[arg(long)]
        d: Option<String>,
    },
    /// Essential and point spectrum (fiber problem when --phi is given).
    Spectrum(ModelArgs),
    /// Verdict and eigenvalue over a quasi-momentum grid.
    Surface {
        #[command(flatten)]
        model: ModelArgs,
        /// Points per axis; one value applies to every axis.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
    },
    /// Bound-state eigenfunction on [-R, R]^d.
    Wavefunction {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Generator of the one-particle subspace on [-R1, R1]^d x [-R, R]^d.
    G0 {
        #[command(flatten)]
        model: ModelArgs,
        /// `R` or `R1,R`.
        #[arg(long, value_delimiter = ',')]
        radius: Option<Vec<usize>>,
    },
    /// Run a group of numerical checks.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum DimSpec {
    Int(usize),
    Text(String),
}

/// Keys accepted in the config file; flags given on the command line win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    d: Option<DimSpec>,
    lambda: Option<f64>,
    lambda1: Option<f64>,
    lambda2: Option<f64>,
    mu: Option<f64>,
    phi: Option<OneOrMany<f64>>,
    grid: Option<OneOrMany<usize>>,
    radius: Option<OneOrMany<usize>>,
    tol: Option<f64>,
    format: Option<Format>,
    threads: Option<usize>,
    out: Option<PathBuf>,
}

fn load_config(path: Option<&Path>) -> anyhow::Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    toml::from_str(&text).map_err(|e| {
        CliError::usage("config", format!("{}: {}", path.display(), e.message())).into()
    })
}

/// A failure with an exit code and a machine-readable kind.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub field: Option<String>,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn usage(field: &str, message: impl Into<String>) -> Self {
        Self {
            kind: "usage",
            field: Some(field.into()),
            message: message.into(),
            exit_code: 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Maps any error to the JSON object printed on stderr and an exit code.
pub fn describe_error(e: &anyhow::Error) -> (Value, i32) {
    if let Some(c) = e.downcast_ref::<CliError>() {
        return (
            json!({"error": {"kind": c.kind, "field": c.field, "message": c.message}}),
            c.exit_code,
        );
    }
    if let Some(c) = e.downcast_ref::<CoreError>() {
        let (kind, field, code) = match c {
            CoreError::InvalidParameter { field, .. } => ("invalid-parameter", Some(*field), 2),
            CoreError::InvalidSpec(_) => ("invalid-parameter", None, 2),
            CoreError::Domain(_) => ("domain", None, 2),
            CoreError::NoEigenfunction(_) => ("no-eigenfunction", None, 1),
            CoreError::NotSquareIntegrable(_) => ("not-square-integrable", None, 1),
            CoreError::SubspaceAbsent => ("subspace-absent", None, 1),
            CoreError::ResourceLimit { .. } => ("resource-limit", None, 1),
            CoreError::NotConverged { .. } | CoreError::QuadratureFailed(_) => {
                ("not-converged", None, 1)
            }
            _ => ("computation", None, 1),
        };
        return (
            json!({"error": {"kind": kind, "field": field, "message": c.to_string()}}),
            code,
        );
    }
    (
        json!({"error": {"kind": "io", "field": null, "message": format!("{e:#}")}}),
        1,
    )
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            let v = json!({"error": {"kind": "usage", "field": null, "message": first}});
            eprintln!("{v}");
            return 2;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let (v, code) = describe_error(&e);
            eprintln!("{v}");
            code
        }
    }
}

struct Settings {
    format: Option<Format>,
    tol: Option<f64>,
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let file = load_config(cli.config.as_deref())?;
    let threads = cli.threads.or(file.threads);
    if let Some(n) = threads {
        // a second call in the same process (tests) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let tol = cli.tol.or(file.tol);
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0 && t < 1.0) {
            return Err(CliError::usage("tol", format!("tolerance must lie in (0, 1), got {t}")).into());
        }
    }
    let settings = Settings {
        format: cli.format.or(file.format),
        tol,
        out: cli.out.clone().or(file.out.clone()),
    };
    match cli.command {
        Command::Watson { d } => {
            let spec = match (d, &file.d) {
                (Some(s), _) => s,
                (None, Some(DimSpec::Int(i))) => i.to_string(),
                (None, Some(DimSpec::Text(s))) => s.clone(),
                (None, None) => return Err(CliError::usage("d", "--d is required").into()),
            };
            cmd_watson(&parse_dims(&spec)?, &settings)
        }
        Command::Spectrum(m) => cmd_spectrum(&merge(m, &file), &settings),
        Command::Surface { model, grid } => {
            let grid = grid.or(file.grid.clone().map(OneOrMany::into_vec));
            cmd_surface(&merge(model, &file), grid, &settings)
        }
        Command::Wavefunction { model, radius } => {
            let radius = radius.or_else(|| file.radius.clone().and_then(|r| r.into_vec().first().copied()));
            cmd_wavefunction(&merge(model, &file), radius, &settings)
        }
        Command::G0 { model, radius } => {
            let radius = radius.or(file.radius.clone().map(OneOrMany::into_vec));
            cmd_g0(&merge(model, &file), radius, &settings)
        }
        Command::Verify { suite } => cmd_verify(suite, &settings),
    }
}

fn merge(m: ModelArgs, file: &FileConfig) -> ModelArgs {
    let file_d = match &file.d {
        Some(DimSpec::Int(i)) => Some(*i),
        Some(DimSpec::Text(s)) => s.trim().parse().ok(),
        None => None,
    };
    ModelArgs {
        d: m.d.or(file_d),
        lambda: m.lambda.or(file.lambda),
        lambda1: m.lambda1.or(file.lambda1),
        lambda2: m.lambda2.or(file.lambda2),
        mu: m.mu.or(file.mu),
        phi: m.phi.or(file.phi.clone().map(OneOrMany::into_vec)),
    }
}

fn required<T: Copy>(v: Option<T>, field: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| CliError::usage(field, format!("--{field} is required")).into())
}

fn one_particle(m: &ModelArgs) -> anyhow::Result<OneParticleParams> {
    Ok(OneParticleParams::new(
        required(m.lambda, "lambda")?,
        required(m.mu, "mu")?,
        required(m.d, "d")?,
    )?)
}

fn two_particle(m: &ModelArgs) -> anyhow::Result<TwoParticleParams> {
    Ok(TwoParticleParams::new(
        required(m.lambda1, "lambda1")?,
        required(m.lambda2, "lambda2")?,
        required(m.mu, "mu")?,
        required(m.d, "d")?,
    )?)
}

fn quasi_momentum(m: &ModelArgs, d: usize) -> anyhow::Result<QuasiMomentum> {
    let units = m.phi.clone().unwrap_or_else(|| vec![0.0; d]);
    if units.len() != d {
        return Err(CliError::usage(
            "phi",
            format!("expected {d} comma-separated angles, got {}", units.len()),
        )
        .into());
    }
    Ok(QuasiMomentum::from_pi_units(&units)?)
}

/// `3`, `1..4` (inclusive), `1..=4` or `3,4,5`.
pub fn parse_dims(spec: &str) -> anyhow::Result<Vec<usize>> {
    let bad = || -> anyhow::Error {
        CoreError::InvalidParameter {
            field: "d",
            reason: format!("expected a positive dimension, range a..b or list, got `{spec}`"),
        }
        .into()
    };
    let parse = |s: &str| -> anyhow::Result<usize> {
        match s.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(bad()),
            Ok(v) => Ok(v),
        }
    };
    let spec_t = spec.trim();
    if let Some((a, b)) = spec_t.split_once("..") {
        let a = parse(a)?;
        let b = parse(b.trim_start_matches('='))?;
        if b < a {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    spec_t.split(',').map(parse).collect()
}

fn writer(settings: &Settings) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &settings.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(settings: &Settings, default: Format, json: impl FnOnce() -> Value, table: &Table) -> anyhow::Result<()> {
    let mut w = writer(settings)?;
    match settings.format.unwrap_or(default) {
        Format::Json => write_json(&mut w, &json())?,
        Format::Csv => table.write_csv(&mut w, true)?,
    }
    w.flush()?;
    Ok(())
}

fn green_config(settings: &Settings) -> GreenConfig {
    match settings.tol {
        Some(t) => GreenConfig::default().with_rel_tol(t),
        None => GreenConfig::default(),
    }
}

fn cmd_watson(dims: &[usize], settings: &Settings) -> anyhow::Result<i32> {
    let cfg = green_config(settings);
    let mut table = Table::new(["d", "c", "c1", "asym3", "status"]);
    for &d in dims {
        let c = watson_c_with(d, &cfg)?;
        let c1 = watson_c1_with(d, &cfg)?;
        let status = if !c.value.is_finite() {
            "divergent"
        } else if c1.value.is_finite() {
            "converged"
        } else {
            "inconclusive"
        };
        table.push(vec![
            Cell::Int(d as i64),
            Cell::Num(c.value.to_f64()),
            Cell::Num(c1.value.to_f64()),
            Cell::Num(watson_asymptotic(d)),
            Cell::Text(status.into()),
        ]);
    }
    emit(settings, Format::Json, || table.rows_json(), &table)?;
    Ok(0)
}

fn report_json(r: &SpectrumReport) -> Value {
    let mut point = json!({"kind": r.point.kind.kind_name()});
    if let Some(nu) = r.point.kind.nu() {
        point["nu"] = json_num(nu);
    }
    json!({
        "essential": [json_num(r.essential.beta1), json_num(r.essential.beta2)],
        "point": point,
        "regime": r.point.regime.tag(),
        "near_threshold": r.point.near_threshold,
        "edge_constant": json_num(r.edge_constant.to_f64()),
        "coupling": json_num(r.coupling),
    })
}

fn report_row(r: &SpectrumReport) -> Vec<Cell> {
    vec![
        Cell::Num(r.essential.beta1),
        Cell::Num(r.essential.beta2),
        Cell::Text(r.point.kind.kind_name().into()),
        r.point.kind.nu().map_or(Cell::Empty, Cell::Num),
        Cell::Text(r.point.regime.tag().into()),
        Cell::Text(r.point.near_threshold.to_string()),
        Cell::Num(r.edge_constant.to_f64()),
        Cell::Num(r.coupling),
    ]
}

const REPORT_HEADER: [&str; 8] = [
    "beta1",
    "beta2",
    "kind",
    "nu",
    "regime",
    "near_threshold",
    "edge_constant",
    "coupling",
];

fn solver_config(d: usize, settings: &Settings) -> SolverConfig {
    let mut cfg = SolverConfig::for_dims(d);
    if let Some(t) = settings.tol {
        cfg.tol = t;
    }
    cfg
}

fn cmd_spectrum(m: &ModelArgs, settings: &Settings) -> anyhow::Result<i32> {
    let report = if m.phi.is_some() {
        let p = two_particle(m)?;
        let phi = quasi_momentum(m, p.d)?;
        classify(&p.fiber(&phi)?, p.mu, &solver_config(p.d, settings))?
    } else {
        let p = one_particle(m)?;
        classify(&p.as_fiber(), p.mu, &solver_config(p.d, settings))?
    };
    let mut table = Table::new(REPORT_HEADER);
    table.push(report_row(&report));
    emit(settings, Format::Json, || report_json(&report), &table)?;
    Ok(0)
}

const SURFACE_CHUNK: usize = 2048;

fn cmd_surface(m: &ModelArgs, grid: Option<Vec<usize>>, settings: &Settings) -> anyhow::Result<i32> {
    let p = two_particle(m)?;
    if p.mu == 0.0 {
        return Err(CoreError::InvalidParameter {
            field: "mu",
            reason: "the dispersion surface needs a nonzero interaction".into(),
        }
        .into());
    }
    let d = p.d;
    let shape = match grid {
        None => return Err(CliError::usage("grid", "--grid is required").into()),
        Some(g) if g.len() == 1 => vec![g[0]; d],
        Some(g) if g.len() == d => g,
        Some(g) => {
            return Err(CliError::usage(
                "grid",
                format!("expected 1 or {d} axis counts, got {}", g.len()),
            )
            .into())
        }
    };
    let axes: Vec<Vec<f64>> = shape.iter().map(|&n| surface_axis_units(n)).collect();
    let total: usize = shape.iter().product();
    let units_of = |flat: usize| -> Vec<f64> {
        let mut rest = flat;
        let mut u = vec![0.0; d];
        for k in (0..d).rev() {
            u[k] = axes[k][rest % shape[k]];
            rest /= shape[k];
        }
        u
    };
    let mut header: Vec<String> = (1..=d).map(|k| format!("phi{k}")).collect();
    header.extend(["verdict", "nu", "regime"].map(String::from));
    let format = settings.format.unwrap_or(Format::Csv);
    let mut w = writer(settings)?;
    let mut json_rows = Vec::new();
    let mut csv_w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut w);
    if format == Format::Csv && total > 0 {
        csv_w.write_record(&header)?;
    }
    for start in (0..total).step_by(SURFACE_CHUNK) {
        let end = (start + SURFACE_CHUNK).min(total);
        let reports: Vec<anyhow::Result<(Vec<f64>, SpectrumReport)>> = (start..end)
            .into_par_iter()
            .map(|flat| {
                let u = units_of(flat);
                let phi = QuasiMomentum::from_pi_units(&u)?;
                Ok((u, classify_fiber(&phi, &p)?))
            })
            .collect();
        for item in reports {
            let (u, r) = item?;
            match format {
                Format::Csv => {
                    let mut rec: Vec<String> = u.iter().map(|&x| csv_num(x)).collect();
                    rec.push(r.point.kind.kind_name().into());
                    rec.push(r.point.kind.nu().map_or(String::new(), csv_num));
                    rec.push(r.point.regime.tag().into());
                    csv_w.write_record(&rec)?;
                }
                Format::Json => json_rows.push(json!({
                    "phi": u.iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
                    "verdict": r.point.kind.kind_name(),
                    "nu": r.point.kind.nu().map_or(Value::Null, json_num),
                    "regime": r.point.regime.tag(),
                })),
            }
        }
        csv_w.flush()?;
    }
    drop(csv_w);
    if format == Format::Json {
        write_json(&mut w, &Value::Array(json_rows))?;
    }
    w.flush()?;
    Ok(0)
}

fn decay_note(fit: Option<DecayFit>) -> String {
    match fit {
        Some(f) => format!("decay fit: C = {}, t = {} over {} shells", f.c, f.t, f.shells),
        None => "decay fit: none (fewer than three nonzero shells)".into(),
    }
}

fn decay_json(fit: Option<DecayFit>) -> Value {
    fit.map_or(Value::Null, |f| json!({"c": json_num(f.c), "t": json_num(f.t), "shells": f.shells}))
}

fn coord_header(prefix: &str, d: usize) -> Vec<String> {
    (1..=d).map(|k| format!("{prefix}{k}")).collect()
}

/// Relative floor below which shells are ignored by the decay fit.
const DECAY_FLOOR: f64 = 1e-13;

fn cmd_wavefunction(m: &ModelArgs, radius: Option<usize>, settings: &Settings) -> anyhow::Result<i32> {
    let radius = required(radius, "radius")?;
    if radius == 0 {
        return Err(CliError::usage("radius", "radius must be at least 1").into());
    }
    let fiber_problem = m.phi.is_some() || (m.lambda.is_none() && m.lambda1.is_some());
    let mut table;
    let (nu, k0, fit, values_json);
    if fiber_problem {
        let p = two_particle(m)?;
        let phi = quasi_momentum(m, p.d)?;
        let (nu_f, f0) = fiber_eigenvector(&phi, &p, radius)?;
        nu = nu_f;
        k0 = kernel_k(&phi, nu, &p, 0)?.values.get(&vec![0; p.d]).unwrap_or(f64::NAN);
        fit = fit_decay(&f0, DECAY_FLOOR);
        let mut header = coord_header("x", p.d);
        header.extend(["re", "im"].map(String::from));
        table = Table::new(header);
        let mut rows = Vec::new();
        for (i, v) in f0.values().iter().enumerate() {
            let x = f0.coords(i);
            let (re, im) = (v.re + 0.0, v.im + 0.0);
            let mut row: Vec<Cell> = x.iter().map(|&c| Cell::Int(c)).collect();
            row.extend([Cell::Num(re), Cell::Num(im)]);
            table.push(row);
            rows.push(json!({"x": x, "re": json_num(re), "im": json_num(im)}));
        }
        values_json = rows;
    } else {
        let p = one_particle(m)?;
        let report = classify(&p.as_fiber(), p.mu, &SolverConfig::for_dims(p.d))?;
        let nu_o = report.point.kind.nu().ok_or_else(|| {
            CoreError::NoEigenfunction(format!(
                "no eigenvalue for lambda = {}, mu = {}, d = {} ({})",
                p.lambda,
                p.mu,
                p.d,
                report.point.regime.tag()
            ))
        })?;
        nu = nu_o;
        let f = one_particle_eigenfunction(&p, nu, radius)?;
        let half = TwoParticleParams::new(0.5 * p.lambda, 0.5 * p.lambda, p.mu, p.d)?;
        k0 = kernel_k(&QuasiMomentum::zero(p.d), nu, &half, 0)?
            .values
            .get(&vec![0; p.d])
            .unwrap_or(f64::NAN);
        fit = fit_decay(&f, DECAY_FLOOR);
        let mut header = coord_header("x", p.d);
        header.push("value".into());
        table = Table::new(header);
        let mut rows = Vec::new();
        for (i, v) in f.values().iter().enumerate() {
            let x = f.coords(i);
            let mut row: Vec<Cell> = x.iter().map(|&c| Cell::Int(c)).collect();
            row.push(Cell::Num(v + 0.0));
            table.push(row);
            rows.push(json!({"x": x, "value": json_num(v + 0.0)}));
        }
        values_json = rows;
    }
    table.notes.push(format!("nu = {nu}"));
    table.notes.push(format!("K(phi,0) check = {k0}"));
    table.notes.push(decay_note(fit));
    let json = || {
        json!({
            "nu": json_num(nu),
            "k0_check": json_num(k0),
            "decay_fit": decay_json(fit),
            "values": values_json,
        })
    };
    emit(settings, Format::Csv, json, &table)?;
    Ok(0)
}

fn cmd_g0(m: &ModelArgs, radius: Option<Vec<usize>>, settings: &Settings) -> anyhow::Result<i32> {
    let p = two_particle(m)?;
    let (r1, r) = match radius.as_deref() {
        Some([r]) => (*r, *r),
        Some([r1, r]) => (*r1, *r),
        Some(_) => return Err(CliError::usage("radius", "expected R or R1,R").into()),
        None => return Err(CliError::usage("radius", "--radius is required").into()),
    };
    if r1 == 0 || r == 0 {
        return Err(CliError::usage("radius", "radii must be at least 1").into());
    }
    let g = subspace_generator_g0(&p, (r1, r))?;
    let d = p.d;
    let mut header = coord_header("x1_", d);
    header.extend(coord_header("x_", d));
    header.push("value".into());
    let mut table = Table::new(header);
    let s1 = 2 * r1 + 1;
    let s2 = 2 * r + 1;
    let mut rows = Vec::new();
    for (flat, v) in g.values.iter().enumerate() {
        let mut rest = flat;
        let mut x = vec![0i64; d];
        let mut x1 = vec![0i64; d];
        for k in (0..d).rev() {
            x[k] = (rest % s2) as i64 - r as i64;
            rest /= s2;
        }
        for k in (0..d).rev() {
            x1[k] = (rest % s1) as i64 - r1 as i64;
            rest /= s1;
        }
        let mut row: Vec<Cell> = x1.iter().chain(&x).map(|&c| Cell::Int(c)).collect();
        row.push(Cell::Num(v + 0.0));
        table.push(row);
        rows.push(json!({"x1": x1, "x": x, "value": json_num(v + 0.0)}));
    }
    let sums: Vec<(usize, f64)> = (0..=r1.min(r)).map(|k| (k, g.partial_norm_sq(k))).collect();
    table.notes.push(format!("g0(0,0) = {}", g.get(&vec![0; d], &vec![0; d]).unwrap_or(f64::NAN)));
    table.notes.push(format!(
        "status = {:?}, phi points per axis = {}, max change = {:e}",
        g.status, g.phi_points, g.abs_error_estimate
    ));
    table.notes.push(format!(
        "l2 partial sums: {}",
        sums.iter().map(|(k, s)| format!("r={k}: {s}")).collect::<Vec<_>>().join(", ")
    ));
    let json = || {
        json!({
            "status": format!("{:?}", g.status).to_lowercase(),
            "phi_points": g.phi_points,
            "l2_partial_sums": sums.iter().map(|(k, s)| json!({"r": k, "sum": json_num(*s)})).collect::<Vec<_>>(),
            "values": rows,
        })
    };
    emit(settings, Format::Csv, json, &table)?;
    Ok(0)
}

fn cmd_verify(suite: Suite, settings: &Settings) -> anyhow::Result<i32> {
    let results = checks::run_suite(suite);
    let passed = checks::all_passed(&results);
    let mut table = Table::new(["id", "name", "passed", "observed", "tolerance", "seconds", "detail"]);
    for c in &results {
        table.push(vec![
            Cell::Text(c.id.clone()),
            Cell::Text(c.name.clone()),
            Cell::Text(c.passed.to_string()),
            Cell::Num(c.observed),
            Cell::Num(c.tolerance),
            Cell::Num(c.seconds),
            Cell::Text(c.detail.clone()),
        ]);
    }
    let json = || {
        json!({
            "suite": format!("{suite:?}"),
            "passed": passed,
            "checks": results.iter().map(|c| json!({
                "id": c.id,
                "name": c.name,
                "passed": c.passed,
                "observed": json_num(c.observed),
                "tolerance": json_num(c.tolerance),
                "seconds": json_num(c.seconds),
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    };
    emit(settings, Format::Json, json, &table)?;
    Ok(if passed { 0 } else { 1 })
}
