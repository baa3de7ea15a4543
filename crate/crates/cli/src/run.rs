//! Subcommand execution and the summary record.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use scarsim_core::pipeline::{revival, run_graph, RunOutcome};
use scarsim_core::propagate::{time_grid, write_trajectory_csv, TrajectoryHeader};
use scarsim_core::scatter::{write_scatter_csv, ScatterResult};
use scarsim_core::{
    BipartiteGraph, ConstrainedBasis, Error, EvolveOptions, FormulaVariant, GraphKind, ScatterModel, SqueezeSpec,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig, UsageError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

/// Exit code for a core error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::SizeConstraint(_)
        | Error::InvalidGraph { .. }
        | Error::UnsupportedGraph(_)
        | Error::Argument(_)
        | Error::Io(_) => EXIT_USAGE,
        Error::Contract(_)
        | Error::DegenerateState(_)
        | Error::Numeric { .. }
        | Error::Convergence { .. }
        | Error::Range(_) => EXIT_NUMERIC,
    }
}

#[derive(Serialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl ErrorRecord {
    pub fn from_core(e: &Error) -> Self {
        let kind = format!("{e:?}");
        let kind = kind.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Unknown").to_string();
        let residual = match e {
            Error::Numeric { residual, .. } => Some(*residual),
            Error::Convergence { last_term, .. } => Some(*last_term),
            _ => None,
        };
        Self { kind, message: e.to_string(), exit_code: exit_code(e), residual }
    }
}

/// Machine-readable record of a run, written for every outcome.
#[derive(Serialize)]
pub struct Summary<'a> {
    pub version: &'static str,
    pub status: &'static str,
    pub config: &'a RunConfig,
    pub formula_variant: Option<FormulaVariant>,
    pub discarded_weight: Option<f64>,
    pub results: Value,
    pub error: Option<ErrorRecord>,
}

pub struct Report {
    pub formula_variant: Option<FormulaVariant>,
    pub discarded_weight: Option<f64>,
    pub results: Value,
}

impl Report {
    fn plain(results: Value) -> Self {
        Self { formula_variant: None, discarded_weight: None, results }
    }
}

/// Runs the command (inside a sized thread pool when requested), writes
/// the summary and returns the exit code.
pub fn execute(config: &RunConfig) -> i32 {
    let outcome = match config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(config)),
            Err(e) => Err(Error::Resource(format!("cannot start {n} worker threads: {e}"))),
        },
        None => dispatch(config),
    };
    let (summary, code) = match outcome {
        Ok(r) => (
            Summary {
                version: env!("CARGO_PKG_VERSION"),
                status: "ok",
                config,
                formula_variant: r.formula_variant,
                discarded_weight: r.discarded_weight,
                results: r.results,
                error: None,
            },
            EXIT_OK,
        ),
        Err(e) => {
            eprintln!("error: {e}");
            let record = ErrorRecord::from_core(&e);
            let code = record.exit_code;
            (
                Summary {
                    version: env!("CARGO_PKG_VERSION"),
                    status: "error",
                    config,
                    formula_variant: config.formula_variant,
                    discarded_weight: None,
                    results: Value::Null,
                    error: Some(record),
                },
                code,
            )
        }
    };
    match write_json(&config.summary, &summary) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: cannot write summary {}: {e}", config.summary.display());
            if code == EXIT_OK {
                EXIT_USAGE
            } else {
                code
            }
        }
    }
}

/// Summary for input rejected before a config could be built.
pub fn write_usage_summary(path: &Path, error: &UsageError) -> scarsim_core::Result<()> {
    let record =
        ErrorRecord { kind: "Usage".into(), message: error.to_string(), exit_code: EXIT_USAGE, residual: None };
    write_json(
        path,
        &json!({
            "version": env!("CARGO_PKG_VERSION"),
            "status": "error",
            "config": Value::Null,
            "formula_variant": Value::Null,
            "discarded_weight": Value::Null,
            "results": Value::Null,
            "error": record,
            "token": error.token,
        }),
    )
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> scarsim_core::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn dispatch(config: &RunConfig) -> scarsim_core::Result<Report> {
    match config.command {
        Command::Dim => dim(config),
        Command::Evolve => evolve(config),
        Command::Scatter => scatter(config),
        Command::Sweep => sweep(config),
    }
}

fn graph_of(config: &RunConfig) -> scarsim_core::Result<BipartiteGraph> {
    config.build_graph()?.ok_or_else(|| Error::Argument("this command needs a graph".into()))
}

/// Opens `--out`, or standard output when it is absent.
fn output(config: &RunConfig) -> scarsim_core::Result<Box<dyn Write>> {
    Ok(match &config.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn dim(config: &RunConfig) -> scarsim_core::Result<Report> {
    let g = graph_of(config)?;
    let basis = ConstrainedBasis::new(&g)?;
    let formula = match g.kind() {
        GraphKind::CompleteBipartite { side } => Some((1u64 << (side + 1)) - 1),
        _ => None,
    };
    println!("{}", basis.dim());
    if let Some(p) = &config.out {
        let mut w = BufWriter::new(File::create(p)?);
        basis.write_csv(&mut w)?;
        w.flush()?;
    }
    Ok(Report::plain(json!({
        "n_sites": g.n_vertices(),
        "dimension": basis.dim(),
        "cbg_formula": formula,
    })))
}

fn run_one(config: &RunConfig, g: &BipartiteGraph, xi: f64, times: &[f64]) -> scarsim_core::Result<RunOutcome<f64>> {
    let spec = SqueezeSpec::for_graph(config.squeeze, xi, g)?;
    let opts = EvolveOptions { engine: config.engine, tol: config.tol, ..Default::default() };
    run_graph(g, spec, config.project, config.omega, times, opts)
}

fn drift(values: &[f64]) -> f64 {
    values.iter().map(|v| (v - values[0]).abs()).fold(0.0, f64::max)
}

fn evolve(config: &RunConfig) -> scarsim_core::Result<Report> {
    let g = graph_of(config)?;
    let xi = config.xi[0];
    let times = time_grid(config.dt, config.tmax)?;
    let out = run_one(config, &g, xi, &times)?;
    let header = TrajectoryHeader {
        lines: vec![
            ("graph".into(), graph_label(&g)),
            ("N".into(), g.n_vertices().to_string()),
            ("xi".into(), xi.to_string()),
            ("squeeze".into(), config.squeeze.to_string()),
            ("engine".into(), config.engine.to_string()),
            ("tol".into(), format!("{:e}", config.tol)),
            ("omega".into(), config.omega.to_string()),
            ("project".into(), if config.project { "on" } else { "off" }.into()),
        ],
    };
    let mut w = output(config)?;
    write_trajectory_csv(&out.trajectory, &header, &mut w)?;
    w.flush()?;
    let tr = &out.trajectory;
    let peak = revival(&out, config.window).ok();
    Ok(Report {
        formula_variant: None,
        discarded_weight: out.discarded_weight,
        results: json!({
            "dimension": out.initial.dim(),
            "basis": out.initial.tag().to_string(),
            "revival_window": [config.window.0, config.window.1],
            "t_revival": peak.map(|p| p.0),
            "g_max": peak.map(|p| p.1),
            "max_norm_drift": drift(&tr.norms),
            "max_energy_drift": drift(&tr.energies),
        }),
    })
}

fn graph_label(g: &BipartiteGraph) -> String {
    match g.kind() {
        GraphKind::CompleteBipartite { .. } => "cbg".into(),
        GraphKind::Ring { .. } => "ring".into(),
        GraphKind::Torus { rows, cols } => format!("torus {rows}x{cols}"),
        GraphKind::Custom => "custom".into(),
    }
}

fn scatter(config: &RunConfig) -> scarsim_core::Result<Report> {
    let model = match config.formula_variant {
        None => ScatterModel::<f64>::new()?,
        Some(v) => ScatterModel::with_variant(v)?,
    }
    .with_k_max(config.kmax);
    let count = (2.0 * config.kmax / config.dk + 0.5).floor() as usize;
    let rows: Vec<ScatterResult<f64>> =
        (0..=count).map(|j| model.result(-config.kmax + config.dk * j as f64)).collect::<scarsim_core::Result<_>>()?;
    let mut w = output(config)?;
    write_scatter_csv(&rows, &mut w)?;
    w.flush()?;
    let f = model.functionals()?;
    let mut results = serde_json::to_value(&f).map_err(|e| Error::Io(e.to_string()))?;
    results["P1_squeezed_xi"] = json!(config.xi[0]);
    results["P1_squeezed"] = json!(model.p1_squeezed(config.xi[0])?);
    results["variant_probes"] = serde_json::to_value(model.probes()).map_err(|e| Error::Io(e.to_string()))?;
    Ok(Report { formula_variant: Some(model.variant()), discarded_weight: None, results })
}

fn sweep(config: &RunConfig) -> scarsim_core::Result<Report> {
    let g = graph_of(config)?;
    let times = time_grid(config.dt, config.tmax)?;
    // results are collected in grid order whatever the completion order
    let points: Vec<(f64, f64, f64, Option<f64>)> = config
        .xi
        .par_iter()
        .map(|&xi| {
            let out = run_one(config, &g, xi, &times)?;
            let (t, v) = revival(&out, config.window)?;
            Ok((xi, v, t, out.discarded_weight))
        })
        .collect::<scarsim_core::Result<_>>()?;
    let mut w = output(config)?;
    writeln!(w, "xi,g_max,t_revival,discarded_weight")?;
    for (xi, v, t, d) in &points {
        let d = d.map(|d| format!("{d:.12e}")).unwrap_or_default();
        writeln!(w, "{xi:.6},{v:.12e},{t:.6},{d}")?;
    }
    w.flush()?;
    let best = points.iter().fold(&points[0], |b, p| if p.1 > b.1 { p } else { b });
    let discarded = points.iter().filter_map(|p| p.3).fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))));
    Ok(Report {
        formula_variant: None,
        discarded_weight: discarded,
        results: json!({
            "points": points.len(),
            "best_xi": best.0,
            "best_g_max": best.1,
            "turnover": best.0 < points[points.len() - 1].0,
        }),
    })
}
