//! Run configuration: command-line flags layered over an optional
//! `key=value` file, validated against the core constraints.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use scarsim_core::{BipartiteGraph, Engine, FormulaVariant, SqueezeMode, SqueezeSpec};
use serde::Serialize;

/// Keys accepted both as `--key` flags and in config files.
pub const KEYS: &[&str] = &[
    "graph",
    "n",
    "rows",
    "cols",
    "edges",
    "xi",
    "squeeze",
    "project",
    "engine",
    "tol",
    "dt",
    "tmax",
    "window",
    "out",
    "summary",
    "omega",
    "threads",
    "formula-variant",
    "dk",
    "kmax",
];

#[derive(Parser, Debug)]
#[command(name = "scarsim", version, about = "PXP scar dynamics and chiral scattering runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Subcommand, Debug)]
pub enum CommandArgs {
    /// Constrained Hilbert-space dimension of a graph.
    Dim(Flags),
    /// Time evolution of the (squeezed) Z2 state.
    Evolve(Flags),
    /// Scattering amplitudes and the derived revival numbers.
    Scatter(Flags),
    /// Revival height over a range of squeezing parameters.
    Sweep(Flags),
}

/// Raw flag values; parsed together with the config file.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// key=value file; flags given on the command line take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// cbg | ring | torus | custom
    #[arg(long)]
    pub graph: Option<String>,
    /// number of sites (cbg, ring)
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub rows: Option<String>,
    #[arg(long)]
    pub cols: Option<String>,
    /// edge-list file for custom graphs
    #[arg(long)]
    pub edges: Option<String>,
    /// squeezing parameter; `start:stop:step` for sweep
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<String>,
    /// none | global | local
    #[arg(long)]
    pub squeeze: Option<String>,
    /// on | off: project the squeezed state onto the constrained space
    #[arg(long)]
    pub project: Option<String>,
    /// dense | krylov
    #[arg(long)]
    pub engine: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub tmax: Option<String>,
    /// revival search window `start:stop`
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub summary: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<String>,
    #[arg(long)]
    pub threads: Option<String>,
    /// auto | appendix | main-text
    #[arg(long = "formula-variant")]
    pub formula_variant: Option<String>,
    /// momentum step of the scatter CSV
    #[arg(long, allow_negative_numbers = true)]
    pub dk: Option<String>,
    /// momentum cutoff of the scatter CSV and integrals
    #[arg(long, allow_negative_numbers = true)]
    pub kmax: Option<String>,
}

impl Flags {
    fn entries(&self) -> [(&'static str, &Option<String>); 20] {
        [
            ("graph", &self.graph),
            ("n", &self.n),
            ("rows", &self.rows),
            ("cols", &self.cols),
            ("edges", &self.edges),
            ("xi", &self.xi),
            ("squeeze", &self.squeeze),
            ("project", &self.project),
            ("engine", &self.engine),
            ("tol", &self.tol),
            ("dt", &self.dt),
            ("tmax", &self.tmax),
            ("window", &self.window),
            ("out", &self.out),
            ("summary", &self.summary),
            ("omega", &self.omega),
            ("threads", &self.threads),
            ("formula-variant", &self.formula_variant),
            ("dk", &self.dk),
            ("kmax", &self.kmax),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Dim,
    Evolve,
    Scatter,
    Sweep,
}

/// Invalid input, reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub token: String,
    pub message: String,
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.token, self.message)
    }
}

impl std::error::Error for UsageError {}

fn usage(token: impl Into<String>, message: impl Into<String>) -> UsageError {
    UsageError { token: token.into(), message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    Cbg { n: usize },
    Ring { n: usize },
    Torus { rows: usize, cols: usize },
    Custom { edges: PathBuf },
}

/// Validated run configuration.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub graph: Option<GraphSpec>,
    pub squeeze: SqueezeMode,
    /// A single value, or the sweep grid.
    pub xi: Vec<f64>,
    pub project: bool,
    pub engine: Engine,
    pub tol: f64,
    pub dt: f64,
    pub tmax: f64,
    pub window: (f64, f64),
    pub out: Option<PathBuf>,
    pub summary: PathBuf,
    pub omega: f64,
    pub threads: Option<usize>,
    /// `None` selects the variant validated against the ODE oracle.
    pub formula_variant: Option<FormulaVariant>,
    pub dk: f64,
    pub kmax: f64,
}

impl RunConfig {
    /// Builds the graph; succeeds for every validated config with a graph.
    pub fn build_graph(&self) -> scarsim_core::Result<Option<BipartiteGraph>> {
        self.graph.as_ref().map(build_graph).transpose()
    }
}

fn build_graph(spec: &GraphSpec) -> scarsim_core::Result<BipartiteGraph> {
    match spec {
        GraphSpec::Cbg { n } => {
            if n % 2 == 1 {
                return Err(scarsim_core::Error::SizeConstraint(format!(
                    "complete bipartite graphs need an even N, got {n}"
                )));
            }
            BipartiteGraph::complete_bipartite(n / 2)
        }
        GraphSpec::Ring { n } => BipartiteGraph::ring(*n),
        GraphSpec::Torus { rows, cols } => BipartiteGraph::torus(*rows, *cols),
        GraphSpec::Custom { edges } => BipartiteGraph::from_edge_list_file(edges),
    }
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(usage(line, format!("line {}: expected key=value", lineno + 1)));
        };
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(usage(k.trim(), format!("line {}: unknown key", lineno + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

/// Parses the command-line tokens (without the program name) into a config.
pub fn parse_args<I, S>(args: I) -> Result<RunConfig, ParseFailure>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(std::iter::once("scarsim".into()).chain(args.into_iter().map(Into::into)))
        .map_err(ParseFailure::Clap)?;
    let (command, flags) = match cli.command {
        CommandArgs::Dim(f) => (Command::Dim, f),
        CommandArgs::Evolve(f) => (Command::Evolve, f),
        CommandArgs::Scatter(f) => (Command::Scatter, f),
        CommandArgs::Sweep(f) => (Command::Sweep, f),
    };
    let file = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ParseFailure::Usage {
                error: usage(path.display().to_string(), e.to_string()),
                summary: None,
            })?;
            parse_config_file(&text).map_err(|error| ParseFailure::Usage { error, summary: None })?
        }
        None => BTreeMap::new(),
    };
    parse_config(command, &flags, &file).map_err(|error| {
        let pick = |v: &Option<String>, k: &str| v.clone().or_else(|| file.get(k).cloned());
        let summary = match pick(&flags.summary, "summary") {
            Some(s) => PathBuf::from(s),
            None => default_summary(pick(&flags.out, "out").as_deref().map(Path::new)),
        };
        ParseFailure::Usage { error, summary: Some(summary) }
    })
}

#[derive(Debug)]
pub enum ParseFailure {
    /// Includes `--help` and `--version`, which clap reports as errors.
    Clap(clap::Error),
    /// `summary` is the summary path when it could be determined.
    Usage { error: UsageError, summary: Option<PathBuf> },
}

/// Merges flags over file values and validates the result.
pub fn parse_config(command: Command, flags: &Flags, file: &BTreeMap<String, String>) -> Result<RunConfig, UsageError> {
    let mut merged: BTreeMap<&str, String> = BTreeMap::new();
    for (key, value) in flags.entries() {
        if let Some(v) = value.clone().or_else(|| file.get(key).cloned()) {
            merged.insert(key, v);
        }
    }
    let get = |k: &str| merged.get(k).map(String::as_str);

    let graph = match get("graph") {
        None => None,
        Some("cbg") => Some(GraphSpec::Cbg { n: required_usize(&merged, "n")? }),
        Some("ring") => Some(GraphSpec::Ring { n: required_usize(&merged, "n")? }),
        Some("torus") => {
            Some(GraphSpec::Torus { rows: required_usize(&merged, "rows")?, cols: required_usize(&merged, "cols")? })
        }
        Some("custom") => Some(GraphSpec::Custom {
            edges: PathBuf::from(get("edges").ok_or_else(|| usage("--edges", "custom graphs need an edge-list file"))?),
        }),
        Some(other) => return Err(usage(other, "graph must be cbg, ring, torus or custom")),
    };
    if graph.is_none() && command != Command::Scatter {
        return Err(usage("--graph", "this command needs a graph"));
    }

    let squeeze = match get("squeeze") {
        None | Some("none") => SqueezeMode::None,
        Some("global") => SqueezeMode::Global,
        Some("local") => SqueezeMode::Local,
        Some(other) => return Err(usage(other, "squeeze must be none, global or local")),
    };
    let xi = match (command, get("xi")) {
        (Command::Sweep, Some(text)) => parse_range(text)?,
        (Command::Sweep, None) => return Err(usage("--xi", "sweep needs a start:stop:step range")),
        (_, Some(text)) => vec![parse_f64("xi", text)?],
        (_, None) => vec![0.0],
    };
    if let Some(bad) = xi.iter().find(|x| !x.is_finite()) {
        return Err(usage(bad.to_string(), "xi must be finite"));
    }
    let squeeze = if command == Command::Sweep && squeeze == SqueezeMode::None { SqueezeMode::Global } else { squeeze };

    let project = match get("project") {
        None | Some("on") => true,
        Some("off") => false,
        Some(other) => return Err(usage(other, "project must be on or off")),
    };
    let engine = match get("engine") {
        None | Some("krylov") => Engine::Krylov,
        Some("dense") => Engine::DenseEig,
        Some(other) => return Err(usage(other, "engine must be dense or krylov")),
    };
    let tol = positive(&merged, "tol", 1e-12)?;
    let dt = positive(&merged, "dt", 0.05)?;
    let omega = positive(&merged, "omega", 1.0)?;
    let default_window = match graph {
        Some(GraphSpec::Cbg { .. }) => (10.0, 15.0),
        _ => (6.0, 13.0),
    };
    let window = match get("window") {
        None => default_window,
        Some(text) => {
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() != 2 {
                return Err(usage(text, "window must be start:stop"));
            }
            let (a, b) = (parse_f64("window", parts[0])?, parse_f64("window", parts[1])?);
            if !(a >= 0.0 && b > a) {
                return Err(usage(text, "window needs 0 <= start < stop"));
            }
            (a, b)
        }
    };
    let tmax = match get("tmax") {
        None => window.1,
        Some(text) => {
            let t = parse_f64("tmax", text)?;
            if !(t >= 0.0 && t.is_finite()) {
                return Err(usage(text, "tmax must be a nonnegative number"));
            }
            t
        }
    };
    let threads = match get("threads") {
        None => None,
        Some(text) => {
            let t = parse_usize("threads", text)?;
            if t == 0 {
                return Err(usage(text, "threads must be positive"));
            }
            Some(t)
        }
    };
    let formula_variant = match get("formula-variant") {
        None | Some("auto") => None,
        Some("appendix") => Some(FormulaVariant::Appendix),
        Some("main-text") | Some("main_text") => Some(FormulaVariant::MainText),
        Some(other) => return Err(usage(other, "formula-variant must be auto, appendix or main-text")),
    };
    let dk = positive(&merged, "dk", 0.01)?;
    let kmax = positive(&merged, "kmax", 8.0)?;
    let out = get("out").map(PathBuf::from);
    let summary = match get("summary") {
        Some(s) => PathBuf::from(s),
        None => default_summary(out.as_deref()),
    };

    let config = RunConfig {
        command,
        graph,
        squeeze,
        xi,
        project,
        engine,
        tol,
        dt,
        tmax,
        window,
        out,
        summary,
        omega,
        threads,
        formula_variant,
        dk,
        kmax,
    };
    validate(&config)?;
    Ok(config)
}

/// Re-checks the core constraints so bad input fails before any work.
fn validate(config: &RunConfig) -> Result<(), UsageError> {
    let Some(spec) = &config.graph else { return Ok(()) };
    let token = match spec {
        GraphSpec::Cbg { n } | GraphSpec::Ring { n } => n.to_string(),
        GraphSpec::Torus { rows, cols } => format!("{rows}x{cols}"),
        GraphSpec::Custom { edges } => edges.display().to_string(),
    };
    let graph = build_graph(spec).map_err(|e| usage(token, e.to_string()))?;
    if config.command == Command::Dim {
        return Ok(());
    }
    let is_cbg = matches!(spec, GraphSpec::Cbg { .. });
    if is_cbg && config.squeeze == SqueezeMode::Local {
        return Err(usage("local", "local squeezing is not defined on the complete bipartite graph"));
    }
    for &xi in &config.xi {
        SqueezeSpec::for_graph(config.squeeze, xi, &graph)
            .map_err(|e| usage(config.squeeze.to_string(), e.to_string()))?;
    }
    Ok(())
}

fn default_summary(out: Option<&Path>) -> PathBuf {
    match out {
        Some(p) => p.with_extension("summary.json"),
        None => PathBuf::from("scarsim_summary.json"),
    }
}

fn parse_f64(key: &str, text: &str) -> Result<f64, UsageError> {
    text.trim().parse::<f64>().map_err(|_| usage(text, format!("{key} must be a number")))
}

fn parse_usize(key: &str, text: &str) -> Result<usize, UsageError> {
    text.trim().parse::<usize>().map_err(|_| usage(text, format!("{key} must be a nonnegative integer")))
}

fn required_usize(merged: &BTreeMap<&str, String>, key: &str) -> Result<usize, UsageError> {
    let text = merged.get(key).ok_or_else(|| usage(format!("--{key}"), "required for this graph"))?;
    parse_usize(key, text)
}

fn positive(merged: &BTreeMap<&str, String>, key: &str, default: f64) -> Result<f64, UsageError> {
    match merged.get(key) {
        None => Ok(default),
        Some(text) => {
            let v = parse_f64(key, text)?;
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(usage(text.as_str(), format!("{key} must be positive")))
            }
        }
    }
}

/// `start:stop:step`, inclusive of `stop` within half a step.
pub fn parse_range(text: &str) -> Result<Vec<f64>, UsageError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(text, "range must be start:stop:step"));
    }
    let start = parse_f64("range start", parts[0])?;
    let stop = parse_f64("range stop", parts[1])?;
    let step = parse_f64("range step", parts[2])?;
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(usage(text, "range needs step > 0 and stop >= start"));
    }
    let count = ((stop - start) / step + 0.5).floor() as usize;
    if count > 100_000 {
        return Err(usage(text, "range has too many points"));
    }
    Ok((0..=count).map(|j| start + step * j as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_inclusive_within_half_a_step() {
        assert_eq!(parse_range("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("0:1.2:0.5").unwrap().len(), 3);
        assert_eq!(parse_range("0:1.3:0.5").unwrap().len(), 4);
        assert!(parse_range("1:0:0.1").is_err());
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
    }

    #[test]
    fn config_file_syntax() {
        let m = parse_config_file("# comment\nxi = 0.5 # trailing\n\nformula_variant=appendix\n").unwrap();
        assert_eq!(m.get("xi").unwrap(), "0.5");
        assert_eq!(m.get("formula-variant").unwrap(), "appendix");
        assert_eq!(parse_config_file("speed=3").unwrap_err().token, "speed");
        assert!(parse_config_file("xi").is_err());
    }
}
