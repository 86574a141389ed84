//! Command-line front end for the `k3sv` library.
//!
//! `run` takes an argv and returns the exit code with the text that belongs
//! on stdout and stderr, so the binary is a thin wrapper and tests can drive
//! it in-process.

pub mod commands;
pub mod params;
pub mod sweep;

use clap::{Parser, ValueEnum};
use commands::builtin;
use k3sv::Engine;
use params::Params;
use serde_json::Value;
use std::ffi::OsString;
use std::path::PathBuf;

/// Exit code for a failed identity check.
pub const EXIT_VERIFICATION: i32 = 1;
/// Exit code for malformed flags or inputs.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Compute(#[from] k3sv::Error),
}

impl From<k3sv::LatticeError> for CliError {
    fn from(e: k3sv::LatticeError) -> Self {
        CliError::Compute(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Plain,
}

#[derive(Debug, Parser)]
#[command(
    name = "k3sv",
    version,
    about = "Exact Segre and Verlinde numbers of moduli of sheaves on K3 surfaces",
    allow_negative_numbers = true,
    after_help = "Commands: segre, verlinde, check-sv, reduce, dim2, segre-dim2, fingerprint, span-reduce, sweep <command>, list"
)]
struct Cli {
    /// Command to run (`list` shows all of them).
    command: String,
    /// Command evaluated at each grid point (only for `sweep`).
    target: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    /// Rank of the class, rational ("p/q" accepted).
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    c2: Option<String>,
    #[arg(long)]
    c1sq: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    order: Option<String>,
    #[arg(long = "chiL")]
    chi_l: Option<String>,
    /// Invariants of α as rank,c1sq,c1L,v2.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long = "Lsq")]
    l_sq: Option<String>,
    #[arg(long)]
    u: Option<String>,
    /// JSON object supplying parameters not given as flags.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Sweep axis NAME=a..b[:step] or NAME=v1,v2,...; repeatable.
    #[arg(long = "grid", allow_hyphen_values = true)]
    grid: Vec<String>,
    /// Sweep worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Series reversion strategy.
    #[arg(long, default_value = "newton")]
    reverter: String,
}

impl Cli {
    fn params(&self) -> Result<Params, CliError> {
        let mut p = Params::default();
        let flags = [
            ("rho", &self.rho),
            ("s", &self.s),
            ("r", &self.r),
            ("c2", &self.c2),
            ("c1sq", &self.c1sq),
            ("n", &self.n),
            ("order", &self.order),
            ("chiL", &self.chi_l),
            ("alpha", &self.alpha),
            ("Lsq", &self.l_sq),
            ("u", &self.u),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                p.set(key, v.clone())?;
            }
        }
        if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let doc: Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            p.merge_json(&doc)?;
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exit {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Exit { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Exit { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok((value, ok)) => Exit {
            code: if ok { 0 } else { EXIT_VERIFICATION },
            stdout: render(&value, cli.format),
            stderr: String::new(),
        },
        Err(e) => Exit {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(cli: &Cli) -> Result<(Value, bool), CliError> {
    let engine = Engine::with_reverter(&cli.reverter)?;
    let params = cli.params()?;
    let lookup = |name: &str| {
        builtin()
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("unknown command {name:?}; try `k3sv list`")))
    };
    match cli.command.as_str() {
        "list" => {
            let cmds: serde_json::Map<String, Value> = builtin()
                .iter()
                .map(|c| (c.name().to_string(), Value::String(c.summary().to_string())))
                .collect();
            Ok((Value::Object(cmds), true))
        }
        "sweep" => {
            let target = cli
                .target
                .as_deref()
                .ok_or_else(|| CliError::Usage("sweep needs a command to evaluate".into()))?;
            let cmd = lookup(target)?;
            let axes = cli
                .grid
                .iter()
                .map(|g| sweep::parse_axis(g))
                .collect::<Result<Vec<_>, _>>()?;
            let jobs = cli.jobs.unwrap_or_else(|| {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            });
            sweep::sweep(cmd.as_ref(), &engine, &params, &axes, jobs)
        }
        name => {
            if let Some(t) = &cli.target {
                return Err(CliError::Usage(format!("unexpected argument {t:?}")));
            }
            if !cli.grid.is_empty() {
                return Err(CliError::Usage("--grid is only valid with sweep".into()));
            }
            let out = lookup(name)?.run(&engine, &params)?;
            Ok((out.value, out.verified))
        }
    }
}

/// JSON is compact with sorted keys. Plain prints one `key: value` line per
/// top-level field, with strings unquoted and array elements on their own
/// lines.
pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{value}\n"),
        Format::Plain => match value {
            Value::Object(map) => map
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}: {s}\n"),
                    Value::Array(items) if !items.is_empty() => {
                        let lines: String = items.iter().map(|x| format!("  {x}\n")).collect();
                        format!("{k}:\n{lines}")
                    }
                    other => format!("{k}: {other}\n"),
                })
                .collect(),
            Value::String(s) => format!("{s}\n"),
            other => format!("{other}\n"),
        },
    }
}
