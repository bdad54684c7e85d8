//! Command-line front end for `qrw`.
//!
//! Every command produces a deterministic artifact in one of three formats.
//! Exact values are written as `"num/den"` strings next to a decimal
//! rendering. The JSON layout is `{schema, config, values}` with
//! `schema = "qrw/1"`.

mod ascii;
mod emit;

use std::fmt;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};
use qrw::{
    build_network, dense_simulate, endpoint_amplitude, expand, transfer_matrix, DetectorTuple,
    InputSide, Limits,
};

pub use ascii::{render_distribution, render_matrix};

pub const SCHEMA: &str = "qrw/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Transfer,
    State,
    Onefold,
    Twofold,
    Threefold,
    Kfold,
    Numberdist,
    Paths,
    Diagrams,
    Zeros,
    OracleCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Transfer => "transfer",
            Command::State => "state",
            Command::Onefold => "onefold",
            Command::Twofold => "twofold",
            Command::Threefold => "threefold",
            Command::Kfold => "kfold",
            Command::Numberdist => "numberdist",
            Command::Paths => "paths",
            Command::Diagrams => "diagrams",
            Command::Zeros => "zeros",
            Command::OracleCheck => "oracle-check",
        }
    }

    fn needs_photons(self) -> bool {
        !matches!(
            self,
            Command::Transfer | Command::Paths | Command::OracleCheck
        )
    }

    fn needs_tuple(self) -> bool {
        matches!(
            self,
            Command::Kfold | Command::Numberdist | Command::Diagrams
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Ascii,
}

#[derive(Debug, Parser)]
#[command(
    name = "qrw",
    version,
    about = "Exact multiphoton quantum random walks on a beam-splitter pyramid"
)]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,
    /// Pyramid depth L.
    #[arg(long)]
    level: Option<usize>,
    /// Input photons as "N,M" (left port, right port).
    #[arg(long, value_parser = parse_pair)]
    photons: Option<(usize, usize)>,
    /// Detector tuple as "d1,d2,...".
    #[arg(long, value_parser = parse_detectors)]
    tuple: Option<DetectorList>,
    /// Tuple order for `zeros`.
    #[arg(long, default_value_t = 2)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the artifact here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Photon cap (grid bound for `oracle-check`).
    #[arg(long)]
    max_photons: Option<usize>,
    /// Level cap (grid bound for `oracle-check`).
    #[arg(long)]
    max_level: Option<usize>,
    /// Permit caps above the defaults.
    #[arg(long)]
    allow_large: bool,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    match parse_list(s)?.as_slice() {
        [n, m] => Ok((*n, *m)),
        _ => Err(format!("expected two comma-separated counts, got {s:?}")),
    }
}

#[derive(Debug, Clone)]
struct DetectorList(Vec<usize>);

fn parse_detectors(s: &str) -> Result<DetectorList, String> {
    parse_list(s).map(DetectorList)
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect()
}

/// A fully validated invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub level: usize,
    pub photons: (usize, usize),
    pub tuple: Option<Vec<usize>>,
    pub order: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub limits: Limits,
    /// Grid bounds `(photons, level)` for `oracle-check`.
    pub oracle_grid: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    InvalidArgument(String),
    ResourceBound(String),
    OracleMismatch(String),
    Failure(String),
    /// `--help` or `--version` output; not an error.
    Info(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidArgument(_) => 2,
            CliError::ResourceBound(_) => 3,
            CliError::OracleMismatch(_) => 4,
            CliError::Failure(_) => 1,
            CliError::Info(_) => 0,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            CliError::InvalidArgument(m)
            | CliError::ResourceBound(m)
            | CliError::OracleMismatch(m)
            | CliError::Failure(m) => m,
            CliError::Info(m) => return f.write_str(m),
        };
        write!(f, "ERR {}: {}", self.exit_code(), msg)
    }
}

impl From<qrw::Error> for CliError {
    fn from(e: qrw::Error) -> Self {
        match e {
            qrw::Error::InvalidArgument(_) => CliError::InvalidArgument(e.to_string()),
            qrw::Error::ResourceBound { .. } => CliError::ResourceBound(e.to_string()),
            qrw::Error::Defect(_) => CliError::Failure(e.to_string()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidArgument(msg.into())
}

/// Parses and validates a command line (including the program name).
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Info(e.to_string())
        }
        _ => invalid(e.to_string().trim().to_string()),
    })?;
    let command = cli.command;
    let defaults = Limits::default();
    let mut limits = defaults;

    let oracle_grid = if command == Command::OracleCheck {
        let grid = (cli.max_photons.unwrap_or(3), cli.max_level.unwrap_or(5));
        if grid.0 == 0 || grid.1 == 0 {
            return Err(invalid("oracle grid bounds must be at least 1"));
        }
        if cli.allow_large {
            limits.max_dense_photons = limits.max_dense_photons.max(grid.0);
            limits.max_photons = limits.max_photons.max(grid.0);
            limits.max_dense_level = limits.max_dense_level.max(grid.1);
            limits.max_level = limits.max_level.max(grid.1);
            limits.max_enumeration_level = limits.max_enumeration_level.max(grid.1);
        }
        grid
    } else {
        if let Some(p) = cli.max_photons {
            if p > defaults.max_photons && !cli.allow_large {
                return Err(invalid(format!(
                    "--max-photons {p} exceeds the default {}; pass --allow-large",
                    defaults.max_photons
                )));
            }
            limits.max_photons = p;
            if cli.allow_large {
                limits.max_dense_photons = limits.max_dense_photons.max(p);
            }
        }
        if let Some(l) = cli.max_level {
            if l > defaults.max_level && !cli.allow_large {
                return Err(invalid(format!(
                    "--max-level {l} exceeds the default {}; pass --allow-large",
                    defaults.max_level
                )));
            }
            limits.max_level = l;
            if cli.allow_large {
                limits.max_enumeration_level = limits.max_enumeration_level.max(l);
                limits.max_diagram_steps = limits.max_diagram_steps.max(2 * l);
            }
        }
        if cli.allow_large {
            limits.max_zero_set_order = limits.max_zero_set_order.max(cli.order);
        }
        (0, 0)
    };

    let level = match (command, cli.level) {
        (Command::OracleCheck, l) => l.unwrap_or(0),
        (_, Some(l)) => l,
        (_, None) => return Err(invalid(format!("{} requires --level", command.name()))),
    };
    let photons = match (command.needs_photons(), cli.photons) {
        (true, None) => {
            return Err(invalid(format!(
                "{} requires --photons N,M",
                command.name()
            )))
        }
        (_, p) => p.unwrap_or((0, 0)),
    };
    if command.needs_tuple() && cli.tuple.is_none() {
        return Err(invalid(format!("{} requires --tuple", command.name())));
    }
    let tuple = cli.tuple.map(|t| t.0);
    if command == Command::Numberdist && tuple.as_ref().is_some_and(|t| t.len() != 2) {
        return Err(invalid(
            "numberdist requires --tuple m,n with two detectors",
        ));
    }

    Ok(RunConfig {
        command,
        level,
        photons,
        tuple,
        order: cli.order,
        format: cli.format,
        out: cli.out,
        limits,
        oracle_grid,
    })
}

/// The rendered artifact of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emission {
    pub body: String,
    /// Extra `(file suffix, contents)` pairs written beside `--out`.
    pub attachments: Vec<(String, String)>,
}

/// Runs one command and renders its artifact.
pub fn run(config: &RunConfig) -> Result<Emission, CliError> {
    if config.command == Command::OracleCheck {
        return oracle_check(config).map(|body| Emission {
            body,
            attachments: Vec::new(),
        });
    }
    emit::render(config)
}

pub(crate) fn tuple_for(config: &RunConfig) -> Result<DetectorTuple, CliError> {
    let ds = config.tuple.clone().unwrap_or_default();
    Ok(DetectorTuple::new(ds, 2 * config.level)?)
}

fn oracle_check(config: &RunConfig) -> Result<String, CliError> {
    let (max_photons, max_level) = config.oracle_grid;
    let limits = &config.limits;
    let mut configurations = 0usize;
    for level in 1..=max_level {
        let network = build_network(level, limits)?;
        let transfer = transfer_matrix(&network)?;
        for total in 1..=max_photons {
            for n in 0..=total {
                let fast = expand(&transfer, n, total - n, limits)?;
                let dense = dense_simulate(&network, n, total - n, limits)?;
                if fast != dense {
                    return Err(CliError::OracleMismatch(format!(
                        "expansion differs from dense propagation at L={level} N={n} M={}",
                        total - n
                    )));
                }
                configurations += 1;
            }
        }
        if level <= limits.max_enumeration_level {
            for side in [InputSide::Left, InputSide::Right] {
                for d in 1..=2 * level {
                    if endpoint_amplitude(&network, side, d, limits)? != *transfer.entry(side, d) {
                        return Err(CliError::OracleMismatch(format!(
                            "path sum differs from transfer matrix at L={level} {} D{d}",
                            side.label()
                        )));
                    }
                }
            }
        }
    }
    Ok(format!(
        "oracle-check: {configurations} configurations (photons <= {max_photons}, level <= {max_level}): all configurations exact\n"
    ))
}

/// Writes the artifact to `--out` (plus attachments and a provenance
/// sidecar) or returns it for standard output.
pub fn execute(config: &RunConfig, args: &[String]) -> Result<Option<String>, CliError> {
    let emission = run(config)?;
    let Some(out) = &config.out else {
        return Ok(Some(emission.body));
    };
    let write = |path: &PathBuf, contents: &str| {
        std::fs::write(path, contents)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))
    };
    write(out, &emission.body)?;
    for (suffix, contents) in &emission.attachments {
        write(&sibling(out, suffix), contents)?;
    }
    let generated = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "schema": SCHEMA,
        "tool": format!("qrw {}", env!("CARGO_PKG_VERSION")),
        "args": args,
        "generated_unix": generated,
    });
    write(
        &sibling(out, ".meta.json"),
        &(serde_json::to_string_pretty(&meta).unwrap() + "\n"),
    )?;
    Ok(None)
}

/// `out` with `suffix` appended to its file name.
pub fn sibling(out: &std::path::Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    out.with_file_name(name)
}
