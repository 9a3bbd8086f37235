//! Command-line front end.
//!
//! Configuration is layered: command-line flags override values from a TOML
//! config file (`--config`), which override the built-in defaults. Config
//! keys are the flag names without the leading dashes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{sudden_death_time, sweep, trajectory, Grid};
use crate::dynamics::EnvironmentParams;
use crate::error::Error;
use crate::states::{build_squeezed_thermal, MeasuredMode, SqueezedThermalParams};

/// Bisection width used by the `esd` command.
pub const ESD_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "twomode",
    version,
    about = "Entanglement and discord of two Gaussian modes in a thermal bath"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Time series of negativity and discord at one bath temperature.
    Evolve(RunArgs),
    /// Negativity and discord on a (t, T) grid.
    Sweep(RunArgs),
    /// Time of entanglement sudden death at one bath temperature.
    Esd(RunArgs),
}

/// Flags shared by every subcommand; also the schema of the config file.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RunArgs {
    /// Mean thermal occupation of mode 1.
    #[arg(long, allow_negative_numbers = true)]
    n1: Option<f64>,
    /// Mean thermal occupation of mode 2.
    #[arg(long, allow_negative_numbers = true)]
    n2: Option<f64>,
    /// Two-mode squeezing parameter r.
    #[arg(long, allow_negative_numbers = true)]
    squeezing: Option<f64>,
    /// Dissipation constant.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mass: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega2: Option<f64>,
    /// Bath temperature (evolve, esd).
    #[arg(long, allow_negative_numbers = true)]
    temperature: Option<f64>,
    /// End of the time grid, or of the search window for esd.
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    /// Number of time points.
    #[arg(long)]
    points: Option<usize>,
    /// End of the temperature grid (sweep).
    #[arg(long, allow_negative_numbers = true)]
    temp_max: Option<f64>,
    /// Number of temperature points (sweep).
    #[arg(long)]
    temp_points: Option<usize>,
    /// Mode on which the Gaussian measurement acts.
    #[arg(long, value_enum)]
    measured_mode: Option<ModeArg>,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// TOML file with default values for any of the flags above.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

impl RunArgs {
    fn or(self, fallback: RunArgs) -> RunArgs {
        RunArgs {
            n1: self.n1.or(fallback.n1),
            n2: self.n2.or(fallback.n2),
            squeezing: self.squeezing.or(fallback.squeezing),
            lambda: self.lambda.or(fallback.lambda),
            mass: self.mass.or(fallback.mass),
            omega1: self.omega1.or(fallback.omega1),
            omega2: self.omega2.or(fallback.omega2),
            temperature: self.temperature.or(fallback.temperature),
            t_max: self.t_max.or(fallback.t_max),
            points: self.points.or(fallback.points),
            temp_max: self.temp_max.or(fallback.temp_max),
            temp_points: self.temp_points.or(fallback.temp_points),
            measured_mode: self.measured_mode.or(fallback.measured_mode),
            output: self.output.or(fallback.output),
            format: self.format.or(fallback.format),
            config: self.config,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    #[value(alias = "1")]
    Mode1,
    #[value(alias = "2")]
    Mode2,
}

impl From<ModeArg> for MeasuredMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Mode1 => MeasuredMode::Mode1,
            ModeArg::Mode2 => MeasuredMode::Mode2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Evolve,
    Sweep,
    Esd,
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub state: SqueezedThermalParams,
    pub env: EnvironmentParams,
    pub t_grid: Grid,
    pub temperature_grid: Grid,
    pub measured_mode: MeasuredMode,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Default run: the squeezed thermal state `n1 = n2 = 1`, `r = 2` in a bath
/// with `λ = 0.1`, `m = ω1 = ω2 = 1`, over `t ∈ [0, 20]` and `T ∈ [0, 4]`.
pub mod defaults {
    pub const N1: f64 = 1.0;
    pub const N2: f64 = 1.0;
    pub const SQUEEZING: f64 = 2.0;
    pub const LAMBDA: f64 = 0.1;
    pub const MASS: f64 = 1.0;
    pub const OMEGA1: f64 = 1.0;
    pub const OMEGA2: f64 = 1.0;
    pub const TEMPERATURE: f64 = 0.0;
    pub const T_MAX: f64 = 20.0;
    pub const POINTS: usize = 200;
    pub const TEMP_MAX: f64 = 4.0;
    pub const TEMP_POINTS: usize = 40;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config file or parameter values.
    #[error("{0}")]
    Usage(String),
    /// `--help` / `--version` output; not a failure.
    #[error("{0}")]
    Info(String),
    #[error("numerical failure {0}")]
    Numerical(#[from] Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Numerical(_) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

fn usage(flag: &str, value: impl std::fmt::Display, requirement: &str) -> CliError {
    CliError::Usage(format!(
        "invalid value '{value}' for --{flag}: {requirement}"
    ))
}

fn finite(flag: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(flag, v, "must be finite"))
    }
}

fn non_negative(flag: &str, v: f64) -> Result<f64, CliError> {
    if finite(flag, v)? >= 0.0 {
        Ok(v)
    } else {
        Err(usage(flag, v, "must be non-negative"))
    }
}

fn positive(flag: &str, v: f64) -> Result<f64, CliError> {
    if finite(flag, v)? > 0.0 {
        Ok(v)
    } else {
        Err(usage(flag, v, "must be positive"))
    }
}

fn at_least_one(flag: &str, v: usize) -> Result<usize, CliError> {
    if v >= 1 {
        Ok(v)
    } else {
        Err(usage(flag, v, "must be at least 1"))
    }
}

fn load_config_file(path: &Path) -> Result<RunArgs, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config file {}: {e}", path.display())))
}

/// Parses command-line arguments (including the program name) into a
/// validated [`RunConfig`].
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| {
        let text = e.render().to_string();
        match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                CliError::Info(text)
            }
            _ => CliError::Usage(text),
        }
    })?;
    let (command, flags) = match cli.command {
        CommandArgs::Evolve(a) => (Command::Evolve, a),
        CommandArgs::Sweep(a) => (Command::Sweep, a),
        CommandArgs::Esd(a) => (Command::Esd, a),
    };
    let from_file = match &flags.config {
        Some(path) => load_config_file(path)?,
        None => RunArgs::default(),
    };
    resolve(command, flags.or(from_file))
}

fn resolve(command: Command, a: RunArgs) -> Result<RunConfig, CliError> {
    use defaults as d;
    let state = SqueezedThermalParams {
        n1: non_negative("n1", a.n1.unwrap_or(d::N1))?,
        n2: non_negative("n2", a.n2.unwrap_or(d::N2))?,
        r: finite("squeezing", a.squeezing.unwrap_or(d::SQUEEZING))?,
    };
    let env = EnvironmentParams {
        lambda: positive("lambda", a.lambda.unwrap_or(d::LAMBDA))?,
        mass: positive("mass", a.mass.unwrap_or(d::MASS))?,
        omega1: positive("omega1", a.omega1.unwrap_or(d::OMEGA1))?,
        omega2: positive("omega2", a.omega2.unwrap_or(d::OMEGA2))?,
        temperature: non_negative("temperature", a.temperature.unwrap_or(d::TEMPERATURE))?,
    };
    let t_max = a.t_max.unwrap_or(d::T_MAX);
    let t_max = match command {
        Command::Esd => positive("t-max", t_max)?,
        _ => non_negative("t-max", t_max)?,
    };
    let t_grid = Grid {
        min: 0.0,
        max: t_max,
        count: at_least_one("points", a.points.unwrap_or(d::POINTS))?,
    };
    let temperature_grid = Grid {
        min: 0.0,
        max: non_negative("temp-max", a.temp_max.unwrap_or(d::TEMP_MAX))?,
        count: at_least_one("temp-points", a.temp_points.unwrap_or(d::TEMP_POINTS))?,
    };
    Ok(RunConfig {
        command,
        state,
        env,
        t_grid,
        temperature_grid,
        measured_mode: a.measured_mode.map(Into::into).unwrap_or_default(),
        output: a.output,
        format: a.format.unwrap_or_default(),
    })
}

/// Scientific notation with 12 significant digits, e.g. `4.18581766283e+00`.
pub fn format_sci(x: f64) -> String {
    let s = format!("{x:.11e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let exp: i32 = exp.parse().unwrap_or(0);
            let sign = if exp < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", exp.abs())
        }
        None => s,
    }
}

#[derive(Serialize)]
struct EvolveMetadata<'a> {
    state: &'a SqueezedThermalParams,
    env: &'a EnvironmentParams,
    t_grid: &'a Grid,
    measured_mode: MeasuredMode,
}

#[derive(Serialize)]
struct EsdReport<'a> {
    state: &'a SqueezedThermalParams,
    env: &'a EnvironmentParams,
    t_max: f64,
    tolerance: f64,
    t_esd: Option<f64>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Io(e.to_string()))
}

/// Runs the configured command and returns the rendered output document.
pub fn render(config: &RunConfig) -> Result<String, CliError> {
    let s0 = build_squeezed_thermal(&config.state)?;
    match config.command {
        Command::Evolve => {
            let times = config.t_grid.points();
            let points = trajectory(&s0, &config.env, &times, config.measured_mode)?;
            match config.format {
                Format::Csv => {
                    let mut out = String::from("t,E_N,discord,nu_minus\n");
                    for p in &points {
                        let _ = writeln!(
                            out,
                            "{},{},{},{}",
                            format_sci(p.t),
                            format_sci(p.e_n),
                            format_sci(p.discord),
                            format_sci(p.nu_minus)
                        );
                    }
                    Ok(out)
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Doc<'a> {
                        metadata: EvolveMetadata<'a>,
                        rows: &'a [crate::analysis::TrajectoryPoint],
                    }
                    to_json(&Doc {
                        metadata: EvolveMetadata {
                            state: &config.state,
                            env: &config.env,
                            t_grid: &config.t_grid,
                            measured_mode: config.measured_mode,
                        },
                        rows: &points,
                    })
                }
            }
        }
        Command::Sweep => {
            let table = sweep(
                &config.state,
                &config.env,
                &config.t_grid,
                &config.temperature_grid,
                config.measured_mode,
            )?;
            match config.format {
                Format::Csv => {
                    let mut out = String::from("t,T,E_N,discord\n");
                    for r in &table.rows {
                        let _ = writeln!(
                            out,
                            "{},{},{},{}",
                            format_sci(r.t),
                            format_sci(r.temperature),
                            format_sci(r.e_n),
                            format_sci(r.discord)
                        );
                    }
                    Ok(out)
                }
                Format::Json => to_json(&table),
            }
        }
        Command::Esd => {
            let t_max = config.t_grid.max;
            let t_esd = sudden_death_time(&s0, &config.env, t_max, ESD_TOLERANCE)
                .map_err(|e| e.at_cell(0.0, config.env.temperature))?;
            match config.format {
                Format::Csv => Ok(match t_esd {
                    Some(t) => format!("t_esd={}\n", format_sci(t)),
                    None => "t_esd=none\n".to_string(),
                }),
                Format::Json => to_json(&EsdReport {
                    state: &config.state,
                    env: &config.env,
                    t_max,
                    tolerance: ESD_TOLERANCE,
                    t_esd,
                }),
            }
        }
    }
}

/// Renders the command and writes it to the configured output.
pub fn execute(config: &RunConfig) -> Result<(), CliError> {
    let doc = render(config)?;
    match &config.output {
        Some(path) => std::fs::write(path, doc)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{doc}");
            Ok(())
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code:
/// 0 on success, 1 on numerical or i/o failure, 2 on usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let outcome = parse_config(args).and_then(|config| execute(&config));
    match outcome {
        Ok(()) => 0,
        Err(CliError::Info(text)) => {
            print!("{text}");
            0
        }
        Err(err) => {
            match &err {
                CliError::Usage(text) => eprintln!("{}", text.trim_end()),
                other => eprintln!("twomode: {other}"),
            }
            err.exit_code()
        }
    }
}
