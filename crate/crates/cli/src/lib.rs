//! Command-line front end: single runs, panel presets, config-driven sweeps
//! and the verification suite. Output is CSV; each CSV written to disk gets a
//! `.meta` sidecar holding the fully resolved configuration.

pub mod config;
pub mod csv_io;
pub mod panels;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, Entries, Origin, RunConfig};
use panels::Panel;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CRITERION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "nmqubits",
    version,
    about = "Entanglement of two coupled qubits in Lorentzian baths"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence time series for parameters given as flags.
    Simulate(Box<SimulateArgs>),
    /// Regenerate one of the four preset panels.
    Figure {
        #[arg(long, value_enum)]
        panel: Panel,
        /// Directory receiving panel_<x>.csv and its .meta sidecar.
        #[arg(long)]
        out: PathBuf,
    },
    /// Cartesian sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's `output`; stdout when neither is given.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every cross-check; exit status 1 if any fails.
    Verify {
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long = "q", value_name = "Q", allow_hyphen_values = true)]
    pub q: Option<String>,
    #[arg(long = "r", value_name = "R", allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long = "j", value_name = "J", allow_hyphen_values = true)]
    pub j: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long = "gamma-m", allow_hyphen_values = true)]
    pub gamma_m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// figure, exact-paper or exact-trace
    #[arg(long)]
    pub mode: Option<String>,
    /// tau or tau-prime
    #[arg(long)]
    pub axis: Option<String>,
    #[arg(long = "t-max", allow_hyphen_values = true)]
    pub t_max: Option<String>,
    #[arg(long)]
    pub samples: Option<String>,
    #[arg(long = "markovian-r-min")]
    pub markovian_r_min: Option<String>,
    #[arg(long = "markovian-q-max")]
    pub markovian_q_max: Option<String>,
    #[arg(long = "non-markovian-r-max")]
    pub non_markovian_r_max: Option<String>,
    #[arg(long = "non-markovian-q-min")]
    pub non_markovian_q_min: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SimulateArgs {
    fn entries(&self) -> Result<Entries, ConfigError> {
        let mut e = Entries::default();
        for (key, flag, value) in [
            ("Q", "q", &self.q),
            ("R", "r", &self.r),
            ("J", "j", &self.j),
            ("lambda", "lambda", &self.lambda),
            ("gamma_M", "gamma-m", &self.gamma_m),
            ("theta", "theta", &self.theta),
            ("mode", "mode", &self.mode),
            ("axis", "axis", &self.axis),
            ("t_max", "t-max", &self.t_max),
            ("samples", "samples", &self.samples),
            ("markovian_r_min", "markovian-r-min", &self.markovian_r_min),
            ("markovian_q_max", "markovian-q-max", &self.markovian_q_max),
            (
                "non_markovian_r_max",
                "non-markovian-r-max",
                &self.non_markovian_r_max,
            ),
            (
                "non_markovian_q_min",
                "non-markovian-q-min",
                &self.non_markovian_q_min,
            ),
        ] {
            if let Some(v) = value {
                e.insert(key, v.trim(), Origin::Flag(flag))?;
            }
        }
        Ok(e)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Model(#[from] nmqubits::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

fn io_at(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// `<path>.meta`, next to the CSV.
pub fn meta_path(csv: &Path) -> PathBuf {
    let mut name = csv.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

/// Runs the configured sweep and writes the CSV to `out`, or to stdout with
/// the resolved configuration echoed on stderr.
pub fn run_config(cfg: &RunConfig, out: Option<&Path>, preamble: &str) -> Result<usize, CliError> {
    let records = nmqubits::sweep::run_sweep(&cfg.sweep_spec()?)?;
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(io_at(dir))?;
            }
            let file = fs::File::create(path).map_err(io_at(path))?;
            let n = csv_io::emit_csv(&records, io::BufWriter::new(file)).map_err(io_at(path))?;
            let meta = meta_path(path);
            fs::write(&meta, format!("{preamble}{cfg}")).map_err(io_at(&meta))?;
            Ok(n)
        }
        None => {
            eprint!("{}", commented(&format!("{preamble}{cfg}")));
            let stdout = io::stdout().lock();
            csv_io::emit_csv(&records, stdout).map_err(io_at(Path::new("<stdout>")))
        }
    }
}

fn commented(text: &str) -> String {
    text.lines()
        .map(|l| {
            if l.starts_with('#') {
                format!("{l}\n")
            } else {
                format!("# {l}\n")
            }
        })
        .collect()
}

pub fn panel_preamble(panel: Panel) -> String {
    format!(
        "# panel {panel}: R = {}, theta = pi/2, Q values {:?} chosen to span Markovian decay to collapse\n",
        panel.r(),
        panel.q_values()
    )
}

/// Writes `panel_<x>.csv` and its sidecar into `dir`; returns the CSV path.
pub fn write_panel(panel: Panel, dir: &Path) -> Result<PathBuf, CliError> {
    let path = dir.join(format!("{}.csv", panel.file_stem()));
    run_config(&panel.config(), Some(&path), &panel_preamble(panel))?;
    Ok(path)
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let cfg = RunConfig::resolve(&args.entries()?)?;
            run_config(&cfg, args.out.as_deref(), "")?;
            Ok(EXIT_OK)
        }
        Command::Figure { panel, out } => {
            let path = write_panel(panel, &out)?;
            eprintln!("wrote {}", path.display());
            Ok(EXIT_OK)
        }
        Command::Sweep { config, out } => {
            let text = fs::read_to_string(&config).map_err(io_at(&config))?;
            let cfg = config::parse_config(&text)?;
            let target = out.or_else(|| cfg.output.clone());
            run_config(&cfg, target.as_deref(), "")?;
            Ok(EXIT_OK)
        }
        Command::Verify { report } => {
            let result = nmqubits::verify::run_all();
            let text = result.to_string();
            print!("{text}");
            io::stdout().flush().ok();
            if let Some(path) = report {
                fs::write(&path, &text).map_err(io_at(&path))?;
            }
            Ok(if result.all_passed() {
                EXIT_OK
            } else {
                EXIT_CRITERION
            })
        }
    }
}

/// Parses arguments and runs; usage and configuration problems exit with 2.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            e.print().ok();
            return ExitCode::from(if code == 0 { EXIT_OK } else { EXIT_USAGE });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
