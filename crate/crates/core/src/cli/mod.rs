//! `spinfid` command-line front end.
//!
//! Exit status: 0 success, 1 usage error, 2 numerical failure,
//! 3 verification failure.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use commands::{cmd_fidelity, cmd_sweep, run_verification, verification_table, CheckStatus};
use config::{ConfigLayer, ScenarioConfig};
use output::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "spinfid", version, about = "Spin fidelity of GHZ and W wave packets under Lorentz boosts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form (and optionally oracle) fidelity at one boost.
    Fidelity(ScenarioArgs),
    /// Closed-form fidelity curves over a rapidity range.
    Sweep(ScenarioArgs),
    /// Oracle-against-closed-form checks over a fixed parameter matrix.
    Verify(ScenarioArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// `key = value` config file; flags override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Preset for figure 1 (GHZ) or 2 (W): gamma 20, theta 0, eta 0..10 in 201 steps.
    #[arg(long, value_name = "1|2")]
    figure: Option<u8>,
    /// ghz, w or all.
    #[arg(long)]
    state: Option<String>,
    /// product, pair, triple or all.
    #[arg(long)]
    corr: Option<String>,
    /// Momentum width of the packet.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Angle between boost and particle momentum, in radians.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// positive or symmetric.
    #[arg(long)]
    support: Option<String>,
    /// Boost rapidity.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    /// Boost speed as a fraction of c.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eta_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eta_max: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    steps: Option<String>,
    /// Also build the boosted density matrix by explicit momentum averaging.
    #[arg(long)]
    with_oracle: bool,
    #[arg(long, allow_hyphen_values = true)]
    oracle_nodes: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rel_tol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    abs_tol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    max_subdivisions: Option<String>,
    /// csv or json; verify defaults to an aligned table.
    #[arg(long, value_enum)]
    output: Option<OutputFormat>,
    /// Print the resolved configuration in config-file form and exit.
    #[arg(long)]
    dump_config: bool,
}

impl ScenarioArgs {
    fn flag_layer(&self) -> Result<ConfigLayer, Error> {
        let mut layer = ConfigLayer::default();
        let pairs = [
            ("state", &self.state),
            ("corr", &self.corr),
            ("gamma", &self.gamma),
            ("theta", &self.theta),
            ("support", &self.support),
            ("eta", &self.eta),
            ("beta", &self.beta),
            ("eta_min", &self.eta_min),
            ("eta_max", &self.eta_max),
            ("steps", &self.steps),
            ("oracle_nodes", &self.oracle_nodes),
            ("rel_tol", &self.rel_tol),
            ("abs_tol", &self.abs_tol),
            ("max_subdivisions", &self.max_subdivisions),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                layer.set(key, v)?;
            }
        }
        if self.with_oracle {
            layer.with_oracle = Some(true);
        }
        Ok(layer)
    }

    fn resolve(&self) -> Result<ScenarioConfig, Error> {
        let mut layer = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidParameter(format!("cannot read config {}: {e}", path.display()))
                })?;
                ConfigLayer::parse(&text)?
            }
            None => ConfigLayer::default(),
        };
        if let Some(n) = self.figure {
            layer = layer.merged(&ConfigLayer::figure(n)?)?;
        }
        layer.merged(&self.flag_layer()?)?.resolve()
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter(_) | Error::Superluminal(_) => EXIT_USAGE,
        Error::Convergence { .. } | Error::InvalidState(_) | Error::Precondition(_) | Error::Inconsistent(_) => {
            EXIT_NUMERICAL
        }
    }
}

fn emit(table: &Table, format: OutputFormat, out: &mut dyn Write) -> std::io::Result<()> {
    let mut out = out;
    match format {
        OutputFormat::Csv => table.write_csv(&mut out),
        OutputFormat::Json => table.write_json(&mut out),
        OutputFormat::Table => table.write_text(&mut out),
    }
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (kind, args) = match &cli.command {
        Command::Fidelity(a) => ("fidelity", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Verify(a) => ("verify", a),
    };
    let cfg = match args.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(err, "spinfid: {e}");
            return exit_code_for(&e);
        }
    };
    if args.dump_config {
        return match out.write_all(cfg.to_config_string().as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(_) => EXIT_USAGE,
        };
    }

    let result = match kind {
        "fidelity" => cmd_fidelity(&cfg).map(|t| (t, OutputFormat::Csv, false)),
        "sweep" => cmd_sweep(&cfg).map(|t| (t, OutputFormat::Csv, false)),
        _ => run_verification(&cfg).map(|checks| {
            let failed = checks.iter().any(|c| c.status == CheckStatus::Fail);
            for c in checks.iter().filter(|c| c.status == CheckStatus::Fail) {
                let _ = writeln!(err, "FAIL {} (difference {:e})", c.name(), c.difference);
            }
            (verification_table(&checks), OutputFormat::Table, failed)
        }),
    };
    match result {
        Ok((table, default_format, failed)) => {
            if let Err(e) = emit(&table, args.output.unwrap_or(default_format), out) {
                let _ = writeln!(err, "spinfid: write failed: {e}");
                return EXIT_USAGE;
            }
            if failed {
                EXIT_VERIFICATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "spinfid: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let code = run_with(std::env::args_os(), &mut out, &mut stderr.lock());
    let _ = out.flush();
    code
}
