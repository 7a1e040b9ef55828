use std::f64::consts::FRAC_PI_4;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{value_parser, ColorChoice, CommandFactory, FromArgMatches, Parser, Subcommand};
use eraserlab::commands::{cmd_check, cmd_exec, cmd_run, cmd_sweep, CliError, Output, RunOptions};

#[derive(Parser)]
#[command(name = "eraserlab", version, about = "Entanglement erasers on small qubit registers")]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in scenario (fig1a, fig1b, fig2a, fig2b) and print its trace.
    Run {
        /// Scenario name
        scenario: String,
        /// Final measurement of fig2b.
        #[arg(long, default_value = "hv", value_parser = ["hv", "hbar_vbar"])]
        meas: String,
        /// Taggant basis angle of fig1b, in [0, pi/2].
        #[arg(long, default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
        theta: f64,
        /// Taggant basis phase of fig1b, in [0, 2pi).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write each step's state vector into this directory.
        #[arg(long)]
        states_dir: Option<PathBuf>,
    },
    /// Compare closed-form and numerical E_p over evenly spaced a^2.
    Sweep {
        /// Weight of |000> in the tagged state, in [0, 1]
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        alpha2: f64,
        /// Number of a^2 points, endpoints included
        #[arg(long, default_value_t = 11, value_parser = value_parser!(u32).range(2..))]
        grid: u32,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Parse and execute a circuit program.
    Exec {
        /// Program file
        path: PathBuf,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Numerical self-checks: 2x4 basis invariance and E_f <= E_p <= E_a.
    Check {
        /// Random taggant bases for the invariance check
        #[arg(long, default_value_t = 1000, value_parser = value_parser!(u64).range(1..))]
        samples: u64,
    },
}

fn color_enabled() -> bool {
    std::env::var_os("ERASERLAB_NO_COLOR").is_none()
}

fn report_error(message: &str) {
    let prefix = if color_enabled() && std::io::stderr().is_terminal() {
        "\x1b[1;31merror:\x1b[0m"
    } else {
        "error:"
    };
    eprintln!("{prefix} {message}");
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    let (result, output) = match &cli.command {
        Command::Run { scenario, meas, theta, phi, output, states_dir } => {
            let opts = RunOptions { scenario, meas, theta: *theta, phi: *phi, states_dir: states_dir.as_deref() };
            (cmd_run(&opts)?, output.as_deref())
        }
        Command::Sweep { alpha2, grid, output } => (cmd_sweep(*alpha2, *grid as usize)?, output.as_deref()),
        Command::Exec { path, output } => (cmd_exec(path)?, output.as_deref()),
        Command::Check { samples } => {
            let samples = usize::try_from(*samples).map_err(|_| CliError::Usage("--samples too large".into()))?;
            (cmd_check(samples, cli.seed)?, None)
        }
    };
    let Output { text, code } = result;
    emit(&text, output)?;
    Ok(code)
}

fn main() -> ExitCode {
    let color = if color_enabled() { ColorChoice::Auto } else { ColorChoice::Never };
    let matches = Cli::command().color(color).get_matches();
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report_error(&e.to_string());
            ExitCode::from(e.exit_code())
        }
    }
}
