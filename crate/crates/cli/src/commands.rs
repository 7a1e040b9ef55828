use std::path::{Path, PathBuf};

use eraserlab_core::dsl::{execute, parse_bytes, ExecError, StateLoader};
use eraserlab_core::random::seeded;
use eraserlab_core::scenarios::{check_2x4_invariance_with, run_named, sandwich_violation, Fig2bMeasurement, SCENARIOS};
use eraserlab_core::{
    ep_closed_form, entanglement_of_projection, taggant_basis, BasisParams, Complex64, PartitionSpec, StateVector,
};

use crate::csv::{format_number, table_csv, trace_csv};
use crate::statefile::{read_state_file, render_state, StateFileError};

/// Failure of a command, classified by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments (exit 2).
    #[error("{0}")]
    Usage(String),
    /// Parse, runtime or check failure (exit 1).
    #[error("{0}")]
    Failed(String),
    /// File system trouble (exit 3).
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// Text for stdout plus the exit status to finish with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

/// Tolerance below which `check` deviations pass.
pub const CHECK_TOLERANCE: f64 = 1e-6;
/// Random states and bases per state in the sandwich part of `check`.
pub const CHECK_SANDWICH_STATES: usize = 20;
pub const CHECK_SANDWICH_BASES: usize = 10;

pub struct RunOptions<'a> {
    pub scenario: &'a str,
    pub meas: &'a str,
    pub theta: f64,
    pub phi: f64,
    pub states_dir: Option<&'a Path>,
}

pub fn cmd_run(opts: &RunOptions<'_>) -> Result<Output, CliError> {
    if !SCENARIOS.contains(&opts.scenario) {
        return Err(CliError::Usage(format!(
            "unknown scenario {:?} (expected one of {})",
            opts.scenario,
            SCENARIOS.join(", ")
        )));
    }
    let meas: Fig2bMeasurement = opts.meas.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
    let basis = BasisParams::new(opts.theta, opts.phi).map_err(|e| CliError::Usage(e.to_string()))?;
    let trace = run_named(opts.scenario, basis, meas).map_err(|e| CliError::Failed(e.to_string()))?;
    if let Some(dir) = opts.states_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        for (i, step) in trace.steps.iter().enumerate() {
            let path = dir.join(format!("{}_step{i}.state", opts.scenario));
            std::fs::write(&path, render_state(&step.state))
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(Output::ok(trace_csv(&trace)))
}

/// `α|000⟩ + β|111⟩` with `α² = alpha2`, the tagged state behind the sweep.
pub fn tagged_state(alpha2: f64) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0] = Complex64::new(alpha2.sqrt(), 0.0);
    amps[7] = Complex64::new((1.0 - alpha2).sqrt(), 0.0);
    StateVector::normalized(3, amps).expect("nonzero amplitudes")
}

pub fn cmd_sweep(alpha2: f64, grid: usize) -> Result<Output, CliError> {
    if !(0.0..=1.0).contains(&alpha2) {
        return Err(CliError::Usage(format!("--alpha2 must lie in [0, 1], got {alpha2}")));
    }
    if grid < 2 {
        return Err(CliError::Usage(format!("--grid must be at least 2, got {grid}")));
    }
    let state = tagged_state(alpha2);
    let cut = PartitionSpec::new(vec![0], vec![1], vec![2]).expect("static partition");
    let mut rows = Vec::with_capacity(grid);
    for k in 0..grid {
        let a2 = k as f64 / (grid - 1) as f64;
        let closed = ep_closed_form(alpha2, a2).map_err(|e| CliError::Failed(e.to_string()))?;
        let basis = BasisParams::from_a2(a2).map_err(|e| CliError::Failed(e.to_string()))?;
        let numeric = entanglement_of_projection(&state, &cut, &taggant_basis(basis))
            .map_err(|e| CliError::Failed(e.to_string()))?
            .value;
        rows.push(vec![a2, closed, numeric]);
    }
    Ok(Output::ok(table_csv(&["a2", "ep_closed_form", "ep_numeric"], &rows)))
}

/// Reads `init state` files relative to the program's directory.
struct FileLoader {
    base: PathBuf,
    io_failed: bool,
}

impl StateLoader for FileLoader {
    fn load(&mut self, path: &str) -> Result<StateVector, String> {
        let full = self.base.join(path);
        read_state_file(&full).map_err(|e| {
            self.io_failed |= matches!(e, StateFileError::Io { .. });
            match e {
                StateFileError::Io { .. } => e.to_string(),
                other => format!("{}: {other}", full.display()),
            }
        })
    }
}

pub fn cmd_exec(path: &Path) -> Result<Output, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let program = parse_bytes(&bytes).map_err(|e| CliError::Failed(e.to_string()))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut loader = FileLoader { base, io_failed: false };
    match execute(&program, &mut loader) {
        Ok(trace) => Ok(Output::ok(trace_csv(&trace))),
        Err(e @ ExecError::Load { .. }) if loader.io_failed => Err(CliError::Io(e.to_string())),
        Err(e) => Err(CliError::Failed(e.to_string())),
    }
}

/// 2×4 invariance over `samples` random bases, then the sandwich
/// inequalities on up to 20 random states, all drawn from one generator.
pub fn cmd_check(samples: usize, seed: u64) -> Result<Output, CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".to_string()));
    }
    let mut rng = seeded(seed);
    let invariance = check_2x4_invariance_with(samples, &mut rng).map_err(|e| CliError::Failed(e.to_string()))?;
    let states = samples.min(CHECK_SANDWICH_STATES);
    let sandwich = sandwich_violation(states, CHECK_SANDWICH_BASES, &mut rng)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let pass = invariance < CHECK_TOLERANCE && sandwich < CHECK_TOLERANCE;
    let text = format!(
        "invariance_samples,{samples}\ninvariance_max_deviation,{}\nsandwich_samples,{}\nsandwich_max_violation,{}\nresult,{}\n",
        format_number(invariance),
        states * CHECK_SANDWICH_BASES,
        format_number(sandwich),
        if pass { "pass" } else { "fail" }
    );
    Ok(Output { text, code: if pass { 0 } else { 1 } })
}
