//! Plain-text state vectors.
//!
//! ```text
//! qubits 2
//! 0.7071067811865476 0
//! 0 0
//! 0 0
//! 0.7071067811865476 0
//! ```
//!
//! The header is followed by exactly `2^N` lines of `re im`, in basis-index
//! order. Blank lines are not allowed.

use std::fmt::Write as _;
use std::path::Path;

use eraserlab_core::{Complex64, StateVector, MAX_QUBITS};

/// Largest accepted deviation of the norm from one.
pub const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum StateFileError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("state is not normalized (norm differs from 1 by {0:e})")]
    NotNormalized(f64),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn format_error(line: usize, message: impl Into<String>) -> StateFileError {
    StateFileError::Format { line, message: message.into() }
}

fn parse_float(text: &str, line: usize) -> Result<f64, StateFileError> {
    match text.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format_error(line, format!("expected a finite number, found {text:?}"))),
    }
}

pub fn parse_state(text: &str) -> Result<StateVector, StateFileError> {
    let lines: Vec<&str> = text.strip_suffix('\n').unwrap_or(text).split('\n').map(|l| l.trim_end_matches('\r')).collect();
    let header: Vec<&str> = lines[0].split_whitespace().collect();
    let n = match header.as_slice() {
        ["qubits", n] => n.parse::<usize>().map_err(|_| format_error(1, format!("bad qubit count {n:?}")))?,
        _ => return Err(format_error(1, "expected `qubits N`")),
    };
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(format_error(1, format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    let dim = 1usize << n;
    if lines.len() - 1 != dim {
        return Err(format_error(
            lines.len().min(dim + 2),
            format!("expected {dim} amplitude lines, found {}", lines.len() - 1),
        ));
    }
    let mut amps = Vec::with_capacity(dim);
    for (k, line) in lines[1..].iter().enumerate() {
        let number = k + 2;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [re, im] = fields.as_slice() else {
            return Err(format_error(number, "expected `re im`"));
        };
        amps.push(Complex64::new(parse_float(re, number)?, parse_float(im, number)?));
    }
    let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(StateFileError::NotNormalized((norm - 1.0).abs()));
    }
    Ok(StateVector::normalized(n, amps).expect("norm checked above"))
}

/// Shortest round-trip rendering of each amplitude.
pub fn render_state(s: &StateVector) -> String {
    let mut out = format!("qubits {}\n", s.n_qubits());
    for a in s.amplitudes() {
        writeln!(out, "{} {}", a.re, a.im).expect("writing to a String");
    }
    out
}

pub fn read_state_file(path: &Path) -> Result<StateVector, StateFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| StateFileError::Io { path: path.display().to_string(), source })?;
    parse_state(&text)
}
