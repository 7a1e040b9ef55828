//! Line-oriented circuit language.
//!
//! ```text
//! # eraserlab-dsl v1
//! qubits 3
//! partition A=0 B=1 T=2
//! init bell 0 1
//! cnot 0 2
//! report epf
//! measure T basis theta=0.785398 phi=0
//! report epf
//! ```
//!
//! One instruction per line; `#` starts a comment. The `qubits` declaration
//! must come first and `partition` must precede any `measure` or `report`.
//! `init`, `u`, `cnot` and `measure` each add a step to the trace; `report`
//! attaches a value to the latest step.
//!
//! `measure` records a measurement of the whole taggant without collapsing
//! the simulated purification. Later gates may act on `A` and `B` (they
//! commute with the measurement) but not on `T`, and a second `measure`
//! needs an intervening `init`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::circuits::{apply_gate, measure, taggant_basis, Gate, MeasurementSpec, TaggantBasis};
use crate::error::Error;
use crate::linalg::CMatrix;
use crate::math::sqrt;
use crate::measures::{
    entanglement_of_assistance, entanglement_of_formation, entanglement_of_projection, entanglement_pf,
    BasisParams,
};
use crate::scenarios::{ScenarioTrace, Step};
use crate::state::{PartitionSpec, StateVector, MAX_QUBITS};

/// Tolerance on `U U† = I` for matrices written in a program.
pub const DSL_UNITARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

/// Parse failure; `line` and `column` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::Semantic => "semantic",
        };
        write!(f, "line {}: {} (column {}, {} error)", self.line, self.message, self.column, kind)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Bits(String),
    Bell(usize, usize),
    /// Path to a state file, verbatim from the source.
    StateFile(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Report {
    /// Projection in the single-qubit basis `(θ, φ)`, applied to every
    /// taggant qubit.
    Ep { theta: f64, phi: f64 },
    Ef,
    Ea,
    Epf,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Init(Init),
    /// Rows of the matrix, as written.
    Unitary { target: usize, matrix: [[Complex64; 2]; 2] },
    Cnot { control: usize, target: usize },
    /// Measure all taggant qubits, each in the basis `(θ, φ)`.
    Measure { theta: f64, phi: f64 },
    Report(Report),
}

impl Instruction {
    fn is_step(&self) -> bool {
        !matches!(self, Instruction::Report(_))
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Init(Init::Bits(bits)) => write!(f, "init {bits}"),
            Instruction::Init(Init::Bell(i, j)) => write!(f, "init bell {i} {j}"),
            Instruction::Init(Init::StateFile(path)) => write!(f, "init state {path}"),
            Instruction::Unitary { target, matrix } => {
                write!(f, "u {target}")?;
                for z in matrix.iter().flatten() {
                    write!(f, " {} {}", z.re, z.im)?;
                }
                Ok(())
            }
            Instruction::Cnot { control, target } => write!(f, "cnot {control} {target}"),
            Instruction::Measure { theta, phi } => write!(f, "measure T basis theta={theta} phi={phi}"),
            Instruction::Report(Report::Ep { theta, phi }) => write!(f, "report ep theta={theta} phi={phi}"),
            Instruction::Report(Report::Ef) => f.write_str("report ef"),
            Instruction::Report(Report::Ea) => f.write_str("report ea"),
            Instruction::Report(Report::Epf) => f.write_str("report epf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub register_size: usize,
    pub partition: Option<PartitionSpec>,
    pub instructions: Vec<Instruction>,
    /// Source line of each instruction.
    pub lines: Vec<usize>,
}

impl Program {
    /// Equal up to source positions.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.register_size == other.register_size
            && self.partition == other.partition
            && self.instructions == other.instructions
    }

    /// Canonical source text; re-parses to an equivalent program.
    pub fn render(&self) -> String {
        let mut out = format!("qubits {}\n", self.register_size);
        if let Some(p) = &self.partition {
            out.push_str(&format!("partition A={} B={} T={}\n", join(p.a()), join(p.b()), join(p.t())));
        }
        for ins in &self.instructions {
            out.push_str(&ins.to_string());
            out.push('\n');
        }
        out
    }
}

fn join(idx: &[usize]) -> String {
    idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    /// Content with the comment removed.
    content: &'a str,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn new(number: usize, raw: &'a str) -> Self {
        let content = raw.split('#').next().unwrap_or("").trim_end_matches('\r');
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in content.char_indices() {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    tokens.push(Token { text: &content[s..i], column: s + 1 });
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push(Token { text: &content[s..], column: s + 1 });
        }
        Self { number, content, tokens }
    }

    fn error(&self, column: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column, message: message.into(), kind }
    }

    fn end_column(&self) -> usize {
        self.content.len() + 1
    }

    fn arg(&self, i: usize, what: &str) -> Result<&Token<'a>, ParseError> {
        self.tokens
            .get(i)
            .ok_or_else(|| self.error(self.end_column(), ParseErrorKind::Syntax, format!("expected {what}")))
    }

    fn arity(&self, n: usize) -> Result<(), ParseError> {
        match self.tokens.get(n) {
            Some(extra) => Err(self.error(extra.column, ParseErrorKind::Syntax, format!("unexpected {:?}", extra.text))),
            None if self.tokens.len() < n => {
                Err(self.error(self.end_column(), ParseErrorKind::Syntax, "missing arguments"))
            }
            None => Ok(()),
        }
    }

    fn integer(&self, i: usize, what: &str) -> Result<usize, ParseError> {
        let tok = self.arg(i, what)?;
        tok.text
            .parse::<usize>()
            .map_err(|_| self.error(tok.column, ParseErrorKind::Syntax, format!("expected {what}, found {:?}", tok.text)))
    }

    fn qubit(&self, i: usize, n: usize) -> Result<usize, ParseError> {
        let q = self.integer(i, "qubit index")?;
        if q >= n {
            return Err(self.error(
                self.tokens[i].column,
                ParseErrorKind::Semantic,
                format!("qubit index {q} out of range for {n} qubits"),
            ));
        }
        Ok(q)
    }

    fn float_text(&self, tok: &Token<'_>, text: &str) -> Result<f64, ParseError> {
        let looks_numeric = text.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b));
        match text.parse::<f64>() {
            Ok(x) if looks_numeric && x.is_finite() => Ok(x),
            _ => Err(self.error(tok.column, ParseErrorKind::Syntax, format!("expected finite number, found {text:?}"))),
        }
    }

    fn float(&self, i: usize) -> Result<f64, ParseError> {
        let tok = self.arg(i, "number")?;
        self.float_text(tok, tok.text)
    }

    fn keyed_float(&self, i: usize, key: &str) -> Result<f64, ParseError> {
        let tok = self.arg(i, &format!("{key}=<number>"))?;
        match tok.text.strip_prefix(key).and_then(|r| r.strip_prefix('=')) {
            Some(value) => self.float_text(tok, value),
            None => Err(self.error(tok.column, ParseErrorKind::Syntax, format!("expected {key}=<number>, found {:?}", tok.text))),
        }
    }

    fn keyword(&self, i: usize, word: &str) -> Result<(), ParseError> {
        let tok = self.arg(i, word)?;
        if tok.text != word {
            return Err(self.error(tok.column, ParseErrorKind::Syntax, format!("expected {word:?}, found {:?}", tok.text)));
        }
        Ok(())
    }
}

/// Parses raw bytes, rejecting invalid UTF-8 with a positioned error.
pub fn parse_bytes(source: &[u8]) -> Result<Program, ParseError> {
    match core::str::from_utf8(source) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = &source[..e.valid_up_to()];
            let line = 1 + valid.iter().filter(|&&b| b == b'\n').count();
            let line_start = valid.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
            Err(ParseError {
                line,
                column: valid.len() - line_start + 1,
                message: "invalid UTF-8".to_string(),
                kind: ParseErrorKind::Syntax,
            })
        }
    }
}

pub fn parse(source: &str) -> Result<Program, ParseError> {
    let mut register: Option<usize> = None;
    let mut partition: Option<PartitionSpec> = None;
    let mut instructions = Vec::new();
    let mut lines = Vec::new();

    for (idx, raw) in source.split('\n').enumerate() {
        let line = Line::new(idx + 1, raw);
        let Some(head) = line.tokens.first() else { continue };

        let Some(n) = register else {
            if head.text != "qubits" {
                return Err(line.error(head.column, ParseErrorKind::Semantic, "missing qubits declaration"));
            }
            let n = line.integer(1, "qubit count")?;
            line.arity(2)?;
            if !(1..=MAX_QUBITS).contains(&n) {
                return Err(line.error(
                    line.tokens[1].column,
                    ParseErrorKind::Semantic,
                    format!("register size {n} outside 1..={MAX_QUBITS}"),
                ));
            }
            register = Some(n);
            continue;
        };

        let instruction = match head.text {
            "qubits" => return Err(line.error(head.column, ParseErrorKind::Semantic, "duplicate qubits declaration")),
            "partition" => {
                if partition.is_some() {
                    return Err(line.error(head.column, ParseErrorKind::Semantic, "duplicate partition declaration"));
                }
                partition = Some(parse_partition(&line, n)?);
                continue;
            }
            "init" => parse_init(&line, n)?,
            "u" => {
                line.arity(10)?;
                let target = line.qubit(1, n)?;
                let mut z = [Complex64::new(0.0, 0.0); 4];
                for (k, slot) in z.iter_mut().enumerate() {
                    *slot = Complex64::new(line.float(2 + 2 * k)?, line.float(3 + 2 * k)?);
                }
                let matrix = [[z[0], z[1]], [z[2], z[3]]];
                let dev = CMatrix::from_rows(matrix).unitary_deviation();
                if dev.is_nan() || dev > DSL_UNITARY_TOLERANCE {
                    return Err(line.error(
                        line.tokens[2].column,
                        ParseErrorKind::Semantic,
                        format!("matrix is not unitary (deviation {dev:e})"),
                    ));
                }
                Instruction::Unitary { target, matrix }
            }
            "cnot" => {
                line.arity(3)?;
                let control = line.qubit(1, n)?;
                let target = line.qubit(2, n)?;
                if control == target {
                    return Err(line.error(line.tokens[2].column, ParseErrorKind::Semantic, "control and target coincide"));
                }
                Instruction::Cnot { control, target }
            }
            "measure" => {
                line.arity(5)?;
                line.keyword(1, "T")?;
                line.keyword(2, "basis")?;
                let theta = line.keyed_float(3, "theta")?;
                let phi = line.keyed_float(4, "phi")?;
                match &partition {
                    None => return Err(line.error(head.column, ParseErrorKind::Semantic, "measure requires a partition")),
                    Some(p) if p.t().is_empty() => {
                        return Err(line.error(head.column, ParseErrorKind::Semantic, "partition has no taggant to measure"))
                    }
                    Some(p) if p.t().len() > 2 => {
                        return Err(line.error(head.column, ParseErrorKind::Semantic, "taggant larger than two qubits"))
                    }
                    Some(_) => {}
                }
                Instruction::Measure { theta, phi }
            }
            "report" => {
                if partition.is_none() {
                    return Err(line.error(head.column, ParseErrorKind::Semantic, "report requires a partition"));
                }
                let which = line.arg(1, "measure name")?;
                let report = match which.text {
                    "ep" => {
                        line.arity(4)?;
                        Report::Ep { theta: line.keyed_float(2, "theta")?, phi: line.keyed_float(3, "phi")? }
                    }
                    "ef" | "ea" | "epf" => {
                        line.arity(2)?;
                        match which.text {
                            "ef" => Report::Ef,
                            "ea" => Report::Ea,
                            _ => Report::Epf,
                        }
                    }
                    other => {
                        return Err(line.error(which.column, ParseErrorKind::Syntax, format!("unknown measure {other:?}")))
                    }
                };
                Instruction::Report(report)
            }
            other => return Err(line.error(head.column, ParseErrorKind::Syntax, format!("unknown instruction {other:?}"))),
        };
        instructions.push(instruction);
        lines.push(line.number);
    }

    match register {
        Some(register_size) => Ok(Program { register_size, partition, instructions, lines }),
        None => Err(ParseError {
            line: 1,
            column: 1,
            message: "missing qubits declaration".to_string(),
            kind: ParseErrorKind::Semantic,
        }),
    }
}

fn parse_partition(line: &Line<'_>, n: usize) -> Result<PartitionSpec, ParseError> {
    line.arity(4)?;
    let mut parts: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (k, key) in ["A", "B", "T"].iter().enumerate() {
        let tok = &line.tokens[1 + k];
        let Some(list) = tok.text.strip_prefix(key).and_then(|r| r.strip_prefix('=')) else {
            return Err(line.error(tok.column, ParseErrorKind::Syntax, format!("expected {key}=<indices>")));
        };
        if list.is_empty() {
            continue;
        }
        for item in list.split(',') {
            let q = item.parse::<usize>().map_err(|_| {
                line.error(tok.column, ParseErrorKind::Syntax, format!("bad qubit index {item:?}"))
            })?;
            if q >= n {
                return Err(line.error(
                    tok.column,
                    ParseErrorKind::Semantic,
                    format!("qubit index {q} out of range for {n} qubits"),
                ));
            }
            parts[k].push(q);
        }
    }
    let [a, b, t] = parts;
    let column = line.tokens[1].column;
    if a.is_empty() || b.is_empty() {
        return Err(line.error(column, ParseErrorKind::Semantic, "A and B must be nonempty"));
    }
    let spec = PartitionSpec::new(a, b, t).map_err(|e| line.error(column, ParseErrorKind::Semantic, e.to_string()))?;
    if spec.n_qubits() != n {
        return Err(line.error(column, ParseErrorKind::Semantic, format!("partition must cover all {n} qubits")));
    }
    Ok(spec)
}

fn parse_init(line: &Line<'_>, n: usize) -> Result<Instruction, ParseError> {
    let what = line.arg(1, "bitstring, bell or state")?;
    let init = match what.text {
        "bell" => {
            line.arity(4)?;
            let i = line.qubit(2, n)?;
            let j = line.qubit(3, n)?;
            if i == j {
                return Err(line.error(line.tokens[3].column, ParseErrorKind::Semantic, "bell pair needs two distinct qubits"));
            }
            Init::Bell(i, j)
        }
        "state" => {
            let path = line.arg(2, "state file path")?;
            let text = line.content[path.column - 1..].trim();
            Init::StateFile(text.to_string())
        }
        bits => {
            line.arity(2)?;
            if !bits.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(line.error(what.column, ParseErrorKind::Syntax, format!("expected bitstring, found {bits:?}")));
            }
            if bits.len() != n {
                return Err(line.error(
                    what.column,
                    ParseErrorKind::Semantic,
                    format!("bitstring has {} bits, register has {n}", bits.len()),
                ));
            }
            Init::Bits(bits.to_string())
        }
    };
    Ok(Instruction::Init(init))
}

/// Supplies states for `init state <path>`.
pub trait StateLoader {
    fn load(&mut self, path: &str) -> Result<StateVector, String>;
}

/// Loader for contexts without file access; every load fails.
pub struct NoFiles;

impl StateLoader for NoFiles {
    fn load(&mut self, path: &str) -> Result<StateVector, String> {
        Err(format!("cannot load {path:?}: no file access"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExecError {
    /// A state file could not be read or parsed.
    Load { line: usize, message: String },
    Runtime { line: usize, error: Error },
}

impl ExecError {
    pub fn line(&self) -> usize {
        match self {
            ExecError::Load { line, .. } | ExecError::Runtime { line, .. } => *line,
        }
    }
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExecError::Load { line, message } => write!(f, "line {line}: {message}"),
            ExecError::Runtime { line, error } => write!(f, "line {line}: {error}"),
        }
    }
}

/// Single-qubit basis `(θ, φ)` on each of `n` taggant qubits.
fn product_basis(theta: f64, phi: f64, n: usize) -> TaggantBasis {
    let single = taggant_basis(BasisParams::canonical(theta, phi));
    let m = single.matrix();
    if n == 1 {
        return single;
    }
    let mut u = CMatrix::zeros(4, 4);
    for r in 0..4 {
        for c in 0..4 {
            u[(r, c)] = m[(r >> 1, c >> 1)] * m[(r & 1, c & 1)];
        }
    }
    TaggantBasis::new(u).expect("product of unitaries")
}

/// Gram-Schmidt on the rows, removing the rounding slack allowed by the parser.
fn orthonormalize(m: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let norm = |v: [Complex64; 2]| sqrt(v[0].norm_sqr() + v[1].norm_sqr());
    let r0 = m[0];
    let n0 = norm(r0);
    let r0 = [r0[0] / n0, r0[1] / n0];
    let dot = r0[0].conj() * m[1][0] + r0[1].conj() * m[1][1];
    let r1 = [m[1][0] - dot * r0[0], m[1][1] - dot * r0[1]];
    let n1 = norm(r1);
    [r0, [r1[0] / n1, r1[1] / n1]]
}

/// Runs a program from `|0…0⟩`, producing one step per non-report
/// instruction. Reports before the first step attach to an implicit
/// initial step.
pub fn execute(program: &Program, loader: &mut dyn StateLoader) -> Result<ScenarioTrace, ExecError> {
    let n = program.register_size;
    let mut state = StateVector::basis(n, 0).map_err(|error| ExecError::Runtime { line: 1, error })?;
    let mut measured: Option<MeasurementSpec> = None;
    let mut steps: Vec<Step> = Vec::new();

    for (ins, &line) in program.instructions.iter().zip(&program.lines) {
        let rt = |error: Error| ExecError::Runtime { line, error };
        let in_taggant = |q: usize| program.partition.as_ref().is_some_and(|p| p.t().contains(&q));
        let check_unmeasured = |qs: &[usize], measured: &Option<MeasurementSpec>| {
            if measured.is_some() && qs.iter().any(|&q| in_taggant(q)) {
                Err(rt(Error::InvalidMeasurement("gate acts on a taggant that was already measured".to_string())))
            } else {
                Ok(())
            }
        };

        match ins {
            Instruction::Init(init) => {
                state = match init {
                    Init::Bits(bits) => StateVector::from_bits(bits).map_err(rt)?,
                    Init::Bell(i, j) => StateVector::bell(n, *i, *j).map_err(rt)?,
                    Init::StateFile(path) => {
                        let s = loader.load(path).map_err(|message| ExecError::Load { line, message })?;
                        if s.n_qubits() != n {
                            return Err(rt(Error::DimensionMismatch { expected: n, found: s.n_qubits() }));
                        }
                        s
                    }
                };
                measured = None;
            }
            Instruction::Unitary { target, matrix } => {
                check_unmeasured(&[*target], &measured)?;
                let gate = Gate::single_qubit(orthonormalize(*matrix), *target, "u").map_err(rt)?;
                state = apply_gate(&state, &gate).map_err(rt)?;
            }
            Instruction::Cnot { control, target } => {
                check_unmeasured(&[*control, *target], &measured)?;
                state = apply_gate(&state, &Gate::cnot(*control, *target).map_err(rt)?).map_err(rt)?;
            }
            Instruction::Measure { theta, phi } => {
                if measured.is_some() {
                    return Err(rt(Error::InvalidMeasurement("taggant already measured".to_string())));
                }
                let cut = require_partition(program, line)?;
                let spec = MeasurementSpec::new(cut.t().to_vec(), product_basis(*theta, *phi, cut.t().len()))
                    .map_err(rt)?;
                let mut step = Step::new(ins.to_string(), state.clone());
                step.outcomes = Some(measure(&state, &spec).map_err(rt)?);
                step.measurement = Some(spec.clone());
                steps.push(step);
                measured = Some(spec);
                continue;
            }
            Instruction::Report(report) => {
                let cut = require_partition(program, line)?;
                if steps.is_empty() {
                    steps.push(Step::new("start", state.clone()));
                }
                let step = steps.last_mut().expect("nonempty");
                match report {
                    Report::Ef => step.e_f = Some(entanglement_of_formation(&state, cut).map_err(rt)?.value),
                    Report::Ea => step.e_a = Some(entanglement_of_assistance(&state, cut).map_err(rt)?.value),
                    Report::Epf => {
                        step.e_pf = Some(entanglement_pf(&state, cut, measured.as_ref()).map_err(rt)?.value)
                    }
                    Report::Ep { theta, phi } => {
                        let basis = product_basis(*theta, *phi, cut.t().len());
                        step.e_p = Some(entanglement_of_projection(&state, cut, &basis).map_err(rt)?.value);
                    }
                }
                continue;
            }
        }
        debug_assert!(ins.is_step());
        steps.push(Step::new(ins.to_string(), state.clone()));
    }

    if steps.is_empty() {
        steps.push(Step::new("start", state));
    }
    Ok(ScenarioTrace { steps, partition: program.partition.clone() })
}

fn require_partition(program: &Program, line: usize) -> Result<&PartitionSpec, ExecError> {
    program.partition.as_ref().ok_or(ExecError::Runtime {
        line,
        error: Error::InvalidPartition("no partition declared".to_string()),
    })
}

/// DSL transcription of the reversible eraser, reporting every measure
/// after each step.
pub const FIG1A_PROGRAM: &str = "\
qubits 3
partition A=0 B=1 T=2
init bell 0 1
report epf
report ef
report ea
cnot 0 2
report epf
report ef
report ea
cnot 0 2
report epf
report ef
report ea
";

/// Irreversible eraser with the taggant measured at `θ, φ`.
pub fn fig1b_program(theta: f64, phi: f64) -> String {
    format!(
        "qubits 3\npartition A=0 B=1 T=2\ninit bell 0 1\nreport epf\nreport ef\nreport ea\n\
         cnot 0 2\nreport epf\nreport ef\nreport ea\n\
         measure T basis theta={theta} phi={phi}\nreport epf\nreport ef\nreport ea\n"
    )
}
