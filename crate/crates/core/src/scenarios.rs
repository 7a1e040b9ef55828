//! Step-by-step reproductions of the disentanglement erasers.
//!
//! * `fig1a`: tag `AB` with a c-NOT onto `T`, then undo it.
//! * `fig1b`: tag, then erase by measuring `T` in a chosen basis.
//! * `fig2a`: optical reversible eraser on two photon polarizations, tagged
//!   by photon 1's path through a polarizing beam splitter.
//! * `fig2b`: optical irreversible eraser on photon 1's polarization and
//!   four-valued path, tagged by photon 2's polarization.
//!
//! Every step records the state and `E_pf`, `E_f`, `E_a` across the
//! scenario's `A | B` cut.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::circuits::{apply_gate, measure, taggant_basis, tagger, untagger, Gate, MeasurementResult, MeasurementSpec, TaggantBasis};
use crate::error::{Error, Result};
use crate::measures::{
    entanglement_of_assistance, entanglement_of_formation, entanglement_of_projection, entanglement_pf,
    BasisParams,
};
use crate::random::{random_basis_params, random_state, seeded};
use crate::state::{PartitionSpec, StateVector};

/// One snapshot of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub label: String,
    /// For measurement steps this is the pre-measurement purification;
    /// the outcomes are in `outcomes`.
    pub state: StateVector,
    pub e_pf: Option<f64>,
    pub e_f: Option<f64>,
    pub e_a: Option<f64>,
    /// Entanglement of projection in a requested basis (DSL `report ep`).
    pub e_p: Option<f64>,
    pub measurement: Option<MeasurementSpec>,
    pub outcomes: Option<MeasurementResult>,
}

impl Step {
    pub fn new(label: impl Into<String>, state: StateVector) -> Self {
        Self {
            label: label.into(),
            state,
            e_pf: None,
            e_f: None,
            e_a: None,
            e_p: None,
            measurement: None,
            outcomes: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioTrace {
    pub steps: Vec<Step>,
    /// Absent for programs that never declared one.
    pub partition: Option<PartitionSpec>,
}

impl ScenarioTrace {
    pub fn e_pf(&self) -> Vec<Option<f64>> {
        self.steps.iter().map(|s| s.e_pf).collect()
    }

    pub fn last(&self) -> &Step {
        self.steps.last().expect("traces are never empty")
    }
}

/// Fills in `E_pf`, `E_f` and `E_a` for `state`. When a taggant
/// measurement has been made, `E_pf` uses it while `E_f` and `E_a` still
/// describe the (unchanged) `AB` mixture of the purification.
fn snapshot(label: &str, state: StateVector, cut: &PartitionSpec, meas: Option<MeasurementSpec>) -> Result<Step> {
    let e_f = entanglement_of_formation(&state, cut)?.value;
    let e_a = entanglement_of_assistance(&state, cut)?.value;
    let e_pf = match &meas {
        None => e_f,
        Some(spec) => entanglement_pf(&state, cut, Some(spec))?.value,
    };
    let outcomes = meas.as_ref().map(|m| measure(&state, m)).transpose()?;
    let mut step = Step::new(label, state);
    step.e_pf = Some(e_pf);
    step.e_f = Some(e_f);
    step.e_a = Some(e_a);
    step.measurement = meas;
    step.outcomes = outcomes;
    Ok(step)
}

fn fig1_partition() -> PartitionSpec {
    PartitionSpec::new(vec![0], vec![1], vec![2]).expect("static partition")
}

/// `(|00⟩ + |11⟩)_AB |0⟩_T / √2`.
pub fn fig1_initial_state() -> StateVector {
    StateVector::bell(3, 0, 1).expect("static state")
}

/// Reversible eraser: tagger then untagger on `(A, B, T) = (0, 1, 2)`.
pub fn run_fig1a() -> Result<ScenarioTrace> {
    let cut = fig1_partition();
    let s0 = fig1_initial_state();
    let s1 = tagger(&s0, 0, 2)?;
    let s2 = untagger(&s1, 0, 2)?;
    Ok(ScenarioTrace {
        steps: vec![
            snapshot("t=0 entangled AB", s0, &cut, None)?,
            snapshot("t=1 tagger (GHZ)", s1, &cut, None)?,
            snapshot("t=2 untagger", s2, &cut, None)?,
        ],
        partition: Some(cut),
    })
}

/// Irreversible eraser: tagger, then a (possibly delayed-choice)
/// measurement of `T` in the basis given by `basis`.
pub fn run_fig1b(basis: BasisParams) -> Result<ScenarioTrace> {
    let cut = fig1_partition();
    let s0 = fig1_initial_state();
    let s1 = tagger(&s0, 0, 2)?;
    let spec = MeasurementSpec::new(vec![2], taggant_basis(basis))?;
    Ok(ScenarioTrace {
        steps: vec![
            snapshot("t=0 entangled AB", s0, &cut, None)?,
            snapshot("t=1 tagger (GHZ)", s1.clone(), &cut, None)?,
            snapshot("t=2 measure T (delayed choice)", s1, &cut, Some(spec))?,
        ],
        partition: Some(cut),
    })
}

/// Roles of register qubits in the two-photon experiments. Paths of
/// photon 1 with four values use two qubits, `p1a` most significant:
/// path `|0⟩ = 00`, `|1⟩ = 01`, `|2⟩ = 10`, `|3⟩ = 11`. Polarization
/// `h ↦ |0⟩`, `v ↦ |1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpticalEncoding {
    pub s1: usize,
    pub s2: usize,
    pub p1a: usize,
    pub p1b: Option<usize>,
}

impl OpticalEncoding {
    /// Register `(s1, s2, p1)`.
    pub const REVERSIBLE: Self = Self { s1: 0, s2: 1, p1a: 2, p1b: None };
    /// Register `(s1, p1a, p1b, s2)`.
    pub const IRREVERSIBLE: Self = Self { s1: 0, s2: 3, p1a: 1, p1b: Some(2) };

    pub fn n_qubits(&self) -> usize {
        3 + usize::from(self.p1b.is_some())
    }

    /// Basis index for polarizations and a path value.
    pub fn index(&self, s1: usize, s2: usize, path: usize) -> usize {
        let n = self.n_qubits();
        let mut idx = (s1 << (n - 1 - self.s1)) | (s2 << (n - 1 - self.s2));
        match self.p1b {
            None => idx |= path << (n - 1 - self.p1a),
            Some(p1b) => {
                idx |= (path >> 1) << (n - 1 - self.p1a);
                idx |= (path & 1) << (n - 1 - p1b);
            }
        }
        idx
    }

    /// `(|hv⟩ − |vh⟩)_{s1 s2} / √2` with photon 1 on path 0.
    pub fn singlet(&self) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n_qubits()];
        amps[self.index(0, 1, 0)] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[self.index(1, 0, 0)] = Complex64::new(-FRAC_1_SQRT_2, 0.0);
        StateVector::new(self.n_qubits(), amps).expect("normalized singlet")
    }
}

/// Rows `⟨h̄|`, `⟨v̄|` with `h̄ = (h + v)/√2`, `v̄ = (−h + v)/√2`: maps
/// `h̄ ↦ |0⟩` and `v̄ ↦ |1⟩`.
fn to_bar_basis(target: usize) -> Gate {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Gate::single_qubit([[h, h], [-h, h]], target, "to h-bar/v-bar").expect("unitary")
}

fn from_bar_basis(target: usize) -> Gate {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Gate::single_qubit([[h, -h], [h, h]], target, "from h-bar/v-bar").expect("unitary")
}

/// Polarizing beam splitter in the h/v orientation: c-NOT from the
/// polarization onto a path qubit.
pub fn pbs_hv(s: &StateVector, polarization: usize, path: usize) -> Result<StateVector> {
    apply_gate(s, &Gate::cnot(polarization, path)?)
}

/// PBS pair oriented along h̄/v̄: rotate the polarization into the
/// h̄/v̄ basis, c-NOT onto the path qubit, rotate back. Self-inverse.
pub fn pbs_bar(s: &StateVector, polarization: usize, path: usize) -> Result<StateVector> {
    let s = apply_gate(s, &to_bar_basis(polarization))?;
    let s = apply_gate(&s, &Gate::cnot(polarization, path)?)?;
    apply_gate(&s, &from_bar_basis(polarization))
}

/// Rewrites `s` with the polarization qubit expressed in the h̄/v̄ basis
/// (`|0⟩ = h̄`, `|1⟩ = v̄`).
pub fn in_bar_basis(s: &StateVector, polarization: usize) -> Result<StateVector> {
    apply_gate(s, &to_bar_basis(polarization))
}

/// Reversible optical eraser; cut `s1 | s2`, taggant `p1`.
pub fn run_fig2a() -> Result<ScenarioTrace> {
    let enc = OpticalEncoding::REVERSIBLE;
    let cut = PartitionSpec::new(vec![enc.s1], vec![enc.s2], vec![enc.p1a])?;
    let s0 = enc.singlet();
    let s1 = pbs_hv(&s0, enc.s1, enc.p1a)?;
    let s2 = pbs_hv(&s1, enc.s1, enc.p1a)?;
    Ok(ScenarioTrace {
        steps: vec![
            snapshot("t=0 singlet, path 0", s0, &cut, None)?,
            snapshot("t=1 PBS tags s1 with p1", s1, &cut, None)?,
            snapshot("t=2 reverse PBS", s2, &cut, None)?,
        ],
        partition: Some(cut),
    })
}

/// Basis in which photon 2's polarization is measured at the end of `fig2b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fig2bMeasurement {
    /// h/v: leaves `AB` unentangled.
    Hv,
    /// h̄/v̄: restores full `AB` entanglement.
    HbarVbar,
}

impl Fig2bMeasurement {
    pub fn basis(self) -> TaggantBasis {
        match self {
            Self::Hv => TaggantBasis::computational(2),
            Self::HbarVbar => TaggantBasis::plus_minus(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Hv => "hv",
            Self::HbarVbar => "hbar_vbar",
        }
    }
}

impl FromStr for Fig2bMeasurement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hv" => Ok(Self::Hv),
            "hbar_vbar" => Ok(Self::HbarVbar),
            other => Err(Error::InvalidMeasurement(format!("unknown measurement {other:?}"))),
        }
    }
}

fn fig2b_partition() -> PartitionSpec {
    let enc = OpticalEncoding::IRREVERSIBLE;
    PartitionSpec::new(vec![enc.s1], vec![enc.p1a, enc.p1b.expect("two path qubits")], vec![enc.s2])
        .expect("static partition")
}

/// The fully entangled 2×4 state reached at `t=2` of `fig2b`.
pub fn fig2b_entangled_state() -> Result<StateVector> {
    let enc = OpticalEncoding::IRREVERSIBLE;
    let p1b = enc.p1b.expect("two path qubits");
    let s = pbs_hv(&enc.singlet(), enc.s1, enc.p1a)?;
    pbs_bar(&s, enc.s1, p1b)
}

/// Irreversible optical eraser; cut `s1 | (p1a, p1b)`, taggant `s2`.
pub fn run_fig2b(meas: Fig2bMeasurement) -> Result<ScenarioTrace> {
    let enc = OpticalEncoding::IRREVERSIBLE;
    let p1b = enc.p1b.expect("two path qubits");
    let cut = fig2b_partition();
    let s0 = enc.singlet();
    let s1 = pbs_hv(&s0, enc.s1, enc.p1a)?;
    let s2 = pbs_bar(&s1, enc.s1, p1b)?;
    let s3 = pbs_bar(&s2, enc.s1, p1b)?;
    let spec = MeasurementSpec::new(vec![enc.s2], meas.basis())?;
    let label = format!("t=4 measure s2 in {}", meas.name());
    Ok(ScenarioTrace {
        steps: vec![
            snapshot("t=0 singlet, path 0", s0, &cut, None)?,
            snapshot("t=1 PBS h/v tags with s2", s1, &cut, None)?,
            snapshot("t=2 PBS pair h-bar/v-bar", s2, &cut, None)?,
            snapshot("t=3 reverse PBS pair (retag)", s3.clone(), &cut, None)?,
            snapshot(&label, s3, &cut, Some(spec))?,
        ],
        partition: Some(cut),
    })
}

/// Largest `|E_p − 1|` over `n_samples` random taggant bases for the 2×4
/// state of `fig2b` at `t=2`.
pub fn check_2x4_invariance(n_samples: usize, seed: u64) -> Result<f64> {
    check_2x4_invariance_with(n_samples, &mut seeded(seed))
}

pub fn check_2x4_invariance_with<R: Rng + ?Sized>(n_samples: usize, rng: &mut R) -> Result<f64> {
    let state = fig2b_entangled_state()?;
    let cut = fig2b_partition();
    let mut worst: f64 = 0.0;
    for _ in 0..n_samples {
        let basis = taggant_basis(random_basis_params(rng));
        let ep = entanglement_of_projection(&state, &cut, &basis)?.value;
        worst = worst.max((ep - 1.0).abs());
    }
    Ok(worst)
}

/// Largest violation of `E_f ≤ E_p ≤ E_a` over `n_states` random
/// three-qubit states, each probed with `n_bases` random taggant bases.
/// Zero means no violation.
pub fn sandwich_violation<R: Rng + ?Sized>(n_states: usize, n_bases: usize, rng: &mut R) -> Result<f64> {
    let cut = fig1_partition();
    let mut worst: f64 = 0.0;
    for _ in 0..n_states {
        let s = random_state(3, rng);
        let ef = entanglement_of_formation(&s, &cut)?.value;
        let ea = entanglement_of_assistance(&s, &cut)?.value;
        for _ in 0..n_bases {
            let ep = entanglement_of_projection(&s, &cut, &taggant_basis(random_basis_params(rng)))?.value;
            worst = worst.max(ef - ep).max(ep - ea);
        }
    }
    Ok(worst)
}

/// Names accepted by the `run` command.
pub const SCENARIOS: [&str; 4] = ["fig1a", "fig1b", "fig2a", "fig2b"];

/// Runs a built-in scenario by name.
pub fn run_named(name: &str, basis: BasisParams, meas: Fig2bMeasurement) -> Result<ScenarioTrace> {
    match name {
        "fig1a" => run_fig1a(),
        "fig1b" => run_fig1b(basis),
        "fig2a" => run_fig2a(),
        "fig2b" => run_fig2b(meas),
        other => Err(Error::InvalidMeasurement(format!("unknown scenario {other:?}"))),
    }
}
