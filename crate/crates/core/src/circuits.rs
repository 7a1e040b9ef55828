//! Gate layer: single-qubit unitaries, c-NOT, the tagger/untagger pair,
//! taggant bases and projective measurement of taggant qubits.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::math::{cis, cos, sin, sqrt};
use crate::measures::BasisParams;
use crate::state::{deposit_bits, StateVector, WEIGHT_CUTOFF};

/// Unitarity tolerance for gate matrices and taggant bases.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    SingleQubit { matrix: [[Complex64; 2]; 2], target: usize },
    Cnot { control: usize, target: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub label: String,
}

impl Gate {
    /// Explicit 2×2 unitary on `target`.
    pub fn single_qubit(matrix: [[Complex64; 2]; 2], target: usize, label: impl Into<String>) -> Result<Self> {
        let dev = CMatrix::from_rows(matrix).unitary_deviation();
        if dev > UNITARY_TOLERANCE || dev.is_nan() {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { kind: GateKind::SingleQubit { matrix, target }, label: label.into() })
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        if control == target {
            return Err(Error::ControlIsTarget(control));
        }
        Ok(Self { kind: GateKind::Cnot { control, target }, label: format!("cnot {control} {target}") })
    }

    /// `(1/√2)[[1, 1], [1, −1]]`.
    pub fn hadamard(target: usize) -> Self {
        let h = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { kind: GateKind::SingleQubit { matrix: [[h, h], [h, -h]], target }, label: format!("h {target}") }
    }

    /// Qubits the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self.kind {
            GateKind::SingleQubit { target, .. } => vec![target],
            GateKind::Cnot { control, target } => vec![control, target],
        }
    }
}

fn check_qubit(q: usize, n_qubits: usize) -> Result<()> {
    if q >= n_qubits {
        return Err(Error::QubitOutOfRange { index: q, n_qubits });
    }
    Ok(())
}

pub fn apply_gate(s: &StateVector, g: &Gate) -> Result<StateVector> {
    let n = s.n_qubits();
    for q in g.qubits() {
        check_qubit(q, n)?;
    }
    let mut out = s.clone();
    let amps = out.amplitudes_mut();
    match g.kind {
        GateKind::SingleQubit { matrix: m, target } => {
            let bit = 1usize << (n - 1 - target);
            for i in (0..amps.len()).filter(|i| i & bit == 0) {
                let a0 = amps[i];
                let a1 = amps[i | bit];
                amps[i] = m[0][0] * a0 + m[0][1] * a1;
                amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        GateKind::Cnot { control, target } => {
            let cbit = 1usize << (n - 1 - control);
            let tbit = 1usize << (n - 1 - target);
            for i in (0..amps.len()).filter(|i| i & cbit != 0 && i & tbit == 0) {
                amps.swap(i, i | tbit);
            }
        }
    }
    Ok(out)
}

/// c-NOT from an `A`/`B` qubit onto a taggant qubit: dilutes `AB`
/// entanglement into the whole register.
pub fn tagger(s: &StateVector, controller: usize, taggant: usize) -> Result<StateVector> {
    apply_gate(s, &Gate::cnot(controller, taggant)?)
}

/// The same c-NOT run again: concentrates the entanglement back into `AB`.
pub fn untagger(s: &StateVector, controller: usize, taggant: usize) -> Result<StateVector> {
    apply_gate(s, &Gate::cnot(controller, taggant)?)
}

/// Orthonormal basis of the taggant space. Row `i` of the matrix holds the
/// components of basis ket `|i′⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggantBasis {
    u: CMatrix,
}

impl TaggantBasis {
    pub fn new(u: CMatrix) -> Result<Self> {
        if !u.is_square() || !u.rows().is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: u.rows().next_power_of_two(), found: u.cols() });
        }
        let dev = u.unitary_deviation();
        if dev > UNITARY_TOLERANCE || dev.is_nan() {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { u })
    }

    pub fn computational(dim: usize) -> Self {
        Self { u: CMatrix::identity(dim) }
    }

    /// `{(|0⟩ ± |1⟩)/√2}`, i.e. `θ = π/4`, `φ = 0`.
    pub fn plus_minus() -> Self {
        taggant_basis(BasisParams::new(core::f64::consts::FRAC_PI_4, 0.0).expect("valid angles"))
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    pub fn ket(&self, i: usize) -> &[Complex64] {
        self.u.row(i)
    }

    pub(crate) fn from_unchecked(u: CMatrix) -> Self {
        Self { u }
    }
}

/// Rows `(a, b)` and `(−b*, a*)` with `a = cos θ`, `b = e^{iφ} sin θ`.
pub(crate) fn qubit_basis_matrix(theta: f64, phi: f64) -> CMatrix {
    let a = Complex64::new(cos(theta), 0.0);
    let b = cis(phi) * sin(theta);
    CMatrix::from_rows([[a, b], [-b.conj(), a.conj()]])
}

/// Single-qubit taggant basis with `|0′⟩ = a|0⟩ + b|1⟩`, `|1′⟩ = −b*|0⟩ + a*|1⟩`.
pub fn taggant_basis(params: BasisParams) -> TaggantBasis {
    TaggantBasis::from_unchecked(qubit_basis_matrix(params.theta(), params.phi()))
}

/// Two-qubit taggant basis built from six complex Givens rotations, one per
/// pair of basis indices. `angles` holds `(θ, φ)` for each pair in the
/// order (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
pub(crate) fn givens_basis_matrix(angles: &[f64]) -> CMatrix {
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    debug_assert_eq!(angles.len(), 12);
    let mut u = CMatrix::identity(4);
    for (k, &(p, q)) in PAIRS.iter().enumerate() {
        let (c, s) = (cos(angles[2 * k]), sin(angles[2 * k]));
        let e = cis(angles[2 * k + 1]);
        // u ← G u, G acting on rows p and q
        for col in 0..4 {
            let up = u[(p, col)];
            let uq = u[(q, col)];
            u[(p, col)] = up * c + e * s * uq;
            u[(q, col)] = -(e.conj() * s) * up + uq * c;
        }
    }
    u
}

/// Which taggant qubits are measured, and in which basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSpec {
    targets: Vec<usize>,
    basis: TaggantBasis,
}

impl MeasurementSpec {
    /// `basis` must span exactly the space of `targets`, so its projectors
    /// `|j′⟩⟨j′|` sum to the identity there.
    pub fn new(targets: Vec<usize>, basis: TaggantBasis) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::InvalidMeasurement("no target qubits".to_string()));
        }
        let mut sorted = targets.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMeasurement("repeated target qubit".to_string()));
        }
        if targets.len() > 2 || basis.dim() != 1 << targets.len() {
            return Err(Error::InvalidMeasurement(format!(
                "basis of dimension {} does not form a complete projector set on {} qubit(s)",
                basis.dim(),
                targets.len()
            )));
        }
        Ok(Self { targets, basis })
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn basis(&self) -> &TaggantBasis {
        &self.basis
    }

    /// Number of outcomes `h`.
    pub fn outcomes(&self) -> usize {
        self.basis.dim()
    }
}

/// One measurement outcome `j` with probability `q_j`. Zero-probability
/// outcomes keep their slot with `post_state = None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub index: usize,
    pub probability: f64,
    /// Full register, measured qubits collapsed onto `|j′⟩`.
    pub post_state: Option<StateVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementResult {
    pub outcomes: Vec<Outcome>,
}

impl MeasurementResult {
    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// Outcomes that actually occur.
    pub fn occurring(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.post_state.is_some())
    }
}

/// Component of `s` left on the unmeasured qubits when `targets` are
/// projected onto `ket`: returns the unnormalized amplitudes over the
/// remaining qubits (ascending register order) and their squared norm.
pub(crate) fn project_out(s: &StateVector, targets: &[usize], ket: &[Complex64]) -> (Vec<usize>, Vec<Complex64>, f64) {
    let n = s.n_qubits();
    let rest: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
    let amps = s.amplitudes();
    let component: Vec<Complex64> = (0..1usize << rest.len())
        .map(|r| {
            let br = deposit_bits(r, n, &rest);
            ket.iter()
                .enumerate()
                .map(|(t, k)| k.conj() * amps[br | deposit_bits(t, n, targets)])
                .sum()
        })
        .collect();
    let weight = component.iter().map(Complex64::norm_sqr).sum();
    (rest, component, weight)
}

/// Projective measurement of `spec.targets()` in `spec.basis()`.
///
/// Post-measurement states keep the full register: the measured qubits are
/// left in the outcome ket.
pub fn measure(s: &StateVector, spec: &MeasurementSpec) -> Result<MeasurementResult> {
    let n = s.n_qubits();
    for &q in spec.targets() {
        check_qubit(q, n)?;
    }
    let targets = spec.targets();
    let mut outcomes = Vec::with_capacity(spec.outcomes());
    for j in 0..spec.outcomes() {
        let ket = spec.basis.ket(j);
        let (rest, component, weight) = project_out(s, targets, ket);
        if weight < WEIGHT_CUTOFF {
            outcomes.push(Outcome { index: j, probability: 0.0, post_state: None });
            continue;
        }
        let scale = 1.0 / sqrt(weight);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (r, c) in component.iter().enumerate() {
            let br = deposit_bits(r, n, &rest);
            for (t, k) in ket.iter().enumerate() {
                amps[br | deposit_bits(t, n, targets)] = c * k * scale;
            }
        }
        outcomes.push(Outcome { index: j, probability: weight, post_state: Some(StateVector::from_raw(n, amps)) });
    }
    Ok(MeasurementResult { outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{density_matrix, partial_trace, reduced_density, PartitionSpec};
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ghz() -> StateVector {
        let mut a = vec![c(0.0, 0.0); 8];
        a[0] = c(FRAC_1_SQRT_2, 0.0);
        a[7] = c(FRAC_1_SQRT_2, 0.0);
        StateVector::new(3, a).unwrap()
    }

    fn tagged_bell() -> StateVector {
        StateVector::bell(3, 0, 1).unwrap()
    }

    #[test]
    fn cnot_truth_table() {
        let s = StateVector::from_bits("10").unwrap();
        let out = apply_gate(&s, &Gate::cnot(0, 1).unwrap()).unwrap();
        assert_eq!(out, StateVector::from_bits("11").unwrap());
        let s = StateVector::from_bits("01").unwrap();
        assert_eq!(apply_gate(&s, &Gate::cnot(0, 1).unwrap()).unwrap(), s);
    }

    #[test]
    fn hadamard_on_zero() {
        let out = apply_gate(&StateVector::basis(1, 0).unwrap(), &Gate::hadamard(0)).unwrap();
        assert!((out.amplitudes()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gate_errors() {
        assert_eq!(Gate::cnot(1, 1), Err(Error::ControlIsTarget(1)));
        let s = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            apply_gate(&s, &Gate::cnot(0, 5).unwrap()),
            Err(Error::QubitOutOfRange { index: 5, n_qubits: 2 })
        ));
        let bad = [[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(Gate::single_qubit(bad, 0, "bad"), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn tagger_examples() {
        let tagged = tagger(&tagged_bell(), 0, 2).unwrap();
        assert!(tagged.distance(&ghz()) < 1e-15);
        let zeros = StateVector::basis(3, 0).unwrap();
        assert_eq!(tagger(&zeros, 0, 2).unwrap(), zeros);
        assert!(untagger(&tagged, 0, 2).unwrap().distance(&tagged_bell()) < 1e-15);
    }

    #[test]
    fn untagger_on_plus() {
        let plus = apply_gate(&StateVector::basis(2, 0).unwrap(), &Gate::hadamard(0)).unwrap();
        let out = untagger(&plus, 0, 1).unwrap();
        assert!(out.distance(&StateVector::bell(2, 0, 1).unwrap()) < 1e-15);
    }

    #[test]
    fn taggant_basis_examples() {
        let id = taggant_basis(BasisParams::new(0.0, 0.0).unwrap());
        assert!(id.matrix().max_abs_diff(&CMatrix::identity(2)) < 1e-15);

        let pm = taggant_basis(BasisParams::new(FRAC_PI_4, 0.0).unwrap());
        let h = FRAC_1_SQRT_2;
        assert!((pm.ket(0)[0] - c(h, 0.0)).norm() < 1e-15 && (pm.ket(0)[1] - c(h, 0.0)).norm() < 1e-15);
        assert!((pm.ket(1)[0] - c(-h, 0.0)).norm() < 1e-15 && (pm.ket(1)[1] - c(h, 0.0)).norm() < 1e-15);

        let pi = taggant_basis(BasisParams::new(FRAC_PI_4, FRAC_PI_2).unwrap());
        assert!((pi.ket(0)[1] - c(0.0, h)).norm() < 1e-15);
        assert!(pi.matrix().unitary_deviation() < 1e-15);
        assert!(TaggantBasis::new(pi.matrix().clone()).is_ok());
    }

    #[test]
    fn givens_basis_is_unitary() {
        let angles: Vec<f64> = (0..12).map(|k| 0.37 * k as f64 - 1.1).collect();
        assert!(givens_basis_matrix(&angles).unitary_deviation() < 1e-14);
        assert!(givens_basis_matrix(&[0.0; 12]).max_abs_diff(&CMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn taggant_basis_rejects_non_unitary() {
        let m = CMatrix::from_rows([[c(1.0, 0.0), c(0.1, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(matches!(TaggantBasis::new(m), Err(Error::NotUnitary(_))));
        assert!(TaggantBasis::new(CMatrix::identity(3)).is_err());
    }

    #[test]
    fn measure_ghz_computational() {
        let spec = MeasurementSpec::new(vec![2], TaggantBasis::computational(2)).unwrap();
        let res = measure(&ghz(), &spec).unwrap();
        assert_eq!(res.outcomes.len(), 2);
        for (o, bits) in res.outcomes.iter().zip(["000", "111"]) {
            assert!((o.probability - 0.5).abs() < 1e-15);
            let post = o.post_state.as_ref().unwrap();
            assert!(post.distance(&StateVector::from_bits(bits).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn measure_ghz_plus_minus() {
        let spec = MeasurementSpec::new(vec![2], TaggantBasis::plus_minus()).unwrap();
        let res = measure(&ghz(), &spec).unwrap();
        let h = FRAC_1_SQRT_2;
        for (o, sign) in res.outcomes.iter().zip([1.0, -1.0]) {
            assert!((o.probability - 0.5).abs() < 1e-15);
            let (_, ab, w) = project_out(o.post_state.as_ref().unwrap(), &[2], spec.basis().ket(o.index));
            assert!((w - 1.0).abs() < 1e-14);
            // (|00⟩ ± |11⟩)/√2 up to a global phase
            assert!((ab[0].norm() - h).abs() < 1e-14);
            assert!((ab[3] - ab[0] * sign).norm() < 1e-14);
        }
    }

    #[test]
    fn measure_product_state_single_outcome() {
        let spec = MeasurementSpec::new(vec![2], TaggantBasis::computational(2)).unwrap();
        let res = measure(&tagged_bell(), &spec).unwrap();
        assert_eq!(res.outcomes.len(), 2);
        assert_eq!(res.occurring().count(), 1);
        assert!((res.outcomes[0].probability - 1.0).abs() < 1e-15);
        assert_eq!(res.outcomes[1].probability, 0.0);
        assert!(res.outcomes[1].post_state.is_none());
    }

    #[test]
    fn unread_measurement_leaves_ab_unchanged() {
        let s = StateVector::normalized(
            3,
            [0.3, -0.1, 0.2, 0.5, 0.0, 0.4, -0.6, 0.1].iter().map(|&x| c(x, 0.3 - x)).collect(),
        )
        .unwrap();
        let spec = MeasurementSpec::new(vec![2], taggant_basis(BasisParams::new(0.4, 1.3).unwrap())).unwrap();
        let res = measure(&s, &spec).unwrap();
        assert!((res.total_probability() - 1.0).abs() < 1e-12);
        let mut acc = CMatrix::zeros(4, 4);
        for o in res.occurring() {
            let r = reduced_density(o.post_state.as_ref().unwrap(), &[0, 1]).unwrap();
            acc = acc.add(&r.matrix().scale(o.probability.into()));
        }
        let layout = PartitionSpec::new(vec![0], vec![1], vec![2]).unwrap();
        let direct = partial_trace(&density_matrix(&s), &[0, 1], &layout).unwrap();
        assert!(acc.max_abs_diff(direct.matrix()) < 1e-12);
    }

    #[test]
    fn measurement_spec_validation() {
        assert!(MeasurementSpec::new(vec![], TaggantBasis::computational(1)).is_err());
        assert!(MeasurementSpec::new(vec![1, 1], TaggantBasis::computational(4)).is_err());
        assert!(MeasurementSpec::new(vec![1, 2], TaggantBasis::computational(2)).is_err());
        assert!(MeasurementSpec::new(vec![1, 2], TaggantBasis::computational(4)).is_ok());
    }
}
