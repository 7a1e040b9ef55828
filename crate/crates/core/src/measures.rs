//! Entanglement measures for pure states and for tagged (purified) mixed
//! states of a qubit `A` and a subsystem `B` of one or two qubits.
//!
//! * [`entanglement_pure`]: entropy of the reduced state of `A`.
//! * [`entanglement_of_projection`]: average entanglement of the `AB`
//!   components left by projecting the taggant onto a given basis.
//! * [`entanglement_of_formation`] / [`entanglement_of_assistance`]: the
//!   minimum / maximum of that average over all taggant bases. The search
//!   is numerical; [`concurrence_ef_oracle`] gives an independent closed
//!   form for two-qubit `AB` states.
//! * [`entanglement_pf`]: probability-weighted formation of the states left
//!   after an (optional) taggant measurement.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::circuits::{givens_basis_matrix, project_out, qubit_basis_matrix, MeasurementSpec, TaggantBasis};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::math::{abs, atan2, cos, log2, sin, sqrt};
use crate::optimize::{scan_and_refine, NelderMeadOptions};
use crate::state::{
    amplitude_matrix, DensityMatrix, PartitionSpec, StateVector, EIGEN_CLAMP, WEIGHT_CUTOFF,
};

/// Grid points per angle for single-qubit taggant bases.
pub const GRID_POINTS: usize = 64;
/// Number of best grid points refined with Nelder-Mead.
pub const REFINE_STARTS: usize = 3;
/// Simplex diameter at which refinement stops.
pub const SIMPLEX_TOLERANCE: f64 = 1e-8;
/// Lattice levels per Givens angle for two-qubit taggant bases.
pub const GIVENS_LEVELS: usize = 5;
/// Lattice points sampled (plus the identity) for two-qubit taggant bases.
pub const GIVENS_SAMPLES: usize = 512;
const GIVENS_SEED: u64 = 0x07a6_6a27;

/// Projector-defining angles of a single-qubit taggant basis:
/// `a = cos θ`, `b = e^{iφ} sin θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    theta: f64,
    phi: f64,
}

impl BasisParams {
    /// Requires `θ ∈ [0, π/2]` and `φ ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidMeasurement(format!("theta {theta} outside [0, pi/2]")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::InvalidMeasurement(format!("phi {phi} outside [0, 2pi)")));
        }
        Ok(Self { theta, phi })
    }

    /// Maps arbitrary angles to the canonical pair describing the same
    /// projectors (per-ket phases dropped).
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let (c, s) = (cos(theta), sin(theta));
        let mut phi = phi;
        if c < 0.0 {
            phi += PI;
        }
        if s < 0.0 {
            phi += PI;
        }
        let mut phi = phi % TAU;
        if phi < 0.0 {
            phi += TAU;
        }
        if phi >= TAU {
            phi = 0.0;
        }
        Self { theta: atan2(abs(s), abs(c)), phi }
    }

    /// Basis with `a² = a2` and real `b`.
    pub fn from_a2(a2: f64) -> Result<Self> {
        check_probability(a2)?;
        Self::new(crate::math::acos(sqrt(a2.clamp(0.0, 1.0))), 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `a² = cos² θ`.
    pub fn a2(&self) -> f64 {
        let c = cos(self.theta);
        c * c
    }
}

/// Result of an entanglement computation, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub value: f64,
    /// Basis used for a projection or measurement; for formation and
    /// assistance, the extremizing basis found (informational only).
    pub basis: Option<TaggantBasis>,
    /// Angles of `basis` when the taggant is a single qubit.
    pub params: Option<BasisParams>,
}

impl EntanglementReport {
    fn bare(value: f64) -> Self {
        Self { value, basis: None, params: None }
    }
}

fn check_probability(x: f64) -> Result<f64> {
    if !(-EIGEN_CLAMP..=1.0 + EIGEN_CLAMP).contains(&x) {
        return Err(Error::ProbabilityOutOfRange(x));
    }
    Ok(x.clamp(0.0, 1.0))
}

/// `e(x) = −[x log₂ x + (1−x) log₂(1−x)]`, with `e(0) = e(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    Ok(entropy2(check_probability(x)?))
}

#[inline]
fn entropy2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -(x * log2(x) + (1.0 - x) * log2(1.0 - x))
}

/// Entropy (bits) of the qubit-`A` marginal of an unnormalized `AB` vector
/// whose first half holds the `A = 0` amplitudes. Returns `(weight, E)`.
#[inline]
fn qubit_marginal_entropy(r00: f64, r11: f64, r01: Complex64) -> (f64, f64) {
    let w = r00 + r11;
    if w < WEIGHT_CUTOFF {
        return (w, 0.0);
    }
    let d = r00 - r11;
    let gap = sqrt(d * d + 4.0 * r01.norm_sqr());
    let top = ((w + gap) / (2.0 * w)).min(1.0);
    (w, entropy2(top))
}

fn check_single_qubit_a(cut: &PartitionSpec) -> Result<()> {
    if cut.a().len() != 1 {
        return Err(Error::UnsupportedCut(format!(
            "A must be a single qubit, found {} qubits",
            cut.a().len()
        )));
    }
    if cut.b().is_empty() {
        return Err(Error::UnsupportedCut("B is empty".to_string()));
    }
    Ok(())
}

/// Entanglement `−Tr ρ_A log₂ ρ_A` of a pure `AB` state.
pub fn entanglement_pure(s: &StateVector, cut: &PartitionSpec) -> Result<EntanglementReport> {
    cut.require_register(s.n_qubits())?;
    if !cut.t().is_empty() {
        return Err(Error::UnsupportedCut(
            "pure-state entanglement needs an empty taggant; use the projection measures".to_string(),
        ));
    }
    check_single_qubit_a(cut)?;
    let m = amplitude_matrix(s, cut.a(), cut.b());
    let (r00, r11, r01) = marginal_entries(m.row(0), m.row(1));
    Ok(EntanglementReport::bare(qubit_marginal_entropy(r00, r11, r01).1))
}

#[inline]
fn marginal_entries(zero: &[Complex64], one: &[Complex64]) -> (f64, f64, Complex64) {
    let mut r00 = 0.0;
    let mut r11 = 0.0;
    let mut r01 = Complex64::new(0.0, 0.0);
    for (x, y) in zero.iter().zip(one) {
        r00 += x.norm_sqr();
        r11 += y.norm_sqr();
        r01 += x * y.conj();
    }
    (r00, r11, r01)
}

/// Precomputed amplitudes of a tagged state, arranged for fast evaluation of
/// the entanglement of projection in many bases.
struct ProjectionKernel {
    /// Rows: `AB` index with `A` as the leading bit; columns: taggant index.
    m: CMatrix,
    half: usize,
    dt: usize,
}

impl ProjectionKernel {
    fn new(s: &StateVector, cut: &PartitionSpec) -> Result<Self> {
        cut.require_register(s.n_qubits())?;
        check_single_qubit_a(cut)?;
        let m = amplitude_matrix(s, &cut.ab(), cut.t());
        let half = m.rows() / 2;
        let dt = m.cols();
        Ok(Self { m, half, dt })
    }

    /// `Σ_i p_i E(ψ_i)` for the basis whose rows are the taggant kets.
    fn evaluate(&self, basis_rows: &CMatrix) -> f64 {
        let mut total = 0.0;
        for i in 0..self.dt {
            let ket = basis_rows.row(i);
            let mut r00 = 0.0;
            let mut r11 = 0.0;
            let mut r01 = Complex64::new(0.0, 0.0);
            for r in 0..self.half {
                let mut x = Complex64::new(0.0, 0.0);
                let mut y = Complex64::new(0.0, 0.0);
                for (t, k) in ket.iter().enumerate() {
                    let kc = k.conj();
                    x += kc * self.m[(r, t)];
                    y += kc * self.m[(r + self.half, t)];
                }
                r00 += x.norm_sqr();
                r11 += y.norm_sqr();
                r01 += x * y.conj();
            }
            let (w, e) = qubit_marginal_entropy(r00, r11, r01);
            if w >= WEIGHT_CUTOFF {
                total += w * e;
            }
        }
        total
    }
}

/// Average `AB` entanglement after projecting `T` onto `basis`.
pub fn entanglement_of_projection(
    s: &StateVector,
    cut: &PartitionSpec,
    basis: &TaggantBasis,
) -> Result<EntanglementReport> {
    let kernel = ProjectionKernel::new(s, cut)?;
    if basis.dim() != kernel.dt {
        return Err(Error::DimensionMismatch { expected: kernel.dt, found: basis.dim() });
    }
    Ok(EntanglementReport {
        value: kernel.evaluate(basis.matrix()),
        basis: Some(basis.clone()),
        params: None,
    })
}

/// `e(α²) + e(a²) − e(p₀)` with `p₀ = a²α² + (1−a²)(1−α²)`.
pub fn ep_closed_form(alpha2: f64, a2: f64) -> Result<f64> {
    let alpha2 = check_probability(alpha2)?;
    let a2 = check_probability(a2)?;
    let p0 = a2 * alpha2 + (1.0 - a2) * (1.0 - alpha2);
    Ok(entropy2(alpha2) + entropy2(a2) - entropy2(p0.clamp(0.0, 1.0)))
}

/// `p₀ e(a²α²/p₀) + p₁ e(b²α²/p₁)` for the tagged state
/// `α|00⟩|0⟩ + β|11⟩|1⟩` measured in a real basis with `b² = 1 − a²`.
pub fn ep_sum_form(alpha2: f64, a2: f64) -> Result<f64> {
    let alpha2 = check_probability(alpha2)?;
    let a2 = check_probability(a2)?;
    let (beta2, b2) = (1.0 - alpha2, 1.0 - a2);
    let p0 = a2 * alpha2 + b2 * beta2;
    let p1 = b2 * alpha2 + a2 * beta2;
    let term = |p: f64, x: f64| if p > 0.0 { p * entropy2((x / p).clamp(0.0, 1.0)) } else { 0.0 };
    Ok(term(p0, a2 * alpha2) + term(p1, b2 * alpha2))
}

#[derive(Clone, Copy, PartialEq)]
enum Extremum {
    Min,
    Max,
}

fn check_taggant(cut: &PartitionSpec) -> Result<()> {
    match cut.t().len() {
        0 => Err(Error::UnsupportedCut("taggant is empty; use entanglement_pure".to_string())),
        1 | 2 => Ok(()),
        n => Err(Error::UnsupportedCut(format!("taggants of {n} qubits are not supported (max 2)"))),
    }
}

fn extremize(s: &StateVector, cut: &PartitionSpec, which: Extremum) -> Result<EntanglementReport> {
    check_taggant(cut)?;
    let kernel = ProjectionKernel::new(s, cut)?;
    let sign = if which == Extremum::Min { 1.0 } else { -1.0 };

    if kernel.dt == 2 {
        let objective = |x: &[f64]| sign * kernel.evaluate(&qubit_basis_matrix(x[0], x[1]));
        let theta_step = FRAC_PI_2 / (GRID_POINTS - 1) as f64;
        let phi_step = TAU / GRID_POINTS as f64;
        let candidates: Vec<Vec<f64>> = (0..GRID_POINTS)
            .flat_map(|i| (0..GRID_POINTS).map(move |j| vec![i as f64 * theta_step, j as f64 * phi_step]))
            .collect();
        let options = NelderMeadOptions {
            initial_step: theta_step,
            diameter_tolerance: SIMPLEX_TOLERANCE,
            max_evaluations: 4_000,
        };
        let best = scan_and_refine(objective, &candidates, REFINE_STARTS, &options);
        let params = BasisParams::canonical(best.point[0], best.point[1]);
        let basis = TaggantBasis::from_unchecked(qubit_basis_matrix(params.theta, params.phi));
        return Ok(EntanglementReport { value: sign * best.value, basis: Some(basis), params: Some(params) });
    }

    let objective = |x: &[f64]| sign * kernel.evaluate(&givens_basis_matrix(x));
    let candidates = givens_candidates();
    let options = NelderMeadOptions {
        initial_step: FRAC_PI_2 / (GIVENS_LEVELS - 1) as f64,
        diameter_tolerance: SIMPLEX_TOLERANCE,
        max_evaluations: 40_000,
    };
    let best = scan_and_refine(objective, &candidates, REFINE_STARTS, &options);
    let basis = TaggantBasis::from_unchecked(givens_basis_matrix(&best.point));
    Ok(EntanglementReport { value: sign * best.value, basis: Some(basis), params: None })
}

/// Identity plus a fixed, seeded sample of the lattice with
/// [`GIVENS_LEVELS`] levels per angle (θ over `[0, π/2]`, φ over `[0, 2π)`).
fn givens_candidates() -> Vec<Vec<f64>> {
    let mut rng = crate::random::seeded(GIVENS_SEED);
    let theta_step = FRAC_PI_2 / (GIVENS_LEVELS - 1) as f64;
    let phi_step = TAU / GIVENS_LEVELS as f64;
    let mut out = Vec::with_capacity(GIVENS_SAMPLES + 1);
    out.push(vec![0.0; 12]);
    for _ in 0..GIVENS_SAMPLES {
        out.push(
            (0..12)
                .map(|k| {
                    let level = rng.random_range(0..GIVENS_LEVELS) as f64;
                    if k % 2 == 0 { level * theta_step } else { level * phi_step }
                })
                .collect(),
        );
    }
    out
}

/// `E_f`: minimum entanglement of projection over taggant bases.
pub fn entanglement_of_formation(s: &StateVector, cut: &PartitionSpec) -> Result<EntanglementReport> {
    extremize(s, cut, Extremum::Min)
}

/// `E_a`: maximum entanglement of projection over bases of this taggant.
pub fn entanglement_of_assistance(s: &StateVector, cut: &PartitionSpec) -> Result<EntanglementReport> {
    extremize(s, cut, Extremum::Max)
}

/// Entanglement of projections' formation `Σ_j q_j E_f(ρ_j)`.
///
/// Without a measurement this is `E_f` of the unmeasured state. With one,
/// each outcome's `AB` state is the purification left on the unmeasured
/// qubits: pure when the whole taggant was measured, otherwise still tagged
/// by the remaining taggant qubits.
pub fn entanglement_pf(
    s: &StateVector,
    cut: &PartitionSpec,
    projectors: Option<&MeasurementSpec>,
) -> Result<EntanglementReport> {
    let Some(spec) = projectors else {
        return entanglement_of_formation(s, cut);
    };
    cut.require_register(s.n_qubits())?;
    check_single_qubit_a(cut)?;
    if let Some(&q) = spec.targets().iter().find(|q| !cut.t().contains(q)) {
        return Err(Error::InvalidMeasurement(format!("qubit {q} is not a taggant qubit")));
    }
    let dev = spec.basis().matrix().unitary_deviation();
    if dev > crate::circuits::UNITARY_TOLERANCE {
        return Err(Error::InvalidMeasurement(format!(
            "projectors do not sum to the identity (deviation {dev:e})"
        )));
    }

    let mut total = 0.0;
    for j in 0..spec.outcomes() {
        let (rest, component, weight) = project_out(s, spec.targets(), spec.basis().ket(j));
        if weight < WEIGHT_CUTOFF {
            continue;
        }
        let remap = |qs: &[usize]| -> Vec<usize> {
            qs.iter().map(|q| rest.iter().position(|r| r == q).expect("unmeasured qubit")).collect()
        };
        let t_rest: Vec<usize> = cut.t().iter().copied().filter(|q| !spec.targets().contains(q)).collect();
        let sub_cut = PartitionSpec::new(remap(cut.a()), remap(cut.b()), remap(&t_rest))?;
        let sub_state = StateVector::normalized(rest.len(), component)?;
        let e = if t_rest.is_empty() {
            entanglement_pure(&sub_state, &sub_cut)?.value
        } else {
            entanglement_of_formation(&sub_state, &sub_cut)?.value
        };
        total += weight * e;
    }
    let params = (spec.outcomes() == 2).then(|| basis_params_of(spec.basis()));
    Ok(EntanglementReport { value: total, basis: Some(spec.basis().clone()), params })
}

/// Angles of a single-qubit basis, read off its first ket.
fn basis_params_of(basis: &TaggantBasis) -> BasisParams {
    let k = basis.ket(0);
    let (ma, mb) = (sqrt(k[0].norm_sqr()), sqrt(k[1].norm_sqr()));
    let rel = k[1] * k[0].conj();
    let phi = if mb > 0.0 && ma > 0.0 { atan2(rel.im, rel.re) } else { 0.0 };
    BasisParams::canonical(atan2(mb, ma), phi)
}

/// Two-qubit entanglement of formation from the concurrence of `ρ`:
/// `E_f = e((1 + √(1 − C²))/2)`, `C = max(0, λ₁ − λ₂ − λ₃ − λ₄)` where the
/// `λ_i` are the square roots of the eigenvalues of `√ρ ρ̃ √ρ`, in
/// decreasing order, and `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn concurrence_ef_oracle(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence_to_ef(concurrence(rho)?))
}

/// Concurrence of a two-qubit density matrix.
///
/// With `ρ = Σ_k |v_k⟩⟨v_k|` (`v_k = √μ_k e_k` from the eigenpairs), the
/// `λ_i` are the singular values of `τ_kl = v_kᵀ (σ_y ⊗ σ_y) v_l`. They are
/// read off the Hermitian dilation `[[0, τ], [τ†, 0]]`, whose eigenvalues
/// are `±λ_i`, so no square root of a near-zero eigenvalue is taken.
/// Eigenvalues of `ρ` below the weight cutoff count as zero.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
    }
    let (values, vectors) = crate::state::eigensolve_hermitian(rho)?;
    let kept: Vec<Vec<Complex64>> = values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu >= WEIGHT_CUTOFF)
        .map(|(k, &mu)| (0..4).map(|i| vectors[(i, k)] * sqrt(mu)).collect())
        .collect();
    let rank = kept.len();

    // σ_y ⊗ σ_y maps |00⟩ ↦ −|11⟩, |01⟩ ↦ |10⟩, |10⟩ ↦ |01⟩, |11⟩ ↦ −|00⟩.
    let flip = |u: &[Complex64], w: &[Complex64]| -u[0] * w[3] + u[1] * w[2] + u[2] * w[1] - u[3] * w[0];
    let mut dilation = CMatrix::zeros(2 * rank, 2 * rank);
    for k in 0..rank {
        for l in 0..rank {
            let t = flip(&kept[k], &kept[l]);
            dilation[(k, rank + l)] = t;
            dilation[(rank + l, k)] = t.conj();
        }
    }
    let eig = hermitian_eigen(&dilation, 1e-12)?;
    let mut lambdas = [0.0; 4];
    for (slot, v) in lambdas.iter_mut().zip(eig.values.iter().take(rank)) {
        *slot = v.max(0.0);
    }
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

fn concurrence_to_ef(c: f64) -> f64 {
    let c = c.min(1.0);
    entropy2((1.0 + sqrt((1.0 - c * c).max(0.0))) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{taggant_basis, MeasurementSpec};
    use crate::state::{density_matrix, partial_trace, reduced_density};
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn abt() -> PartitionSpec {
        PartitionSpec::new(vec![0], vec![1], vec![2]).unwrap()
    }

    fn ab() -> PartitionSpec {
        PartitionSpec::bipartite(vec![0], vec![1]).unwrap()
    }

    /// `√α²|000⟩ + √(1−α²)|111⟩`
    fn tagged(alpha2: f64) -> StateVector {
        let mut a = vec![c(0.0, 0.0); 8];
        a[0] = c(sqrt(alpha2), 0.0);
        a[7] = c(sqrt(1.0 - alpha2), 0.0);
        StateVector::new(3, a).unwrap()
    }

    // Independent evaluation of e(x) via natural logs.
    fn e_oracle(x: f64) -> f64 {
        if x <= 0.0 || x >= 1.0 {
            return 0.0;
        }
        -(x * crate::math::ln(x) + (1.0 - x) * crate::math::ln(1.0 - x)) / core::f64::consts::LN_2
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // e(0.75) = 2 − (3/4) log₂ 3
        let expected = 2.0 - 0.75 * log2(3.0);
        assert!((binary_entropy(0.75).unwrap() - expected).abs() < 1e-15);
        assert!((binary_entropy(0.75).unwrap() - 0.811_278_1).abs() < 1e-7);
        assert!((binary_entropy(1.0 + 5e-11).unwrap()).abs() < 1e-15);
        assert!(matches!(binary_entropy(1.1), Err(Error::ProbabilityOutOfRange(_))));
        assert!(binary_entropy(-1e-9).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn pure_entanglement_examples() {
        let bell = StateVector::bell(2, 0, 1).unwrap();
        assert!((entanglement_pure(&bell, &ab()).unwrap().value - 1.0).abs() < 1e-15);
        assert_eq!(entanglement_pure(&StateVector::basis(2, 0).unwrap(), &ab()).unwrap().value, 0.0);
        let s = StateVector::new(2, vec![c(sqrt(0.75), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let v = entanglement_pure(&s, &ab()).unwrap().value;
        assert!((v - e_oracle(0.75)).abs() < 1e-12);
        assert!((v - 0.811_278_1).abs() < 1e-7);
    }

    #[test]
    fn pure_entanglement_matches_jacobi_spectrum() {
        let s = StateVector::normalized(
            3,
            [0.3, -0.1, 0.2, 0.5, 0.0, 0.4, -0.6, 0.1].iter().enumerate().map(|(i, &x)| c(x, 0.1 * i as f64)).collect(),
        )
        .unwrap();
        let cut = PartitionSpec::bipartite(vec![1], vec![0, 2]).unwrap();
        let rho_a = reduced_density(&s, &[1]).unwrap();
        let (vals, _) = crate::state::eigensolve_hermitian(&rho_a).unwrap();
        let expected: f64 = vals.iter().filter(|&&l| l > 0.0).map(|&l| -l * log2(l)).sum();
        assert!((entanglement_pure(&s, &cut).unwrap().value - expected).abs() < 1e-12);
    }

    #[test]
    fn pure_entanglement_errors() {
        let s = StateVector::basis(3, 0).unwrap();
        let wide_a = PartitionSpec::bipartite(vec![0, 1], vec![2]).unwrap();
        assert!(matches!(entanglement_pure(&s, &wide_a), Err(Error::UnsupportedCut(_))));
        assert!(matches!(entanglement_pure(&s, &abt()), Err(Error::UnsupportedCut(_))));
        assert!(matches!(entanglement_pure(&s, &ab()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn projection_examples() {
        let ghz = tagged(0.5);
        let comp = TaggantBasis::computational(2);
        assert!(entanglement_of_projection(&ghz, &abt(), &comp).unwrap().value.abs() < 1e-15);
        let pm = TaggantBasis::plus_minus();
        assert!((entanglement_of_projection(&ghz, &abt(), &pm).unwrap().value - 1.0).abs() < 1e-12);
        let v = entanglement_of_projection(&tagged(0.75), &abt(), &pm).unwrap().value;
        assert!((v - e_oracle(0.75)).abs() < 1e-12);
    }

    #[test]
    fn projection_rejects_wrong_basis_size() {
        let err = entanglement_of_projection(&tagged(0.5), &abt(), &TaggantBasis::computational(4));
        assert!(matches!(err, Err(Error::DimensionMismatch { expected: 2, found: 4 })));
    }

    #[test]
    fn closed_form_examples() {
        assert!((ep_closed_form(0.5, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(ep_closed_form(0.5, 0.0).unwrap(), 0.0);
        for a2 in [0.0, 0.2, 0.5, 0.9, 1.0] {
            assert!(ep_closed_form(1.0, a2).unwrap().abs() < 1e-15);
        }
        assert!(ep_closed_form(1.5, 0.5).is_err());
        assert!(ep_closed_form(0.5, -0.5).is_err());
    }

    #[test]
    fn closed_form_matches_sum_form_and_projection() {
        for i in 0..=50 {
            for j in 0..=50 {
                let (alpha2, a2) = (i as f64 / 50.0, j as f64 / 50.0);
                let closed = ep_closed_form(alpha2, a2).unwrap();
                assert!((closed - ep_sum_form(alpha2, a2).unwrap()).abs() < 1e-9);
                let basis = taggant_basis(BasisParams::from_a2(a2).unwrap());
                let numeric = entanglement_of_projection(&tagged(alpha2), &abt(), &basis).unwrap().value;
                assert!((closed - numeric).abs() < 1e-9, "alpha2={alpha2} a2={a2}");
            }
        }
    }

    #[test]
    fn formation_and_assistance_examples() {
        let ghz = tagged(0.5);
        let ef = entanglement_of_formation(&ghz, &abt()).unwrap();
        assert!(ef.value.abs() < 1e-9);
        let ea = entanglement_of_assistance(&ghz, &abt()).unwrap();
        assert!((ea.value - 1.0).abs() < 1e-9);
        assert!((ea.params.unwrap().a2() - 0.5).abs() < 1e-6);

        let bell_t = StateVector::bell(3, 0, 1).unwrap();
        assert!((entanglement_of_formation(&bell_t, &abt()).unwrap().value - 1.0).abs() < 1e-9);

        let zeros = StateVector::basis(3, 0).unwrap();
        assert!(entanglement_of_formation(&zeros, &abt()).unwrap().value.abs() < 1e-12);
        assert!(entanglement_of_assistance(&zeros, &abt()).unwrap().value.abs() < 1e-12);

        // The maximum of e(α²) + e(a²) − e(p₀) over a² sits at a² = 1/2.
        let ea = entanglement_of_assistance(&tagged(0.75), &abt()).unwrap();
        assert!((ea.value - e_oracle(0.75)).abs() < 1e-9);
    }

    #[test]
    fn formation_requires_taggant() {
        let bell = StateVector::bell(2, 0, 1).unwrap();
        assert!(matches!(entanglement_of_formation(&bell, &ab()), Err(Error::UnsupportedCut(_))));
        let s = StateVector::basis(5, 0).unwrap();
        let cut = PartitionSpec::new(vec![0], vec![1], vec![2, 3, 4]).unwrap();
        assert!(matches!(entanglement_of_assistance(&s, &cut), Err(Error::UnsupportedCut(_))));
    }

    #[test]
    fn two_qubit_taggant_extremization() {
        // |Φ⟩_AB ⊗ |00⟩_T: every basis gives E_p = 1.
        let s = StateVector::bell(4, 0, 1).unwrap();
        let cut = PartitionSpec::new(vec![0], vec![1], vec![2, 3]).unwrap();
        assert!((entanglement_of_formation(&s, &cut).unwrap().value - 1.0).abs() < 1e-9);

        // GHZ over four qubits with a two-qubit taggant: E_f = 0, E_a = 1.
        let mut a = vec![c(0.0, 0.0); 16];
        a[0] = c(FRAC_1_SQRT_2, 0.0);
        a[15] = c(FRAC_1_SQRT_2, 0.0);
        let ghz4 = StateVector::new(4, a).unwrap();
        assert!(entanglement_of_formation(&ghz4, &cut).unwrap().value.abs() < 1e-9);
        assert!((entanglement_of_assistance(&ghz4, &cut).unwrap().value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pf_examples() {
        let ghz = tagged(0.5);
        assert!(entanglement_pf(&ghz, &abt(), None).unwrap().value.abs() < 1e-9);
        let comp = MeasurementSpec::new(vec![2], TaggantBasis::computational(2)).unwrap();
        assert!(entanglement_pf(&ghz, &abt(), Some(&comp)).unwrap().value.abs() < 1e-12);
        let pm = MeasurementSpec::new(vec![2], TaggantBasis::plus_minus()).unwrap();
        let r = entanglement_pf(&ghz, &abt(), Some(&pm)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((r.params.unwrap().theta() - FRAC_PI_4).abs() < 1e-12);

        let bell_t = StateVector::bell(3, 0, 1).unwrap();
        for spec in [&comp, &pm] {
            assert!((entanglement_pf(&bell_t, &abt(), Some(spec)).unwrap().value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pf_partial_measurement_keeps_remaining_taggant() {
        // GHZ on four qubits, T = {2, 3}; measuring only qubit 3 in the ±
        // basis leaves AB tagged by qubit 2, so every outcome has E_f = 0.
        let mut a = vec![c(0.0, 0.0); 16];
        a[0] = c(FRAC_1_SQRT_2, 0.0);
        a[15] = c(FRAC_1_SQRT_2, 0.0);
        let ghz4 = StateVector::new(4, a).unwrap();
        let cut = PartitionSpec::new(vec![0], vec![1], vec![2, 3]).unwrap();
        let spec = MeasurementSpec::new(vec![3], TaggantBasis::plus_minus()).unwrap();
        assert!(entanglement_pf(&ghz4, &cut, Some(&spec)).unwrap().value.abs() < 1e-9);
    }

    #[test]
    fn pf_rejects_non_taggant_measurement() {
        let spec = MeasurementSpec::new(vec![1], TaggantBasis::computational(2)).unwrap();
        assert!(matches!(entanglement_pf(&tagged(0.5), &abt(), Some(&spec)), Err(Error::InvalidMeasurement(_))));
    }

    #[test]
    fn oracle_examples() {
        let bell = density_matrix(&StateVector::bell(2, 0, 1).unwrap());
        assert!((concurrence_ef_oracle(&bell).unwrap() - 1.0).abs() < 1e-9);

        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(0.5, 0.0);
        m[(3, 3)] = c(0.5, 0.0);
        assert!(concurrence_ef_oracle(&DensityMatrix::new(m).unwrap()).unwrap().abs() < 1e-12);

        let rho = partial_trace(&density_matrix(&tagged(0.75)), &[0, 1], &abt()).unwrap();
        assert!(concurrence(&rho).unwrap().abs() < 1e-12);
        assert!(concurrence_ef_oracle(&rho).unwrap().abs() < 1e-12);

        // Pure state: C = 2|ad − bc|.
        let s = StateVector::new(2, vec![c(sqrt(0.75), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let cc = concurrence(&density_matrix(&s)).unwrap();
        assert!((cc - 2.0 * sqrt(0.75) * 0.5).abs() < 1e-9);
        assert!((concurrence_ef_oracle(&density_matrix(&s)).unwrap() - e_oracle(0.75)).abs() < 1e-9);
    }

    #[test]
    fn oracle_rejects_wrong_dimension() {
        let rho = density_matrix(&StateVector::basis(1, 0).unwrap());
        assert!(concurrence_ef_oracle(&rho).is_err());
    }

    #[test]
    fn canonical_params_preserve_projectors() {
        for (theta, phi) in [(2.0, -1.0), (-0.3, 0.5), (4.0, 7.0), (0.2, 0.1)] {
            let raw = qubit_basis_matrix(theta, phi);
            let p = BasisParams::canonical(theta, phi);
            assert!((0.0..=FRAC_PI_2).contains(&p.theta()) && (0.0..TAU).contains(&p.phi()));
            let canon = qubit_basis_matrix(p.theta(), p.phi());
            // Same projector |0′⟩⟨0′|.
            let pr = CMatrix::outer(raw.row(0), raw.row(0));
            let pc = CMatrix::outer(canon.row(0), canon.row(0));
            assert!(pr.max_abs_diff(&pc) < 1e-12, "{theta} {phi}");
        }
    }

    #[test]
    fn basis_params_validation() {
        assert!(BasisParams::new(-0.1, 0.0).is_err());
        assert!(BasisParams::new(0.1, TAU).is_err());
        assert!((BasisParams::from_a2(0.3).unwrap().a2() - 0.3).abs() < 1e-15);
    }
}
