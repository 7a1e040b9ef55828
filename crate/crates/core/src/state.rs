//! Pure states over qubit registers, density matrices, and the reductions
//! between them.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::math::{abs, sqrt};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 8;

/// Accepted `|Σ|a_k|² − 1|` when a caller hands in amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Entrywise tolerance for Hermiticity and unit trace of density matrices.
pub const DENSITY_TOLERANCE: f64 = 1e-12;
/// Eigenvalues this far outside `[0, 1]` are clamped instead of rejected.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Bits of `index` belonging to `qubits`, packed with `qubits[0]` as the most
/// significant bit of the result.
#[cfg(test)]
pub(crate) fn extract_bits(index: usize, n_qubits: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((index >> (n_qubits - 1 - q)) & 1))
}

/// Inverse of [`extract_bits`]: scatters `sub` into the register positions of `qubits`.
#[inline]
pub(crate) fn deposit_bits(sub: usize, n_qubits: usize, qubits: &[usize]) -> usize {
    let len = qubits.len();
    qubits.iter().enumerate().fold(0, |acc, (k, &q)| {
        acc | (((sub >> (len - 1 - k)) & 1) << (n_qubits - 1 - q))
    })
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::RegisterSize(n_qubits));
    }
    Ok(())
}

/// Normalized amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Accepts amplitudes whose squared norm is within [`NORM_TOLERANCE`] of
    /// one and rescales them to unit norm.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(n_qubits, amplitudes, NORM_TOLERANCE)
    }

    /// Like [`StateVector::new`] with a caller-chosen norm tolerance.
    pub fn with_tolerance(n_qubits: usize, amplitudes: Vec<Complex64>, tolerance: f64) -> Result<Self> {
        check_register(n_qubits)?;
        let expected = 1usize << n_qubits;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch { expected, found: amplitudes.len() });
        }
        let norm2: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        let err = (norm2 - 1.0).abs();
        if err > tolerance || norm2.is_nan() {
            return Err(Error::NotNormalized(err));
        }
        Ok(Self::rescaled(n_qubits, amplitudes, norm2))
    }

    /// Normalizes any nonzero vector.
    pub fn normalized(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_register(n_qubits)?;
        let expected = 1usize << n_qubits;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch { expected, found: amplitudes.len() });
        }
        let norm2: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if norm2.is_nan() || norm2 <= 1e-300 || !norm2.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self::rescaled(n_qubits, amplitudes, norm2))
    }

    /// Leaves vectors already normalized to rounding precision untouched, so
    /// that printing and re-reading a state is lossless.
    fn rescaled(n_qubits: usize, mut amplitudes: Vec<Complex64>, norm2: f64) -> Self {
        if abs(norm2 - 1.0) > 8.0 * f64::EPSILON {
            let inv = 1.0 / sqrt(norm2);
            amplitudes.iter_mut().for_each(|a| *a *= inv);
        }
        Self { n_qubits, amplitudes }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::LengthMismatch { expected: dim, found: index + 1 });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Computational basis state from a bitstring such as `"010"` (qubit 0 first).
    pub fn from_bits(bits: &str) -> Result<Self> {
        check_register(bits.len())?;
        let mut index = 0usize;
        for ch in bits.chars() {
            let bit = match ch {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::InvalidBitstring(bits.to_string())),
            };
            index = (index << 1) | bit;
        }
        Self::basis(bits.len(), index)
    }

    /// `(|00⟩ + |11⟩)/√2` on qubits `i`, `j` of an otherwise `|0…0⟩` register.
    pub fn bell(n_qubits: usize, i: usize, j: usize) -> Result<Self> {
        check_register(n_qubits)?;
        for q in [i, j] {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
        }
        if i == j {
            return Err(Error::ControlIsTarget(i));
        }
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(h, 0.0);
        amplitudes[deposit_bits(0b11, n_qubits, &[i, j])] = Complex64::new(h, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest amplitude difference after removing the relative global phase.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let overlap = self.inner(other);
        let mag = sqrt(overlap.norm_sqr());
        let phase = if mag > 0.0 { overlap.conj() / mag } else { Complex64::new(1.0, 0.0) };
        self.max_amplitude_diff_scaled(other, phase)
    }

    /// Largest amplitude difference, phases included.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.max_amplitude_diff_scaled(other, Complex64::new(1.0, 0.0))
    }

    fn max_amplitude_diff_scaled(&self, other: &Self, phase: Complex64) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| sqrt((a - b * phase).norm_sqr()))
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self { n_qubits, amplitudes }
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }
}

/// `s1 ⊗ s2`; qubits of `s1` come first.
pub fn tensor(s1: &StateVector, s2: &StateVector) -> Result<StateVector> {
    let n = s1.n_qubits + s2.n_qubits;
    check_register(n)?;
    let amplitudes = s1
        .amplitudes
        .iter()
        .flat_map(|a| s2.amplitudes.iter().map(move |b| a * b))
        .collect();
    Ok(StateVector { n_qubits: n, amplitudes })
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity and unit trace within [`DENSITY_TOLERANCE`].
    /// Positivity is checked separately by [`DensityMatrix::check_positive`].
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        let dev = matrix.hermitian_deviation();
        if dev > DENSITY_TOLERANCE || dev.is_nan() {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOLERANCE || tr.im.abs() > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace is {} + {}i", tr.re, tr.im)));
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Fails if any eigenvalue is below `-1e-10`.
    pub fn check_positive(&self) -> Result<()> {
        eigensolve_hermitian(self).map(|_| ())
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> Result<usize> {
        let (values, _) = eigensolve_hermitian(self)?;
        Ok(values.iter().filter(|&&v| v > threshold).count())
    }
}

/// `|s⟩⟨s|`.
pub fn density_matrix(s: &StateVector) -> DensityMatrix {
    DensityMatrix { matrix: CMatrix::outer(&s.amplitudes, &s.amplitudes) }
}

/// Assignment of register qubits to the subsystems `A`, `B` and taggant `T`.
///
/// The three lists are disjoint and together cover `0..n_qubits` exactly,
/// so the register size is the sum of their lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    a: Vec<usize>,
    b: Vec<usize>,
    t: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(a: Vec<usize>, b: Vec<usize>, t: Vec<usize>) -> Result<Self> {
        let n = a.len() + b.len() + t.len();
        check_register(n)?;
        let mut seen = vec![false; n];
        for &q in a.iter().chain(&b).chain(&t) {
            if q >= n {
                return Err(Error::InvalidPartition(format!(
                    "qubit {q} does not exist in a {n}-qubit register"
                )));
            }
            if seen[q] {
                return Err(Error::InvalidPartition(format!("qubit {q} appears more than once")));
            }
            seen[q] = true;
        }
        Ok(Self { a, b, t })
    }

    /// Two-party cut with no taggant.
    pub fn bipartite(a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        Self::new(a, b, Vec::new())
    }

    pub fn n_qubits(&self) -> usize {
        self.a.len() + self.b.len() + self.t.len()
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn t(&self) -> &[usize] {
        &self.t
    }

    /// `A` qubits followed by `B` qubits.
    pub fn ab(&self) -> Vec<usize> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    /// Partition of the `|A|+|B|`-qubit register obtained by projecting out `T`,
    /// where `A` occupies the leading qubits.
    pub fn ab_local(&self) -> Self {
        let na = self.a.len();
        let nb = self.b.len();
        Self { a: (0..na).collect(), b: (na..na + nb).collect(), t: Vec::new() }
    }

    pub(crate) fn require_register(&self, n_qubits: usize) -> Result<()> {
        if self.n_qubits() != n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits(), found: n_qubits });
        }
        Ok(())
    }
}

/// Reduced density matrix over `keep` (ordered as given) of the register
/// described by `layout`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize], layout: &PartitionSpec) -> Result<DensityMatrix> {
    let n = layout.n_qubits();
    if rho.dim() != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, found: rho.dim() });
    }
    let traced = complement(keep, n)?;
    let dk = 1usize << keep.len();
    let dt = 1usize << traced.len();
    let mut out = CMatrix::zeros(dk, dk);
    for i in 0..dk {
        let bi = deposit_bits(i, n, keep);
        for j in 0..dk {
            let bj = deposit_bits(j, n, keep);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..dt {
                let bt = deposit_bits(t, n, &traced);
                acc += rho.matrix[(bi | bt, bj | bt)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix { matrix: out })
}

/// Reduced density matrix of a pure state over `keep`, without forming `|s⟩⟨s|`.
pub fn reduced_density(s: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = s.n_qubits;
    let traced = complement(keep, n)?;
    let m = amplitude_matrix(s, keep, &traced);
    Ok(DensityMatrix { matrix: &m * &m.adjoint() })
}

/// Amplitudes arranged as a `2^|rows| × 2^|cols|` matrix.
pub(crate) fn amplitude_matrix(s: &StateVector, rows: &[usize], cols: &[usize]) -> CMatrix {
    let n = s.n_qubits;
    let dr = 1usize << rows.len();
    let dc = 1usize << cols.len();
    let mut m = CMatrix::zeros(dr, dc);
    for r in 0..dr {
        let br = deposit_bits(r, n, rows);
        for c in 0..dc {
            m[(r, c)] = s.amplitudes[br | deposit_bits(c, n, cols)];
        }
    }
    m
}

fn complement(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut seen = vec![false; n];
    for &q in keep {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
        }
        if seen[q] {
            return Err(Error::InvalidPartition(format!("qubit {q} kept twice")));
        }
        seen[q] = true;
    }
    Ok((0..n).filter(|&q| !seen[q]).collect())
}

/// Eigenvalues (nonincreasing, clamped into `[0, 1]`) and eigenvectors
/// (columns) of a density matrix.
pub fn eigensolve_hermitian(m: &DensityMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let eig = hermitian_eigen(&m.matrix, DENSITY_TOLERANCE)?;
    let mut values = eig.values;
    for v in values.iter_mut() {
        if *v < -EIGEN_CLAMP || *v > 1.0 + EIGEN_CLAMP {
            return Err(Error::EigenvalueOutOfRange(*v));
        }
        *v = v.clamp(0.0, 1.0);
    }
    Ok((values, eig.vectors))
}

/// Schmidt form `Σ_k c_k |l_k⟩_A |r_k⟩_B` of a bipartite pure state.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Nonincreasing, nonnegative; `min(d_A, d_B)` entries.
    pub coefficients: Vec<f64>,
    /// Orthonormal vectors over the `A` qubits (in partition order).
    pub left_vectors: Vec<Vec<Complex64>>,
    /// Orthonormal vectors over the `B` qubits (in partition order).
    pub right_vectors: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    /// Rebuilds the register state for `cut`.
    pub fn reconstruct(&self, cut: &PartitionSpec) -> StateVector {
        let n = cut.n_qubits();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        for ((c, l), r) in self.coefficients.iter().zip(&self.left_vectors).zip(&self.right_vectors) {
            for (ia, la) in l.iter().enumerate() {
                let ba = deposit_bits(ia, n, cut.a());
                for (ib, rb) in r.iter().enumerate() {
                    amplitudes[ba | deposit_bits(ib, n, cut.b())] += la * rb * *c;
                }
            }
        }
        StateVector { n_qubits: n, amplitudes }
    }
}

/// Schmidt decomposition across the `A | B` cut of `s`.
///
/// The smaller side's reduced density matrix is diagonalized; the partner
/// vectors are obtained by contracting the state with each eigenvector.
pub fn schmidt_decompose(s: &StateVector, cut: &PartitionSpec) -> Result<SchmidtDecomposition> {
    cut.require_register(s.n_qubits)?;
    if !cut.t().is_empty() {
        return Err(Error::UnsupportedCut("Schmidt decomposition needs an empty taggant".to_string()));
    }
    if cut.a().is_empty() || cut.b().is_empty() {
        return Err(Error::UnsupportedCut("both sides of the cut must be nonempty".to_string()));
    }
    let a_small = cut.a().len() <= cut.b().len();
    let (small, large) = if a_small { (cut.a(), cut.b()) } else { (cut.b(), cut.a()) };
    let m = amplitude_matrix(s, small, large);
    let rho = DensityMatrix::new(&m * &m.adjoint())?;
    let (_, vectors) = eigensolve_hermitian(&rho)?;
    let ds = m.rows();
    let dl = m.cols();

    let mut terms: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = (0..ds)
        .map(|k| {
            let u = vectors.column(k);
            let w: Vec<Complex64> = (0..dl)
                .map(|o| (0..ds).map(|r| u[r].conj() * m[(r, o)]).sum())
                .collect();
            let c = sqrt(w.iter().map(Complex64::norm_sqr).sum());
            (c, u, w)
        })
        .collect();
    terms.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut partners: Vec<Vec<Complex64>> = Vec::with_capacity(ds);
    let mut coefficients = Vec::with_capacity(ds);
    let mut own = Vec::with_capacity(ds);
    for (c, u, w) in terms {
        let partner = if c > 1e-12 {
            w.into_iter().map(|z| z / c).collect()
        } else {
            orthonormal_completion(&partners, dl)
        };
        coefficients.push(c);
        own.push(u);
        partners.push(partner);
    }
    let (left_vectors, right_vectors) = if a_small { (own, partners) } else { (partners, own) };
    Ok(SchmidtDecomposition { coefficients, left_vectors, right_vectors })
}

/// A unit vector orthogonal to every vector in `basis`, found by
/// Gram-Schmidt over the standard basis.
fn orthonormal_completion(basis: &[Vec<Complex64>], dim: usize) -> Vec<Complex64> {
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for e in 0..dim {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[e] = Complex64::new(1.0, 0.0);
        for b in basis {
            let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let norm = sqrt(v.iter().map(Complex64::norm_sqr).sum());
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, v));
        }
    }
    let (norm, v) = best.expect("dimension is positive");
    v.into_iter().map(|z| z / norm).collect()
}

/// Ensemble `{p_i, |χ_i⟩}` of `AB` states obtained by projecting a
/// purification's taggant onto an orthonormal basis.
#[derive(Debug, Clone)]
pub struct DecompositionView {
    /// One weight per taggant basis vector; sums to one.
    pub weights: Vec<f64>,
    /// Normalized `AB` component for each weight, `None` where the weight is
    /// below `1e-14`. Qubits are ordered `A` then `B`.
    pub components: Vec<Option<StateVector>>,
}

/// Weights below this are treated as zero-probability outcomes.
pub const WEIGHT_CUTOFF: f64 = 1e-14;

impl DecompositionView {
    /// Projects the `T` qubits of `s` onto each ket in `basis_rows`
    /// (row `i` holds the components of `|i′⟩`).
    pub fn from_purification(s: &StateVector, cut: &PartitionSpec, basis_rows: &CMatrix) -> Result<Self> {
        cut.require_register(s.n_qubits)?;
        let dt = 1usize << cut.t().len();
        if basis_rows.rows() != dt || basis_rows.cols() != dt {
            return Err(Error::DimensionMismatch { expected: dt, found: basis_rows.rows() });
        }
        let ab = cut.ab();
        if ab.is_empty() {
            return Err(Error::UnsupportedCut("A and B are both empty".to_string()));
        }
        let m = amplitude_matrix(s, &ab, cut.t());
        let dab = m.rows();
        let mut weights = Vec::with_capacity(dt);
        let mut components = Vec::with_capacity(dt);
        for i in 0..dt {
            let ket = basis_rows.row(i);
            let amps: Vec<Complex64> = (0..dab)
                .map(|r| (0..dt).map(|t| ket[t].conj() * m[(r, t)]).sum())
                .collect();
            let w: f64 = amps.iter().map(Complex64::norm_sqr).sum();
            weights.push(w);
            components.push(if w < WEIGHT_CUTOFF {
                None
            } else {
                Some(StateVector::rescaled(ab.len(), amps, w))
            });
        }
        Ok(Self { weights, components })
    }

    /// `m`, the number of components.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ p_i |χ_i⟩⟨χ_i|`.
    pub fn mixture(&self) -> Result<DensityMatrix> {
        let dim = self
            .components
            .iter()
            .flatten()
            .map(StateVector::dim)
            .next()
            .ok_or(Error::ZeroVector)?;
        let mut acc = CMatrix::zeros(dim, dim);
        for (w, c) in self.weights.iter().zip(&self.components) {
            if let Some(c) = c {
                acc = acc.add(&CMatrix::outer(c.amplitudes(), c.amplitudes()).scale((*w).into()));
            }
        }
        DensityMatrix::new(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_state(amps: &[f64]) -> StateVector {
        let n = amps.len().trailing_zeros() as usize;
        StateVector::new(n, amps.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn bit_helpers_are_inverse() {
        let qubits = [3, 0, 2];
        for sub in 0..8 {
            assert_eq!(extract_bits(deposit_bits(sub, 4, &qubits), 4, &qubits), sub);
        }
        // qubit 0 is the most significant bit
        assert_eq!(deposit_bits(1, 3, &[0]), 0b100);
    }

    #[test]
    fn tensor_examples() {
        let zero = StateVector::basis(1, 0).unwrap();
        let t = tensor(&zero, &zero).unwrap();
        assert_eq!(t.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        let bell = StateVector::bell(2, 0, 1).unwrap();
        let tagged = tensor(&bell, &zero).unwrap();
        for (i, a) in tagged.amplitudes().iter().enumerate() {
            let expected = if i == 0b000 || i == 0b110 { FRAC_1_SQRT_2 } else { 0.0 };
            assert!((a - c(expected, 0.0)).norm() < 1e-15);
        }

        let psi = real_state(&[0.6, 0.8]);
        let one = StateVector::basis(1, 1).unwrap();
        let t = tensor(&psi, &one).unwrap();
        assert_eq!(t.amplitudes(), &[c(0.0, 0.0), c(0.6, 0.0), c(0.0, 0.0), c(0.8, 0.0)]);
    }

    #[test]
    fn tensor_respects_register_limit() {
        let big = StateVector::basis(5, 0).unwrap();
        assert_eq!(tensor(&big, &big), Err(Error::RegisterSize(10)));
    }

    #[test]
    fn constructor_checks() {
        assert!(matches!(
            StateVector::new(1, vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(StateVector::new(2, vec![c(1.0, 0.0)]), Err(Error::LengthMismatch { .. })));
        assert_eq!(StateVector::new(9, vec![]), Err(Error::RegisterSize(9)));
        assert_eq!(StateVector::normalized(1, vec![c(0.0, 0.0); 2]), Err(Error::ZeroVector));
        assert_eq!(StateVector::from_bits("10").unwrap().amplitudes()[2], c(1.0, 0.0));
        assert!(StateVector::from_bits("1x").is_err());
    }

    #[test]
    fn density_matrix_examples() {
        let rho = density_matrix(&StateVector::basis(1, 0).unwrap());
        assert_eq!(rho.get(0, 0), c(1.0, 0.0));
        assert_eq!(rho.get(1, 1), c(0.0, 0.0));

        let rho = density_matrix(&StateVector::bell(2, 0, 1).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i == 0 || i == 3) && (j == 0 || j == 3) { 0.5 } else { 0.0 };
                assert!((rho.get(i, j) - c(expected, 0.0)).norm() < 1e-15);
            }
        }

        let plus_i = StateVector::new(1, vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
        let rho = density_matrix(&plus_i);
        assert!((rho.get(0, 1) - c(0.0, -0.5)).norm() < 1e-15);
        assert!((rho.get(1, 0) - c(0.0, 0.5)).norm() < 1e-15);
        assert!((rho.get(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let h = FRAC_1_SQRT_2;
        let ghz = real_state(&[h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h]);
        let layout = PartitionSpec::new(vec![0], vec![1], vec![2]).unwrap();
        let rho_ab = partial_trace(&density_matrix(&ghz), &[0, 1], &layout).unwrap();
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 0)] = c(0.5, 0.0);
        expected[(3, 3)] = c(0.5, 0.0);
        assert!(rho_ab.matrix().max_abs_diff(&expected) < 1e-15);

        let cut = PartitionSpec::bipartite(vec![0], vec![1]).unwrap();
        let bell = StateVector::bell(2, 0, 1).unwrap();
        let rho_a = partial_trace(&density_matrix(&bell), &[0], &cut).unwrap();
        assert!(rho_a.matrix().max_abs_diff(&CMatrix::identity(2).scale(c(0.5, 0.0))) < 1e-15);

        let prod = real_state(&[h, h, 0.0, 0.0]);
        let rho_a = partial_trace(&density_matrix(&prod), &[0], &cut).unwrap();
        assert!((rho_a.get(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(rho_a.get(1, 1).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_mismatched_layout() {
        let rho = density_matrix(&StateVector::bell(2, 0, 1).unwrap());
        let layout = PartitionSpec::new(vec![0], vec![1], vec![2]).unwrap();
        assert!(matches!(partial_trace(&rho, &[0], &layout), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn reduced_density_matches_partial_trace() {
        let s = StateVector::normalized(
            3,
            [0.1, 0.3, -0.2, 0.5, 0.4, -0.1, 0.6, 0.2].iter().map(|&x| c(x, -0.5 * x)).collect(),
        )
        .unwrap();
        let layout = PartitionSpec::new(vec![2], vec![0], vec![1]).unwrap();
        let a = partial_trace(&density_matrix(&s), &[2, 0], &layout).unwrap();
        let b = reduced_density(&s, &[2, 0]).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
    }

    #[test]
    fn eigensolve_examples() {
        let half = DensityMatrix::new(CMatrix::identity(2).scale(c(0.5, 0.0))).unwrap();
        assert_eq!(eigensolve_hermitian(&half).unwrap().0, [0.5, 0.5]);

        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(0.5, 0.0);
        m[(3, 3)] = c(0.5, 0.0);
        let (vals, _) = eigensolve_hermitian(&DensityMatrix::new(m).unwrap()).unwrap();
        assert_eq!(vals, [0.5, 0.5, 0.0, 0.0]);

        let m = CMatrix::from_rows([[c(0.75, 0.0), c(0.25, 0.0)], [c(0.25, 0.0), c(0.25, 0.0)]]);
        let (vals, _) = eigensolve_hermitian(&DensityMatrix::new(m).unwrap()).unwrap();
        let r = sqrt(0.5);
        assert!((vals[0] - (1.0 + r) / 2.0).abs() < 1e-12);
        assert!((vals[1] - (1.0 - r) / 2.0).abs() < 1e-12);
        assert!((vals[0] - 0.853553).abs() < 1e-6 && (vals[1] - 0.146447).abs() < 1e-6);
    }

    #[test]
    fn eigensolve_rejects_negative_spectrum() {
        // Hermitian with unit trace but eigenvalues 1.5 and -0.5.
        let m = CMatrix::from_rows([[c(0.5, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.5, 0.0)]]);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(matches!(eigensolve_hermitian(&rho), Err(Error::EigenvalueOutOfRange(_))));
        assert!(rho.check_positive().is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let m = CMatrix::from_rows([[c(0.5, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.4, 0.0)]]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidDensityMatrix(_))));
        let m = CMatrix::from_rows([[c(0.5, 0.0), c(0.1, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn schmidt_examples() {
        let cut = PartitionSpec::bipartite(vec![0], vec![1]).unwrap();
        let sd = schmidt_decompose(&StateVector::bell(2, 0, 1).unwrap(), &cut).unwrap();
        assert!((sd.coefficients[0] - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((sd.coefficients[1] - FRAC_1_SQRT_2).abs() < 1e-12);

        let sd = schmidt_decompose(&StateVector::from_bits("01").unwrap(), &cut).unwrap();
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-12 && sd.coefficients[1].abs() < 1e-12);
        let orth: Complex64 = sd.right_vectors[0].iter().zip(&sd.right_vectors[1]).map(|(x, y)| x.conj() * y).sum();
        assert!(orth.norm() < 1e-12);

        let s = real_state(&[sqrt(0.75), 0.0, 0.0, sqrt(0.25)]);
        let sd = schmidt_decompose(&s, &cut).unwrap();
        assert!((sd.coefficients[0] - sqrt(0.75)).abs() < 1e-12);
        assert!((sd.coefficients[1] - sqrt(0.25)).abs() < 1e-12);
        assert!(sd.reconstruct(&cut).distance_up_to_phase(&s) < 1e-12);
    }

    #[test]
    fn schmidt_with_larger_a_side() {
        // A = {1, 2}, B = {0}: the smaller side is B.
        let s = StateVector::normalized(
            3,
            [0.3, -0.1, 0.2, 0.5, 0.0, 0.4, -0.6, 0.1].iter().map(|&x| c(x, 0.1 * x)).collect(),
        )
        .unwrap();
        let cut = PartitionSpec::bipartite(vec![1, 2], vec![0]).unwrap();
        let sd = schmidt_decompose(&s, &cut).unwrap();
        assert_eq!(sd.coefficients.len(), 2);
        assert_eq!(sd.left_vectors[0].len(), 4);
        assert!(sd.reconstruct(&cut).distance_up_to_phase(&s) < 1e-10);
    }

    #[test]
    fn schmidt_rejects_bad_cuts() {
        let s = StateVector::basis(3, 0).unwrap();
        let cut = PartitionSpec::new(vec![0], vec![1], vec![2]).unwrap();
        assert!(matches!(schmidt_decompose(&s, &cut), Err(Error::UnsupportedCut(_))));
        let cut = PartitionSpec::bipartite(vec![], vec![0, 1, 2]).unwrap();
        assert!(matches!(schmidt_decompose(&s, &cut), Err(Error::UnsupportedCut(_))));
    }

    #[test]
    fn partition_validation() {
        assert!(PartitionSpec::new(vec![0], vec![0], vec![]).is_err());
        assert!(PartitionSpec::new(vec![0], vec![3], vec![]).is_err());
        let p = PartitionSpec::new(vec![2], vec![0], vec![1]).unwrap();
        assert_eq!(p.ab(), [2, 0]);
        assert_eq!(p.ab_local(), PartitionSpec::bipartite(vec![0], vec![1]).unwrap());
    }

    #[test]
    fn decomposition_view_of_ghz() {
        let h = FRAC_1_SQRT_2;
        let ghz = real_state(&[h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h]);
        let cut = PartitionSpec::new(vec![0], vec![1], vec![2]).unwrap();
        let view = DecompositionView::from_purification(&ghz, &cut, &CMatrix::identity(2)).unwrap();
        assert_eq!(view.len(), 2);
        assert!((view.weights[0] - 0.5).abs() < 1e-15);
        let rho = view.mixture().unwrap();
        assert_eq!(rho.rank(1e-10).unwrap(), 2);
        let traced = partial_trace(&density_matrix(&ghz), &[0, 1], &cut).unwrap();
        assert!(rho.matrix().max_abs_diff(traced.matrix()) < 1e-15);
    }
}
