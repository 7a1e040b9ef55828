//! Seeded sampling of states, unitaries and taggant bases.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use crate::math::{acos, cis, cos, ln, sqrt};
use crate::measures::BasisParams;
use crate::state::StateVector;

/// The one generator type used for every seeded computation.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

/// Standard normal sample (Box-Muller).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // 1 - u keeps the logarithm finite
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    sqrt(-2.0 * ln(u1)) * cos(TAU * u2)
}

/// Haar-random pure state of `n_qubits` qubits.
pub fn random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..1usize << n_qubits)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect();
        if let Ok(s) = StateVector::normalized(n_qubits, amps) {
            return s;
        }
    }
}

/// Haar-random 2×2 unitary.
pub fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> [[Complex64; 2]; 2] {
    let col = random_state(1, rng);
    let (a, b) = (col.amplitudes()[0], col.amplitudes()[1]);
    let phase = cis(TAU * rng.random::<f64>());
    [[a, -b.conj() * phase], [b, a.conj() * phase]]
}

/// Taggant basis angles with `cos² θ` uniform on `[0, 1]` and `φ` uniform
/// on `[0, 2π)`; the first ket is then Haar-distributed on the Bloch sphere.
pub fn random_basis_params<R: Rng + ?Sized>(rng: &mut R) -> BasisParams {
    let a2: f64 = rng.random::<f64>();
    let phi = TAU * rng.random::<f64>();
    BasisParams::new(acos(sqrt(a2)), phi).expect("sampled angles lie in range")
}
