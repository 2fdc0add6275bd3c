//! Statevector simulation of the entangling feature map, fidelity kernels,
//! and shot-based estimation of Pauli-Z observables.
//!
//! The map is `V = U H^(x)n U H^(x)n` where `H^(x)n` is a Hadamard on every
//! qubit and `U` is diagonal, multiplying basis state `b` by
//! `exp(i E(s(b)))` with `E` the Ising energy from [`crate::encoding`] and
//! `s_i(b) = +1` when bit `i` of `b` is clear. Qubit 0 is the least
//! significant bit. Reusing the energy function keeps the circuit phases and
//! the classical ground-state search definitionally in lock step.

use crate::dataio::DataSet;
use crate::encoding::IsingCoefficients;
use crate::error::{Error, Result};
use crate::lattice::{LatticeGraph, Spin};
use crate::seeds::derive_seed;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;

/// Largest qubit count for which statevectors are simulated.
pub const MAX_STATE_QUBITS: usize = 20;

/// Dense complex statevector over `n_qubits` qubits, little-endian basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: Vec<Complex64>,
    n_qubits: usize,
}

impl StateVector {
    /// The computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: u64) -> Result<Self> {
        check_qubits(n_qubits)?;
        if index >> n_qubits != 0 {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
        amps[index as usize] = Complex64::ONE;
        Ok(Self { amps, n_qubits })
    }

    /// Basis state encoding a spin string: `s_i = -1` sets bit `i`.
    pub fn from_spins(s: &[Spin]) -> Result<Self> {
        if s.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::invalid("spin entries must be +1 or -1"));
        }
        Self::basis(s.len(), crate::encoding::bits_from_spins(s))
    }

    /// Uniform superposition `H^(x)n |0..0>`.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        let mut state = Self::basis(n_qubits, 0)?;
        hadamard_all(&mut state.amps, n_qubits);
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Euclidean norm; 1 for any state produced by this module.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `<self|other>`.
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Expectation of the Pauli-Z product over `support`.
    pub fn z_expectation(&self, support: &[usize]) -> Result<f64> {
        let mask = support_mask(support, self.n_qubits)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(b, a)| a.norm_sqr() * f64::from(z_sign(b as u64, mask)))
            .sum())
    }
}

/// Applies a Hadamard to every qubit via in-place butterflies.
fn hadamard_all(amps: &mut [Complex64], n_qubits: usize) {
    for q in 0..n_qubits {
        let stride = 1usize << q;
        let mut base = 0;
        while base < amps.len() {
            for i in base..base + stride {
                let a = amps[i];
                let b = amps[i + stride];
                amps[i] = (a + b) * FRAC_1_SQRT_2;
                amps[i + stride] = (a - b) * FRAC_1_SQRT_2;
            }
            base += 2 * stride;
        }
    }
}

/// Simulates the feature-map circuit for one encoded vector.
///
/// Starting from `|0..0>`, applies two rounds of (Hadamards, diagonal
/// phase). The phase of basis state `b` is the classical energy of its spin
/// string, evaluated by the exact same code path the ground-state solvers
/// use.
pub fn featuremap_state(coeffs: &IsingCoefficients) -> Result<StateVector> {
    let n = coeffs.n_sites();
    check_qubits(n)?;
    let mut state = StateVector::basis(n, 0)?;
    for _ in 0..2 {
        hadamard_all(&mut state.amps, n);
        for (b, amp) in state.amps.iter_mut().enumerate() {
            let theta = coeffs.energy_of_bits(b as u64);
            *amp *= Complex64::from_polar(1.0, theta);
        }
    }
    Ok(state)
}

/// Symmetric fidelity kernel matrix `K_ij = |<phi(x_j)|phi(x_i)>|^2`.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    values: Vec<f64>,
    n: usize,
}

impl KernelMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Row-major backing storage.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Smallest eigenvalue; slightly negative values signal accumulated
    /// floating-point error rather than a genuinely indefinite kernel.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = DMatrix::from_row_slice(self.n, self.n, &self.values);
        m.symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |acc, &v| acc.min(v))
    }

    /// Builds a kernel from a row-major buffer (mainly for tests).
    pub fn from_values(values: Vec<f64>, n: usize) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, actual: values.len() });
        }
        Ok(Self { values, n })
    }
}

fn map_states(data: &DataSet, lattice: &LatticeGraph) -> Result<Vec<StateVector>> {
    if data.n_features() != lattice.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: lattice.n_sites(),
            actual: data.n_features(),
        });
    }
    data.samples()
        .par_iter()
        .map(|s| featuremap_state(&IsingCoefficients::from_features(&s.features, lattice)?))
        .collect()
}

/// Fidelity kernel of a dataset with itself. Symmetric with unit diagonal.
pub fn kernel_matrix(data: &DataSet, lattice: &LatticeGraph) -> Result<KernelMatrix> {
    let states = map_states(data, lattice)?;
    let n = states.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; n];
            for j in 0..=i {
                row[j] = states[i].overlap(&states[j]).expect("equal qubit counts").norm_sqr();
            }
            row
        })
        .collect();
    let mut values = vec![0.0; n * n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..=i {
            values[i * n + j] = row[j];
            values[j * n + i] = row[j];
        }
    }
    for i in 0..n {
        values[i * n + i] = 1.0; // unit norm up to rounding; pin exactly
    }
    KernelMatrix::from_values(values, n)
}

/// Rectangular kernel block: `rows[i][j] = |<phi(train_j)|phi(test_i)>|^2`.
pub fn kernel_cross(
    test: &DataSet,
    train: &DataSet,
    lattice: &LatticeGraph,
) -> Result<Vec<Vec<f64>>> {
    let test_states = map_states(test, lattice)?;
    let train_states = map_states(train, lattice)?;
    Ok(test_states
        .par_iter()
        .map(|t| {
            train_states
                .iter()
                .map(|tr| t.overlap(tr).expect("equal qubit counts").norm_sqr())
                .collect()
        })
        .collect())
}

/// Estimates `<Z_support>` from `shots` simulated ancilla measurements.
///
/// The exact success probability `p0 = (1 + <Z>) / 2` of the Hadamard test
/// is computed from the statevector, a binomial count is drawn from a
/// ChaCha stream seeded with `seed`, and the estimate `2 k / shots - 1` is
/// returned. Exact `p0` in {0, 1} yields a deterministic estimate.
pub fn hadamard_test(state: &StateVector, support: &[usize], shots: u64, seed: u64) -> Result<f64> {
    if shots == 0 {
        return Err(Error::invalid("shots must be positive"));
    }
    let z = state.z_expectation(support)?;
    let p0 = ((1.0 + z) / 2.0).clamp(0.0, 1.0);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let count = Binomial::new(shots, p0)
        .map_err(|e| Error::invalid(format!("invalid binomial: {e}")))?
        .sample(&mut rng);
    Ok(2.0 * count as f64 / shots as f64 - 1.0)
}

/// Shot-based estimates of the chain correlation and the parity of a ground
/// state, embedded as a basis state.
///
/// Returns `(correlation_estimate, parity_estimate)`: the mean of the
/// `<Z_i Z_{i+1}>` estimates along the chain path, and the `<Z_0>` estimate.
/// Each observable uses its own sub-seed derived from `seed`, so estimates
/// are independent and the whole call is reproducible. On a basis state all
/// probabilities are exactly 0 or 1 and the estimates coincide with the
/// exact values.
pub fn measure_ground_state_order(
    spin_string: &[Spin],
    shots: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if spin_string.len() < 2 {
        return Err(Error::invalid("need at least 2 spins to measure chain order"));
    }
    let state = StateVector::from_spins(spin_string)?;
    let parity = hadamard_test(&state, &[0], shots, derive_seed(seed, 0))?;
    let n = spin_string.len();
    let mut corr_sum = 0.0;
    for i in 0..n - 1 {
        corr_sum += hadamard_test(&state, &[i, i + 1], shots, derive_seed(seed, 1 + i as u64))?;
    }
    Ok((corr_sum / (n - 1) as f64, parity))
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("need at least 1 qubit"));
    }
    if n > MAX_STATE_QUBITS {
        return Err(Error::SizeBound { size: n, bound: MAX_STATE_QUBITS });
    }
    Ok(())
}

fn support_mask(support: &[usize], n_qubits: usize) -> Result<u64> {
    if support.is_empty() {
        return Err(Error::invalid("observable support must be non-empty"));
    }
    let mut mask = 0u64;
    for &q in support {
        if q >= n_qubits {
            return Err(Error::invalid(format!("qubit {q} out of range for {n_qubits} qubits")));
        }
        mask |= 1 << q;
    }
    Ok(mask)
}

/// `+1` when `bits` has even overlap with `mask`, `-1` when odd.
fn z_sign(bits: u64, mask: u64) -> i8 {
    if (bits & mask).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}
