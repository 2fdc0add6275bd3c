//! Diagonal Ising coefficients for a feature vector and exact ground-state
//! search by exhaustive enumeration.
//!
//! A feature vector `x` on a lattice defines the classical energy
//!
//! ```text
//! E(s) = sum_i phi_i s_i + sum_(i,j) phi_ij s_i s_j,        s_i in {+1, -1}
//! ```
//!
//! with on-site terms `phi_i = x_i` and pair terms
//! `phi_ij = (pi - x_i)(pi - x_j)` on the lattice edges. The same function,
//! evaluated on the spin string of a computational basis state, is the phase
//! the entangling map applies to that state (see [`crate::quantum`]); keeping
//! a single energy implementation ties the two views together.
//!
//! The Hamiltonian is diagonal, so exact diagonalization reduces to scanning
//! all `2^n` spin strings. Two independent scan strategies are provided: a
//! naive per-string evaluation and a Gray-code walk with incremental energy
//! updates. They return bit-identical results, which the test suite leans on.

use crate::error::{Error, Result};
use crate::lattice::{LatticeGraph, Spin};
use std::cmp::Ordering;
use std::f64::consts::PI;

/// Energy window within which two spin strings count as degenerate.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// Largest site count accepted by [`IsingCoefficients::ground_state_naive`].
pub const NAIVE_SITE_LIMIT: usize = 24;

/// Largest site count accepted by [`IsingCoefficients::ground_state_gray`].
pub const GRAY_SITE_LIMIT: usize = 30;

/// Safety margin added on top of `tie_tol` when the Gray-code walk collects
/// candidate minima from incrementally updated energies. Exact re-evaluation
/// then discards the extras, so the margin only needs to dominate the
/// floating-point drift of the walk (which periodic refreshes keep far below
/// this value).
const GRAY_CANDIDATE_MARGIN: f64 = 1e-6;

/// Field and coupling coefficients of one encoded feature vector.
#[derive(Debug, Clone)]
pub struct IsingCoefficients<'a> {
    fields: Vec<f64>,
    couplings: Vec<f64>,
    lattice: &'a LatticeGraph,
}

/// Outcome of an exact ground-state search.
///
/// `degenerate_set` always contains `spin_string` and is sorted
/// lexicographically with `+1` ordered before `-1`; `spin_string` is its
/// first element. `degenerate` is true exactly when the set has more than
/// one element.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateResult {
    pub spin_string: Vec<Spin>,
    pub energy: f64,
    pub degenerate: bool,
    pub degenerate_set: Vec<Vec<Spin>>,
}

impl<'a> IsingCoefficients<'a> {
    /// Encodes a feature vector on a lattice: `phi_i = x_i`,
    /// `phi_ij = (pi - x_i)(pi - x_j)` per lattice edge.
    pub fn from_features(x: &[f64], lattice: &'a LatticeGraph) -> Result<Self> {
        if x.len() != lattice.n_sites() {
            return Err(Error::DimensionMismatch {
                expected: lattice.n_sites(),
                actual: x.len(),
            });
        }
        if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite feature value {bad}")));
        }
        let couplings = lattice
            .edges()
            .iter()
            .map(|&(i, j)| (PI - x[i]) * (PI - x[j]))
            .collect();
        Ok(Self { fields: x.to_vec(), couplings, lattice })
    }

    /// Builds an instance from explicit coefficients (e.g. uniform couplings
    /// or zero fields), bypassing the feature-vector formulas.
    pub fn from_parts(fields: Vec<f64>, couplings: Vec<f64>, lattice: &'a LatticeGraph) -> Result<Self> {
        if fields.len() != lattice.n_sites() {
            return Err(Error::DimensionMismatch {
                expected: lattice.n_sites(),
                actual: fields.len(),
            });
        }
        if couplings.len() != lattice.edges().len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.edges().len(),
                actual: couplings.len(),
            });
        }
        if fields.iter().chain(&couplings).any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite coefficient"));
        }
        Ok(Self { fields, couplings, lattice })
    }

    pub fn n_sites(&self) -> usize {
        self.fields.len()
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    /// Couplings in the same order as `self.lattice().edges()`.
    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn lattice(&self) -> &LatticeGraph {
        self.lattice
    }

    /// Classical energy of a spin string.
    pub fn energy(&self, s: &[Spin]) -> Result<f64> {
        if s.len() != self.fields.len() {
            return Err(Error::DimensionMismatch {
                expected: self.fields.len(),
                actual: s.len(),
            });
        }
        if s.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::invalid("spin entries must be +1 or -1"));
        }
        Ok(self.energy_unchecked(s))
    }

    fn energy_unchecked(&self, s: &[Spin]) -> f64 {
        let mut e = 0.0;
        for (phi, &si) in self.fields.iter().zip(s) {
            e += phi * f64::from(si);
        }
        for (k, &(i, j)) in self.lattice.edges().iter().enumerate() {
            e += self.couplings[k] * f64::from(s[i]) * f64::from(s[j]);
        }
        e
    }

    /// Energy of the basis state `bits`, with bit `i` set meaning `s_i = -1`.
    ///
    /// This is the phase angle the entangling map applies to basis state
    /// `bits` (qubit 0 is the least significant bit).
    pub fn energy_of_bits(&self, bits: u64) -> f64 {
        let mut buf = [1 as Spin; 64];
        let n = self.n_sites();
        decode_bits(bits, &mut buf[..n]);
        self.energy_unchecked(&buf[..n])
    }

    /// Exhaustive scan evaluating every spin string from scratch.
    ///
    /// Two passes: find the exact minimum, then collect every string within
    /// `tie_tol` of it. Limited to [`NAIVE_SITE_LIMIT`] sites.
    pub fn ground_state_naive(&self, tie_tol: f64) -> Result<GroundStateResult> {
        self.check_solver_args(tie_tol, NAIVE_SITE_LIMIT)?;
        let n = self.n_sites();
        let size = 1u64 << n;
        let mut buf = vec![1 as Spin; n];

        let mut min = f64::INFINITY;
        for bits in 0..size {
            decode_bits(bits, &mut buf);
            let e = self.energy_unchecked(&buf);
            if e < min {
                min = e;
            }
        }

        let mut set = Vec::new();
        for bits in 0..size {
            decode_bits(bits, &mut buf);
            if self.energy_unchecked(&buf) <= min + tie_tol {
                set.push(buf.clone());
            }
        }
        Ok(self.finish_search(set))
    }

    /// Gray-code scan: each step flips one spin and updates the energy with
    /// `delta = -2 s_k (phi_k + sum_j phi_kj s_j)`.
    ///
    /// The incremental energy is refreshed from scratch every `2^16` steps to
    /// bound floating-point drift. Candidate minima are collected within
    /// `tie_tol` plus a safety margin and re-evaluated exactly, so the result
    /// is bit-identical to [`Self::ground_state_naive`]. Limited to
    /// [`GRAY_SITE_LIMIT`] sites.
    pub fn ground_state_gray(&self, tie_tol: f64) -> Result<GroundStateResult> {
        self.check_solver_args(tie_tol, GRAY_SITE_LIMIT)?;
        let n = self.n_sites();

        // (neighbor, coupling) lists for the incremental update
        let mut nbrs: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (k, &(i, j)) in self.lattice.edges().iter().enumerate() {
            nbrs[i].push((j, self.couplings[k]));
            nbrs[j].push((i, self.couplings[k]));
        }

        // Pass 1: find the (approximate) minimum of the incremental walk.
        let mut min_inc = f64::INFINITY;
        self.gray_walk(&nbrs, |_, e| {
            if e < min_inc {
                min_inc = e;
            }
        });

        // Pass 2: re-walk, keeping everything within the safety window.
        let threshold = min_inc + tie_tol + GRAY_CANDIDATE_MARGIN;
        let mut candidates: Vec<u64> = Vec::new();
        self.gray_walk(&nbrs, |bits, e| {
            if e <= threshold {
                candidates.push(bits);
            }
        });

        // Exact re-evaluation decides the final set.
        let mut buf = vec![1 as Spin; n];
        let mut min = f64::INFINITY;
        let mut exact: Vec<(u64, f64)> = Vec::with_capacity(candidates.len());
        for &bits in &candidates {
            decode_bits(bits, &mut buf);
            let e = self.energy_unchecked(&buf);
            if e < min {
                min = e;
            }
            exact.push((bits, e));
        }
        let mut set = Vec::new();
        for (bits, e) in exact {
            if e <= min + tie_tol {
                decode_bits(bits, &mut buf);
                set.push(buf.clone());
            }
        }
        Ok(self.finish_search(set))
    }

    /// Visits all `2^n` states in Gray-code order, passing the bit pattern
    /// and incrementally updated energy to `visit`.
    fn gray_walk(&self, nbrs: &[Vec<(usize, f64)>], mut visit: impl FnMut(u64, f64)) {
        let n = self.n_sites();
        let size = 1u64 << n;
        let mut spins = vec![1 as Spin; n];
        let mut e = self.energy_unchecked(&spins);
        visit(0, e);
        for step in 1..size {
            let k = step.trailing_zeros() as usize;
            let sk = f64::from(spins[k]);
            let mut local = self.fields[k];
            for &(j, phi) in &nbrs[k] {
                local += phi * f64::from(spins[j]);
            }
            e -= 2.0 * sk * local;
            spins[k] = -spins[k];
            if step & 0xFFFF == 0 {
                e = self.energy_unchecked(&spins); // drift control
            }
            visit(gray(step), e);
        }
    }

    fn check_solver_args(&self, tie_tol: f64, limit: usize) -> Result<()> {
        if !(tie_tol >= 0.0) || !tie_tol.is_finite() {
            return Err(Error::invalid(format!("tie_tol must be finite and >= 0, got {tie_tol}")));
        }
        let n = self.n_sites();
        if n > limit {
            return Err(Error::SizeBound { size: n, bound: limit });
        }
        Ok(())
    }

    fn finish_search(&self, mut set: Vec<Vec<Spin>>) -> GroundStateResult {
        set.sort_unstable_by(|a, b| cmp_spin_strings(a, b));
        let spin_string = set[0].clone();
        let energy = self.energy_unchecked(&spin_string);
        GroundStateResult {
            degenerate: set.len() > 1,
            degenerate_set: set,
            energy,
            spin_string,
        }
    }
}

/// Lexicographic order on spin strings with `+1` before `-1`, i.e. the order
/// of the corresponding basis-state bit patterns.
pub fn cmp_spin_strings(a: &[Spin], b: &[Spin]) -> Ordering {
    for (&x, &y) in a.iter().zip(b) {
        let o = u8::from(x < 0).cmp(&u8::from(y < 0));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// Spin string of basis state `bits`: bit `i` set means `s_i = -1`.
pub fn spins_from_bits(bits: u64, n: usize) -> Vec<Spin> {
    let mut s = vec![1 as Spin; n];
    decode_bits(bits, &mut s);
    s
}

/// Inverse of [`spins_from_bits`].
pub fn bits_from_spins(s: &[Spin]) -> u64 {
    s.iter()
        .enumerate()
        .filter(|&(_, &v)| v < 0)
        .fold(0u64, |acc, (i, _)| acc | (1 << i))
}

fn decode_bits(bits: u64, buf: &mut [Spin]) {
    for (i, v) in buf.iter_mut().enumerate() {
        *v = if bits >> i & 1 == 1 { -1 } else { 1 };
    }
}

fn gray(x: u64) -> u64 {
    x ^ (x >> 1)
}
