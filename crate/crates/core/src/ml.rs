//! Kernel SVM trained with a simplified SMO loop, plus ROC-AUC.
//!
//! The solver maximizes the standard soft-margin dual
//!
//! ```text
//! W(a) = sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij,
//! 0 <= a_i <= C,   sum_i a_i y_i = 0,
//! ```
//!
//! by repeatedly optimizing random coordinate pairs analytically: the first
//! index scans for a KKT violation at tolerance `tol`, the second is drawn
//! from a seeded ChaCha stream. Training terminates after `max_passes`
//! consecutive full sweeps without an update.

use crate::error::{Error, Result};
use crate::quantum::KernelMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Kernel eigenvalues above this are considered legitimately positive; below
/// its negative, the kernel is clipped to its positive-semidefinite part.
const PSD_TOL: f64 = 1e-6;

/// Minimum change of a coordinate for an update to count.
const MIN_ALPHA_STEP: f64 = 1e-5;

/// Hard cap on full sweeps, guarding against non-termination.
const MAX_TOTAL_PASSES: usize = 10_000;

/// SMO hyperparameters.
#[derive(Debug, Clone)]
pub struct SvmParams {
    /// Box constraint C.
    pub c: f64,
    /// KKT violation tolerance.
    pub tol: f64,
    /// Consecutive update-free sweeps required to declare convergence.
    pub max_passes: usize,
    /// Seed for the second-index choice.
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self { c: 1.0, tol: 1e-3, max_passes: 5, seed: 0 }
    }
}

/// A trained kernel SVM.
#[derive(Debug, Clone)]
pub struct SvmModel {
    alpha: Vec<f64>,
    bias: f64,
    labels: Vec<f64>,
}

impl SvmModel {
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    /// Indices with non-negligible dual weight.
    pub fn support_indices(&self) -> Vec<usize> {
        self.alpha
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a > 1e-12)
            .map(|(i, _)| i)
            .collect()
    }

    /// Decision value `sum_i a_i y_i k(x_i, x) + b` for one evaluation
    /// point, given its kernel values against the training set.
    pub fn decision(&self, kernel_row: &[f64]) -> Result<f64> {
        if kernel_row.len() != self.alpha.len() {
            return Err(Error::DimensionMismatch {
                expected: self.alpha.len(),
                actual: kernel_row.len(),
            });
        }
        Ok(self
            .alpha
            .iter()
            .zip(&self.labels)
            .zip(kernel_row)
            .map(|((&a, &y), &k)| a * y * k)
            .sum::<f64>()
            + self.bias)
    }
}

/// Trains a kernel SVM. `labels` must be `+1.0` / `-1.0` with both classes
/// present; `kernel` must match their length.
///
/// A kernel whose smallest eigenvalue is below `-1e-6` is clipped to its
/// positive-semidefinite part (eigenvalue truncation) before training, with
/// a warning — the dual is unbounded on indefinite kernels.
pub fn svm_train(kernel: &KernelMatrix, labels: &[f64], params: &SvmParams) -> Result<SvmModel> {
    let n = kernel.n();
    if labels.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: labels.len() });
    }
    if n < 2 {
        return Err(Error::invalid("need at least 2 training samples"));
    }
    if labels.iter().any(|&y| y != 1.0 && y != -1.0) {
        return Err(Error::invalid("labels must be +1 or -1"));
    }
    if !labels.iter().any(|&y| y == 1.0) || !labels.iter().any(|&y| y == -1.0) {
        return Err(Error::SingleClass);
    }
    if !(params.c > 0.0) || !(params.tol > 0.0) || params.max_passes == 0 {
        return Err(Error::invalid("invalid SMO parameters"));
    }

    let k = psd_clipped(kernel);
    let get = |i: usize, j: usize| k[i * n + j];

    let c = params.c;
    let mut alpha = vec![0.0; n];
    let mut b = 0.0;
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);

    let f = |alpha: &[f64], b: f64, i: usize| -> f64 {
        alpha
            .iter()
            .zip(labels)
            .enumerate()
            .map(|(j, (&a, &y))| a * y * get(j, i))
            .sum::<f64>()
            + b
    };

    let mut quiet = 0usize;
    let mut total = 0usize;
    while quiet < params.max_passes && total < MAX_TOTAL_PASSES {
        let mut changed = 0usize;
        for i in 0..n {
            let e_i = f(&alpha, b, i) - labels[i];
            let r_i = e_i * labels[i];
            if !((r_i < -params.tol && alpha[i] < c) || (r_i > params.tol && alpha[i] > 0.0)) {
                continue;
            }
            // random second index, distinct from i
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let e_j = f(&alpha, b, j) - labels[j];

            let (a_i_old, a_j_old) = (alpha[i], alpha[j]);
            let (lo, hi) = if labels[i] == labels[j] {
                ((a_i_old + a_j_old - c).max(0.0), (a_i_old + a_j_old).min(c))
            } else {
                ((a_j_old - a_i_old).max(0.0), (c + a_j_old - a_i_old).min(c))
            };
            if lo >= hi {
                continue;
            }
            let eta = 2.0 * get(i, j) - get(i, i) - get(j, j);
            if eta >= 0.0 {
                continue;
            }
            let a_j = (a_j_old - labels[j] * (e_i - e_j) / eta).clamp(lo, hi);
            if (a_j - a_j_old).abs() < MIN_ALPHA_STEP {
                continue;
            }
            let a_i = a_i_old + labels[i] * labels[j] * (a_j_old - a_j);
            alpha[i] = a_i;
            alpha[j] = a_j;

            let b1 = b - e_i
                - labels[i] * (a_i - a_i_old) * get(i, i)
                - labels[j] * (a_j - a_j_old) * get(i, j);
            let b2 = b - e_j
                - labels[i] * (a_i - a_i_old) * get(i, j)
                - labels[j] * (a_j - a_j_old) * get(j, j);
            b = if 0.0 < a_i && a_i < c {
                b1
            } else if 0.0 < a_j && a_j < c {
                b2
            } else {
                (b1 + b2) / 2.0
            };
            changed += 1;
        }
        quiet = if changed == 0 { quiet + 1 } else { 0 };
        total += 1;
    }

    Ok(SvmModel { alpha, bias: b, labels: labels.to_vec() })
}

/// Returns the kernel's row-major values, eigenvalue-clipped to the PSD cone
/// when needed.
fn psd_clipped(kernel: &KernelMatrix) -> Vec<f64> {
    let min_eig = kernel.min_eigenvalue();
    if min_eig >= -PSD_TOL {
        return kernel.values().to_vec();
    }
    log::warn!(
        "kernel matrix has eigenvalue {min_eig:.3e} < -{PSD_TOL:.0e}; clipping to its PSD part"
    );
    let n = kernel.n();
    let m = nalgebra::DMatrix::from_row_slice(n, n, kernel.values());
    let eig = m.symmetric_eigen();
    let clamped = nalgebra::DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0)));
    let rebuilt = &eig.eigenvectors * clamped * eig.eigenvectors.transpose();
    rebuilt.transpose().as_slice().to_vec() // row-major of a symmetric matrix
}

/// Area under the ROC curve by the rank statistic, with tied scores sharing
/// their average rank. `labels` are 0/1 and both classes must appear.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: scores.len(), actual: labels.len() });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::invalid("scores must be finite"));
    }
    if labels.iter().any(|&y| y > 1) {
        return Err(Error::invalid("labels must be 0 or 1"));
    }
    let pos = labels.iter().filter(|&&y| y == 1).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap().then(a.cmp(&b)));

    // average ranks within tie groups (ranks are 1-based)
    let mut rank = vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            rank[idx] = avg;
        }
        i = j + 1;
    }

    let pos_rank_sum: f64 = rank
        .iter()
        .zip(labels)
        .filter(|&(_, &y)| y == 1)
        .map(|(&r, _)| r)
        .sum();
    let p = pos as f64;
    let auc = (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * neg as f64);
    Ok(auc)
}
