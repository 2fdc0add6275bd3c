//! Class-conditional statistics of order labels over a training ensemble,
//! the induced nearest-class predictor, and total variation distance.

use crate::error::{Error, Result};
use crate::order::{OrderKind, OrderLabel};

/// Joint empirical distribution of (order class, data label) over a training
/// set, stored as counts over the six cells
/// `(AF1,0), (AF2,0), (R,0), (AF1,1), (AF2,1), (R,1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDistribution {
    counts: [usize; 6],
    n_train: usize,
}

/// Output of the distribution-based classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prediction {
    Class0,
    Class1,
    /// The observed order class does not discriminate between the labels.
    Abstain,
}

fn kind_index(kind: OrderKind) -> usize {
    match kind {
        OrderKind::Af1 => 0,
        OrderKind::Af2 => 1,
        OrderKind::Residual => 2,
    }
}

impl ClassDistribution {
    /// Tallies order labels against binary data labels. Both slices must have
    /// the same non-zero length; labels must be 0 or 1.
    pub fn from_labels(orders: &[OrderLabel], labels: &[u8]) -> Result<Self> {
        if orders.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: orders.len(),
                actual: labels.len(),
            });
        }
        if orders.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut counts = [0usize; 6];
        for (order, &y) in orders.iter().zip(labels) {
            if y > 1 {
                return Err(Error::invalid(format!("labels must be 0 or 1, got {y}")));
            }
            counts[usize::from(y) * 3 + kind_index(order.kind)] += 1;
        }
        Ok(Self { counts, n_train: orders.len() })
    }

    pub fn n_train(&self) -> usize {
        self.n_train
    }

    /// Raw cell counts in the order `(AF1,0), (AF2,0), (R,0), (AF1,1), (AF2,1), (R,1)`.
    pub fn counts(&self) -> &[usize; 6] {
        &self.counts
    }

    /// Joint probabilities (counts over `n_train`), summing to 1.
    pub fn probabilities(&self) -> [f64; 6] {
        let n = self.n_train as f64;
        let mut p = [0.0; 6];
        for (pi, &c) in p.iter_mut().zip(&self.counts) {
            *pi = c as f64 / n;
        }
        p
    }

    pub fn probability(&self, kind: OrderKind, label: u8) -> f64 {
        self.counts[usize::from(label) * 3 + kind_index(kind)] as f64 / self.n_train as f64
    }

    /// Distribution over `(AF1, AF2, R)` conditioned on one data label.
    /// Errors when the label has no samples.
    pub fn class_conditional(&self, label: u8) -> Result<[f64; 3]> {
        if label > 1 {
            return Err(Error::invalid(format!("labels must be 0 or 1, got {label}")));
        }
        let base = usize::from(label) * 3;
        let total: usize = self.counts[base..base + 3].iter().sum();
        if total == 0 {
            return Err(Error::invalid(format!("no samples with label {label}")));
        }
        let mut p = [0.0; 3];
        for (pi, &c) in p.iter_mut().zip(&self.counts[base..base + 3]) {
            *pi = c as f64 / total as f64;
        }
        Ok(p)
    }

    /// Predicts the label whose cell count for the observed order class is
    /// larger; abstains on ties (including the all-zero case).
    ///
    /// Comparing raw counts makes the rule invariant under rescaling both
    /// class counts by a common factor.
    pub fn predict_label(&self, order: &OrderLabel) -> Prediction {
        let k = kind_index(order.kind);
        let c0 = self.counts[k];
        let c1 = self.counts[3 + k];
        match c0.cmp(&c1) {
            std::cmp::Ordering::Greater => Prediction::Class0,
            std::cmp::Ordering::Less => Prediction::Class1,
            std::cmp::Ordering::Equal => Prediction::Abstain,
        }
    }
}

/// Total variation distance `0.5 * sum |p_i - q_i|` between two discrete
/// distributions of equal length, each normalized within `1e-9`.
pub fn tvd(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), actual: q.len() });
    }
    if p.is_empty() {
        return Err(Error::invalid("empty distribution"));
    }
    for dist in [p, q] {
        if dist.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::invalid("probabilities must be finite and non-negative"));
        }
        let sum: f64 = dist.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(sum));
        }
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}
