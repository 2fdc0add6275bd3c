//! Labeled tabular datasets: CSV ingestion, class balancing, stratified
//! splitting, and synthetic two-class generation.
//!
//! All randomized operations take an explicit seed and draw from a ChaCha
//! stream, so every byte of their output is reproducible.

use crate::error::{Error, Result};
use rand::seq::index::sample as index_sample;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use std::path::Path;

/// One labeled row.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    /// Binary class label, 0 or 1.
    pub label: u8,
}

/// A rectangular, non-empty collection of labeled samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    samples: Vec<Sample>,
    feature_names: Vec<String>,
}

impl DataSet {
    /// Validates and wraps samples: non-empty, rectangular with width
    /// matching `feature_names`, finite values, labels in `{0, 1}`.
    pub fn new(samples: Vec<Sample>, feature_names: Vec<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let width = feature_names.len();
        for (row, s) in samples.iter().enumerate() {
            if s.features.len() != width {
                return Err(Error::DimensionMismatch { expected: width, actual: s.features.len() });
            }
            if s.label > 1 {
                return Err(Error::invalid(format!("row {row}: label must be 0 or 1, got {}", s.label)));
            }
            if s.features.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("row {row}: non-finite feature value")));
            }
        }
        Ok(Self { samples, feature_names })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn labels(&self) -> Vec<u8> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// `(count of label 0, count of label 1)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let ones = self.samples.iter().filter(|s| s.label == 1).count();
        (self.samples.len() - ones, ones)
    }

    /// Loads a headered CSV. Every column except `label_column` must parse
    /// as a finite number; the label becomes 1 when the cell (trimmed)
    /// equals `positive_label`, else 0.
    pub fn from_csv(path: &Path, label_column: &str, positive_label: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| {
                if e.is_io_error() {
                    match e.into_kind() {
                        csv::ErrorKind::Io(source) => Error::Io { path: path.to_path_buf(), source },
                        _ => unreachable!("is_io_error guarantees an Io kind"),
                    }
                } else {
                    Error::Csv(e)
                }
            })?;
        let headers = reader.headers()?.clone();
        let label_idx = headers
            .iter()
            .position(|h| h == label_column)
            .ok_or_else(|| Error::MissingLabelColumn(label_column.to_string()))?;
        let feature_names: Vec<String> = headers
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != label_idx)
            .map(|(_, h)| h.to_string())
            .collect();

        let mut samples = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record?; // ragged rows surface here
            let mut features = Vec::with_capacity(feature_names.len());
            for (i, cell) in record.iter().enumerate() {
                if i == label_idx {
                    continue;
                }
                let value: f64 = cell.parse().unwrap_or(f64::NAN);
                if !value.is_finite() {
                    return Err(Error::NonNumeric {
                        row: row + 1,
                        column: headers[i].to_string(),
                        value: cell.to_string(),
                    });
                }
                features.push(value);
            }
            let label = u8::from(record.get(label_idx).is_some_and(|c| c == positive_label));
            samples.push(Sample { features, label });
        }
        DataSet::new(samples, feature_names)
    }

    /// Draws a class-balanced subset of `target_total` samples
    /// (`target_total / 2` per class) without replacement, preserving the
    /// original row order.
    pub fn balance_downsample(&self, target_total: usize, seed: u64) -> Result<DataSet> {
        if target_total == 0 || target_total % 2 != 0 {
            return Err(Error::invalid(format!(
                "target_total must be a positive even number, got {target_total}"
            )));
        }
        let need = target_total / 2;
        let (n0, n1) = self.class_counts();
        for (label, available) in [(0u8, n0), (1u8, n1)] {
            if available < need {
                return Err(Error::ClassShortfall { label, available, needed: need });
            }
        }

        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut keep = Vec::with_capacity(target_total);
        for class in [0u8, 1u8] {
            let idx: Vec<usize> = (0..self.samples.len())
                .filter(|&i| self.samples[i].label == class)
                .collect();
            for k in index_sample(&mut rng, idx.len(), need) {
                keep.push(idx[k]);
            }
        }
        keep.sort_unstable();
        let samples = keep.iter().map(|&i| self.samples[i].clone()).collect();
        DataSet::new(samples, self.feature_names.clone())
    }

    /// Stratified split: per class, `round(fraction * count)` samples go to
    /// the training set. Errors when either side of either class would be
    /// empty. Row order is preserved within each part.
    pub fn train_test_split(&self, train_fraction: f64, seed: u64) -> Result<(DataSet, DataSet)> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::invalid(format!(
                "train_fraction must be in (0, 1), got {train_fraction}"
            )));
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut train_idx = Vec::new();
        let mut test_idx = Vec::new();
        for class in [0u8, 1u8] {
            let idx: Vec<usize> = (0..self.samples.len())
                .filter(|&i| self.samples[i].label == class)
                .collect();
            if idx.is_empty() {
                return Err(Error::SingleClass);
            }
            let k = (train_fraction * idx.len() as f64).round() as usize;
            if k == 0 || k == idx.len() {
                return Err(Error::EmptyPartition { fraction: train_fraction, label: class });
            }
            let chosen = index_sample(&mut rng, idx.len(), k);
            let mut in_train = vec![false; idx.len()];
            for c in chosen {
                in_train[c] = true;
            }
            for (pos, &i) in idx.iter().enumerate() {
                if in_train[pos] {
                    train_idx.push(i);
                } else {
                    test_idx.push(i);
                }
            }
        }
        train_idx.sort_unstable();
        test_idx.sort_unstable();
        let take = |idx: &[usize]| -> Result<DataSet> {
            DataSet::new(
                idx.iter().map(|&i| self.samples[i].clone()).collect(),
                self.feature_names.clone(),
            )
        };
        Ok((take(&train_idx)?, take(&test_idx)?))
    }
}

/// Generates two Gaussian blobs of `n_per_class` samples each, with unit
/// variance per axis and class means at `-separation/2` and `+separation/2`
/// on every axis. Feature names are `f0..f{k-1}`; class 0 rows come first.
pub fn synth_generate(
    n_per_class: usize,
    n_features: usize,
    class_separation: f64,
    seed: u64,
) -> Result<DataSet> {
    if n_per_class == 0 || n_features == 0 {
        return Err(Error::invalid("n_per_class and n_features must be positive"));
    }
    if !class_separation.is_finite() || class_separation < 0.0 {
        return Err(Error::invalid(format!(
            "class_separation must be finite and >= 0, got {class_separation}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("valid std");
    let mut samples = Vec::with_capacity(2 * n_per_class);
    for class in [0u8, 1u8] {
        let mean = if class == 0 { -class_separation / 2.0 } else { class_separation / 2.0 };
        for _ in 0..n_per_class {
            let features = (0..n_features).map(|_| mean + normal.sample(&mut rng)).collect();
            samples.push(Sample { features, label: class });
        }
    }
    DataSet::new(samples, (0..n_features).map(|i| format!("f{i}")).collect())
}
