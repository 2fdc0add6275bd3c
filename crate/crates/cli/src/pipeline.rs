//! The per-sweep-point pipeline: data preparation, ground-state solving,
//! order statistics, and the optional kernel classifier.
//!
//! Every random stage draws its seed from the single configured `seed`
//! through [`spinmap::seeds::derive_seed`] with a fixed, stage-specific
//! salt. Stages are therefore decoupled — changing the number of noise
//! realizations never shifts the train/test split — and any point of any
//! sweep can be reproduced in isolation.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use spinmap::dataio::{synth_generate, DataSet};
use spinmap::encoding::{GroundStateResult, IsingCoefficients, DEFAULT_TIE_TOL};
use spinmap::ensemble::{tvd, ClassDistribution, Prediction};
use spinmap::lattice::{LatticeGraph, LatticeKind};
use spinmap::ml::{roc_auc, svm_train, SvmParams};
use spinmap::order::{
    chain_correlation, classify_order, detect_2d_pattern, lattice_correlation, OrderKind,
    OrderLabel,
};
use spinmap::preprocess::{add_noise, PcaModel, ScalerModel};
use spinmap::quantum::{kernel_cross, kernel_matrix, measure_ground_state_order};
use spinmap::seeds::derive_seed;

use crate::config::{Config, DataSource};
use crate::{CliError, CliResult};

/// Fixed salts for the independent random stages of a run.
pub mod salts {
    /// Synthetic data generation.
    pub const SYNTH: u64 = 1;
    /// Class-balanced downsampling.
    pub const BALANCE: u64 = 2;
    /// Stratified train/test split.
    pub const SPLIT: u64 = 3;
    /// SMO working-pair selection.
    pub const SVM: u64 = 4;
    /// Noise realization `r` uses `NOISE_BASE + r`.
    pub const NOISE_BASE: u64 = 1_000;
    /// Measurement of sample `i` uses `MEASURE_BASE + i`.
    pub const MEASURE_BASE: u64 = 2_000;
}

/// A prepared train/test pair living in the final feature space, plus the
/// lattice the features are wired onto.
pub struct Prepared {
    pub train: DataSet,
    pub test: DataSet,
    pub lattice: LatticeGraph,
}

/// Everything one sweep point contributes to the output CSV, plus grid
/// pattern tallies that go to stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub sweep_value: f64,
    /// Joint (order, class) probabilities in the fixed cell order
    /// `(AF1,0) (AF2,0) (R,0) (AF1,1) (AF2,1) (R,1)`, from the train set.
    pub probs: [f64; 6],
    /// Total variation distance between the two class-conditional order
    /// distributions, from the train set.
    pub tvd: f64,
    /// Mean nearest-neighbour correlation over all samples (train + test).
    pub mean_corr: f64,
    /// Fraction of all samples classified `Residual`.
    pub p_residual: f64,
    /// Fraction of all samples with a degenerate ground state.
    pub degeneracy_rate: f64,
    /// Fraction of test samples on which the distribution classifier
    /// abstains (tied counts).
    pub abstain_rate: f64,
    /// Test-set ROC-AUC of the fidelity-kernel SVM, when enabled.
    pub auc: Option<f64>,
    /// Wall-clock time for this point, in milliseconds.
    pub wall_ms: f64,
    /// For triangle grids: how often each reference pattern matched, plus
    /// `unmatched` and `degenerate` buckets. Empty for other lattices.
    pub pattern_counts: Vec<(String, usize)>,
}

/// One row of the measurement-check output.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRow {
    pub sample_index: usize,
    pub corr_estimate: f64,
    pub corr_exact: f64,
    pub parity_estimate: f64,
    pub parity_exact: f64,
    pub max_abs_deviation: f64,
}

fn build_lattice(kind: LatticeKind, n: usize) -> CliResult<LatticeGraph> {
    let lat = match kind {
        LatticeKind::Chain => LatticeGraph::chain(n),
        LatticeKind::SquareLadder => LatticeGraph::square_ladder(n),
        LatticeKind::TriangleLadder => LatticeGraph::triangle_ladder(n),
        LatticeKind::TriangleGrid { rows, cols } => LatticeGraph::triangle_grid(rows, cols),
    }?;
    Ok(lat)
}

/// Load the raw dataset named by the config. Content problems in a CSV
/// (missing label column, non-numeric cells) are reported as config errors:
/// they describe the input, not the computation.
pub fn base_dataset(cfg: &Config) -> CliResult<DataSet> {
    match cfg.data {
        DataSource::Synthetic => synth_generate(
            cfg.synth_per_class,
            cfg.synth_features,
            cfg.synth_separation,
            derive_seed(cfg.seed, salts::SYNTH),
        )
        .map_err(Into::into),
        DataSource::Csv => {
            DataSet::from_csv(Path::new(&cfg.csv_path), &cfg.label_column, &cfg.positive_label)
                .map_err(|e| CliError::Config(format!("loading {}: {e}", cfg.csv_path)))
        }
    }
}

/// Run the preparation chain for one sweep point: load, balance, split,
/// project to `n` features, scale to `(-a, a)`, and optionally add Gaussian
/// noise (after scaling, to train and test alike).
///
/// With `noise = Some((0.0, r))` the result is bit-identical to `noise =
/// None`, which is what ties the zero-noise row of a noise sweep to the
/// matching feature-sweep row.
pub fn prepare(cfg: &Config, n: usize, a: f64, noise: Option<(f64, u64)>) -> CliResult<Prepared> {
    let raw = base_dataset(cfg)?;
    let balanced = raw.balance_downsample(cfg.balance_total, derive_seed(cfg.seed, salts::BALANCE))?;
    let (train, test) =
        balanced.train_test_split(cfg.train_fraction, derive_seed(cfg.seed, salts::SPLIT))?;

    let pca = PcaModel::fit(&train, n)?;
    let train = pca.transform(&train)?;
    let test = pca.transform(&test)?;

    let scaler = ScalerModel::fit(&train, a)?;
    let mut train = scaler.apply(&train)?;
    let mut test = scaler.apply(&test)?;

    if let Some((sigma, realization)) = noise {
        let stage = derive_seed(cfg.seed, salts::NOISE_BASE + realization);
        train = add_noise(&train, sigma, derive_seed(stage, 0))?;
        test = add_noise(&test, sigma, derive_seed(stage, 1))?;
    }

    let lattice = build_lattice(cfg.lattice_kind(n)?, n)?;
    Ok(Prepared { train, test, lattice })
}

/// Solve the ground state of every sample and classify its order.
fn solve_orders(
    data: &DataSet,
    lattice: &LatticeGraph,
) -> CliResult<Vec<(GroundStateResult, OrderLabel)>> {
    data.samples()
        .par_iter()
        .map(|s| {
            let coeffs = IsingCoefficients::from_features(&s.features, lattice)?;
            let gs = coeffs.ground_state_gray(DEFAULT_TIE_TOL)?;
            let order = classify_order(&gs);
            Ok((gs, order))
        })
        .collect::<Result<Vec<_>, spinmap::Error>>()
        .map_err(Into::into)
}

fn qsvc_auc(cfg: &Config, prep: &Prepared) -> CliResult<f64> {
    let kernel = kernel_matrix(&prep.train, &prep.lattice)?;
    let targets: Vec<f64> = prep
        .train
        .labels()
        .iter()
        .map(|&l| if l == 1 { 1.0 } else { -1.0 })
        .collect();
    let params = SvmParams {
        c: cfg.svm_c,
        tol: cfg.svm_tol,
        max_passes: cfg.svm_max_passes,
        seed: derive_seed(cfg.seed, salts::SVM),
    };
    let model = svm_train(&kernel, &targets, &params)?;
    let rows = kernel_cross(&prep.test, &prep.train, &prep.lattice)?;
    let scores = rows
        .iter()
        .map(|r| model.decision(r))
        .collect::<Result<Vec<_>, _>>()?;
    roc_auc(&scores, &prep.test.labels()).map_err(Into::into)
}

fn grid_pattern_counts(
    solved: &[&(GroundStateResult, OrderLabel)],
    lattice: &LatticeGraph,
) -> CliResult<Vec<(String, usize)>> {
    let templates = lattice.reference_patterns();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (gs, order) in solved {
        let bucket = if order.degenerate {
            "degenerate".to_string()
        } else {
            match detect_2d_pattern(&gs.spin_string, lattice, &templates)? {
                Some(name) => name.to_string(),
                None => "unmatched".to_string(),
            }
        };
        *counts.entry(bucket).or_insert(0) += 1;
    }
    Ok(counts.into_iter().collect())
}

/// Compute one full sweep point.
///
/// `sweep_value` is carried through verbatim into the summary; `n`, `a`, and
/// `noise` select the pipeline variant. The distribution (and its TVD) come
/// from the train split only, correlation/residual/degeneracy statistics
/// cover all samples, and the abstention rate is measured on the test split
/// against the train distribution.
pub fn run_point(
    cfg: &Config,
    n: usize,
    a: f64,
    noise: Option<(f64, u64)>,
    sweep_value: f64,
) -> CliResult<PointSummary> {
    let t0 = Instant::now();
    let prep = prepare(cfg, n, a, noise)?;

    let train_solved = solve_orders(&prep.train, &prep.lattice)?;
    let test_solved = solve_orders(&prep.test, &prep.lattice)?;

    let train_orders: Vec<OrderLabel> = train_solved.iter().map(|(_, o)| o.clone()).collect();
    let dist = ClassDistribution::from_labels(&train_orders, &prep.train.labels())?;
    let probs = dist.probabilities();
    let tvd = tvd(&dist.class_conditional(0)?, &dist.class_conditional(1)?)?;

    let all: Vec<&(GroundStateResult, OrderLabel)> =
        train_solved.iter().chain(test_solved.iter()).collect();
    let n_all = all.len() as f64;
    let mut corr_sum = 0.0;
    let mut residual = 0usize;
    let mut degenerate = 0usize;
    for (gs, order) in &all {
        corr_sum += lattice_correlation(&gs.spin_string, &prep.lattice)?;
        if order.kind == OrderKind::Residual {
            residual += 1;
        }
        if order.degenerate {
            degenerate += 1;
        }
    }

    let abstentions = test_solved
        .iter()
        .filter(|(_, o)| dist.predict_label(o) == Prediction::Abstain)
        .count();

    let pattern_counts = if matches!(prep.lattice.kind(), LatticeKind::TriangleGrid { .. }) {
        grid_pattern_counts(&all, &prep.lattice)?
    } else {
        Vec::new()
    };

    let auc = if cfg.qsvc { Some(qsvc_auc(cfg, &prep)?) } else { None };

    Ok(PointSummary {
        sweep_value,
        probs,
        tvd,
        mean_corr: corr_sum / n_all,
        p_residual: residual as f64 / n_all,
        degeneracy_rate: degenerate as f64 / n_all,
        abstain_rate: abstentions as f64 / test_solved.len() as f64,
        auc,
        wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        pattern_counts,
    })
}

/// Compare shot-based order estimates against exact values on the first
/// `measure_samples` prepared samples (train split first, then test).
pub fn run_measure_rows(cfg: &Config) -> CliResult<Vec<MeasureRow>> {
    let n = cfg.n_features;
    let prep = prepare(cfg, n, cfg.a, None)?;
    let samples: Vec<&spinmap::dataio::Sample> = prep
        .train
        .samples()
        .iter()
        .chain(prep.test.samples().iter())
        .take(cfg.measure_samples)
        .collect();

    samples
        .par_iter()
        .enumerate()
        .map(|(idx, sample)| {
            let coeffs = IsingCoefficients::from_features(&sample.features, &prep.lattice)?;
            let gs = coeffs.ground_state_gray(DEFAULT_TIE_TOL)?;
            let corr_exact = chain_correlation(&gs.spin_string)?;
            let parity_exact = f64::from(gs.spin_string[0]);
            let (corr_estimate, parity_estimate) = measure_ground_state_order(
                &gs.spin_string,
                cfg.shots,
                derive_seed(cfg.seed, salts::MEASURE_BASE + idx as u64),
            )?;
            let max_abs_deviation = (corr_estimate - corr_exact)
                .abs()
                .max((parity_estimate - parity_exact).abs());
            Ok(MeasureRow {
                sample_index: idx,
                corr_estimate,
                corr_exact,
                parity_estimate,
                parity_exact,
                max_abs_deviation,
            })
        })
        .collect::<Result<Vec<_>, spinmap::Error>>()
        .map_err(Into::into)
}
