//! Sweep drivers for the five subcommands, plus the CSV serialisers.
//!
//! All sweeps share one row schema (see [`SWEEP_HEADER`]) so downstream
//! plotting code never has to care which sweep produced a file. Numeric
//! cells use Rust's shortest round-trip float formatting; the `auc` cell is
//! empty when the kernel classifier is disabled.

use std::fmt::Write as _;

use crate::config::{Command, Config};
use crate::pipeline::{run_measure_rows, run_point, MeasureRow, PointSummary};
use crate::CliResult;

/// Column header shared by `features.csv`, `scaling.csv`, `noise.csv`, and
/// `qsvc.csv`.
pub const SWEEP_HEADER: &str = "sweep_value,p_af1_0,p_af2_0,p_r_0,p_af1_1,p_af2_1,p_r_1,\
                                tvd,mean_corr,p_residual,degeneracy_rate,abstain_rate,auc,wall_ms";

/// Column header for `measure.csv`.
pub const MEASURE_HEADER: &str =
    "sample_index,corr_estimate,corr_exact,parity_estimate,parity_exact,max_abs_deviation";

/// Mean correlation must exceed `-1 + A0_DEPARTURE_TOL` for a scale to count
/// as having left the perfectly antiferromagnetic regime.
pub const A0_DEPARTURE_TOL: f64 = 0.01;

/// Result of running one subcommand.
pub enum CommandOutput {
    Sweep {
        records: Vec<PointSummary>,
        /// Smallest swept scale whose mean correlation departs from -1
        /// (scaling sweeps only).
        a0: Option<f64>,
        /// Output file name for the CSV, e.g. `features.csv`.
        csv_name: &'static str,
    },
    Measure {
        rows: Vec<MeasureRow>,
        max_abs_deviation: f64,
    },
}

/// Sweep over feature counts at the configured fixed scale.
pub fn run_features(cfg: &Config) -> CliResult<Vec<PointSummary>> {
    cfg.features
        .iter()
        .map(|&n| run_point(cfg, n, cfg.a, None, n as f64))
        .collect()
}

/// Sweep over feature scales at the configured fixed feature count.
pub fn run_scaling(cfg: &Config) -> CliResult<Vec<PointSummary>> {
    cfg.a_list
        .iter()
        .map(|&a| run_point(cfg, cfg.n_features, a, None, a))
        .collect()
}

/// Smallest swept value whose mean correlation departs from perfect
/// antiferromagnetic order, i.e. exceeds `-1 + A0_DEPARTURE_TOL`.
pub fn departure_scale(records: &[PointSummary]) -> Option<f64> {
    records
        .iter()
        .find(|r| r.mean_corr > -1.0 + A0_DEPARTURE_TOL)
        .map(|r| r.sweep_value)
}

/// Sweep over noise widths, averaging every statistic over the configured
/// number of realizations.
///
/// `sigma = 0` is computed from a single realization: added noise is the
/// identity there, so all realizations coincide and a one-shot evaluation
/// keeps the row bit-identical to the matching feature-sweep row instead of
/// merely close after averaging.
pub fn run_noise(cfg: &Config) -> CliResult<Vec<PointSummary>> {
    let n = cfg.n_features;
    cfg.sigma_list
        .iter()
        .map(|&sigma| {
            let reps = if sigma == 0.0 { 1 } else { cfg.noise_realizations };
            let mut acc: Option<PointSummary> = None;
            for r in 0..reps {
                let point = run_point(cfg, n, cfg.a, Some((sigma, r)), sigma)?;
                acc = Some(match acc {
                    None => point,
                    Some(mut sum) => {
                        for (s, p) in sum.probs.iter_mut().zip(point.probs) {
                            *s += p;
                        }
                        sum.tvd += point.tvd;
                        sum.mean_corr += point.mean_corr;
                        sum.p_residual += point.p_residual;
                        sum.degeneracy_rate += point.degeneracy_rate;
                        sum.abstain_rate += point.abstain_rate;
                        sum.auc = match (sum.auc, point.auc) {
                            (Some(a), Some(b)) => Some(a + b),
                            _ => None,
                        };
                        sum.wall_ms += point.wall_ms;
                        // Pattern tallies accumulate over realizations.
                        for (name, count) in point.pattern_counts {
                            match sum.pattern_counts.iter_mut().find(|(n, _)| *n == name) {
                                Some((_, c)) => *c += count,
                                None => sum.pattern_counts.push((name, count)),
                            }
                        }
                        sum
                    }
                });
            }
            let mut row = acc.expect("reps >= 1");
            if reps > 1 {
                let k = reps as f64;
                for p in row.probs.iter_mut() {
                    *p /= k;
                }
                row.tvd /= k;
                row.mean_corr /= k;
                row.p_residual /= k;
                row.degeneracy_rate /= k;
                row.abstain_rate /= k;
                row.auc = row.auc.map(|a| a / k);
                row.pattern_counts.sort();
            }
            Ok(row)
        })
        .collect()
}

/// Run one subcommand end to end (no file output; the caller writes).
pub fn execute(cfg: &Config, cmd: Command) -> CliResult<CommandOutput> {
    match cmd {
        Command::Features => Ok(CommandOutput::Sweep {
            records: run_features(cfg)?,
            a0: None,
            csv_name: "features.csv",
        }),
        Command::Qsvc => {
            // The qsvc subcommand is the feature sweep with the kernel
            // classifier forced on, written to its own file.
            let mut forced = cfg.clone();
            forced.qsvc = true;
            Ok(CommandOutput::Sweep {
                records: run_features(&forced)?,
                a0: None,
                csv_name: "qsvc.csv",
            })
        }
        Command::Scaling => {
            let records = run_scaling(cfg)?;
            let a0 = departure_scale(&records);
            Ok(CommandOutput::Sweep { records, a0, csv_name: "scaling.csv" })
        }
        Command::Noise => Ok(CommandOutput::Sweep {
            records: run_noise(cfg)?,
            a0: None,
            csv_name: "noise.csv",
        }),
        Command::Measure => {
            let rows = run_measure_rows(cfg)?;
            let max_abs_deviation = rows.iter().map(|r| r.max_abs_deviation).fold(0.0, f64::max);
            Ok(CommandOutput::Measure { rows, max_abs_deviation })
        }
    }
}

/// Serialise sweep records in the shared schema.
pub fn sweep_csv(records: &[PointSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SWEEP_HEADER}");
    for r in records {
        let auc = r.auc.map(|a| a.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.sweep_value,
            r.probs[0],
            r.probs[1],
            r.probs[2],
            r.probs[3],
            r.probs[4],
            r.probs[5],
            r.tvd,
            r.mean_corr,
            r.p_residual,
            r.degeneracy_rate,
            r.abstain_rate,
            auc,
            r.wall_ms,
        );
    }
    out
}

/// Serialise measurement-check rows.
pub fn measure_csv(rows: &[MeasureRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MEASURE_HEADER}");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.sample_index,
            r.corr_estimate,
            r.corr_exact,
            r.parity_estimate,
            r.parity_exact,
            r.max_abs_deviation,
        );
    }
    out
}
