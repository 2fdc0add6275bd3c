//! Feature preprocessing: PCA, min-max scaling to a symmetric interval, and
//! additive Gaussian noise.
//!
//! Models are fit on training data only and then applied to any dataset of
//! matching width, so test data never leaks into the fitted parameters.

use crate::dataio::{DataSet, Sample};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

/// Relative eigenvalue threshold below which a covariance direction counts
/// as numerically rank-deficient.
const RANK_REL_TOL: f64 = 1e-9;

/// Principal component analysis fitted on a training set.
#[derive(Debug, Clone)]
pub struct PcaModel {
    means: Vec<f64>,
    /// Orthonormal rows, one per retained component, highest variance first.
    components: Vec<Vec<f64>>,
    /// Covariance eigenvalues of the retained components.
    eigenvalues: Vec<f64>,
}

impl PcaModel {
    /// Fits `n_components` principal axes of the sample covariance.
    ///
    /// Components are ordered by decreasing eigenvalue. Each one's sign is
    /// fixed so that its largest-magnitude loading is positive, making the
    /// projection reproducible regardless of the eigensolver's sign choices.
    pub fn fit(train: &DataSet, n_components: usize) -> Result<Self> {
        let n = train.n_samples();
        let p = train.n_features();
        if n < 2 {
            return Err(Error::invalid("PCA needs at least 2 samples"));
        }
        if n_components == 0 || n_components > p.min(n) {
            return Err(Error::invalid(format!(
                "n_components must be in 1..={}, got {n_components}",
                p.min(n)
            )));
        }

        let mut means = vec![0.0; p];
        for s in train.samples() {
            for (m, &v) in means.iter_mut().zip(&s.features) {
                *m += v;
            }
        }
        for m in &mut means {
            *m /= n as f64;
        }

        let centered = DMatrix::from_fn(n, p, |r, c| train.samples()[r].features[c] - means[c]);
        let cov = (centered.transpose() * &centered) / (n as f64 - 1.0);

        let eig = cov.symmetric_eigen();
        let mut order: Vec<usize> = (0..p).collect();
        // decreasing eigenvalue; index as tiebreak for determinism
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .partial_cmp(&eig.eigenvalues[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });

        let lambda_max = eig.eigenvalues[order[0]].max(0.0);
        let achievable = order
            .iter()
            .filter(|&&k| eig.eigenvalues[k] > lambda_max * RANK_REL_TOL && eig.eigenvalues[k] > 0.0)
            .count();
        if achievable < n_components {
            return Err(Error::RankDeficient { requested: n_components, achievable });
        }

        let mut components = Vec::with_capacity(n_components);
        let mut eigenvalues = Vec::with_capacity(n_components);
        for &k in order.iter().take(n_components) {
            let col = eig.eigenvectors.column(k);
            let mut v: Vec<f64> = col.iter().copied().collect();
            let lead = (0..p).max_by(|&a, &b| {
                v[a].abs().partial_cmp(&v[b].abs()).unwrap_or(std::cmp::Ordering::Equal)
            });
            if let Some(i) = lead {
                if v[i] < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            components.push(v);
            eigenvalues.push(eig.eigenvalues[k]);
        }
        Ok(Self { means, components, eigenvalues })
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// Variance captured by each retained component.
    pub fn explained_variance(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Projects a dataset onto the retained components. Output columns are
    /// named `pc0..pc{k-1}`.
    pub fn transform(&self, data: &DataSet) -> Result<DataSet> {
        if data.n_features() != self.means.len() {
            return Err(Error::DimensionMismatch {
                expected: self.means.len(),
                actual: data.n_features(),
            });
        }
        let samples = data
            .samples()
            .iter()
            .map(|s| {
                let features = self
                    .components
                    .iter()
                    .map(|comp| {
                        comp.iter()
                            .zip(&s.features)
                            .zip(&self.means)
                            .map(|((&c, &x), &m)| c * (x - m))
                            .sum()
                    })
                    .collect();
                Sample { features, label: s.label }
            })
            .collect();
        DataSet::new(samples, (0..self.n_components()).map(|i| format!("pc{i}")).collect())
    }

    /// Maps projections back into the original feature space (exact only
    /// when all components were retained).
    pub fn inverse_transform(&self, data: &DataSet) -> Result<DataSet> {
        if data.n_features() != self.n_components() {
            return Err(Error::DimensionMismatch {
                expected: self.n_components(),
                actual: data.n_features(),
            });
        }
        let p = self.means.len();
        let samples = data
            .samples()
            .iter()
            .map(|s| {
                let mut features = self.means.clone();
                for (z, comp) in s.features.iter().zip(&self.components) {
                    for (f, &c) in features.iter_mut().zip(comp).take(p) {
                        *f += z * c;
                    }
                }
                Sample { features, label: s.label }
            })
            .collect();
        DataSet::new(samples, (0..p).map(|i| format!("f{i}")).collect())
    }
}

/// Per-column min-max scaler onto the symmetric interval `(-a, a)`.
#[derive(Debug, Clone)]
pub struct ScalerModel {
    ranges: Vec<(f64, f64)>,
    a: f64,
}

impl ScalerModel {
    /// Records per-column training minima and maxima. Requires `a > 0`.
    pub fn fit(train: &DataSet, a: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::invalid(format!("scale bound a must be positive, got {a}")));
        }
        let ranges = (0..train.n_features())
            .map(|c| {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for s in train.samples() {
                    lo = lo.min(s.features[c]);
                    hi = hi.max(s.features[c]);
                }
                (lo, hi)
            })
            .collect();
        Ok(Self { ranges, a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }

    /// Affinely maps each column so the training minimum lands on `-a` and
    /// the training maximum on `a`. Constant columns map to 0. Values outside
    /// the training range extrapolate beyond `±a`; nothing is clipped.
    pub fn apply(&self, data: &DataSet) -> Result<DataSet> {
        if data.n_features() != self.ranges.len() {
            return Err(Error::DimensionMismatch {
                expected: self.ranges.len(),
                actual: data.n_features(),
            });
        }
        let samples = data
            .samples()
            .iter()
            .map(|s| {
                let features = s
                    .features
                    .iter()
                    .zip(&self.ranges)
                    .map(|(&x, &(lo, hi))| {
                        if hi > lo {
                            self.a * (2.0 * (x - lo) / (hi - lo) - 1.0)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                Sample { features, label: s.label }
            })
            .collect();
        DataSet::new(samples, data.feature_names().to_vec())
    }
}

/// Adds i.i.d. Gaussian noise `N(0, sigma^2)` to every feature value.
///
/// `sigma = 0` returns the input unchanged, bit for bit. Draws follow sample
/// order then feature order from a ChaCha stream seeded with `seed`.
pub fn add_noise(data: &DataSet, sigma: f64, seed: u64) -> Result<DataSet> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::invalid(format!("sigma must be finite and >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(data.clone());
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    let samples = data
        .samples()
        .iter()
        .map(|s| Sample {
            features: s.features.iter().map(|&x| x + normal.sample(&mut rng)).collect(),
            label: s.label,
        })
        .collect();
    DataSet::new(samples, data.feature_names().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::synth_generate;
    use approx::assert_relative_eq;

    fn toy(rows: &[(&[f64], u8)]) -> DataSet {
        let width = rows[0].0.len();
        DataSet::new(
            rows.iter()
                .map(|(f, y)| Sample { features: f.to_vec(), label: *y })
                .collect(),
            (0..width).map(|i| format!("c{i}")).collect(),
        )
        .unwrap()
    }

    /// Plain Jacobi rotation eigensolver, used as an independent oracle for
    /// the PCA fit below. Returns (eigenvalues, eigenvectors as rows),
    /// unsorted.
    fn jacobi_eigen(mut m: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
        let p = m.len();
        let mut v = vec![vec![0.0; p]; p];
        for (i, row) in v.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for _ in 0..200 {
            let mut off = 0.0;
            let (mut pi, mut pj) = (0, 1);
            for i in 0..p {
                for j in i + 1..p {
                    if m[i][j].abs() > off {
                        off = m[i][j].abs();
                        pi = i;
                        pj = j;
                    }
                }
            }
            if off < 1e-14 {
                break;
            }
            let theta = 0.5 * (2.0 * m[pi][pj]).atan2(m[pi][pi] - m[pj][pj]);
            let (c, s) = (theta.cos(), theta.sin());
            for k in 0..p {
                let (a, b) = (m[pi][k], m[pj][k]);
                m[pi][k] = c * a + s * b;
                m[pj][k] = -s * a + c * b;
            }
            for k in 0..p {
                let (a, b) = (m[k][pi], m[k][pj]);
                m[k][pi] = c * a + s * b;
                m[k][pj] = -s * a + c * b;
            }
            for k in 0..p {
                let (a, b) = (v[pi][k], v[pj][k]);
                v[pi][k] = c * a + s * b;
                v[pj][k] = -s * a + c * b;
            }
        }
        ((0..p).map(|i| m[i][i]).collect(), v)
    }

    #[test]
    fn pca_matches_jacobi_oracle() {
        let ds = synth_generate(50, 4, 1.5, 17).unwrap();
        let model = PcaModel::fit(&ds, 4).unwrap();

        // covariance matrix by hand
        let n = ds.n_samples();
        let p = ds.n_features();
        let mut means = vec![0.0; p];
        for s in ds.samples() {
            for (m, &x) in means.iter_mut().zip(&s.features) {
                *m += x / n as f64;
            }
        }
        let mut cov = vec![vec![0.0; p]; p];
        for s in ds.samples() {
            for i in 0..p {
                for j in 0..p {
                    cov[i][j] +=
                        (s.features[i] - means[i]) * (s.features[j] - means[j]) / (n as f64 - 1.0);
                }
            }
        }
        let (evals, evecs) = jacobi_eigen(cov);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| evals[b].partial_cmp(&evals[a]).unwrap());

        for (rank, &k) in order.iter().enumerate() {
            assert_relative_eq!(
                model.explained_variance()[rank],
                evals[k],
                max_relative = 1e-9
            );
            // same axis up to sign
            let dot: f64 = model.components()[rank]
                .iter()
                .zip(&evecs[k])
                .map(|(a, b)| a * b)
                .sum();
            assert_relative_eq!(dot.abs(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn pca_projection_properties() {
        let ds = synth_generate(80, 5, 2.0, 23).unwrap();
        let model = PcaModel::fit(&ds, 3).unwrap();
        let proj = model.transform(&ds).unwrap();
        assert_eq!(proj.n_features(), 3);
        assert_eq!(proj.feature_names()[0], "pc0");
        assert_eq!(proj.labels(), ds.labels());

        // component rows are orthonormal
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = model.components()[i]
                    .iter()
                    .zip(&model.components()[j])
                    .map(|(a, b)| a * b)
                    .sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(dot, expect, epsilon = 1e-10);
            }
        }

        // projected variance decreases and matches the eigenvalues
        let var = |col: usize| -> f64 {
            let mean: f64 =
                proj.samples().iter().map(|s| s.features[col]).sum::<f64>() / proj.n_samples() as f64;
            proj.samples()
                .iter()
                .map(|s| (s.features[col] - mean).powi(2))
                .sum::<f64>()
                / (proj.n_samples() as f64 - 1.0)
        };
        for c in 0..3 {
            assert_relative_eq!(var(c), model.explained_variance()[c], max_relative = 1e-9);
        }
        assert!(model.explained_variance()[0] >= model.explained_variance()[1]);

        // sign convention: leading loading positive
        for comp in model.components() {
            let lead = comp.iter().cloned().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
            assert!(lead > 0.0);
        }
    }

    #[test]
    fn pca_inverse_then_forward_is_identity_on_projections() {
        let ds = synth_generate(30, 4, 1.0, 5).unwrap();
        let model = PcaModel::fit(&ds, 2).unwrap();
        let proj = model.transform(&ds).unwrap();
        let back = model.inverse_transform(&proj).unwrap();
        let again = model.transform(&back).unwrap();
        for (a, b) in proj.samples().iter().zip(again.samples()) {
            for (x, y) in a.features.iter().zip(&b.features) {
                assert_relative_eq!(x, y, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn pca_rank_deficiency_detected() {
        // two perfectly correlated columns -> covariance rank 1
        let ds = toy(&[
            (&[1.0, 2.0], 0),
            (&[2.0, 4.0], 0),
            (&[3.0, 6.0], 1),
            (&[4.0, 8.0], 1),
        ]);
        assert!(PcaModel::fit(&ds, 1).is_ok());
        assert!(matches!(
            PcaModel::fit(&ds, 2),
            Err(Error::RankDeficient { requested: 2, achievable: 1 })
        ));
    }

    #[test]
    fn pca_argument_checks() {
        let ds = synth_generate(10, 3, 1.0, 0).unwrap();
        assert!(PcaModel::fit(&ds, 0).is_err());
        assert!(PcaModel::fit(&ds, 4).is_err());
        let one = toy(&[(&[1.0, 2.0], 0)]);
        assert!(PcaModel::fit(&one, 1).is_err());

        let model = PcaModel::fit(&ds, 2).unwrap();
        let wrong_width = toy(&[(&[1.0, 2.0], 0), (&[0.0, 1.0], 1)]);
        assert!(model.transform(&wrong_width).is_err());
    }

    #[test]
    fn scaler_maps_training_extremes_exactly() {
        let train = toy(&[(&[0.0, -2.0], 0), (&[10.0, 2.0], 1), (&[5.0, 0.0], 0)]);
        let scaler = ScalerModel::fit(&train, 1.5).unwrap();
        let out = scaler.apply(&train).unwrap();
        assert_eq!(out.samples()[0].features[0], -1.5);
        assert_eq!(out.samples()[1].features[0], 1.5);
        assert_eq!(out.samples()[2].features[0], 0.0);
        assert_eq!(out.samples()[1].features[1], 1.5);
    }

    #[test]
    fn scaler_handles_constant_columns_and_extrapolation() {
        let train = toy(&[(&[3.0, 1.0], 0), (&[3.0, 5.0], 1)]);
        let scaler = ScalerModel::fit(&train, 1.0).unwrap();
        let test = toy(&[(&[3.0, 9.0], 0), (&[7.0, 3.0], 1)]);
        let out = scaler.apply(&test).unwrap();
        assert_eq!(out.samples()[0].features[0], 0.0); // constant column
        assert_eq!(out.samples()[0].features[1], 3.0); // beyond max: no clipping
        assert_eq!(out.samples()[1].features[1], 0.0); // midpoint
        assert!(ScalerModel::fit(&train, 0.0).is_err());
        assert!(ScalerModel::fit(&train, -1.0).is_err());
    }

    #[test]
    fn noise_zero_sigma_is_identity() {
        let ds = synth_generate(20, 3, 1.0, 2).unwrap();
        let out = add_noise(&ds, 0.0, 99).unwrap();
        assert_eq!(out, ds);
    }

    #[test]
    fn noise_is_seeded_and_scales_with_sigma() {
        let ds = synth_generate(500, 2, 0.0, 3).unwrap();
        let a = add_noise(&ds, 0.5, 7).unwrap();
        let b = add_noise(&ds, 0.5, 7).unwrap();
        assert_eq!(a, b);
        let c = add_noise(&ds, 0.5, 8).unwrap();
        assert_ne!(a, c);

        let dev: f64 = a
            .samples()
            .iter()
            .zip(ds.samples())
            .map(|(x, y)| (x.features[0] - y.features[0]).powi(2))
            .sum::<f64>()
            / ds.n_samples() as f64;
        assert!((dev.sqrt() - 0.5).abs() < 0.05);

        assert!(add_noise(&ds, -0.1, 0).is_err());
        assert!(add_noise(&ds, f64::NAN, 0).is_err());
    }
}
