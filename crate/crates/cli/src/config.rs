//! Flat `key = value` run configuration.
//!
//! A config file is a sequence of lines, each either blank, a `#` comment, or
//! `key = value`. Every key has a default, unknown keys are rejected, and the
//! same setter handles file lines and command-line overrides so precedence is
//! purely a matter of application order (file, then `--set`, then named
//! flags). [`Config::manifest`] serialises the fully resolved state back into
//! this format, which is what makes re-running from a manifest reproduce a
//! sweep.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use spinmap::lattice::LatticeKind;

use crate::{CliError, CliResult};

/// Which subcommand a config is being validated for.
///
/// Most keys are shared; validation differs mainly in which feature counts
/// must be compatible with the lattice and whether the statevector bound
/// applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Features,
    Scaling,
    Noise,
    Measure,
    Qsvc,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Features => "features",
            Command::Scaling => "scaling",
            Command::Noise => "noise",
            Command::Measure => "measure",
            Command::Qsvc => "qsvc",
        }
    }
}

/// Where the raw tabular data comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    /// Two synthetic Gaussian blobs, one per class.
    Synthetic,
    /// A CSV file with a designated label column.
    Csv,
}

/// Fully resolved run configuration. Field names match config keys.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub data: DataSource,
    pub csv_path: String,
    pub label_column: String,
    pub positive_label: String,
    pub synth_per_class: usize,
    pub synth_features: usize,
    pub synth_separation: f64,
    pub balance_total: usize,
    pub train_fraction: f64,
    pub lattice: String,
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub features: Vec<usize>,
    pub n_features: usize,
    pub a: f64,
    pub a_list: Vec<f64>,
    pub sigma_list: Vec<f64>,
    pub noise_realizations: u64,
    pub shots: u64,
    pub measure_samples: usize,
    pub qsvc: bool,
    pub svm_c: f64,
    pub svm_tol: f64,
    pub svm_max_passes: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub svg: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            data: DataSource::Synthetic,
            csv_path: String::new(),
            label_column: String::new(),
            positive_label: String::new(),
            synth_per_class: 500,
            synth_features: 8,
            synth_separation: 2.0,
            balance_total: 200,
            train_fraction: 0.75,
            lattice: "chain".to_string(),
            grid_rows: 3,
            grid_cols: 4,
            features: vec![2, 3, 4, 5, 6, 7, 8],
            n_features: 4,
            a: 1.0,
            a_list: vec![
                0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5,
                3.75, 4.0,
            ],
            sigma_list: vec![0.0, 0.1, 0.25, 0.5, 1.0, 2.0],
            noise_realizations: 20,
            shots: 10_000,
            measure_samples: 16,
            qsvc: false,
            svm_c: 1.0,
            svm_tol: 1e-3,
            svm_max_passes: 5,
            seed: 42,
            out_dir: PathBuf::from("out"),
            svg: false,
        }
    }
}

fn bad(key: &str, value: &str, want: &str) -> CliError {
    CliError::Config(format!("key `{key}`: cannot parse `{value}` as {want}"))
}

fn parse_usize(key: &str, value: &str) -> CliResult<usize> {
    value.parse().map_err(|_| bad(key, value, "an integer"))
}

fn parse_u64(key: &str, value: &str) -> CliResult<u64> {
    value.parse().map_err(|_| bad(key, value, "an integer"))
}

fn parse_f64(key: &str, value: &str) -> CliResult<f64> {
    let v: f64 = value.parse().map_err(|_| bad(key, value, "a number"))?;
    if !v.is_finite() {
        return Err(bad(key, value, "a finite number"));
    }
    Ok(v)
}

fn parse_bool(key: &str, value: &str) -> CliResult<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad(key, value, "`true` or `false`")),
    }
}

fn parse_usize_list(key: &str, value: &str) -> CliResult<Vec<usize>> {
    value
        .split(',')
        .map(|s| parse_usize(key, s.trim()))
        .collect()
}

fn parse_f64_list(key: &str, value: &str) -> CliResult<Vec<f64>> {
    value.split(',').map(|s| parse_f64(key, s.trim())).collect()
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl Config {
    /// Apply one `key = value` assignment. Shared by file parsing and
    /// command-line overrides.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "data" => {
                self.data = match value {
                    "synthetic" => DataSource::Synthetic,
                    "csv" => DataSource::Csv,
                    _ => return Err(bad(key, value, "`synthetic` or `csv`")),
                }
            }
            "csv_path" => self.csv_path = value.to_string(),
            "label_column" => self.label_column = value.to_string(),
            "positive_label" => self.positive_label = value.to_string(),
            "synth_per_class" => self.synth_per_class = parse_usize(key, value)?,
            "synth_features" => self.synth_features = parse_usize(key, value)?,
            "synth_separation" => self.synth_separation = parse_f64(key, value)?,
            "balance_total" => self.balance_total = parse_usize(key, value)?,
            "train_fraction" => self.train_fraction = parse_f64(key, value)?,
            "lattice" => self.lattice = value.to_string(),
            "grid_rows" => self.grid_rows = parse_usize(key, value)?,
            "grid_cols" => self.grid_cols = parse_usize(key, value)?,
            "features" => self.features = parse_usize_list(key, value)?,
            "n_features" => self.n_features = parse_usize(key, value)?,
            "a" => self.a = parse_f64(key, value)?,
            "a_list" => self.a_list = parse_f64_list(key, value)?,
            "sigma_list" => self.sigma_list = parse_f64_list(key, value)?,
            "noise_realizations" => self.noise_realizations = parse_u64(key, value)?,
            "shots" => self.shots = parse_u64(key, value)?,
            "measure_samples" => self.measure_samples = parse_usize(key, value)?,
            "qsvc" => self.qsvc = parse_bool(key, value)?,
            "svm_c" => self.svm_c = parse_f64(key, value)?,
            "svm_tol" => self.svm_tol = parse_f64(key, value)?,
            "svm_max_passes" => self.svm_max_passes = parse_usize(key, value)?,
            "seed" => self.seed = parse_u64(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "svg" => self.svg = parse_bool(key, value)?,
            _ => return Err(CliError::Config(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Parse config text on top of the defaults.
    pub fn from_str(text: &str) -> CliResult<Config> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    /// Read and parse a config file.
    pub fn from_path(path: &Path) -> CliResult<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        Config::from_str(&text)
    }

    /// The lattice kind for `n` sites, or an error if the combination is
    /// impossible (odd ladder, grid size mismatch, too few sites).
    pub fn lattice_kind(&self, n: usize) -> CliResult<LatticeKind> {
        let err = |msg: String| Err(CliError::Config(msg));
        match self.lattice.as_str() {
            "chain" => {
                if n < 2 {
                    return err(format!("lattice `chain` needs at least 2 sites, got {n}"));
                }
                Ok(LatticeKind::Chain)
            }
            "square_ladder" => {
                if n < 4 || n % 2 != 0 {
                    return err(format!(
                        "lattice `square_ladder` needs an even site count of at least 4, got {n}"
                    ));
                }
                Ok(LatticeKind::SquareLadder)
            }
            "triangle_ladder" => {
                if n < 3 {
                    return err(format!(
                        "lattice `triangle_ladder` needs at least 3 sites, got {n}"
                    ));
                }
                Ok(LatticeKind::TriangleLadder)
            }
            "triangle_grid" => {
                if self.grid_rows < 2 || self.grid_cols < 2 {
                    return err(format!(
                        "lattice `triangle_grid` needs grid_rows and grid_cols of at least 2, \
                         got {}x{}",
                        self.grid_rows, self.grid_cols
                    ));
                }
                if n != self.grid_rows * self.grid_cols {
                    return err(format!(
                        "lattice `triangle_grid` with grid {}x{} requires exactly {} features, \
                         got {n}",
                        self.grid_rows,
                        self.grid_cols,
                        self.grid_rows * self.grid_cols
                    ));
                }
                Ok(LatticeKind::TriangleGrid {
                    rows: self.grid_rows,
                    cols: self.grid_cols,
                })
            }
            other => err(format!(
                "unknown lattice `{other}` (expected chain, square_ladder, triangle_ladder, \
                 or triangle_grid)"
            )),
        }
    }

    /// Feature counts a given command will sweep over.
    pub fn feature_counts(&self, cmd: Command) -> Vec<usize> {
        match cmd {
            Command::Features | Command::Qsvc => self.features.clone(),
            Command::Scaling | Command::Noise | Command::Measure => vec![self.n_features],
        }
    }

    /// Full validation for one subcommand. Everything caught here is a config
    /// error (exit code 1) and no output is produced.
    pub fn validate(&self, cmd: Command) -> CliResult<()> {
        let err = |msg: String| Err(CliError::Config(msg));

        match self.data {
            DataSource::Synthetic => {
                if self.synth_per_class == 0 {
                    return err("synth_per_class must be positive".into());
                }
                if self.synth_features == 0 {
                    return err("synth_features must be positive".into());
                }
                if self.synth_separation < 0.0 {
                    return err(format!(
                        "synth_separation must be non-negative, got {}",
                        self.synth_separation
                    ));
                }
            }
            DataSource::Csv => {
                if self.csv_path.is_empty() {
                    return err("data = csv requires csv_path".into());
                }
                if !Path::new(&self.csv_path).is_file() {
                    return err(format!("csv_path does not exist: {}", self.csv_path));
                }
                if self.label_column.is_empty() {
                    return err("data = csv requires label_column".into());
                }
                if self.positive_label.is_empty() {
                    return err("data = csv requires positive_label".into());
                }
            }
        }

        if self.balance_total < 4 || self.balance_total % 2 != 0 {
            return err(format!(
                "balance_total must be an even number of at least 4, got {}",
                self.balance_total
            ));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return err(format!(
                "train_fraction must lie strictly between 0 and 1, got {}",
                self.train_fraction
            ));
        }
        if self.a <= 0.0 {
            return err(format!("a must be positive, got {}", self.a));
        }
        if self.svm_c <= 0.0 {
            return err(format!("svm_c must be positive, got {}", self.svm_c));
        }
        if self.svm_tol <= 0.0 {
            return err(format!("svm_tol must be positive, got {}", self.svm_tol));
        }
        if self.svm_max_passes == 0 {
            return err("svm_max_passes must be positive".into());
        }
        if self.shots == 0 {
            return err("shots must be positive".into());
        }

        let counts = self.feature_counts(cmd);
        if counts.is_empty() {
            return err("features list must not be empty".into());
        }
        // The feature-map statevector is the binding size limit whenever a
        // kernel or measurement simulation runs; otherwise only the solver
        // bound applies.
        let needs_state = self.qsvc || matches!(cmd, Command::Qsvc | Command::Measure);
        let site_cap = if needs_state {
            spinmap::quantum::MAX_STATE_QUBITS
        } else {
            spinmap::encoding::GRAY_SITE_LIMIT
        };
        for &n in &counts {
            self.lattice_kind(n)?;
            if n > site_cap {
                return err(format!(
                    "{} features exceeds the supported maximum of {site_cap} for this command",
                    n
                ));
            }
            let available = match self.data {
                DataSource::Synthetic => self.synth_features,
                // CSV width is only known after loading; checked at run time.
                DataSource::Csv => usize::MAX,
            };
            if n > available {
                return err(format!(
                    "cannot project onto {n} features: the raw data has only {available}"
                ));
            }
        }

        match cmd {
            Command::Scaling => {
                if self.a_list.is_empty() {
                    return err("a_list must not be empty".into());
                }
                for &a in &self.a_list {
                    if a <= 0.0 {
                        return err(format!("a_list entries must be positive, got {a}"));
                    }
                }
                if self.a_list.windows(2).any(|w| w[1] <= w[0]) {
                    return err("a_list must be strictly increasing".into());
                }
            }
            Command::Noise => {
                if self.sigma_list.is_empty() {
                    return err("sigma_list must not be empty".into());
                }
                for &s in &self.sigma_list {
                    if s < 0.0 {
                        return err(format!("sigma_list entries must be non-negative, got {s}"));
                    }
                }
                if self.sigma_list.windows(2).any(|w| w[1] <= w[0]) {
                    return err("sigma_list must be strictly increasing".into());
                }
                if self.noise_realizations == 0 {
                    return err("noise_realizations must be positive".into());
                }
            }
            Command::Measure => {
                if self.measure_samples == 0 {
                    return err("measure_samples must be positive".into());
                }
                if self.measure_samples > self.balance_total {
                    return err(format!(
                        "measure_samples ({}) exceeds balance_total ({})",
                        self.measure_samples, self.balance_total
                    ));
                }
            }
            Command::Features | Command::Qsvc => {}
        }

        Ok(())
    }

    /// All keys with their serialised values, sorted by key.
    fn entries(&self) -> BTreeMap<&'static str, String> {
        let data = match self.data {
            DataSource::Synthetic => "synthetic",
            DataSource::Csv => "csv",
        };
        let mut m = BTreeMap::new();
        m.insert("data", data.to_string());
        m.insert("csv_path", self.csv_path.clone());
        m.insert("label_column", self.label_column.clone());
        m.insert("positive_label", self.positive_label.clone());
        m.insert("synth_per_class", self.synth_per_class.to_string());
        m.insert("synth_features", self.synth_features.to_string());
        m.insert("synth_separation", self.synth_separation.to_string());
        m.insert("balance_total", self.balance_total.to_string());
        m.insert("train_fraction", self.train_fraction.to_string());
        m.insert("lattice", self.lattice.clone());
        m.insert("grid_rows", self.grid_rows.to_string());
        m.insert("grid_cols", self.grid_cols.to_string());
        m.insert("features", join(&self.features));
        m.insert("n_features", self.n_features.to_string());
        m.insert("a", self.a.to_string());
        m.insert("a_list", join(&self.a_list));
        m.insert("sigma_list", join(&self.sigma_list));
        m.insert("noise_realizations", self.noise_realizations.to_string());
        m.insert("shots", self.shots.to_string());
        m.insert("measure_samples", self.measure_samples.to_string());
        m.insert("qsvc", self.qsvc.to_string());
        m.insert("svm_c", self.svm_c.to_string());
        m.insert("svm_tol", self.svm_tol.to_string());
        m.insert("svm_max_passes", self.svm_max_passes.to_string());
        m.insert("seed", self.seed.to_string());
        m.insert("out_dir", self.out_dir.display().to_string());
        m.insert("svg", self.svg.to_string());
        m
    }

    /// Serialise the resolved configuration as a manifest.
    ///
    /// The output is itself a valid config file: feeding it back through the
    /// same subcommand reproduces the run (all CSV columns except wall-clock
    /// timings are bit-identical).
    pub fn manifest(&self, cmd: Command) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# spinmap manifest (spinmap {}, spinmap-cli {})",
            spinmap::VERSION,
            env!("CARGO_PKG_VERSION")
        );
        let _ = writeln!(out, "# command: {}", cmd.name());
        let _ = writeln!(
            out,
            "# reproduce with: spinmap {} --config <this file>",
            cmd.name()
        );
        for (key, value) in self.entries() {
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_for_every_command() {
        let cfg = Config::default();
        for cmd in [
            Command::Features,
            Command::Scaling,
            Command::Noise,
            Command::Measure,
            Command::Qsvc,
        ] {
            cfg.validate(cmd)
                .unwrap_or_else(|e| panic!("{}: {e}", cmd.name()));
        }
    }

    #[test]
    fn parses_comments_blanks_and_overrides() {
        let text = "\n# a comment\nseed = 7\n  a = 2.5  \nfeatures = 2, 4 ,6\n";
        let cfg = Config::from_str(text).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.a, 2.5);
        assert_eq!(cfg.features, vec![2, 4, 6]);
        // Untouched keys keep their defaults.
        assert_eq!(cfg.balance_total, 200);
    }

    #[test]
    fn rejects_unknown_keys_and_malformed_lines() {
        assert!(matches!(
            Config::from_str("no_such_key = 1"),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            Config::from_str("just words"),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            Config::from_str("seed = not-a-number"),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            Config::from_str("qsvc = yes"),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn lattice_constraints_are_enforced() {
        let mut cfg = Config::default();
        cfg.set("lattice", "square_ladder").unwrap();
        cfg.set("features", "4,6,8").unwrap();
        cfg.validate(Command::Features).unwrap();
        cfg.set("features", "4,5").unwrap();
        assert!(cfg.validate(Command::Features).is_err());

        cfg.set("lattice", "triangle_grid").unwrap();
        cfg.set("synth_features", "12").unwrap();
        cfg.set("features", "12").unwrap();
        cfg.validate(Command::Features).unwrap();
        cfg.set("features", "9").unwrap();
        assert!(cfg.validate(Command::Features).is_err());

        cfg.set("lattice", "hexagonal").unwrap();
        assert!(cfg.validate(Command::Features).is_err());
    }

    #[test]
    fn csv_source_requires_path_and_columns() {
        let mut cfg = Config::default();
        cfg.set("data", "csv").unwrap();
        assert!(cfg.validate(Command::Features).is_err());
        cfg.set("csv_path", "/definitely/not/here.csv").unwrap();
        cfg.set("label_column", "y").unwrap();
        cfg.set("positive_label", "1").unwrap();
        // Path still missing on disk.
        assert!(cfg.validate(Command::Features).is_err());
    }

    #[test]
    fn statevector_bound_applies_only_when_needed() {
        let mut cfg = Config::default();
        cfg.set("synth_features", "24").unwrap();
        cfg.set("features", "22").unwrap();
        // Plain sweep: the solver bound (30 sites) admits 22.
        cfg.validate(Command::Features).unwrap();
        // With kernels on, the statevector bound (20 qubits) rejects it.
        cfg.set("qsvc", "true").unwrap();
        assert!(cfg.validate(Command::Features).is_err());
        assert!(cfg.validate(Command::Qsvc).is_err());
    }

    #[test]
    fn manifest_round_trips_exactly() {
        let mut cfg = Config::default();
        cfg.set("seed", "123").unwrap();
        cfg.set("a_list", "0.5,1,1.5").unwrap();
        cfg.set("lattice", "triangle_ladder").unwrap();
        cfg.set("svg", "true").unwrap();
        let manifest = cfg.manifest(Command::Scaling);
        let reparsed = Config::from_str(&manifest).unwrap();
        assert_eq!(cfg, reparsed);
        // And the manifest of the reparse is byte-identical.
        assert_eq!(manifest, reparsed.manifest(Command::Scaling));
    }

    #[test]
    fn sweep_lists_must_increase() {
        let mut cfg = Config::default();
        cfg.set("a_list", "1.0,1.0,2.0").unwrap();
        assert!(cfg.validate(Command::Scaling).is_err());
        cfg.set("a_list", "2.0,1.0").unwrap();
        assert!(cfg.validate(Command::Scaling).is_err());
        cfg.set("a_list", "1.0,2.0").unwrap();
        cfg.validate(Command::Scaling).unwrap();

        cfg.set("sigma_list", "0.5,0.1").unwrap();
        assert!(cfg.validate(Command::Noise).is_err());
    }
}
