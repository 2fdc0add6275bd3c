//! Maps labeled tabular data onto finite Ising lattices and studies the
//! emergent order of exact ground states.
//!
//! The pipeline: a feature vector becomes on-site fields and edge couplings
//! on a lattice ([`encoding`]); the diagonal Hamiltonian's exact ground state
//! is found by enumeration; its spin string is classified into
//! antiferromagnetic or residual order ([`order`]); class-conditional order
//! statistics yield a distribution-based classifier and total variation
//! distances ([`ensemble`]). The same coefficients define an entangling
//! circuit whose statevector, fidelity kernel, and measurement estimates live
//! in [`quantum`], with a kernel SVM and ROC-AUC in [`ml`]. Data handling is
//! in [`dataio`] and [`preprocess`].

pub mod dataio;
pub mod encoding;
pub mod ensemble;
pub mod error;
pub mod lattice;
pub mod ml;
pub mod order;
pub mod preprocess;
pub mod quantum;
pub mod seeds;

pub use dataio::{synth_generate, DataSet, Sample};
pub use encoding::{GroundStateResult, IsingCoefficients, DEFAULT_TIE_TOL};
pub use ensemble::{tvd, ClassDistribution, Prediction};
pub use error::{Error, Result};
pub use lattice::{LatticeGraph, LatticeKind, Spin, SpinPattern};
pub use ml::{roc_auc, svm_train, SvmModel, SvmParams};
pub use order::{chain_correlation, classify_order, OrderKind, OrderLabel};
pub use preprocess::{add_noise, PcaModel, ScalerModel};
pub use quantum::{featuremap_state, kernel_matrix, KernelMatrix, StateVector};

/// Library version string.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
