//! Non-parametric local causal structure learning around a target variable.
//!
//! The building blocks, bottom up:
//!
//! - [`codec`]: the rank / nearest-neighbour dependence coefficient `T_n`.
//! - [`foci`]: greedy Markov-boundary selection with `T_n`.
//! - [`indep_test`]: permutation tests of marginal independence.
//! - [`dag_foci`]: parental-set identification from boundary layers.
//! - [`interventional`]: orienting the result with do-intervention data.
//! - [`sem`] and [`eval`]: simulated ground truth and the benchmark harness.

pub mod codec;
pub mod dag_foci;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod foci;
pub mod interventional;
pub mod sem;
pub mod seeds;

pub use codec::{codec_conditional, codec_unconditional, q_n, CodecValue};
pub use dag_foci::{dag_foci, DagFociConfig, ParentalSets, Verdict, UNDETECTABLE_MESSAGE};
pub use dataset::{ColumnSelection, Dataset};
pub use error::{Error, Result};
pub use foci::{foci_select, MarkovBoundaryEstimate};
pub use indep_test::{permutation_independence_test, PermutationTestResult};
pub use interventional::{dag_foci_interventional, InterventionalResult};
pub use sem::{Builtin, DagSpec, GroundTruth, NoiseLaw};
