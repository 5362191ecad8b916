//! Variability of learned network structures.
//!
//! Skeleton samples (typically from bootstrapped structure learning) are
//! treated as draws of a multivariate Bernoulli vector with one component
//! per candidate edge. From the estimated moments this crate computes
//! descriptive variability statistics and tests the maximum-entropy null
//! `Sigma = (1/4) I` both asymptotically and by Monte Carlo.

pub mod bits;
pub mod error;
pub mod graph;
pub mod learn;
pub mod linalg;
pub mod moments;
pub mod montecarlo;
pub mod numfmt;
pub mod parametric;
pub mod rng;
pub mod special;
pub mod variability;

pub use error::{Error, Result};
pub use graph::{skeleton_of, Dag, EdgeIndexer, Skeleton, SkeletonArchive};
pub use linalg::Matrix;
pub use moments::{
    classify_entropy, covariance_from_moments, enumerate_uniform_moments, estimate_moments, CovMatrix,
    EdgeMoments, EntropyClass,
};
pub use montecarlo::{mc_pvalue, Divisor, McConfig, McResult, McStatistic, NullDistribution, TieRule};
pub use parametric::{TestKind, TestResult};
pub use variability::{variability, VariabilityReport};
