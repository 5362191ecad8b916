//! A small discrete Bayesian-network toolbox for generating skeleton
//! samples: datasets, networks with CPTs, CI tests, BIC, hill-climbing and
//! TABU search, Grow-Shrink, and the nonparametric bootstrap.

pub mod bayesnet;
pub mod bootstrap;
pub mod citest;
pub mod dataset;
pub mod grow_shrink;
pub mod hillclimb;
pub mod score;

pub use bayesnet::{BayesNet, NetworkSpec, NodeSpec};
pub use bootstrap::{bootstrap_skeletons, feature_confidence, Learner};
pub use citest::{ci_test, CiOutcome, CiStatistic, CiTestKind};
pub use dataset::{CategoricalDataset, Schema};
pub use grow_shrink::{grow_shrink, GrowShrinkConfig};
pub use hillclimb::{hill_climb, HillClimbConfig};
pub use score::{bic_score, BicScorer};
