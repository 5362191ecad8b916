//! Significance curves: for every sample size and replicate, draw a data set
//! from a network, bootstrap skeletons with each learner and test their
//! variability against the maximum-entropy null by Monte Carlo.

use std::fmt::Write as _;

use bnvar::learn::{bootstrap_skeletons, BayesNet, CategoricalDataset, Learner};
use bnvar::montecarlo::statistic;
use bnvar::numfmt::sig17;
use bnvar::rng::derive_seed;
use bnvar::{covariance_from_moments, estimate_moments, McConfig, McStatistic, NullDistribution, Skeleton, TieRule};

use crate::error::CliError;

const NULL_TAG: u64 = 0x6e75_6c6c;
const BOOT_TAG: u64 = 0x626f_6f74;

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub learners: Vec<Learner>,
    /// Bootstrap skeletons per data set.
    pub m: usize,
    /// Monte Carlo null replicates.
    pub mc_replicates: usize,
    pub statistic: McStatistic,
    pub ties: TieRule,
    pub seed: u64,
    /// Replace network samples by independent uniform noise of the same shape.
    pub noise: bool,
}

impl ExperimentConfig {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sizes": self.sizes,
            "replicates": self.replicates,
            "learners": self.learners.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "m": self.m,
            "mc_replicates": self.mc_replicates,
            "statistic": self.statistic.to_string(),
            "ties": self.ties.to_string(),
            "seed": self.seed,
            "noise": self.noise,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub size: usize,
    pub replicate: usize,
    pub learner: String,
    pub p_value: f64,
}

/// Observed value of `kind` for a set of skeletons over all `v(v-1)/2` edges.
pub fn skeleton_statistic(samples: &[Skeleton], kind: McStatistic) -> Result<f64, CliError> {
    let mom = estimate_moments(samples, None)?;
    Ok(statistic(kind, &covariance_from_moments(&mom)))
}

/// Seed for the data set of replicate `rep` at sample size `size`.
pub fn data_seed(seed: u64, size: usize, rep: usize) -> u64 {
    derive_seed(derive_seed(seed, size as u64), rep as u64)
}

pub fn draw_data(bn: &BayesNet, size: usize, seed: u64, noise: bool) -> Result<CategoricalDataset, CliError> {
    if noise {
        let v = bn.node_count();
        let names = bn.dag().labels().to_vec();
        let levels = (0..v).map(|i| bn.levels(i).to_vec()).collect();
        Ok(CategoricalDataset::uniform_noise(names, levels, size, seed)?)
    } else {
        Ok(bn.forward_sample(size, seed)?)
    }
}

/// Runs the sweep. Every learner sees the same data set for a given
/// (size, replicate), and all p-values share one null sample.
pub fn run_experiment(bn: &BayesNet, cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>, CliError> {
    if cfg.learners.is_empty() {
        return Err(CliError::Usage("at least one learner is required".into()));
    }
    if cfg.sizes.contains(&0) {
        return Err(CliError::Usage("sample sizes must be positive".into()));
    }
    if cfg.replicates == 0 || cfg.sizes.is_empty() {
        return Ok(Vec::new());
    }
    let v = bn.node_count();
    let k = v * (v - 1) / 2;
    let mc = McConfig::new(cfg.m, k, cfg.mc_replicates, derive_seed(cfg.seed, NULL_TAG), cfg.statistic)?
        .with_ties(cfg.ties);
    let null = NullDistribution::simulate(&mc)?;
    let mut rows = Vec::new();
    for &size in &cfg.sizes {
        for rep in 0..cfg.replicates {
            let seed = data_seed(cfg.seed, size, rep);
            let data = draw_data(bn, size, seed, cfg.noise)?;
            for learner in &cfg.learners {
                let skeletons = bootstrap_skeletons(&data, learner, cfg.m, derive_seed(seed, BOOT_TAG))?;
                let observed = skeleton_statistic(&skeletons, cfg.statistic)?;
                let p = null.p_value(observed, cfg.ties).p_hat;
                rows.push(ExperimentRow { size, replicate: rep, learner: learner.to_string(), p_value: p });
            }
        }
    }
    Ok(rows)
}

pub const EXPERIMENT_HEADER: &str = "size,replicate,learner,p_value";

pub fn experiment_csv(rows: &[ExperimentRow]) -> String {
    let mut s = format!("{EXPERIMENT_HEADER}\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.size, r.replicate, r.learner, sig17(r.p_value));
    }
    s
}
