use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use super::citest::{CiStatistic, CiTestKind};
use super::dataset::CategoricalDataset;
use super::grow_shrink::{grow_shrink, GrowShrinkConfig};
use super::hillclimb::{hill_climb, HillClimbConfig};
use crate::error::{Error, Result};
use crate::graph::{skeleton_of, Dag, Skeleton};
use crate::rng::StreamFactory;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Learner {
    HillClimb(HillClimbConfig),
    GrowShrink(GrowShrinkConfig),
}

impl Learner {
    pub fn learn(&self, data: &CategoricalDataset) -> Result<Dag> {
        match self {
            Learner::HillClimb(cfg) => hill_climb(data, *cfg),
            Learner::GrowShrink(cfg) => grow_shrink(data, *cfg),
        }
    }
}

/// Learner specs as used on the command line:
/// `hc`, `tabu[:LEN]`, `gs[:g2|x2[:ALPHA[:CAP]]]`.
impl FromStr for Learner {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::invalid(format!("invalid learner {s:?}"));
        match parts[..] {
            ["hc"] => Ok(Learner::HillClimb(HillClimbConfig::default())),
            ["tabu"] => Ok(Learner::HillClimb(HillClimbConfig::tabu(10))),
            ["tabu", len] => {
                let len: usize = len.parse().map_err(|_| bad())?;
                if len == 0 {
                    return Err(bad());
                }
                Ok(Learner::HillClimb(HillClimbConfig::tabu(len)))
            }
            ["gs", ref rest @ ..] if rest.len() <= 3 => {
                let mut cfg = GrowShrinkConfig::default();
                if let Some(stat) = rest.first() {
                    cfg.test.statistic = stat.parse::<CiStatistic>()?;
                }
                if let Some(alpha) = rest.get(1) {
                    cfg.test.alpha = alpha.parse().map_err(|_| bad())?;
                    if !(cfg.test.alpha > 0.0 && cfg.test.alpha < 1.0) {
                        return Err(bad());
                    }
                }
                if let Some(cap) = rest.get(2) {
                    cfg.max_cond = cap.parse().map_err(|_| bad())?;
                }
                Ok(Learner::GrowShrink(cfg))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Learner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Learner::HillClimb(c) if c.tabu_length == 0 => write!(f, "hc"),
            Learner::HillClimb(c) => write!(f, "tabu:{}", c.tabu_length),
            Learner::GrowShrink(GrowShrinkConfig { test: CiTestKind { statistic, alpha }, max_cond }) => {
                write!(f, "gs:{statistic}:{alpha}:{max_cond}")
            }
        }
    }
}

/// Learns one skeleton from each of `m` nonparametric resamples of `data`.
/// Resample b draws its rows from stream b of `seed`; the output is ordered
/// by b whatever the scheduling.
pub fn bootstrap_skeletons(data: &CategoricalDataset, learner: &Learner, m: usize, seed: u64) -> Result<Vec<Skeleton>> {
    if m == 0 {
        return Err(Error::invalid("need at least one bootstrap replicate"));
    }
    let n = data.n_rows();
    let streams = StreamFactory::new(seed);
    let results: Vec<Result<Skeleton>> = (0..m)
        .into_par_iter()
        .map(|b| {
            let mut rng = streams.stream(b as u64);
            let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            let dag = learner
                .learn(&data.resample(&rows))
                .map_err(|e| Error::Replicate { replicate: b, source: Box::new(e) })?;
            Ok(skeleton_of(&dag))
        })
        .collect();
    results.into_iter().collect()
}

/// Fraction of samples containing every edge of `feature`.
pub fn feature_confidence(samples: &[Skeleton], feature: &[(usize, usize)]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("no skeleton samples"));
    }
    let hits = samples.iter().filter(|s| feature.iter().all(|&(a, b)| s.contains(a, b))).count();
    Ok(hits as f64 / samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::bayesnet::BayesNet;
    use crate::moments::{classify_entropy, estimate_moments, EntropyClass};

    fn skel(v: usize, idx: &[usize]) -> Skeleton {
        Skeleton::from_edge_indices(v, idx).unwrap()
    }

    #[test]
    fn confidence_examples() {
        // edges 0:(0,1) and 1:(0,2), rows (1,1),(1,0),(0,1),(1,1)
        let s = vec![skel(3, &[0, 1]), skel(3, &[0]), skel(3, &[1]), skel(3, &[0, 1])];
        assert_eq!(feature_confidence(&s, &[]).unwrap(), 1.0);
        assert_eq!(feature_confidence(&s, &[(0, 1), (0, 2)]).unwrap(), 0.5);
        let mom = estimate_moments(&s, None).unwrap();
        assert_eq!(feature_confidence(&s, &[(0, 1)]).unwrap(), mom.p(0));
        assert!(feature_confidence(&[], &[]).is_err());
    }

    #[test]
    fn learner_specs() {
        for spec in ["hc", "tabu:7", "gs:g2:0.05:4", "gs:x2:0.01:2"] {
            assert_eq!(spec.parse::<Learner>().unwrap().to_string(), spec);
        }
        assert_eq!("tabu".parse::<Learner>().unwrap().to_string(), "tabu:10");
        assert_eq!("gs".parse::<Learner>().unwrap().to_string(), "gs:g2:0.05:4");
        for bad in ["", "tabu:0", "gs:foo", "gs:g2:2", "pc", "hc:1"] {
            assert!(bad.parse::<Learner>().is_err(), "{bad}");
        }
    }

    #[test]
    fn deterministic_and_ordered() {
        let data = BayesNet::bundled().forward_sample(300, 1).unwrap();
        let learner: Learner = "hc".parse().unwrap();
        let a = bootstrap_skeletons(&data, &learner, 6, 11).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap()
            .install(|| bootstrap_skeletons(&data, &learner, 6, 11).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
    }

    #[test]
    fn single_replicate_matches_direct_learning() {
        let data = BayesNet::bundled().forward_sample(200, 2).unwrap();
        let learner: Learner = "gs".parse().unwrap();
        let out = bootstrap_skeletons(&data, &learner, 1, 4).unwrap();
        let mut rng = StreamFactory::new(4).stream(0);
        let rows: Vec<usize> = (0..200).map(|_| rng.random_range(0..200)).collect();
        let direct = skeleton_of(&learner.learn(&data.resample(&rows)).unwrap());
        assert_eq!(out, vec![direct]);
    }

    #[test]
    fn deterministic_arc_gives_minimum_entropy() {
        let spec = r#"{"nodes":[
            {"name":"a","levels":["0","1"],"parents":[],"cpt":[[0.5,0.5]]},
            {"name":"b","levels":["0","1"],"parents":["a"],"cpt":[[1,0],[0,1]]},
            {"name":"c","levels":["0","1"],"parents":[],"cpt":[[0.5,0.5]]}]}"#;
        let data = BayesNet::from_json(spec).unwrap().forward_sample(1000, 3).unwrap();
        let samples = bootstrap_skeletons(&data, &"hc".parse().unwrap(), 20, 5).unwrap();
        let mom = estimate_moments(&samples, None).unwrap();
        assert_eq!(classify_entropy(&mom, 0.0), EntropyClass::Minimum);
    }
}
