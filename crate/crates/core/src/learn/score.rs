use std::collections::HashMap;

use super::dataset::CategoricalDataset;
use crate::graph::Dag;

/// BIC local scores of a dataset, cached per (node, parent set).
pub struct BicScorer<'a> {
    data: &'a CategoricalDataset,
    cache: HashMap<(usize, Vec<usize>), f64>,
}

impl<'a> BicScorer<'a> {
    pub fn new(data: &'a CategoricalDataset) -> Self {
        BicScorer { data, cache: HashMap::new() }
    }

    pub fn data(&self) -> &CategoricalDataset {
        self.data
    }

    /// Maximized log-likelihood of `node` given `parents`, minus
    /// `(d/2) ln n` with `d = (levels - 1) * prod(parent levels)`.
    pub fn local(&mut self, node: usize, parents: &[usize]) -> f64 {
        let mut key = parents.to_vec();
        key.sort_unstable();
        if let Some(&s) = self.cache.get(&(node, key.clone())) {
            return s;
        }
        let s = local_bic(self.data, node, &key);
        self.cache.insert((node, key), s);
        s
    }

    pub fn score(&mut self, dag: &Dag) -> f64 {
        (0..dag.node_count())
            .map(|v| {
                let ps: Vec<usize> = dag.parents(v).iter().copied().collect();
                self.local(v, &ps)
            })
            .sum()
    }
}

fn local_bic(data: &CategoricalDataset, node: usize, parents: &[usize]) -> f64 {
    let r = data.level_count(node);
    let q: usize = parents.iter().map(|&p| data.level_count(p)).product();
    let mut counts = vec![0u64; q * r];
    let col = data.column(node);
    let pcols: Vec<(&[u32], usize)> = parents.iter().map(|&p| (data.column(p), data.level_count(p))).collect();
    for row in 0..data.n_rows() {
        let conf = pcols.iter().fold(0, |acc, &(c, lv)| acc * lv + c[row] as usize);
        counts[conf * r + col[row] as usize] += 1;
    }
    let mut ll = 0.0;
    for cfg in counts.chunks_exact(r) {
        let total: u64 = cfg.iter().sum();
        if total == 0 {
            continue;
        }
        let tf = total as f64;
        for &c in cfg.iter().filter(|&&c| c > 0) {
            let cf = c as f64;
            ll += cf * (cf / tf).ln();
        }
    }
    let d = ((r - 1) * q) as f64;
    ll - d / 2.0 * (data.n_rows() as f64).ln()
}

/// BIC of a whole DAG.
pub fn bic_score(dag: &Dag, data: &CategoricalDataset) -> f64 {
    BicScorer::new(data).score(dag)
}
