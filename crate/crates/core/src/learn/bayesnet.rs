use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dataset::CategoricalDataset;
use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::rng::substream;

const ROW_SUM_TOL: f64 = 1e-9;

/// JSON form of a network: `{"nodes": [{"name", "levels", "parents", "cpt"}]}`.
/// CPT rows run over parent configurations in mixed-radix order with the
/// first listed parent varying slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub nodes: Vec<NodeSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub name: String,
    pub levels: Vec<String>,
    #[serde(default)]
    pub parents: Vec<String>,
    pub cpt: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BayesNet {
    dag: Dag,
    levels: Vec<Vec<String>>,
    parents: Vec<Vec<usize>>,
    cpts: Vec<Vec<Vec<f64>>>,
}

impl BayesNet {
    pub fn from_spec(spec: &NetworkSpec) -> Result<Self> {
        let names: Vec<String> = spec.nodes.iter().map(|n| n.name.clone()).collect();
        let mut dag = Dag::empty(names.clone())?;
        let mut parents = Vec::with_capacity(names.len());
        for (i, node) in spec.nodes.iter().enumerate() {
            if node.levels.is_empty() {
                return Err(Error::InvalidGraph(format!("node {} has no levels", node.name)));
            }
            let mut ps = Vec::with_capacity(node.parents.len());
            for p in &node.parents {
                let j = names
                    .iter()
                    .position(|n| n == p)
                    .ok_or_else(|| Error::InvalidGraph(format!("unknown parent {p} of {}", node.name)))?;
                dag.add_arc(j, i)?;
                ps.push(j);
            }
            parents.push(ps);
        }
        let levels: Vec<Vec<String>> = spec.nodes.iter().map(|n| n.levels.clone()).collect();
        for (i, node) in spec.nodes.iter().enumerate() {
            let rows: usize = parents[i].iter().map(|&p| levels[p].len()).product();
            if node.cpt.len() != rows {
                return Err(Error::InvalidGraph(format!(
                    "node {} needs {rows} CPT rows, has {}",
                    node.name,
                    node.cpt.len()
                )));
            }
            for (r, row) in node.cpt.iter().enumerate() {
                if row.len() != node.levels.len() || row.iter().any(|&p| !(p >= 0.0)) {
                    return Err(Error::InvalidGraph(format!("node {} CPT row {r} is malformed", node.name)));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOL {
                    return Err(Error::InvalidGraph(format!("node {} CPT row {r} sums to {sum}", node.name)));
                }
            }
        }
        let cpts = spec.nodes.iter().map(|n| n.cpt.clone()).collect();
        Ok(BayesNet { dag, levels, parents, cpts })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: NetworkSpec = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        Self::from_spec(&spec)
    }

    /// The eight-node discrete network shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_json(include_str!("../../data/network.json")).expect("bundled network is valid")
    }

    pub fn to_spec(&self) -> NetworkSpec {
        let names = self.dag.labels();
        NetworkSpec {
            nodes: (0..names.len())
                .map(|i| NodeSpec {
                    name: names[i].clone(),
                    levels: self.levels[i].clone(),
                    parents: self.parents[i].iter().map(|&p| names[p].clone()).collect(),
                    cpt: self.cpts[i].clone(),
                })
                .collect(),
        }
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn levels(&self, node: usize) -> &[String] {
        &self.levels[node]
    }

    pub fn node_count(&self) -> usize {
        self.levels.len()
    }

    /// CPT row index for a full assignment, first parent slowest.
    fn row_index(&self, node: usize, assignment: &[u32]) -> usize {
        self.parents[node]
            .iter()
            .fold(0, |acc, &p| acc * self.levels[p].len() + assignment[p] as usize)
    }

    /// `n` independent rows, ancestors first; deterministic given `seed`.
    pub fn forward_sample(&self, n: usize, seed: u64) -> Result<CategoricalDataset> {
        if n == 0 {
            return Err(Error::invalid("sample size must be positive"));
        }
        let order = self.dag.topological_order();
        let v = self.node_count();
        let mut rng = substream(seed, 0);
        let mut columns = vec![Vec::with_capacity(n); v];
        let mut assignment = vec![0u32; v];
        for _ in 0..n {
            for &node in &order {
                let row = &self.cpts[node][self.row_index(node, &assignment)];
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = row.len() - 1;
                for (level, &p) in row.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        pick = level;
                        break;
                    }
                }
                // zero-probability levels are never picked, even at the tail
                while row[pick] == 0.0 && pick > 0 {
                    pick -= 1;
                }
                assignment[node] = pick as u32;
            }
            for (c, &a) in columns.iter_mut().zip(&assignment) {
                c.push(a);
            }
        }
        CategoricalDataset::new(self.dag.labels().to_vec(), self.levels.clone(), columns)
    }
}
