//! First and second moments of the edge indicators of a skeleton sample,
//! the covariance matrix built from them, and the entropy classification.

use std::fmt;
use std::io::{Read, Write};

use crate::bits::BitColumns;
use crate::error::{Error, Result};
use crate::graph::{EdgeIndexer, Skeleton};
use crate::linalg::{Matrix, SYMMETRY_TOL};
use crate::numfmt::sig17;

/// Tolerance used when validating moments that were read back from text.
const MOMENT_TOL: f64 = 1e-12;

/// Edge frequencies `p_i` and joint frequencies `p_ij` over a set of
/// candidate edges. Positions `0..dim()` refer to `edges()[pos]` in the
/// global edge indexing.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeMoments {
    m: Option<usize>,
    edges: Vec<usize>,
    joint: Matrix,
    counts: Option<Vec<u64>>,
}

impl EdgeMoments {
    /// Moments from integer counts over `m` samples. `counts` is the full
    /// symmetric joint count table, row-major, diagonal = edge counts.
    pub fn from_counts(m: usize, edges: Vec<usize>, counts: Vec<u64>) -> Result<Self> {
        let k = edges.len();
        if m == 0 {
            return Err(Error::invalid("moments need at least one sample"));
        }
        if counts.len() != k * k {
            return Err(Error::invalid(format!("expected {} joint counts, got {}", k * k, counts.len())));
        }
        for i in 0..k {
            let ci = counts[i * k + i];
            if ci > m as u64 {
                return Err(Error::invalid(format!("count {ci} exceeds sample size {m}")));
            }
            for j in 0..k {
                let cij = counts[i * k + j];
                if cij != counts[j * k + i] {
                    return Err(Error::invalid("joint counts are not symmetric"));
                }
                let cj = counts[j * k + j];
                if cij > ci.min(cj) || cij + (m as u64) < ci + cj {
                    return Err(Error::invalid(format!("joint count {cij} at ({i},{j}) is infeasible")));
                }
            }
        }
        let mf = m as f64;
        let mut joint = Matrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                joint[(i, j)] = counts[i * k + j] as f64 / mf;
            }
        }
        Ok(EdgeMoments { m: Some(m), edges, joint, counts: Some(counts) })
    }

    /// Moments given directly as probabilities (e.g. read from a file), with
    /// no sample size attached.
    pub fn from_probabilities(edges: Vec<usize>, joint: Matrix) -> Result<Self> {
        let k = edges.len();
        if joint.dim() != k {
            return Err(Error::invalid(format!("{} edges but a {}x{} joint matrix", k, joint.dim(), joint.dim())));
        }
        let asym = joint.asymmetry();
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        for i in 0..k {
            for j in 0..k {
                let p = joint[(i, j)];
                let (pi, pj) = (joint[(i, i)], joint[(j, j)]);
                let ok = (-MOMENT_TOL..=1.0 + MOMENT_TOL).contains(&p)
                    && p <= pi.min(pj) + MOMENT_TOL
                    && p >= (pi + pj - 1.0).max(0.0) - MOMENT_TOL;
                if !ok {
                    return Err(Error::invalid(format!("joint probability {p} at ({i},{j}) is infeasible")));
                }
            }
        }
        Ok(EdgeMoments { m: None, edges, joint, counts: None })
    }

    pub fn sample_count(&self) -> Option<usize> {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn p(&self, i: usize) -> f64 {
        self.joint[(i, i)]
    }

    pub fn p_pair(&self, i: usize, j: usize) -> f64 {
        self.joint[(i, j)]
    }

    pub fn p_hat(&self) -> Vec<f64> {
        self.joint.diagonal()
    }

    pub fn joint(&self) -> &Matrix {
        &self.joint
    }

    /// Exact joint counts, when the moments came from samples.
    pub fn counts(&self) -> Option<&[u64]> {
        self.counts.as_deref()
    }

    /// Restricts to the given positions (not global edge indices).
    pub fn restrict(&self, positions: &[usize]) -> Result<EdgeMoments> {
        let k = self.dim();
        if let Some(&bad) = positions.iter().find(|&&p| p >= k) {
            return Err(Error::invalid(format!("position {bad} out of range for {k} edges")));
        }
        let edges = positions.iter().map(|&p| self.edges[p]).collect();
        let joint = self.joint.principal_submatrix(positions);
        let counts = self.counts.as_ref().map(|c| {
            positions
                .iter()
                .flat_map(|&a| positions.iter().map(move |&b| c[a * k + b]))
                .collect()
        });
        Ok(EdgeMoments { m: self.m, edges, joint, counts })
    }
}

/// Estimates the edge moments of a skeleton sample, optionally only over a
/// subset of candidate edges (given as global edge indices).
pub fn estimate_moments(samples: &[Skeleton], restrict_to: Option<&[usize]>) -> Result<EdgeMoments> {
    let first = samples.first().ok_or_else(|| Error::invalid("no skeleton samples"))?;
    let v = first.node_count();
    if let Some(bad) = samples.iter().position(|s| s.node_count() != v) {
        return Err(Error::Inconsistent(format!(
            "sample {bad} has {} nodes, expected {v}",
            samples[bad].node_count()
        )));
    }
    let indexer = EdgeIndexer::new(v);
    let k_all = indexer.edge_count();
    let edges: Vec<usize> = match restrict_to {
        None => (0..k_all).collect(),
        Some(subset) => {
            let mut e = subset.to_vec();
            e.sort_unstable();
            e.dedup();
            if let Some(&bad) = e.iter().find(|&&i| i >= k_all) {
                return Err(Error::invalid(format!("edge index {bad} out of range for {v} nodes")));
            }
            e
        }
    };
    let mut position = vec![usize::MAX; k_all];
    for (pos, &e) in edges.iter().enumerate() {
        position[e] = pos;
    }
    let mut bits = BitColumns::zeros(samples.len(), edges.len());
    for (row, s) in samples.iter().enumerate() {
        for (a, b) in s.edges() {
            let pos = position[indexer.index_unchecked(a, b)];
            if pos != usize::MAX {
                bits.set(row, pos);
            }
        }
    }
    EdgeMoments::from_counts(samples.len(), edges, bits.joint_counts_par())
}

/// A covariance matrix of edge indicators.
#[derive(Clone, Debug, PartialEq)]
pub struct CovMatrix(Matrix);

impl CovMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        let asym = m.asymmetry();
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        if (0..m.dim()).any(|i| m.row(i).iter().any(|x| !x.is_finite())) {
            return Err(Error::invalid("covariance matrix has non-finite entries"));
        }
        Ok(CovMatrix(m))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Whether the Bernoulli bounds hold: diagonal in `[0, 1/4]`, every
    /// entry at most `1/4` in absolute value. Sample covariances with the
    /// `m - 1` divisor can break them.
    pub fn within_bernoulli_bounds(&self, tol: f64) -> bool {
        let k = self.dim();
        (0..k).all(|i| {
            let d = self.0[(i, i)];
            d >= -tol && d <= 0.25 + tol && (0..k).all(|j| self.0[(i, j)].abs() <= 0.25 + tol)
        })
    }
}

impl std::ops::Index<(usize, usize)> for CovMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// `sigma_ii = p_i - p_i^2`, `sigma_ij = p_ij - p_i p_j`.
pub fn covariance_from_moments(mom: &EdgeMoments) -> CovMatrix {
    let k = mom.dim();
    let mut s = Matrix::zeros(k);
    match (mom.counts(), mom.m) {
        (Some(c), Some(m)) => {
            // exact integer numerator, one rounding
            let m = m as i128;
            let denom = (m * m) as f64;
            for i in 0..k {
                for j in 0..k {
                    let num = m * c[i * k + j] as i128 - c[i * k + i] as i128 * c[j * k + j] as i128;
                    s[(i, j)] = num as f64 / denom;
                }
            }
        }
        _ => {
            for i in 0..k {
                for j in 0..k {
                    s[(i, j)] = mom.p_pair(i, j) - mom.p(i) * mom.p(j);
                }
            }
        }
    }
    CovMatrix(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntropyClass {
    Minimum,
    Intermediate,
    Maximum,
}

impl fmt::Display for EntropyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntropyClass::Minimum => "minimum",
            EntropyClass::Intermediate => "intermediate",
            EntropyClass::Maximum => "maximum",
        })
    }
}

pub fn classify_entropy(mom: &EdgeMoments, tol: f64) -> EntropyClass {
    let p = mom.p_hat();
    if p.iter().all(|&x| x <= tol || x >= 1.0 - tol) {
        return EntropyClass::Minimum;
    }
    let sigma = covariance_from_moments(mom);
    let k = mom.dim();
    let halves = p.iter().all(|&x| (x - 0.5).abs() <= tol);
    let uncorrelated = (0..k).all(|i| (0..k).all(|j| i == j || sigma[(i, j)].abs() <= tol));
    if halves && uncorrelated {
        EntropyClass::Maximum
    } else {
        EntropyClass::Intermediate
    }
}

pub const MAX_ENUMERATION_NODES: usize = 5;

/// Moments of the uniform distribution over all `2^k` skeletons on `v`
/// nodes, by exhaustive enumeration.
pub fn enumerate_uniform_moments(v: usize) -> Result<EdgeMoments> {
    if v == 0 || v > MAX_ENUMERATION_NODES {
        return Err(Error::invalid(format!(
            "enumeration supports 1..={MAX_ENUMERATION_NODES} nodes, got {v}"
        )));
    }
    let k = EdgeIndexer::new(v).edge_count();
    let samples = (0u64..1 << k)
        .map(|mask| {
            let idx: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
            Skeleton::from_edge_indices(v, &idx)
        })
        .collect::<Result<Vec<_>>>()?;
    estimate_moments(&samples, None)
}

/// Writes `i,j,p_ij` rows for the upper triangle including the diagonal.
pub fn write_moments_csv<W: Write>(mom: &EdgeMoments, out: W) -> Result<()> {
    write_upper_triangle(mom.joint(), "p_ij", out)
}

pub fn read_moments_csv<R: Read>(input: R) -> Result<EdgeMoments> {
    let joint = read_upper_triangle(input, "p_ij")?;
    EdgeMoments::from_probabilities((0..joint.dim()).collect(), joint)
}

/// Writes `i,j,sigma_ij` rows for the upper triangle including the diagonal.
pub fn write_covariance_csv<W: Write>(sigma: &CovMatrix, out: W) -> Result<()> {
    write_upper_triangle(sigma.matrix(), "sigma_ij", out)
}

pub fn read_covariance_csv<R: Read>(input: R) -> Result<CovMatrix> {
    CovMatrix::new(read_upper_triangle(input, "sigma_ij")?)
}

fn write_upper_triangle<W: Write>(m: &Matrix, value: &str, mut out: W) -> Result<()> {
    let io = |e: std::io::Error| Error::invalid(format!("write failed: {e}"));
    writeln!(out, "i,j,{value}").map_err(io)?;
    for i in 0..m.dim() {
        for j in i..m.dim() {
            writeln!(out, "{i},{j},{}", sig17(m[(i, j)])).map_err(io)?;
        }
    }
    Ok(())
}

/// Reads an upper-triangle listing. Lower-triangle rows are mirrored,
/// pairs that are not listed are zero, and the dimension is one more than
/// the largest index seen.
fn read_upper_triangle<R: Read>(input: R, value: &str) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = reader.headers().map_err(|e| Error::parse(1, e.to_string()))?.clone();
    let expected = ["i", "j", value];
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::parse(1, format!("expected header i,j,{value}")));
    }
    let mut entries = Vec::new();
    for (n, rec) in reader.records().enumerate() {
        let line = n + 2;
        let rec = rec.map_err(|e| Error::parse(line, e.to_string()))?;
        if rec.len() != 3 {
            return Err(Error::parse(line, format!("expected 3 fields, got {}", rec.len())));
        }
        let i: usize = rec[0].parse().map_err(|_| Error::parse(line, format!("bad index {:?}", &rec[0])))?;
        let j: usize = rec[1].parse().map_err(|_| Error::parse(line, format!("bad index {:?}", &rec[1])))?;
        let x: f64 = rec[2].parse().map_err(|_| Error::parse(line, format!("bad value {:?}", &rec[2])))?;
        if !x.is_finite() {
            return Err(Error::parse(line, "non-finite value"));
        }
        entries.push((line, i.min(j), i.max(j), x));
    }
    let k = entries.iter().map(|e| e.2 + 1).max().unwrap_or(0);
    let mut m = Matrix::zeros(k);
    let mut seen = vec![false; k * k];
    for (line, i, j, x) in entries {
        if std::mem::replace(&mut seen[i * k + j], true) {
            return Err(Error::parse(line, format!("duplicate entry ({i},{j})")));
        }
        m[(i, j)] = x;
        m[(j, i)] = x;
    }
    Ok(m)
}
