use std::fmt;
use std::str::FromStr;

use super::dataset::CategoricalDataset;
use crate::error::{Error, Result};
use crate::special::chi2_sf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CiStatistic {
    /// Log-likelihood ratio, `2 sum O ln(O/E)`.
    G2,
    /// `sum (O - E)^2 / E`
    PearsonX2,
}

impl fmt::Display for CiStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CiStatistic::G2 => "g2",
            CiStatistic::PearsonX2 => "x2",
        })
    }
}

impl FromStr for CiStatistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g2" => Ok(CiStatistic::G2),
            "x2" => Ok(CiStatistic::PearsonX2),
            _ => Err(Error::invalid(format!("unknown CI test {s:?}, expected g2 or x2"))),
        }
    }
}

/// A CI test and its type-I threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CiTestKind {
    pub statistic: CiStatistic,
    pub alpha: f64,
}

impl Default for CiTestKind {
    fn default() -> Self {
        CiTestKind { statistic: CiStatistic::G2, alpha: 0.05 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CiOutcome {
    pub statistic: f64,
    pub df: f64,
    pub p_value: f64,
}

/// Tests `x _||_ y | z` on the contingency table of x and y within each
/// configuration of z. Degrees of freedom come from the declared level
/// counts, whether or not every level was observed.
pub fn ci_test(data: &CategoricalDataset, x: usize, y: usize, z: &[usize], kind: CiStatistic) -> Result<CiOutcome> {
    let nv = data.n_vars();
    if x == y || x >= nv || y >= nv {
        return Err(Error::invalid(format!("invalid test pair ({x}, {y})")));
    }
    if let Some(&bad) = z.iter().find(|&&c| c == x || c == y || c >= nv) {
        return Err(Error::invalid(format!("conditioning variable {bad} is invalid for pair ({x}, {y})")));
    }
    let (rx, ry) = (data.level_count(x), data.level_count(y));
    let configs: usize = z.iter().map(|&c| data.level_count(c)).product();
    let df = ((rx - 1) * (ry - 1) * configs) as f64;
    if df <= 0.0 {
        return Err(Error::Domain(format!("test of ({x}, {y}) has {df} degrees of freedom")));
    }

    let cell = rx * ry;
    let mut counts = vec![0u64; configs * cell];
    let (cx, cy) = (data.column(x), data.column(y));
    let zcols: Vec<(&[u32], usize)> = z.iter().map(|&c| (data.column(c), data.level_count(c))).collect();
    for r in 0..data.n_rows() {
        let conf = zcols.iter().fold(0, |acc, &(col, lv)| acc * lv + col[r] as usize);
        counts[conf * cell + cx[r] as usize * ry + cy[r] as usize] += 1;
    }

    let mut stat = 0.0;
    let mut row = vec![0u64; rx];
    let mut col = vec![0u64; ry];
    for table in counts.chunks_exact(cell) {
        row.iter_mut().for_each(|v| *v = 0);
        col.iter_mut().for_each(|v| *v = 0);
        for a in 0..rx {
            for b in 0..ry {
                row[a] += table[a * ry + b];
                col[b] += table[a * ry + b];
            }
        }
        let n: u64 = row.iter().sum();
        if n == 0 {
            continue;
        }
        let nf = n as f64;
        for a in 0..rx {
            for b in 0..ry {
                let expected = row[a] as f64 * col[b] as f64 / nf;
                if expected == 0.0 {
                    continue;
                }
                let observed = table[a * ry + b] as f64;
                stat += match kind {
                    CiStatistic::G2 if observed > 0.0 => 2.0 * observed * (observed / expected).ln(),
                    CiStatistic::G2 => 0.0,
                    CiStatistic::PearsonX2 => (observed - expected).powi(2) / expected,
                };
            }
        }
    }
    let stat = stat.max(0.0);
    Ok(CiOutcome { statistic: stat, df, p_value: chi2_sf(df, stat)? })
}

/// Whether the test rejects independence at level `alpha`.
pub fn dependent(data: &CategoricalDataset, x: usize, y: usize, z: &[usize], test: CiTestKind) -> Result<bool> {
    Ok(ci_test(data, x, y, z, test.statistic)?.p_value < test.alpha)
}
