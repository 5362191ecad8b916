//! Monte Carlo significance of the complement statistics under the
//! maximum-entropy null: each replicate is the sample covariance of m rows
//! of k independent fair coins.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use rayon::prelude::*;

use crate::bits::BitColumns;
use crate::error::{Error, Result};
use crate::linalg::{det_sym, Matrix};
use crate::moments::CovMatrix;
use crate::numfmt::sig17;
use crate::rng::StreamFactory;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum McStatistic {
    /// `1 - 4 tr(Sigma) / k`
    ComplementT,
    /// `1 - 4^k det(Sigma)`
    ComplementG,
    /// `16 ||Sigma - I/4||_F^2 = tr((4 Sigma - I)^2)`
    ComplementN,
}

impl McStatistic {
    pub const ALL: [McStatistic; 3] = [McStatistic::ComplementT, McStatistic::ComplementG, McStatistic::ComplementN];

    pub fn letter(self) -> &'static str {
        match self {
            McStatistic::ComplementT => "t",
            McStatistic::ComplementG => "g",
            McStatistic::ComplementN => "n",
        }
    }
}

impl fmt::Display for McStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

impl FromStr for McStatistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        McStatistic::ALL
            .into_iter()
            .find(|k| k.letter().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown statistic {s:?}, expected t, g or n")))
    }
}

/// Divisor of the replicate sample covariance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Divisor {
    #[default]
    M,
    MMinusOne,
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Divisor::M => "m",
            Divisor::MMinusOne => "m-1",
        })
    }
}

impl FromStr for Divisor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(Divisor::M),
            "m-1" => Ok(Divisor::MMinusOne),
            _ => Err(Error::invalid(format!("unknown divisor {s:?}, expected m or m-1"))),
        }
    }
}

/// How replicates equal to the observed statistic are counted. Equality is
/// judged with a relative guard of 1e-10 so that values which are equal as
/// rationals compare equal after rounding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TieRule {
    #[default]
    Exclude,
    Include,
}

impl fmt::Display for TieRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TieRule::Exclude => "exclude",
            TieRule::Include => "include",
        })
    }
}

impl FromStr for TieRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exclude" => Ok(TieRule::Exclude),
            "include" => Ok(TieRule::Include),
            _ => Err(Error::invalid(format!("unknown tie rule {s:?}, expected exclude or include"))),
        }
    }
}

const TIE_GUARD: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct McConfig {
    pub m: usize,
    pub k: usize,
    pub replicates: usize,
    pub seed: u64,
    pub statistic: McStatistic,
    pub divisor: Divisor,
    pub ties: TieRule,
}

impl McConfig {
    pub fn new(m: usize, k: usize, replicates: usize, seed: u64, statistic: McStatistic) -> Result<Self> {
        let cfg = McConfig { m, k, replicates, seed, statistic, divisor: Divisor::M, ties: TieRule::Exclude };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_divisor(mut self, divisor: Divisor) -> Self {
        self.divisor = divisor;
        self
    }

    pub fn with_ties(mut self, ties: TieRule) -> Self {
        self.ties = ties;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::invalid("need at least one replicate"));
        }
        if self.m < 2 {
            return Err(Error::invalid(format!("need m >= 2 rows per replicate, got {}", self.m)));
        }
        if self.k == 0 {
            return Err(Error::invalid("dimension k must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct McResult {
    pub p_hat: f64,
    pub standard_error: f64,
    pub replicates: usize,
    pub exceedances: usize,
    pub observed: f64,
}

impl McResult {
    fn from_count(exceedances: usize, replicates: usize, observed: f64) -> Self {
        let p_hat = exceedances as f64 / replicates as f64;
        McResult {
            p_hat,
            standard_error: (p_hat * (1.0 - p_hat) / replicates as f64).sqrt(),
            replicates,
            exceedances,
            observed,
        }
    }

    /// `p_hat=<...> se=<...>`
    pub fn summary(&self) -> String {
        format!("p_hat={} se={}", sig17(self.p_hat), sig17(self.standard_error))
    }
}

/// The complement statistic of a covariance matrix. Not clamped: sample
/// covariances can push it outside `[0, 1]`.
pub fn statistic(kind: McStatistic, sigma: &CovMatrix) -> f64 {
    statistic_of(kind, sigma.matrix())
}

fn statistic_of(kind: McStatistic, s: &Matrix) -> f64 {
    let k = s.dim();
    match kind {
        McStatistic::ComplementT => 1.0 - 4.0 * s.trace() / k as f64,
        McStatistic::ComplementG => 1.0 - 4f64.powi(k as i32) * det_sym(s),
        McStatistic::ComplementN => {
            let mut acc = 0.0;
            for i in 0..k {
                for j in 0..k {
                    let d = 4.0 * s[(i, j)] - if i == j { 1.0 } else { 0.0 };
                    acc += d * d;
                }
            }
            acc
        }
    }
}

/// Sample covariance of the columns of a bit matrix.
pub fn sample_covariance(bits: &BitColumns, divisor: Divisor) -> Result<CovMatrix> {
    let m = bits.rows();
    let d = match divisor {
        Divisor::M => m,
        Divisor::MMinusOne => m.saturating_sub(1),
    };
    if d == 0 {
        return Err(Error::invalid(format!("{m} rows are too few for divisor {divisor}")));
    }
    Ok(CovMatrix::new(covariance_matrix(bits, d))?)
}

fn covariance_matrix(bits: &BitColumns, d: usize) -> Matrix {
    let k = bits.cols();
    let m = bits.rows() as i64;
    let denom = (m * d as i64) as f64;
    let counts: Vec<i64> = (0..k).map(|j| bits.count(j) as i64).collect();
    let mut s = Matrix::zeros(k);
    for i in 0..k {
        for j in i..k {
            // (m n_ij - n_i n_j) / (m d): exact integer numerator, one rounding
            let num = m * bits.joint_count(i, j) as i64 - counts[i] * counts[j];
            let v = num as f64 / denom;
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

/// One null replicate: the sample covariance of m rows of k fair coins.
pub fn null_replicate<G: RngCore + ?Sized>(m: usize, k: usize, divisor: Divisor, rng: &mut G) -> Result<CovMatrix> {
    sample_covariance(&BitColumns::random(m, k, rng), divisor)
}

/// Sorted replicate statistics under the null, reusable for any number of
/// observed values.
#[derive(Clone, Debug, PartialEq)]
pub struct NullDistribution {
    pub statistic: McStatistic,
    sorted: Vec<f64>,
}

impl NullDistribution {
    pub fn simulate(cfg: &McConfig) -> Result<Self> {
        cfg.validate()?;
        let mut v = simulate_statistics(cfg.m, cfg.k, cfg.replicates, cfg.seed, cfg.divisor, &[cfg.statistic])?;
        Ok(v.remove(0))
    }

    pub fn replicates(&self) -> usize {
        self.sorted.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of replicates at or above `observed`, ties per `ties`.
    pub fn p_value(&self, observed: f64, ties: TieRule) -> McResult {
        let n = self.sorted.len();
        let count = if observed.is_nan() {
            0
        } else if observed == f64::NEG_INFINITY {
            n
        } else if observed == f64::INFINITY {
            0
        } else {
            let guard = TIE_GUARD * observed.abs().max(1.0);
            let cut = match ties {
                TieRule::Exclude => self.sorted.partition_point(|&x| x <= observed + guard),
                TieRule::Include => self.sorted.partition_point(|&x| x < observed - guard),
            };
            n - cut
        };
        McResult::from_count(count, n, observed)
    }
}

/// Simulates `replicates` null covariance matrices once and evaluates every
/// requested statistic on each. Replicate r always uses stream r of `seed`,
/// so the output is independent of the rayon pool size.
pub fn simulate_statistics(
    m: usize,
    k: usize,
    replicates: usize,
    seed: u64,
    divisor: Divisor,
    kinds: &[McStatistic],
) -> Result<Vec<NullDistribution>> {
    McConfig::new(m, k, replicates, seed, McStatistic::ComplementT)?;
    let d = match divisor {
        Divisor::M => m,
        Divisor::MMinusOne => m - 1,
    };
    let streams = StreamFactory::new(seed);
    let rows: Vec<Vec<f64>> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = streams.stream(r as u64);
            let s = covariance_matrix(&BitColumns::random(m, k, &mut rng), d);
            kinds.iter().map(|&kind| statistic_of(kind, &s)).collect()
        })
        .collect();
    Ok(kinds
        .iter()
        .enumerate()
        .map(|(c, &kind)| {
            let mut sorted: Vec<f64> = rows.iter().map(|r| r[c]).collect();
            sorted.sort_by(f64::total_cmp);
            NullDistribution { statistic: kind, sorted }
        })
        .collect())
}

pub fn mc_pvalue(observed: f64, cfg: &McConfig) -> Result<McResult> {
    Ok(NullDistribution::simulate(cfg)?.p_value(observed, cfg.ties))
}

/// Several observed values against one shared null sample.
pub fn mc_pvalues(observed: &[f64], cfg: &McConfig) -> Result<Vec<McResult>> {
    let null = NullDistribution::simulate(cfg)?;
    Ok(observed.iter().map(|&t| null.p_value(t, cfg.ties)).collect())
}
