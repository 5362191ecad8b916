//! Asymptotic tests of `Sigma = (1/4) I_k` with their finite-sample
//! corrections, which condition the reference distribution on the bounded
//! support of each statistic.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::det_sym;
use crate::moments::CovMatrix;
use crate::numfmt::sig17;
use crate::special::{chi2_cdf, chi2_sf, gamma_cdf, std_normal_cdf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TestKind {
    Trace,
    DetGaussian,
    DetGamma,
    Nagao,
}

impl TestKind {
    pub const ALL: [TestKind; 4] = [TestKind::Trace, TestKind::DetGaussian, TestKind::DetGamma, TestKind::Nagao];

    pub fn name(self) -> &'static str {
        match self {
            TestKind::Trace => "trace",
            TestKind::DetGaussian => "det-gauss",
            TestKind::DetGamma => "det-gamma",
            TestKind::Nagao => "nagao",
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TestKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TestKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown test {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reference {
    ChiSquared { df: f64 },
    Normal { mean: f64, variance: f64 },
    Gamma { shape: f64, scale: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestResult {
    pub kind: TestKind,
    pub m: usize,
    pub k: usize,
    pub statistic: f64,
    pub reference: Reference,
    pub p_raw: f64,
    pub p_corrected: f64,
    /// Support of the statistic used by the correction.
    pub support: (f64, f64),
    /// The statistic fell outside `support`; `p_corrected` was clamped.
    pub out_of_support: bool,
}

impl TestResult {
    pub const CSV_HEADER: &'static str = "kind,m,k,statistic,p_raw,p_corrected,bounds_flag";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.kind,
            self.m,
            self.k,
            sig17(self.statistic),
            sig17(self.p_raw),
            sig17(self.p_corrected),
            u8::from(self.out_of_support)
        )
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("sample size m must be at least 1"));
    }
    Ok(())
}

fn outside(t: f64, (lo, hi): (f64, f64)) -> bool {
    let slack = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
    t < lo - slack || t > hi + slack
}

fn finish(
    kind: TestKind,
    m: usize,
    k: usize,
    statistic: f64,
    reference: Reference,
    p_raw: f64,
    corrected: f64,
    support: (f64, f64),
) -> TestResult {
    TestResult {
        kind,
        m,
        k,
        statistic,
        reference,
        p_raw: p_raw.clamp(0.0, 1.0),
        p_corrected: corrected.clamp(0.0, 1.0),
        support,
        out_of_support: outside(statistic, support),
    }
}

/// `4^k det(Sigma)`, the determinant relative to the null.
fn det_ratio(sigma: &CovMatrix) -> f64 {
    4f64.powi(sigma.dim() as i32) * det_sym(sigma.matrix())
}

/// `t = 4 m tr(Sigma)` against `chi2_{mk}`, lower tail.
pub fn trace_test(sigma: &CovMatrix, m: usize) -> Result<TestResult> {
    check_m(m)?;
    let k = sigma.dim();
    let mk = (m * k) as f64;
    let t = 4.0 * m as f64 * sigma.matrix().trace();
    let p_raw = chi2_cdf(mk, t)?;
    let corrected = p_raw / chi2_cdf(mk, mk)?;
    Ok(finish(TestKind::Trace, m, k, t, Reference::ChiSquared { df: mk }, p_raw, corrected, (0.0, mk)))
}

/// `t = sqrt(m) (4^k det(Sigma) - 1)` against `N(0, 2k)`, lower tail,
/// corrected by conditioning on `[-sqrt(m), 0]`.
pub fn det_gaussian_test(sigma: &CovMatrix, m: usize) -> Result<TestResult> {
    check_m(m)?;
    let k = sigma.dim();
    let sm = (m as f64).sqrt();
    let sd = (2.0 * k as f64).sqrt();
    let t = sm * (det_ratio(sigma) - 1.0);
    let p_raw = std_normal_cdf(t / sd);
    let floor = std_normal_cdf(-sm / sd);
    let corrected = (p_raw - floor) / (0.5 - floor);
    let reference = Reference::Normal { mean: 0.0, variance: 2.0 * k as f64 };
    Ok(finish(TestKind::DetGaussian, m, k, t, reference, p_raw, corrected, (-sm, 0.0)))
}

/// `t = (mk/2) (4^k det(Sigma))^(1/k)` against `Gamma(k(m+1-k)/2, 1)`,
/// lower tail, corrected by conditioning on `[0, mk/2]`.
pub fn det_gamma_test(sigma: &CovMatrix, m: usize) -> Result<TestResult> {
    check_m(m)?;
    let k = sigma.dim();
    let shape = k as f64 * (m as f64 + 1.0 - k as f64) / 2.0;
    if !(shape > 0.0) {
        return Err(Error::Domain(format!("gamma shape k(m+1-k)/2 = {shape} is not positive (m={m}, k={k})")));
    }
    let half = (m * k) as f64 / 2.0;
    let t = half * det_ratio(sigma).max(0.0).powf(1.0 / k as f64);
    let p_raw = gamma_cdf(shape, 1.0, t)?;
    let corrected = p_raw / gamma_cdf(shape, 1.0, half)?;
    let reference = Reference::Gamma { shape, scale: 1.0 };
    Ok(finish(TestKind::DetGamma, m, k, t, reference, p_raw, corrected, (0.0, half)))
}

/// Largest value of `(m/2) tr((4 Sigma - I)^2)` over covariance matrices of
/// k edge indicators.
pub fn nagao_max(m: usize, k: usize) -> f64 {
    m as f64 / 2.0 * ((k * k.saturating_sub(1)).max(k)) as f64
}

/// `t = (m/2) tr((4 Sigma - I)^2)` against `chi2_{k(k+1)/2}`, upper tail,
/// corrected by conditioning on `[0, t_max]`.
pub fn nagao_test(sigma: &CovMatrix, m: usize) -> Result<TestResult> {
    check_m(m)?;
    let s = sigma.matrix();
    let k = s.dim();
    let mut frob = 0.0;
    for i in 0..k {
        for j in 0..k {
            let d = 4.0 * s[(i, j)] - if i == j { 1.0 } else { 0.0 };
            frob += d * d;
        }
    }
    let t = m as f64 / 2.0 * frob;
    let df = (k * (k + 1)) as f64 / 2.0;
    let t_max = nagao_max(m, k);
    let p_raw = chi2_sf(df, t)?;
    let corrected = (p_raw - chi2_sf(df, t_max)?) / chi2_cdf(df, t_max)?;
    Ok(finish(TestKind::Nagao, m, k, t, Reference::ChiSquared { df }, p_raw, corrected, (0.0, t_max)))
}

pub fn run_test(kind: TestKind, sigma: &CovMatrix, m: usize) -> Result<TestResult> {
    match kind {
        TestKind::Trace => trace_test(sigma, m),
        TestKind::DetGaussian => det_gaussian_test(sigma, m),
        TestKind::DetGamma => det_gamma_test(sigma, m),
        TestKind::Nagao => nagao_test(sigma, m),
    }
}
