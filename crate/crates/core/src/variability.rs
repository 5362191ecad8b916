//! Total variance, generalized variance and the squared Frobenius distance
//! from the minimum-variability eigenvalue configuration, with their
//! normalized forms and complements.

use std::fmt::Write as _;

use crate::error::Result;
use crate::linalg::{det_sym, full_rank_reduce, Matrix};
use crate::moments::CovMatrix;
use crate::numfmt::sig17;

/// Relative pivot threshold for the determinant's full-rank reduction.
pub const REDUCTION_TOL: f64 = 1e-9;

const BOUNDS_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct VariabilityReport {
    pub k: usize,
    pub var_t: f64,
    pub var_g: f64,
    pub var_n: f64,
    pub nvar_t: f64,
    pub nvar_g: f64,
    pub nvar_n: f64,
    pub cvar_t: f64,
    pub cvar_g: f64,
    pub cvar_n: f64,
    /// Dimension the determinant was taken over (`k` unless reduced).
    pub det_dim: usize,
    /// Kept indices when the determinant used a full-rank reduction.
    pub reduced_to: Option<Vec<usize>>,
    /// Set when Sigma or any normalized value leaves its population bounds.
    pub out_of_bounds: bool,
}

/// `||Sigma - (k/4) I||_F^2`, which equals `sum_i (lambda_i - k/4)^2`.
pub fn var_n(sigma: &Matrix) -> f64 {
    let k = sigma.dim();
    let c = k as f64 / 4.0;
    let mut acc = 0.0;
    for i in 0..k {
        for j in 0..k {
            let d = if i == j { sigma[(i, j)] - c } else { sigma[(i, j)] };
            acc += d * d;
        }
    }
    acc
}

pub fn variability(sigma: &CovMatrix, reduce_for_det: bool) -> Result<VariabilityReport> {
    let m = sigma.matrix();
    let k = m.dim();
    let kf = k as f64;

    let var_t = m.trace();
    let (var_g, det_dim, reduced_to) = if reduce_for_det {
        let red = full_rank_reduce(m, REDUCTION_TOL)?;
        if red.is_empty() {
            // nothing left to reduce to: the full determinant (zero) stands
            (det_sym(m), k, Some(Vec::new()))
        } else {
            (det_sym(&red.matrix), red.rank(), Some(red.kept))
        }
    } else {
        (det_sym(m), k, None)
    };
    let var_n = var_n(m);

    let nvar_t = if k == 0 { 1.0 } else { 4.0 * var_t / kf };
    let nvar_g = 4f64.powi(det_dim as i32) * var_g;
    let nvar_n = if k == 0 { 1.0 } else { (kf * kf * kf - 16.0 * var_n) / (kf * (2.0 * kf - 1.0)) };

    let normalized_ok = [nvar_t, nvar_g, nvar_n]
        .iter()
        .all(|x| (-BOUNDS_TOL..=1.0 + BOUNDS_TOL).contains(x));
    let out_of_bounds = !normalized_ok || !sigma.within_bernoulli_bounds(BOUNDS_TOL);

    Ok(VariabilityReport {
        k,
        var_t,
        var_g,
        var_n,
        nvar_t,
        nvar_g,
        nvar_n,
        cvar_t: 1.0 - nvar_t,
        cvar_g: 1.0 - nvar_g,
        cvar_n: 1.0 - nvar_n,
        det_dim,
        reduced_to,
        out_of_bounds,
    })
}

impl VariabilityReport {
    fn fields(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![
            ("k", self.k.to_string()),
            ("var_t", sig17(self.var_t)),
            ("var_g", sig17(self.var_g)),
            ("var_n", sig17(self.var_n)),
            ("nvar_t", sig17(self.nvar_t)),
            ("nvar_g", sig17(self.nvar_g)),
            ("nvar_n", sig17(self.nvar_n)),
            ("cvar_t", sig17(self.cvar_t)),
            ("cvar_g", sig17(self.cvar_g)),
            ("cvar_n", sig17(self.cvar_n)),
            ("det_dim", self.det_dim.to_string()),
        ];
        let kept = match &self.reduced_to {
            None => "none".to_string(),
            Some(k) if k.is_empty() => "empty".to_string(),
            Some(k) => k.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";"),
        };
        v.push(("reduced_to", kept));
        v.push(("out_of_bounds", self.out_of_bounds.to_string()));
        v
    }

    /// One `key=value` per line.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        for (key, val) in self.fields() {
            let _ = writeln!(s, "{key}={val}");
        }
        s
    }

    pub fn csv_header() -> String {
        let dummy = VariabilityReport {
            k: 0,
            var_t: 0.0,
            var_g: 0.0,
            var_n: 0.0,
            nvar_t: 0.0,
            nvar_g: 0.0,
            nvar_n: 0.0,
            cvar_t: 0.0,
            cvar_g: 0.0,
            cvar_n: 0.0,
            det_dim: 0,
            reduced_to: None,
            out_of_bounds: false,
        };
        let names: Vec<&str> = dummy.fields().iter().map(|(k, _)| *k).collect();
        format!("name,{}", names.join(","))
    }

    pub fn csv_row(&self, name: &str) -> String {
        let vals: Vec<String> = self.fields().into_iter().map(|(_, v)| v).collect();
        format!("{name},{}", vals.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues_sym;
    use crate::moments::{covariance_from_moments, EdgeMoments};
    use proptest::prelude::*;

    fn cov(rows: &[Vec<f64>]) -> CovMatrix {
        CovMatrix::new(Matrix::from_rows(rows).unwrap()).unwrap()
    }

    fn sigma1() -> CovMatrix {
        cov(&[vec![6.0 / 25.0, 1.0 / 25.0], vec![1.0 / 25.0, 6.0 / 25.0]])
    }

    #[test]
    fn sigma1_values() {
        let r = variability(&sigma1(), false).unwrap();
        assert!((r.var_t - 0.48).abs() < 1e-12);
        assert!((r.var_g - 0.056).abs() < 1e-12);
        assert!((r.var_n - 0.1384).abs() < 1e-12);
        assert!((r.nvar_t - 0.96).abs() < 1e-12);
        assert!((r.nvar_g - 0.896).abs() < 1e-12);
        assert!((r.nvar_n - 0.9642666666666667).abs() < 1e-12);
        assert!(!r.out_of_bounds);
    }

    #[test]
    fn extremes() {
        for k in 1..8 {
            let kf = k as f64;
            let max = variability(&CovMatrix::new(Matrix::scaled_identity(k, 0.25)).unwrap(), false).unwrap();
            assert_eq!((max.nvar_t, max.nvar_g, max.nvar_n), (1.0, 1.0, 1.0));
            assert_eq!((max.cvar_t, max.cvar_g, max.cvar_n), (0.0, 0.0, 0.0));
            assert_eq!(max.var_n, kf * (kf - 1.0).powi(2) / 16.0);

            let zero = CovMatrix::new(Matrix::zeros(k)).unwrap();
            for reduce in [false, true] {
                let min = variability(&zero, reduce).unwrap();
                assert_eq!(min.var_t, 0.0);
                assert_eq!(min.var_g, 0.0);
                assert_eq!(min.var_n, kf * kf * kf / 16.0);
                assert_eq!((min.cvar_t, min.cvar_g, min.cvar_n), (1.0, 1.0, 1.0));
            }
        }
    }

    #[test]
    fn reduction_reports_its_dimension() {
        let rank_one = cov(&[vec![0.25, 0.25], vec![0.25, 0.25]]);
        let full = variability(&rank_one, false).unwrap();
        assert_eq!(full.var_g, 0.0);
        assert_eq!(full.reduced_to, None);
        let red = variability(&rank_one, true).unwrap();
        assert_eq!(red.det_dim, 1);
        assert_eq!(red.reduced_to, Some(vec![0]));
        assert!((red.var_g - 0.25).abs() < 1e-15);
        assert!((red.nvar_g - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sample_covariance_flags_out_of_bounds() {
        let r = variability(&cov(&[vec![0.5, 0.0], vec![0.0, 0.5]]), false).unwrap();
        assert!(r.out_of_bounds);
        assert!(r.nvar_t > 1.0);
    }

    #[test]
    fn key_value_and_csv() {
        let r = variability(&sigma1(), false).unwrap();
        let kv = r.to_key_value();
        assert!(kv.starts_with("k=2\nvar_t=0.47999999999999998\n"));
        assert!(kv.contains("reduced_to=none\n"));
        let header = VariabilityReport::csv_header();
        let row = r.csv_row("sigma1");
        assert_eq!(header.split(',').count(), row.split(',').count());
        assert!(header.starts_with("name,k,var_t,"));
    }

    // random valid moments: draw m binary rows and take their empirical moments
    fn random_cov() -> impl Strategy<Value = CovMatrix> {
        (1usize..8, 1usize..30).prop_flat_map(|(k, m)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), k), m).prop_map(move |rows| {
                let mut counts = vec![0u64; k * k];
                for r in &rows {
                    for i in 0..k {
                        for j in 0..k {
                            counts[i * k + j] += u64::from(r[i] && r[j]);
                        }
                    }
                }
                let mom = EdgeMoments::from_counts(m, (0..k).collect(), counts).unwrap();
                covariance_from_moments(&mom)
            })
        })
    }

    proptest! {
        #[test]
        fn population_bounds(s in random_cov()) {
            let r = variability(&s, false).unwrap();
            let k = r.k as f64;
            prop_assert!(!r.out_of_bounds);
            prop_assert!(r.var_t >= 0.0 && r.var_t <= k / 4.0 + 1e-15);
            prop_assert!(r.var_g >= 0.0 && r.var_g <= 0.25f64.powi(r.k as i32) * (1.0 + 1e-12));
            prop_assert!(r.var_n >= k * (k - 1.0).powi(2) / 16.0 - 1e-12);
            prop_assert!(r.var_n <= k * k * k / 16.0 + 1e-12);
            prop_assert!((r.cvar_n + r.nvar_n - 1.0).abs() < 1e-15);
        }

        #[test]
        fn hadamard(s in random_cov()) {
            let r = variability(&s, false).unwrap();
            let diag: f64 = s.matrix().diagonal().iter().product();
            prop_assert!(r.var_g <= diag * (1.0 + 1e-9) + 1e-15);
        }

        #[test]
        fn var_n_is_eigenvalue_distance(s in random_cov()) {
            let k = s.dim() as f64;
            let eig = eigenvalues_sym(s.matrix()).unwrap();
            let by_eig: f64 = eig.eigenvalues.iter().map(|l| (l - k / 4.0).powi(2)).sum();
            prop_assert!((by_eig - var_n(s.matrix())).abs() < 1e-10);
        }

        #[test]
        fn var_n_extremes_not_beaten(k in 1usize..10, lambdas in prop::collection::vec(0.0f64..=0.25, 10)) {
            // any eigenvalue vector inside the feasible box stays between the analytic extremes
            let kf = k as f64;
            let d: f64 = lambdas[..k].iter().map(|l| (l - kf / 4.0).powi(2)).sum();
            prop_assert!(d >= kf * (kf - 1.0).powi(2) / 16.0 - 1e-12);
            prop_assert!(d <= kf * kf * kf / 16.0 + 1e-12);
            prop_assert!((kf * kf * kf / 16.0 - kf * (kf - 1.0).powi(2) / 16.0 - kf * (2.0 * kf - 1.0) / 16.0).abs() < 1e-9);
        }
    }
}
