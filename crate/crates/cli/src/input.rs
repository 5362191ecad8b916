use std::fs;
use std::path::Path;

use bnvar::graph::read_skeleton_archive;
use bnvar::moments::{read_covariance_csv, read_moments_csv};
use bnvar::{covariance_from_moments, estimate_moments, CovMatrix, EdgeMoments, SkeletonArchive};

use crate::error::CliError;

/// The three accepted matrix inputs, told apart by their first line:
/// `nodes=` opens a skeleton archive, `i,j,p_ij` a moments file and
/// `i,j,sigma_ij` a covariance file.
#[derive(Debug)]
pub enum MatrixInput {
    Archive(SkeletonArchive),
    Moments(EdgeMoments),
    Covariance(CovMatrix),
}

impl MatrixInput {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let first = text.lines().next().unwrap_or("").trim();
        if first.starts_with("nodes=") {
            Ok(MatrixInput::Archive(read_skeleton_archive(text.as_bytes())?))
        } else if first.replace(' ', "") == "i,j,p_ij" {
            Ok(MatrixInput::Moments(read_moments_csv(text.as_bytes())?))
        } else if first.replace(' ', "") == "i,j,sigma_ij" {
            Ok(MatrixInput::Covariance(read_covariance_csv(text.as_bytes())?))
        } else {
            Err(CliError::Parse(format!(
                "line 1: unrecognized input; expected `nodes=<v>`, `i,j,p_ij` or `i,j,sigma_ij`, found {first:?}"
            )))
        }
    }

    pub fn covariance(&self) -> Result<CovMatrix, CliError> {
        Ok(match self {
            MatrixInput::Archive(a) => covariance_from_moments(&estimate_moments(&a.samples, None)?),
            MatrixInput::Moments(m) => covariance_from_moments(m),
            MatrixInput::Covariance(c) => c.clone(),
        })
    }

    /// The sample count the input carries, if any.
    pub fn sample_count(&self) -> Option<usize> {
        match self {
            MatrixInput::Archive(a) => Some(a.samples.len()),
            _ => None,
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}
