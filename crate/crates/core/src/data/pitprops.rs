use sha2::{Digest, Sha256};

use super::DataSource;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

const ASSET: &str = include_str!("../../data/pitprops.txt");
const ASSET_SHA256: &str = "f338c4452893dae6f0c15a335371c6950277629bdc93b6137d2c68f1d60539ce";

pub const PITPROPS_VARIABLES: [&str; 13] = [
    "topdiam", "length", "moist", "testsg", "ovensg", "ringtop", "ringbut", "bowmax", "bowdist",
    "whorls", "clear", "knots", "diaknot",
];

fn parse_asset(text: &str) -> Result<DenseMatrix> {
    let corrupt = || Error::AssetCorrupt { name: "pitprops" };
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|t| t.parse::<f64>()).collect())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| corrupt())?;
    if rows.len() != 13 || rows.iter().any(|r| r.len() != 13) {
        return Err(corrupt());
    }
    DenseMatrix::from_rows(&rows).map_err(|_| corrupt())
}

fn verified(text: &str, expected: &str) -> Result<DenseMatrix> {
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    if digest != expected {
        return Err(Error::AssetCorrupt { name: "pitprops" });
    }
    parse_asset(text)
}

/// The 13 × 13 Pitprops correlation matrix.
pub fn pitprops_correlation() -> Result<DenseMatrix> {
    verified(ASSET, ASSET_SHA256)
}

/// Pitprops in covariance mode.
pub fn pitprops_source() -> Result<DataSource> {
    DataSource::covariance(pitprops_correlation()?)
}
