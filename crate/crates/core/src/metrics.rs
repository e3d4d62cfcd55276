//! MSE and PSNR against a clean reference.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;
use crate::grid::{ImageGrid, MAX_INTENSITY};

/// PSNR in dB together with the MSE it was derived from. `db` is `+inf`
/// exactly when `mse == 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsnrValue {
    pub db: f64,
    pub mse: f64,
}

impl PsnrValue {
    pub fn from_mse(mse: f64) -> Self {
        let db = if mse == 0.0 {
            f64::INFINITY
        } else {
            10.0 * (MAX_INTENSITY * MAX_INTENSITY / mse).log10()
        };
        Self { db, mse }
    }

    pub fn is_infinite(&self) -> bool {
        self.db.is_infinite()
    }

    /// Ordering by dB; higher is better.
    pub fn cmp_db(&self, other: &Self) -> Ordering {
        self.db.total_cmp(&other.db)
    }
}

impl fmt::Display for PsnrValue {
    /// Four decimals, or `inf`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{:.4}", self.db)
        }
    }
}

/// Mean squared difference over raw (unclipped) values.
pub fn mse(a: &ImageGrid, b: &ImageGrid) -> Result<f64> {
    a.same_shape(b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.len() as f64)
}

/// PSNR with a fixed peak of 255.
pub fn psnr(reference: &ImageGrid, test: &ImageGrid) -> Result<PsnrValue> {
    mse(reference, test).map(PsnrValue::from_mse)
}
