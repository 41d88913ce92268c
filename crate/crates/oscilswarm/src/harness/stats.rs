//! Summary statistics for repeated runs: means, box-plot quartiles, and
//! Tukey-fence outlier counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Box-plot statistics of a sample.
///
/// `mean` covers every value. The quartiles use linear interpolation between
/// closest ranks (the common "type 7" rule), and the whiskers are the most
/// extreme values inside the 1.5·IQR fences, so points beyond the fences are
/// excluded from the box span and counted in `n_outliers` instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_lo: f64,
    pub whisker_hi: f64,
    pub n_outliers: usize,
    pub n_runs: usize,
}

/// Type-7 quantile of sorted data: linear interpolation at rank `(n−1)·p`.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = (n - 1) as f64 * p;
    let lo = rank.floor() as usize;
    let frac = rank - lo as f64;
    if frac == 0.0 || lo + 1 == n {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Computes [`SummaryStats`] for a non-empty sample.
pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let fence_lo = q1 - 1.5 * iqr;
    let fence_hi = q3 + 1.5 * iqr;

    let mut whisker_lo = q1;
    let mut whisker_hi = q3;
    let mut n_outliers = 0;
    for &v in &sorted {
        if v < fence_lo || v > fence_hi {
            n_outliers += 1;
        } else {
            whisker_lo = whisker_lo.min(v);
            whisker_hi = whisker_hi.max(v);
        }
    }

    Ok(SummaryStats {
        mean,
        median,
        q1,
        q3,
        whisker_lo,
        whisker_hi,
        n_outliers,
        n_runs: sorted.len(),
    })
}
