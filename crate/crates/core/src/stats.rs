//! Distribution summaries (quantiles, histogram, Gaussian KDE) and the
//! two-sample Kolmogorov-Smirnov test.
//!
//! Conventions, all recorded in report metadata:
//! - quantiles interpolate linearly between order statistics at
//!   zero-based position (n-1)*q;
//! - the KDE uses Scott's bandwidth h = sigma * n^(-1/5) with the
//!   sample standard deviation, evaluated on a 512-point grid spanning
//!   [min - 3h, max + 3h];
//! - histograms are normalized densities over the fixed kappa range
//!   [-1, 1] so plots share axes across conditionings;
//! - the K-S p-value uses the asymptotic Kolmogorov series with the
//!   small-sample correction factor sqrt(n_e) + 0.12 + 0.11/sqrt(n_e).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 40;
pub const KDE_GRID_POINTS: usize = 512;
/// Histogram support, fixed to the kappa range.
pub const HISTOGRAM_RANGE: (f64, f64) = (-1.0, 1.0);

pub const QUANTILE_RULE: &str = "linear";
pub const BANDWIDTH_RULE: &str = "scott";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p95: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    /// Normalized so that density * bin width sums to 1 over the bins.
    pub density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KdePoint {
    pub x: f64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub n: usize,
    pub mean: f64,
    pub quantiles: Quantiles,
    pub histogram: Vec<HistogramBin>,
    /// Empty when the sample has fewer than two points or zero spread.
    pub kde: Vec<KdePoint>,
}

/// Linear-interpolation quantile of an ascending-sorted, non-empty slice.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = (sorted.len() - 1) as f64 * q;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        return sorted[lo];
    }
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Characterizes a sample: mean, quantiles, normalized histogram over
/// [`HISTOGRAM_RANGE`], and a Gaussian KDE (omitted for n < 2).
pub fn summarize(sample: &[f64], bins: usize) -> Result<DistributionSummary> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if bins == 0 {
        return Err(Error::ZeroBins);
    }
    let n = sample.len();
    let mean = sample.iter().sum::<f64>() / n as f64;

    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let quantiles = Quantiles {
        p25: quantile(&sorted, 0.25),
        p50: quantile(&sorted, 0.50),
        p75: quantile(&sorted, 0.75),
        p95: quantile(&sorted, 0.95),
    };

    let (range_lo, range_hi) = HISTOGRAM_RANGE;
    let bin_width = (range_hi - range_lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in sample {
        // values at or beyond the range edges land in the boundary bins
        let idx = (((v - range_lo) / bin_width).floor() as isize).clamp(0, bins as isize - 1);
        counts[idx as usize] += 1;
    }
    let histogram = counts
        .iter()
        .enumerate()
        .map(|(i, &count)| HistogramBin {
            left: range_lo + i as f64 * bin_width,
            right: range_lo + (i + 1) as f64 * bin_width,
            density: count as f64 / (n as f64 * bin_width),
        })
        .collect();

    let kde = gaussian_kde(&sorted);

    Ok(DistributionSummary {
        n,
        mean,
        quantiles,
        histogram,
        kde,
    })
}

/// Scott's-rule bandwidth over the sample standard deviation; zero when
/// the sample is degenerate.
pub fn scott_bandwidth(sample: &[f64]) -> f64 {
    let n = sample.len();
    if n < 2 {
        return 0.0;
    }
    let mean = sample.iter().sum::<f64>() / n as f64;
    let var = sample.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    var.sqrt() * (n as f64).powf(-0.2)
}

fn gaussian_kde(sorted: &[f64]) -> Vec<KdePoint> {
    let n = sorted.len();
    let h = scott_bandwidth(sorted);
    if h <= 0.0 {
        return Vec::new();
    }
    let lo = sorted[0] - 3.0 * h;
    let hi = sorted[n - 1] + 3.0 * h;
    let step = (hi - lo) / (KDE_GRID_POINTS - 1) as f64;
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * h * n as f64);
    (0..KDE_GRID_POINTS)
        .map(|i| {
            let x = lo + i as f64 * step;
            let density = sorted
                .iter()
                .map(|&v| {
                    let z = (x - v) / h;
                    (-0.5 * z * z).exp()
                })
                .sum::<f64>()
                * norm;
            KdePoint { x, density }
        })
        .collect()
}

/// Two-sample Kolmogorov-Smirnov outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d_statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

/// Two-sample K-S test: D is the supremum ECDF difference, the p-value
/// comes from the asymptotic Kolmogorov distribution.
pub fn ks_test(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.total_cmp(q));
    ys.sort_by(|p, q| p.total_cmp(q));

    let (n1, n2) = (xs.len(), ys.len());
    let mut d: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < n1 && j < n2 {
        let t = xs[i].min(ys[j]);
        while i < n1 && xs[i] <= t {
            i += 1;
        }
        while j < n2 && ys[j] <= t {
            j += 1;
        }
        let diff = (i as f64 / n1 as f64 - j as f64 / n2 as f64).abs();
        if diff > d {
            d = diff;
        }
    }

    let ne = (n1 * n2) as f64 / (n1 + n2) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsResult {
        d_statistic: d,
        p_value: kolmogorov_p(lambda),
        n1,
        n2,
    })
}

// Q(lambda) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), truncated
// once terms drop below 1e-12 (at most 100 terms). The series does not
// converge for tiny lambda, where the probability tends to 1.
fn kolmogorov_p(lambda: f64) -> f64 {
    let mut sum = 0.0;
    let mut converged = false;
    for k in 1..=100u32 {
        let exponent = -2.0 * (k as f64) * (k as f64) * lambda * lambda;
        let term = exponent.exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return 1.0;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
