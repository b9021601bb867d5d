//! Analysis report: the full pipeline output plus CSV/JSON emission.
//!
//! All emitters are byte-deterministic for identical inputs: CSV rows
//! are formatted with six decimal places and sorted lexicographically,
//! JSON is serialized with sorted keys.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agreement::{lesion_mean_kappa, AgreementRecord};
use crate::conditioning::{ConditioningKind, ConditioningSpec};
use crate::error::{Error, Result};
use crate::mask::{summarize_dataset, DatasetSummary, LesionGroup};
use crate::morphology::DEFAULT_SE_SIDE;
use crate::stats::{
    ks_test, summarize, DistributionSummary, KsResult, BANDWIDTH_RULE, DEFAULT_BINS,
    HISTOGRAM_RANGE, KDE_GRID_POINTS, QUANTILE_RULE,
};

/// Name of the pseudo-random generator behind plot jitter.
pub const JITTER_RNG: &str = "chacha8";

/// Pipeline parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportParams {
    pub conditionings: Vec<ConditioningKind>,
    pub se_side: usize,
    pub bins: usize,
    pub jitter_seed: u64,
}

impl Default for ReportParams {
    fn default() -> Self {
        Self {
            conditionings: ConditioningKind::ALL.to_vec(),
            se_side: DEFAULT_SE_SIDE,
            bins: DEFAULT_BINS,
            jitter_seed: 0,
        }
    }
}

/// Everything needed to reproduce the numbers in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tool_version: String,
    pub se_side: usize,
    pub bins: usize,
    pub quantile_rule: String,
    pub bandwidth_rule: String,
    pub kde_grid_points: usize,
    pub histogram_range: (f64, f64),
    pub jitter_rng: String,
    pub jitter_seed: u64,
    pub dataset: DatasetSummary,
}

/// K-S comparison of one unordered conditioning pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsEntry {
    pub conditioning_a: ConditioningKind,
    pub conditioning_b: ConditioningKind,
    pub result: KsResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub metadata: ReportMetadata,
    /// One record per (eligible lesion, conditioning), sorted by lesion
    /// id and then canonical conditioning order.
    pub per_lesion: Vec<AgreementRecord>,
    pub summaries: BTreeMap<ConditioningKind, DistributionSummary>,
    /// Every unordered conditioning pair exactly once.
    pub ks_matrix: Vec<KsEntry>,
}

impl AnalysisReport {
    /// Runs agreement, distribution, and K-S analysis over all groups
    /// with at least two masks. Lesion groups are processed in parallel;
    /// the output is fully determined by the input and parameters.
    pub fn compute(groups: &[LesionGroup], params: &ReportParams) -> Result<Self> {
        if params.conditionings.is_empty() {
            return Err(Error::NoConditionings);
        }
        let mut conditionings = params.conditionings.clone();
        conditionings.sort();
        conditionings.dedup();
        let specs = conditionings
            .iter()
            .map(|&kind| ConditioningSpec::with_se_side(kind, params.se_side))
            .collect::<Result<Vec<_>>>()?;

        let mut eligible: Vec<&LesionGroup> =
            groups.iter().filter(|g| g.annotation_count() >= 2).collect();
        eligible.sort_by(|a, b| a.lesion_id().cmp(b.lesion_id()));
        if eligible.is_empty() {
            return Err(Error::NoEligibleGroups);
        }

        let per_group: Vec<Vec<AgreementRecord>> = eligible
            .par_iter()
            .map(|group| {
                specs
                    .iter()
                    .map(|spec| {
                        lesion_mean_kappa(group, spec)
                            .map(|r| r.expect("eligible groups have at least two masks"))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let per_lesion: Vec<AgreementRecord> = per_group.into_iter().flatten().collect();

        let mut summaries = BTreeMap::new();
        let mut samples: BTreeMap<ConditioningKind, Vec<f64>> = BTreeMap::new();
        for &kind in &conditionings {
            let sample: Vec<f64> = per_lesion
                .iter()
                .filter(|r| r.conditioning == kind)
                .map(|r| r.mean_kappa)
                .collect();
            summaries.insert(kind, summarize(&sample, params.bins)?);
            samples.insert(kind, sample);
        }

        let mut ks_matrix = Vec::new();
        for (i, &a) in conditionings.iter().enumerate() {
            for &b in &conditionings[i + 1..] {
                ks_matrix.push(KsEntry {
                    conditioning_a: a,
                    conditioning_b: b,
                    result: ks_test(&samples[&a], &samples[&b])?,
                });
            }
        }

        Ok(AnalysisReport {
            metadata: ReportMetadata {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                se_side: params.se_side,
                bins: params.bins,
                quantile_rule: QUANTILE_RULE.to_string(),
                bandwidth_rule: BANDWIDTH_RULE.to_string(),
                kde_grid_points: KDE_GRID_POINTS,
                histogram_range: HISTOGRAM_RANGE,
                jitter_rng: JITTER_RNG.to_string(),
                jitter_seed: params.jitter_seed,
                dataset: summarize_dataset(groups),
            },
            per_lesion,
            summaries,
            ks_matrix,
        })
    }

    /// Conditionings present in this report, in canonical order.
    pub fn conditionings(&self) -> Vec<ConditioningKind> {
        self.summaries.keys().copied().collect()
    }
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn sorted_csv(header: &str, mut rows: Vec<String>) -> String {
    rows.sort();
    let mut out = String::with_capacity(rows.iter().map(|r| r.len() + 1).sum::<usize>() + 64);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// Emits `per_lesion.csv`, `percentiles.csv`, and `ks.csv` into `dir`.
pub fn write_csv(report: &AnalysisReport, dir: &Path) -> Result<()> {
    let per_lesion = sorted_csv(
        "lesion_id,conditioning,mean_kappa,n_pairs",
        report
            .per_lesion
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{}",
                    r.lesion_id,
                    r.conditioning,
                    fmt6(r.mean_kappa),
                    r.n_pairs
                )
            })
            .collect(),
    );
    write_file(&dir.join("per_lesion.csv"), per_lesion.as_bytes())?;

    let percentiles = sorted_csv(
        "conditioning,p25,p50,p75,p95,mean,n",
        report
            .summaries
            .iter()
            .map(|(kind, s)| {
                format!(
                    "{},{},{},{},{},{},{}",
                    kind,
                    fmt6(s.quantiles.p25),
                    fmt6(s.quantiles.p50),
                    fmt6(s.quantiles.p75),
                    fmt6(s.quantiles.p95),
                    fmt6(s.mean),
                    s.n
                )
            })
            .collect(),
    );
    write_file(&dir.join("percentiles.csv"), percentiles.as_bytes())?;

    let ks = sorted_csv(
        "conditioning_a,conditioning_b,d,p_value",
        report
            .ks_matrix
            .iter()
            .map(|e| {
                format!(
                    "{},{},{},{}",
                    e.conditioning_a,
                    e.conditioning_b,
                    fmt6(e.result.d_statistic),
                    fmt6(e.result.p_value)
                )
            })
            .collect(),
    );
    write_file(&dir.join("ks.csv"), ks.as_bytes())
}

/// JSON encoding of the report with sorted keys; identical reports
/// serialize to identical bytes.
pub fn json_bytes(report: &AnalysisReport) -> Result<Vec<u8>> {
    // going through Value sorts object keys at every level
    let value = serde_json::to_value(report)?;
    let mut bytes = serde_json::to_vec_pretty(&value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes the full report as one JSON document.
pub fn write_json(report: &AnalysisReport, path: &Path) -> Result<()> {
    write_file(path, &json_bytes(report)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortDirection {
    Ascending,
    Descending,
}

/// Lesions ordered by mean kappa under one conditioning, ties broken by
/// lesion id; descending order is the exact reverse.
pub fn rank_lesions(
    report: &AnalysisReport,
    conditioning: ConditioningKind,
    direction: SortDirection,
) -> Result<Vec<(String, f64)>> {
    if !report.summaries.contains_key(&conditioning) {
        return Err(Error::MissingConditioning {
            name: conditioning.name().to_string(),
        });
    }
    let mut ranked: Vec<(String, f64)> = report
        .per_lesion
        .iter()
        .filter(|r| r.conditioning == conditioning)
        .map(|r| (r.lesion_id.clone(), r.mean_kappa))
        .collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    if direction == SortDirection::Descending {
        ranked.reverse();
    }
    Ok(ranked)
}
