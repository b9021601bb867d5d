//! Cohen's Kappa between binary masks and per-lesion all-pairs means.
//!
//! Kappa is the chance-corrected agreement (p_o - p_e) / (1 - p_e),
//! where p_o is the fraction of pixels both annotations label the same
//! way and p_e the agreement expected from the label marginals alone.
//! It ranges over [-1, 1]: zero for pure chance, negative for worse
//! than chance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditioning::{apply, ConditioningKind, ConditioningSpec};
use crate::error::{Error, Result};
use crate::mask::{BinaryMask, LesionGroup};

/// Binary confusion counts between two masks of equal dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    /// Pixels foreground in both masks.
    pub both_foreground: u64,
    /// Pixels foreground only in the first mask.
    pub only_first: u64,
    /// Pixels foreground only in the second mask.
    pub only_second: u64,
    /// Pixels background in both masks.
    pub both_background: u64,
}

impl ConfusionCounts {
    pub fn from_masks(a: &BinaryMask, b: &BinaryMask) -> Result<Self> {
        if !a.same_dimensions(b) {
            return Err(Error::DimensionMismatch {
                a_width: a.width(),
                a_height: a.height(),
                b_width: b.width(),
                b_height: b.height(),
            });
        }
        let mut counts = ConfusionCounts {
            both_foreground: 0,
            only_first: 0,
            only_second: 0,
            both_background: 0,
        };
        for (&x, &y) in a.cells().iter().zip(b.cells()) {
            match (x, y) {
                (true, true) => counts.both_foreground += 1,
                (true, false) => counts.only_first += 1,
                (false, true) => counts.only_second += 1,
                (false, false) => counts.both_background += 1,
            }
        }
        Ok(counts)
    }

    pub fn total(&self) -> u64 {
        self.both_foreground + self.only_first + self.only_second + self.both_background
    }
}

/// Kappa from confusion counts. When both masks are constant with the
/// same value, chance correction is undefined (p_e = 1) and total
/// agreement scores 1.
pub fn kappa_from_counts(counts: &ConfusionCounts) -> Result<f64> {
    let n = counts.total();
    if n == 0 {
        return Err(Error::ZeroPixels);
    }
    let (a, b, c, d) = (
        counts.both_foreground as f64,
        counts.only_first as f64,
        counts.only_second as f64,
        counts.both_background as f64,
    );
    let n = n as f64;
    let observed = (a + d) / n;
    let expected = ((a + b) * (a + c) + (c + d) * (b + d)) / (n * n);
    if expected >= 1.0 {
        return Ok(1.0);
    }
    Ok((observed - expected) / (1.0 - expected))
}

/// Cohen's Kappa between two masks of equal dimensions.
pub fn cohen_kappa(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    kappa_from_counts(&ConfusionCounts::from_masks(a, b)?)
}

/// Mean pairwise kappa of one lesion under one conditioning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementRecord {
    pub lesion_id: String,
    pub conditioning: ConditioningKind,
    pub mean_kappa: f64,
    pub n_pairs: usize,
}

/// Conditions every mask of the group, scores all unordered pairs, and
/// averages. Groups with fewer than two masks are skipped (`None`).
pub fn lesion_mean_kappa(
    group: &LesionGroup,
    spec: &ConditioningSpec,
) -> Result<Option<AgreementRecord>> {
    let k = group.masks().len();
    if k < 2 {
        return Ok(None);
    }
    let conditioned: Vec<BinaryMask> = group.masks().iter().map(|m| apply(spec, m)).collect();
    let mut sum = 0.0;
    let mut n_pairs = 0usize;
    for i in 0..k {
        for j in (i + 1)..k {
            sum += cohen_kappa(&conditioned[i], &conditioned[j])?;
            n_pairs += 1;
        }
    }
    Ok(Some(AgreementRecord {
        lesion_id: group.lesion_id().to_string(),
        conditioning: spec.kind(),
        mean_kappa: sum / n_pairs as f64,
        n_pairs,
    }))
}

/// One record per group with at least two masks, sorted by lesion id.
pub fn dataset_agreements(
    groups: &[LesionGroup],
    spec: &ConditioningSpec,
) -> Result<Vec<AgreementRecord>> {
    let mut records = groups
        .par_iter()
        .map(|group| lesion_mean_kappa(group, spec))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    records.sort_by(|x, y| x.lesion_id.cmp(&y.lesion_id));
    Ok(records)
}
