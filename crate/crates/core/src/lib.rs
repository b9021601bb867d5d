//! Inter-annotator agreement analysis for binary segmentation masks.
//!
//! The pipeline: ingest PNG lesion masks into groups, apply a
//! conditioning (morphological cleanup, convex hull, bounding box, or
//! none) to every annotation, score each lesion with the mean pairwise
//! Cohen's Kappa, characterize the kappa distribution per conditioning,
//! and compare distributions with two-sample Kolmogorov-Smirnov tests.
//!
//! ```
//! use segkappa::conditioning::{apply, ConditioningKind, ConditioningSpec};
//! use segkappa::agreement::cohen_kappa;
//! use segkappa::mask::BinaryMask;
//!
//! let a = BinaryMask::from_art(&["##..", "##..", "....", "...."]);
//! let b = BinaryMask::from_art(&["##..", "#...", "....", "...."]);
//! let kappa = cohen_kappa(&a, &b).unwrap();
//! assert!(kappa > 0.7);
//!
//! let spec = ConditioningSpec::new(ConditioningKind::BoundingBox);
//! assert_eq!(apply(&spec, &a), a);
//! ```

pub mod agreement;
pub mod conditioning;
pub mod error;
pub mod geometry;
pub mod mask;
pub mod morphology;
pub mod plot;
pub mod report;
pub mod stats;

pub use error::{Error, Result};
