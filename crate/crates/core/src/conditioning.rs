//! The seven treatments applied to ground-truth masks before agreement
//! is measured: the untouched original, four morphological/geometric
//! simplifications, and two composites that run the convex hull after a
//! morphological cleanup.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{bounding_box_mask, convex_hull_mask};
use crate::mask::BinaryMask;
use crate::morphology::{close, open, StructuringElement, DEFAULT_SE_SIDE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConditioningKind {
    Original,
    Opening,
    Closing,
    ConvexHull,
    OpeningConvexHull,
    ClosingConvexHull,
    BoundingBox,
}

impl ConditioningKind {
    /// All kinds in canonical presentation order.
    pub const ALL: [ConditioningKind; 7] = [
        ConditioningKind::Original,
        ConditioningKind::Opening,
        ConditioningKind::Closing,
        ConditioningKind::ConvexHull,
        ConditioningKind::OpeningConvexHull,
        ConditioningKind::ClosingConvexHull,
        ConditioningKind::BoundingBox,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ConditioningKind::Original => "original",
            ConditioningKind::Opening => "opening",
            ConditioningKind::Closing => "closing",
            ConditioningKind::ConvexHull => "convex_hull",
            ConditioningKind::OpeningConvexHull => "opening_convex_hull",
            ConditioningKind::ClosingConvexHull => "closing_convex_hull",
            ConditioningKind::BoundingBox => "bounding_box",
        }
    }

    /// Whether the treatment uses the structuring element.
    pub fn uses_se(&self) -> bool {
        matches!(
            self,
            ConditioningKind::Opening
                | ConditioningKind::Closing
                | ConditioningKind::OpeningConvexHull
                | ConditioningKind::ClosingConvexHull
        )
    }
}

impl fmt::Display for ConditioningKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConditioningKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownConditioning {
                name: s.to_string(),
            })
    }
}

impl Serialize for ConditioningKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ConditioningKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// A treatment plus the side of the square structuring element its
/// morphological steps use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditioningSpec {
    kind: ConditioningKind,
    se: StructuringElement,
}

impl ConditioningSpec {
    /// Spec with the default structuring element (side 5).
    pub fn new(kind: ConditioningKind) -> Self {
        Self {
            kind,
            se: StructuringElement::default(),
        }
    }

    pub fn with_se_side(kind: ConditioningKind, se_side: usize) -> Result<Self> {
        Ok(Self {
            kind,
            se: StructuringElement::square(se_side)?,
        })
    }

    pub fn kind(&self) -> ConditioningKind {
        self.kind
    }

    pub fn se_side(&self) -> usize {
        self.se.side()
    }
}

impl Default for ConditioningSpec {
    fn default() -> Self {
        Self::new(ConditioningKind::Original)
    }
}

/// Applies a treatment to one mask. Pure and dimension-preserving; the
/// composites run the morphological step first, the hull second.
pub fn apply(spec: &ConditioningSpec, mask: &BinaryMask) -> BinaryMask {
    match spec.kind {
        ConditioningKind::Original => mask.clone(),
        ConditioningKind::Opening => open(mask, spec.se),
        ConditioningKind::Closing => close(mask, spec.se),
        ConditioningKind::ConvexHull => convex_hull_mask(mask),
        ConditioningKind::OpeningConvexHull => convex_hull_mask(&open(mask, spec.se)),
        ConditioningKind::ClosingConvexHull => convex_hull_mask(&close(mask, spec.se)),
        ConditioningKind::BoundingBox => bounding_box_mask(mask),
    }
}

/// The default structuring-element side, re-exported for configuration.
pub const DEFAULT_CONDITIONING_SE_SIDE: usize = DEFAULT_SE_SIDE;
