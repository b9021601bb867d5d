//! Binary morphology with a flat square structuring element.
//!
//! Border convention: positions outside the image are background for
//! both erosion and dilation. Erosion therefore clears any pixel whose
//! window crosses the image edge, and dilation gains nothing from
//! outside the frame.

use crate::error::{Error, Result};
use crate::mask::BinaryMask;

/// Flat square structuring element with its origin at the center, so the
/// side must be odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuringElement {
    side: usize,
}

/// Structuring element side used throughout unless configured otherwise.
pub const DEFAULT_SE_SIDE: usize = 5;

impl StructuringElement {
    pub fn square(side: usize) -> Result<Self> {
        if side == 0 || side.is_multiple_of(2) {
            return Err(Error::InvalidSeSide { side });
        }
        Ok(Self { side })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Window half-width: pixels reach `radius` steps from the center.
    pub fn radius(&self) -> usize {
        self.side / 2
    }
}

impl Default for StructuringElement {
    fn default() -> Self {
        Self { side: DEFAULT_SE_SIDE }
    }
}

/// Output pixel is foreground iff every pixel under the window is
/// foreground (windows crossing the image edge always fail).
pub fn erode(mask: &BinaryMask, se: StructuringElement) -> BinaryMask {
    if se.side == 1 {
        return mask.clone();
    }
    let horizontal = pass_rows(mask, se.radius(), true);
    pass_cols(&horizontal, se.radius(), true)
}

/// Output pixel is foreground iff any pixel under the window is
/// foreground; the window is clipped at the image edge.
pub fn dilate(mask: &BinaryMask, se: StructuringElement) -> BinaryMask {
    if se.side == 1 {
        return mask.clone();
    }
    let horizontal = pass_rows(mask, se.radius(), false);
    pass_cols(&horizontal, se.radius(), false)
}

/// Erosion followed by dilation; removes foreground detail.
pub fn open(mask: &BinaryMask, se: StructuringElement) -> BinaryMask {
    dilate(&erode(mask, se), se)
}

/// Dilation followed by erosion; fills background detail such as holes.
pub fn close(mask: &BinaryMask, se: StructuringElement) -> BinaryMask {
    erode(&dilate(mask, se), se)
}

// A square window ANDs/ORs separably: run the 1-D window along rows,
// then along columns of the intermediate.
fn pass_rows(mask: &BinaryMask, radius: usize, all: bool) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let mut out = vec![false; w * h];
    let mut prefix = vec![0u32; w + 1];
    for row in 0..h {
        for col in 0..w {
            prefix[col + 1] = prefix[col] + u32::from(mask.get(row, col));
        }
        for col in 0..w {
            out[row * w + col] = if all {
                col >= radius
                    && col + radius < w
                    && (prefix[col + radius + 1] - prefix[col - radius]) as usize == 2 * radius + 1
            } else {
                let lo = col.saturating_sub(radius);
                let hi = (col + radius).min(w - 1);
                prefix[hi + 1] > prefix[lo]
            };
        }
    }
    BinaryMask::new(w, h, out).expect("dimensions preserved")
}

fn pass_cols(mask: &BinaryMask, radius: usize, all: bool) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let mut out = vec![false; w * h];
    let mut prefix = vec![0u32; h + 1];
    for col in 0..w {
        for row in 0..h {
            prefix[row + 1] = prefix[row] + u32::from(mask.get(row, col));
        }
        for row in 0..h {
            out[row * w + col] = if all {
                row >= radius
                    && row + radius < h
                    && (prefix[row + radius + 1] - prefix[row - radius]) as usize == 2 * radius + 1
            } else {
                let lo = row.saturating_sub(radius);
                let hi = (row + radius).min(h - 1);
                prefix[hi + 1] > prefix[lo]
            };
        }
    }
    BinaryMask::new(w, h, out).expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;

    // Naive sliding-window reference: O(W * H * side^2), straight from
    // the operator definition.
    fn naive(mask: &BinaryMask, side: usize, all: bool) -> BinaryMask {
        let k = (side / 2) as isize;
        let (w, h) = (mask.width() as isize, mask.height() as isize);
        BinaryMask::from_fn(mask.width(), mask.height(), |row, col| {
            let (r, c) = (row as isize, col as isize);
            let mut acc = all;
            for dr in -k..=k {
                for dc in -k..=k {
                    let (rr, cc) = (r + dr, c + dc);
                    let inside = rr >= 0 && rr < h && cc >= 0 && cc < w;
                    let v = inside && mask.get(rr as usize, cc as usize);
                    if all {
                        acc &= v;
                    } else {
                        acc |= v;
                    }
                }
            }
            acc
        })
        .unwrap()
    }

    fn naive_erode(m: &BinaryMask, side: usize) -> BinaryMask {
        naive(m, side, true)
    }

    fn naive_dilate(m: &BinaryMask, side: usize) -> BinaryMask {
        naive(m, side, false)
    }

    #[test]
    fn se_side_must_be_odd() {
        assert!(StructuringElement::square(4).is_err());
        assert!(StructuringElement::square(0).is_err());
        assert_eq!(StructuringElement::square(5).unwrap().radius(), 2);
    }

    #[test]
    fn erode_full_mask_leaves_center() {
        let mask = BinaryMask::filled(10, 10, true).unwrap();
        let se = StructuringElement::square(5).unwrap();
        let eroded = erode(&mask, se);
        assert_eq!(eroded, naive_erode(&mask, 5));
        // border band of width 2 erased, central 6x6 survives
        let expected =
            BinaryMask::from_fn(10, 10, |r, c| (2..8).contains(&r) && (2..8).contains(&c))
                .unwrap();
        assert_eq!(eroded, expected);
    }

    #[test]
    fn erode_background_and_identity_cases() {
        let se5 = StructuringElement::square(5).unwrap();
        let empty = BinaryMask::filled(8, 6, false).unwrap();
        assert_eq!(erode(&empty, se5), empty);

        let se1 = StructuringElement::square(1).unwrap();
        let mask = BinaryMask::from_art(&["#.#", ".#.", "#.#"]);
        assert_eq!(erode(&mask, se1), mask);
        assert_eq!(dilate(&mask, se1), mask);
    }

    #[test]
    fn dilate_single_pixel_grows_a_square() {
        let mut mask = BinaryMask::filled(11, 11, false).unwrap();
        mask.set(5, 5, true);
        let se = StructuringElement::square(5).unwrap();
        let dilated = dilate(&mask, se);
        assert_eq!(dilated, naive_dilate(&mask, 5));
        let expected =
            BinaryMask::from_fn(11, 11, |r, c| (3..8).contains(&r) && (3..8).contains(&c))
                .unwrap();
        assert_eq!(dilated, expected);

        let full = BinaryMask::filled(7, 7, true).unwrap();
        assert_eq!(dilate(&full, se), full);
    }

    #[test]
    fn open_removes_isolated_pixel() {
        let mut mask = BinaryMask::filled(9, 9, false).unwrap();
        mask.set(4, 4, true);
        let se = StructuringElement::square(5).unwrap();
        assert!(open(&mask, se).is_empty());
    }

    #[test]
    fn close_fills_interior_hole() {
        // 20x20 square with one interior hole, embedded with margin so
        // the border convention does not erode the square itself
        let mask = BinaryMask::from_fn(24, 24, |r, c| {
            let in_square = (2..22).contains(&r) && (2..22).contains(&c);
            in_square && !(r == 11 && c == 11)
        })
        .unwrap();
        let se = StructuringElement::square(5).unwrap();
        let closed = close(&mask, se);
        assert_eq!(closed, naive_erode(&naive_dilate(&mask, 5), 5));
        let solid =
            BinaryMask::from_fn(24, 24, |r, c| (2..22).contains(&r) && (2..22).contains(&c))
                .unwrap();
        assert_eq!(closed, solid);
    }

    // Frozen fixture cross-checked against an external morphology
    // implementation with the same border convention.
    #[test]
    fn blob_fixture_matches_external_reference() {
        let input = BinaryMask::from_art(&[
            "............",
            ".####....#..",
            ".#####......",
            ".######..##.",
            ".######..##.",
            "..####......",
            "..........#.",
            "..###......#",
            "..####.....#",
            "..####......",
            "...........#",
            "............",
        ]);
        let se3 = StructuringElement::square(3).unwrap();
        let expected_erode = BinaryMask::from_art(&[
            "............",
            "............",
            "..##........",
            "..###.......",
            "...##.......",
            "............",
            "............",
            "............",
            "...#........",
            "............",
            "............",
            "............",
        ]);
        let expected_dilate = BinaryMask::from_art(&[
            "######..###.",
            "#######.###.",
            "############",
            "############",
            "############",
            "############",
            ".######..###",
            ".######..###",
            ".######...##",
            ".######...##",
            ".######...##",
            "..........##",
        ]);
        let expected_open = BinaryMask::from_art(&[
            "............",
            ".####.......",
            ".#####......",
            ".#####......",
            ".#####......",
            "..####......",
            "............",
            "..###.......",
            "..###.......",
            "..###.......",
            "............",
            "............",
        ]);
        let expected_close = BinaryMask::from_art(&[
            "............",
            ".####....#..",
            ".#####...#..",
            ".##########.",
            ".##########.",
            "..####....#.",
            "..####....#.",
            "..####......",
            "..####......",
            "..####......",
            "............",
            "............",
        ]);
        assert_eq!(erode(&input, se3), expected_erode);
        assert_eq!(dilate(&input, se3), expected_dilate);
        assert_eq!(open(&input, se3), expected_open);
        assert_eq!(close(&input, se3), expected_close);
    }

    mod proptests {
        use super::*;
        use proptest::prelude::*;

        fn arb_mask(max: usize) -> impl Strategy<Value = BinaryMask> {
            (1usize..=max, 1usize..=max, 0.05f64..0.95).prop_flat_map(|(w, h, density)| {
                proptest::collection::vec(proptest::bool::weighted(density), w * h)
                    .prop_map(move |cells| BinaryMask::new(w, h, cells).unwrap())
            })
        }

        fn arb_side() -> impl Strategy<Value = usize> {
            prop_oneof![Just(1usize), Just(3), Just(5), Just(7)]
        }

        proptest! {
            #[test]
            fn matches_naive_oracle(mask in arb_mask(64), side in arb_side()) {
                let se = StructuringElement::square(side).unwrap();
                prop_assert_eq!(erode(&mask, se), naive_erode(&mask, side));
                prop_assert_eq!(dilate(&mask, se), naive_dilate(&mask, side));
                prop_assert_eq!(open(&mask, se), naive_dilate(&naive_erode(&mask, side), side));
                prop_assert_eq!(close(&mask, se), naive_erode(&naive_dilate(&mask, side), side));
            }

            #[test]
            fn open_is_anti_extensive_and_idempotent(mask in arb_mask(48), side in arb_side()) {
                let se = StructuringElement::square(side).unwrap();
                let opened = open(&mask, se);
                prop_assert!(opened.is_subset_of(&mask));
                prop_assert_eq!(open(&opened, se), opened);
            }

            #[test]
            fn close_is_idempotent(mask in arb_mask(48), side in arb_side()) {
                let se = StructuringElement::square(side).unwrap();
                let closed = close(&mask, se);
                prop_assert_eq!(close(&closed, se), closed.clone());
            }

            // Extensivity of closing needs foreground clear of the image
            // edge: windows crossing the frame erode unconditionally, so
            // border-touching pixels can be lost. Pad and check.
            #[test]
            fn close_is_extensive_away_from_borders(inner in arb_mask(32), side in arb_side()) {
                let margin = side / 2;
                let padded = BinaryMask::from_fn(
                    inner.width() + 2 * margin,
                    inner.height() + 2 * margin,
                    |r, c| {
                        r >= margin
                            && c >= margin
                            && r - margin < inner.height()
                            && c - margin < inner.width()
                            && inner.get(r - margin, c - margin)
                    },
                )
                .unwrap();
                let se = StructuringElement::square(side).unwrap();
                prop_assert!(padded.is_subset_of(&close(&padded, se)));
            }

            // erode(m) == !dilate(!m) holds once a background margin of
            // at least `side` keeps the complement trick clear of the
            // border convention.
            #[test]
            fn duality_on_padded_masks(inner in arb_mask(24), side in arb_side()) {
                let padded = BinaryMask::from_fn(
                    inner.width() + 2 * side,
                    inner.height() + 2 * side,
                    |r, c| {
                        r >= side
                            && c >= side
                            && r - side < inner.height()
                            && c - side < inner.width()
                            && inner.get(r - side, c - side)
                    },
                )
                .unwrap();
                let se = StructuringElement::square(side).unwrap();
                prop_assert_eq!(
                    erode(&padded, se),
                    dilate(&padded.complement(), se).complement()
                );
            }
        }
    }
}
