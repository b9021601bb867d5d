//! Convex hull and bounding box of a mask's foreground.
//!
//! Pixels are modeled as their integer center points. The rasterized
//! hull contains exactly the pixels whose centers lie inside or on the
//! hull polygon, decided with integer cross products only, so the
//! result is a superset of the input foreground by construction.

use crate::mask::BinaryMask;

/// A pixel-center coordinate, (row, col).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelPoint {
    pub row: usize,
    pub col: usize,
}

/// Inclusive axis-aligned extents of a mask's foreground.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub row_min: usize,
    pub row_max: usize,
    pub col_min: usize,
    pub col_max: usize,
}

impl BoundingBox {
    pub fn contains(&self, row: usize, col: usize) -> bool {
        row >= self.row_min && row <= self.row_max && col >= self.col_min && col <= self.col_max
    }
}

/// Tight inclusive extents of the foreground, or `None` for an empty mask.
pub fn bounding_box(mask: &BinaryMask) -> Option<BoundingBox> {
    let mut bbox: Option<BoundingBox> = None;
    for (row, col) in mask.foreground_points() {
        match bbox.as_mut() {
            None => {
                bbox = Some(BoundingBox {
                    row_min: row,
                    row_max: row,
                    col_min: col,
                    col_max: col,
                })
            }
            Some(b) => {
                b.row_min = b.row_min.min(row);
                b.row_max = b.row_max.max(row);
                b.col_min = b.col_min.min(col);
                b.col_max = b.col_max.max(col);
            }
        }
    }
    bbox
}

/// Mask whose foreground is exactly the bounding-box region; an empty
/// mask is returned unchanged.
pub fn bounding_box_mask(mask: &BinaryMask) -> BinaryMask {
    match bounding_box(mask) {
        None => mask.clone(),
        Some(b) => BinaryMask::from_fn(mask.width(), mask.height(), |r, c| b.contains(r, c))
            .expect("dimensions preserved"),
    }
}

/// Vertices of the convex hull of the foreground pixel centers, in
/// counter-clockwise polygon order (mathematical orientation, x = col,
/// y = row). Collinear foregrounds yield the two extreme points, a
/// single pixel yields one.
pub fn convex_hull_points(mask: &BinaryMask) -> Vec<PixelPoint> {
    let points: Vec<(i64, i64)> = mask
        .foreground_points()
        .map(|(r, c)| (c as i64, r as i64))
        .collect();
    monotone_chain(points)
        .into_iter()
        .map(|(x, y)| PixelPoint {
            row: y as usize,
            col: x as usize,
        })
        .collect()
}

/// Fills the convex hull of the foreground: every pixel whose center is
/// inside or on the hull polygon becomes foreground. An empty mask is
/// returned unchanged.
pub fn convex_hull_mask(mask: &BinaryMask) -> BinaryMask {
    let hull: Vec<(i64, i64)> = convex_hull_points(mask)
        .iter()
        .map(|p| (p.col as i64, p.row as i64))
        .collect();
    if hull.is_empty() {
        return mask.clone();
    }

    let min_x = hull.iter().map(|p| p.0).min().unwrap();
    let max_x = hull.iter().map(|p| p.0).max().unwrap();
    let min_y = hull.iter().map(|p| p.1).min().unwrap();
    let max_y = hull.iter().map(|p| p.1).max().unwrap();

    let mut out = BinaryMask::filled(mask.width(), mask.height(), false).expect("valid dims");
    // The hull is convex, so its intersection with a pixel row is one
    // contiguous span; each edge tightens the span with an exact
    // floor/ceil division.
    for r in min_y..=max_y {
        let mut lo = min_x;
        let mut hi = max_x;
        let mut empty = false;
        for i in 0..hull.len() {
            let (ax, ay) = hull[i];
            let (bx, by) = hull[(i + 1) % hull.len()];
            let (dx, dy) = (bx - ax, by - ay);
            // inside-or-on means dx*(r - ay) - dy*(px - ax) >= 0
            let t = dx * (r - ay) + dy * ax;
            if dy > 0 {
                hi = hi.min(floor_div(t, dy));
            } else if dy < 0 {
                lo = lo.max(ceil_div(-t, -dy));
            } else if dx * (r - ay) < 0 {
                empty = true;
                break;
            }
        }
        if empty || lo > hi {
            continue;
        }
        for c in lo..=hi {
            out.set(r as usize, c as usize, true);
        }
    }
    out
}

fn floor_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

// Andrew's monotone chain; popping on cross <= 0 keeps collinear
// interior points off the hull. Returns counter-clockwise order.
fn monotone_chain(mut points: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    points.sort_unstable();
    points.dedup();
    let n = points.len();
    if n <= 2 {
        return points;
    }
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * n);
    for &p in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len();
    for &p in points.iter().rev().skip(1) {
        while hull.len() > lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}
