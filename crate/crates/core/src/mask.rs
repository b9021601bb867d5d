//! Binary mask data model, PNG codec, and dataset ingestion.
//!
//! A mask is a row-major grid of booleans, `true` marking lesion
//! (foreground) pixels. Mask files are PNGs; any pixel whose luminance
//! exceeds 127 on the 0-255 scale counts as foreground, so the usual
//! 0/255 ground-truth files decode losslessly while slightly off-scale
//! pixels (compression artifacts) are tolerated.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use image::{GrayImage, ImageFormat, Luma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Luminance strictly above this value decodes as foreground.
pub const FOREGROUND_THRESHOLD: u8 = 127;

/// A 2-D boolean grid representing one segmentation annotation.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

impl BinaryMask {
    /// Builds a mask from row-major cells. The buffer length must equal
    /// `width * height` and both dimensions must be at least 1.
    pub fn new(width: usize, height: usize, cells: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        let expected = width * height;
        if cells.len() != expected {
            return Err(Error::CellCountMismatch {
                expected,
                actual: cells.len(),
            });
        }
        Ok(Self {
            width,
            height,
            cells,
        })
    }

    /// All-background (or all-foreground) mask of the given dimensions.
    pub fn filled(width: usize, height: usize, value: bool) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds a mask by evaluating `f(row, col)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut cells = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                cells.push(f(row, col));
            }
        }
        Self::new(width, height, cells)
    }

    /// Parses ASCII art rows where `#` is foreground and anything else
    /// background. All rows must have equal length. Handy for fixtures.
    ///
    /// # Panics
    /// Panics on empty or ragged input.
    pub fn from_art(rows: &[&str]) -> Self {
        assert!(!rows.is_empty(), "mask art needs at least one row");
        let width = rows[0].chars().count();
        let mut cells = Vec::with_capacity(width * rows.len());
        for row in rows {
            assert_eq!(row.chars().count(), width, "ragged mask art");
            cells.extend(row.chars().map(|c| c == '#'));
        }
        Self::new(width, rows.len(), cells).expect("art dimensions are valid")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// True when the mask has no foreground pixels.
    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|&c| !c)
    }

    /// Pixel at (row, col); panics out of bounds.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.height && col < self.width);
        self.cells[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        debug_assert!(row < self.height && col < self.width);
        self.cells[row * self.width + col] = value;
    }

    /// Row-major cell buffer.
    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn count_foreground(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// (row, col) coordinates of every foreground pixel, row-major order.
    pub fn foreground_points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let width = self.width;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(move |(i, _)| (i / width, i % width))
    }

    pub fn same_dimensions(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn complement(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            cells: self.cells.iter().map(|&c| !c).collect(),
        }
    }

    /// True when every foreground pixel of `self` is foreground in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.same_dimensions(other)
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(&a, &b)| !a || b)
    }
}

impl fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMask {}x{}", self.width, self.height)?;
        for row in 0..self.height {
            for col in 0..self.width {
                f.write_str(if self.get(row, col) { "#" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Decodes a PNG into a mask: a pixel is foreground iff its luminance
/// exceeds [`FOREGROUND_THRESHOLD`].
pub fn decode_mask(bytes: &[u8]) -> Result<BinaryMask> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)?;
    let gray = img.to_luma8();
    let (width, height) = (gray.width() as usize, gray.height() as usize);
    if width == 0 || height == 0 {
        return Err(Error::InvalidDimensions { width, height });
    }
    let cells = gray
        .pixels()
        .map(|Luma([v])| *v > FOREGROUND_THRESHOLD)
        .collect();
    BinaryMask::new(width, height, cells)
}

/// Encodes a mask as an 8-bit grayscale PNG, foreground 255, background 0.
pub fn encode_mask(mask: &BinaryMask) -> Result<Vec<u8>> {
    let mut img = GrayImage::new(mask.width() as u32, mask.height() as u32);
    for (i, pixel) in img.pixels_mut().enumerate() {
        *pixel = Luma([if mask.cells[i] { 255 } else { 0 }]);
    }
    let mut bytes = Vec::new();
    img.write_to(&mut Cursor::new(&mut bytes), ImageFormat::Png)?;
    Ok(bytes)
}

/// Reads and decodes a mask file, attaching the path to any failure.
pub fn read_mask(path: &Path) -> Result<BinaryMask> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_mask(&bytes).map_err(|e| Error::ReadMask {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Encodes and writes a mask file.
pub fn write_mask(path: &Path, mask: &BinaryMask) -> Result<()> {
    let bytes = encode_mask(mask)?;
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// A lesion identifier plus its annotations. All masks share dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct LesionGroup {
    lesion_id: String,
    masks: Vec<BinaryMask>,
}

impl LesionGroup {
    pub fn new(lesion_id: impl Into<String>, masks: Vec<BinaryMask>) -> Result<Self> {
        let lesion_id = lesion_id.into();
        if lesion_id.is_empty() || masks.is_empty() {
            return Err(Error::EmptyGroup);
        }
        if masks.iter().any(|m| !m.same_dimensions(&masks[0])) {
            return Err(Error::GroupDimensionMismatch);
        }
        Ok(Self { lesion_id, masks })
    }

    pub fn lesion_id(&self) -> &str {
        &self.lesion_id
    }

    pub fn masks(&self) -> &[BinaryMask] {
        &self.masks
    }

    pub fn annotation_count(&self) -> usize {
        self.masks.len()
    }
}

/// Lesion counts bucketed by how many annotations each lesion has.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub one: usize,
    pub two: usize,
    pub three: usize,
    pub four_plus: usize,
    pub total: usize,
}

impl DatasetSummary {
    /// Rows for the annotation-count table, in display order.
    pub fn buckets(&self) -> [(&'static str, usize); 4] {
        [
            ("1", self.one),
            ("2", self.two),
            ("3", self.three),
            ("4+", self.four_plus),
        ]
    }
}

/// Buckets lesion groups by annotation count (1, 2, 3, 4+).
pub fn summarize_dataset(groups: &[LesionGroup]) -> DatasetSummary {
    let mut summary = DatasetSummary::default();
    for group in groups {
        match group.annotation_count() {
            0 => unreachable!("groups hold at least one mask"),
            1 => summary.one += 1,
            2 => summary.two += 1,
            3 => summary.three += 1,
            _ => summary.four_plus += 1,
        }
    }
    summary.total = groups.len();
    summary
}

/// A group that could not be ingested; the run continues without it.
#[derive(Debug, Clone)]
pub struct GroupRejection {
    pub lesion_id: String,
    pub paths: Vec<PathBuf>,
    pub reason: String,
}

impl fmt::Display for GroupRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lesion {}: {} [", self.lesion_id, self.reason)?;
        for (i, p) in self.paths.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", p.display())?;
        }
        f.write_str("]")
    }
}

/// Result of [`ingest_dataset`]: accepted groups plus per-group rejections.
#[derive(Debug)]
pub struct IngestOutcome {
    pub groups: Vec<LesionGroup>,
    pub rejections: Vec<GroupRejection>,
}

/// Name of the manifest a source directory may carry.
pub const MANIFEST_FILE_NAME: &str = "manifest.csv";

const SEGMENTATION_MARKER: &str = "_segmentation";

/// Loads a dataset of mask files into lesion groups.
///
/// `source` is either a manifest CSV with header `lesion_id,mask_path`
/// (paths resolved relative to the manifest's directory) or a directory
/// whose files match `<lesion_id>_segmentation*.png`. A directory that
/// contains a `manifest.csv` is read through the manifest.
///
/// Groups are sorted by lesion id and masks within a group by file path.
/// A group whose masks disagree on dimensions (or fail to decode) is
/// rejected and reported in the outcome; a source yielding no masks at
/// all is an error.
pub fn ingest_dataset(source: &Path) -> Result<IngestOutcome> {
    let entries = if source.is_dir() {
        let manifest = source.join(MANIFEST_FILE_NAME);
        if manifest.is_file() {
            manifest_entries(&manifest)?
        } else {
            directory_entries(source)?
        }
    } else {
        manifest_entries(source)?
    };
    if entries.is_empty() {
        return Err(Error::EmptySource {
            path: source.to_path_buf(),
        });
    }

    let mut by_lesion: BTreeMap<String, Vec<PathBuf>> = BTreeMap::new();
    for (lesion_id, path) in entries {
        by_lesion.entry(lesion_id).or_default().push(path);
    }

    let loaded: Vec<_> = by_lesion
        .into_par_iter()
        .map(|(lesion_id, mut paths)| {
            paths.sort();
            let masks: Vec<Result<BinaryMask>> = paths.par_iter().map(|p| read_mask(p)).collect();
            (lesion_id, paths, masks)
        })
        .collect();

    let mut groups = Vec::new();
    let mut rejections = Vec::new();
    for (lesion_id, paths, masks) in loaded {
        match masks.into_iter().collect::<Result<Vec<_>>>() {
            Ok(masks) => {
                if masks.iter().all(|m| m.same_dimensions(&masks[0])) {
                    groups.push(LesionGroup { lesion_id, masks });
                } else {
                    let dims = masks
                        .iter()
                        .map(|m| format!("{}x{}", m.width(), m.height()))
                        .collect::<Vec<_>>()
                        .join(" vs ");
                    rejections.push(GroupRejection {
                        lesion_id,
                        paths,
                        reason: format!("mask dimensions differ ({dims})"),
                    });
                }
            }
            Err(e) => rejections.push(GroupRejection {
                lesion_id,
                paths,
                reason: e.to_string(),
            }),
        }
    }

    Ok(IngestOutcome { groups, rejections })
}

fn manifest_entries(path: &Path) -> Result<Vec<(String, PathBuf)>> {
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["lesion_id", "mask_path"] {
        return Err(Error::Manifest {
            path: path.to_path_buf(),
            message: format!(
                "expected header `lesion_id,mask_path`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let lesion_id = record.get(0).unwrap_or("").to_string();
        let mask_path = record.get(1).unwrap_or("");
        if lesion_id.is_empty() || mask_path.is_empty() {
            return Err(Error::Manifest {
                path: path.to_path_buf(),
                message: format!("row {:?} is missing a field", record.position().map(|p| p.line())),
            });
        }
        entries.push((lesion_id, base.join(mask_path)));
    }
    Ok(entries)
}

fn directory_entries(dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    let mut entries = Vec::new();
    let read_dir = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for entry in read_dir {
        let entry = entry.map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        if !name.ends_with(".png") {
            continue;
        }
        let Some(marker) = name.find(SEGMENTATION_MARKER) else {
            continue;
        };
        if marker == 0 {
            continue;
        }
        entries.push((name[..marker].to_string(), path));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn png_from_values(width: u32, height: u32, values: &[u8]) -> Vec<u8> {
        let img = GrayImage::from_raw(width, height, values.to_vec()).unwrap();
        let mut bytes = Vec::new();
        img.write_to(&mut Cursor::new(&mut bytes), ImageFormat::Png)
            .unwrap();
        bytes
    }

    #[test]
    fn decode_thresholds_at_127() {
        let bytes = png_from_values(2, 2, &[255, 255, 0, 0]);
        let mask = decode_mask(&bytes).unwrap();
        assert_eq!(mask, BinaryMask::from_art(&["##", ".."]));

        let bytes = png_from_values(1, 1, &[0]);
        assert_eq!(decode_mask(&bytes).unwrap(), BinaryMask::from_art(&["."]));

        // 127 stays background, 128 flips to foreground
        let bytes = png_from_values(3, 1, &[127, 128, 200]);
        let mask = decode_mask(&bytes).unwrap();
        assert_eq!(mask.cells(), &[false, true, true]);
    }

    #[test]
    fn decode_rejects_garbage() {
        assert!(matches!(
            decode_mask(b"not a png"),
            Err(Error::Decode(_))
        ));
    }

    #[test]
    fn encode_produces_0_255_grayscale() {
        let mask = BinaryMask::from_art(&["##", "##"]);
        let bytes = encode_mask(&mask).unwrap();
        let img = image::load_from_memory(&bytes).unwrap().to_luma8();
        assert!(img.pixels().all(|Luma([v])| *v == 255));
    }

    #[test]
    fn encode_decode_round_trip_is_idempotent() {
        // encode(decode(file)) of a 0/255 file decodes to the same mask
        let bytes = png_from_values(3, 2, &[0, 255, 0, 255, 255, 0]);
        let once = decode_mask(&bytes).unwrap();
        let twice = decode_mask(&encode_mask(&once).unwrap()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn summarize_buckets_annotation_counts() {
        let mask = BinaryMask::filled(2, 2, false).unwrap();
        let group = |id: &str, n: usize| {
            LesionGroup::new(id, vec![mask.clone(); n]).unwrap()
        };
        let groups = vec![group("a", 2), group("b", 2), group("c", 5)];
        let summary = summarize_dataset(&groups);
        assert_eq!(
            summary,
            DatasetSummary {
                one: 0,
                two: 2,
                three: 0,
                four_plus: 1,
                total: 3
            }
        );
        assert_eq!(summarize_dataset(&[]), DatasetSummary::default());
    }

    #[test]
    fn group_requires_uniform_dimensions() {
        let a = BinaryMask::filled(10, 10, true).unwrap();
        let b = BinaryMask::filled(12, 12, true).unwrap();
        assert!(matches!(
            LesionGroup::new("x", vec![a, b]),
            Err(Error::GroupDimensionMismatch)
        ));
    }

    #[test]
    fn mask_constructor_validates() {
        assert!(matches!(
            BinaryMask::new(0, 4, vec![]),
            Err(Error::InvalidDimensions { .. })
        ));
        assert!(matches!(
            BinaryMask::new(2, 2, vec![true; 3]),
            Err(Error::CellCountMismatch { .. })
        ));
    }

    mod proptests {
        use super::*;
        use proptest::prelude::*;

        fn arb_mask() -> impl Strategy<Value = BinaryMask> {
            (1usize..=64, 1usize..=64)
                .prop_flat_map(|(w, h)| {
                    proptest::collection::vec(any::<bool>(), w * h)
                        .prop_map(move |cells| BinaryMask::new(w, h, cells).unwrap())
                })
        }

        proptest! {
            #[test]
            fn decode_encode_round_trip(mask in arb_mask()) {
                let bytes = encode_mask(&mask).unwrap();
                prop_assert_eq!(decode_mask(&bytes).unwrap(), mask);
            }
        }
    }
}
