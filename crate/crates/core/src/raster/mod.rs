//! Pixel substrate: grayscale and ink-mask rasters, binarization,
//! cropping and connected-component labeling.

mod components;
pub mod io;

pub use components::{connected_components, label_components, ComponentStats, Connectivity, Labeling};
pub use io::{encode_pgm, load_image, read_image_bytes, write_pgm};

use crate::error::{Error, Result};
use crate::geom::{Band, Rect};

/// Default fixed binarization threshold.
pub const DEFAULT_THRESHOLD: u8 = 128;

/// Row-major 8-bit raster where 0 is black ink and 255 is white paper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::InvalidDimensions {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Self { width, height, pixels })
    }

    /// A `width` x `height` image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }

    /// Paint the inclusive rectangle with `value`.
    pub fn fill_rect(&mut self, rect: Rect, value: u8) {
        for y in rect.y0..=rect.y1 {
            let row = y * self.width;
            self.pixels[row + rect.x0..=row + rect.x1].fill(value);
        }
    }
}

/// Binarized raster. `ink[y * width + x]` is true for foreground pixels.
///
/// The grayscale image it was binarized from travels with it so that
/// later stages can cut the original pixels, and `origin` records where
/// the top-left pixel sits on the page after any number of crops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InkImage {
    width: usize,
    height: usize,
    ink: Vec<bool>,
    source: GrayImage,
    origin: (usize, usize),
}

impl InkImage {
    /// Build directly from a mask; the source view renders ink as 0 and
    /// background as 255.
    pub fn from_mask(width: usize, height: usize, ink: Vec<bool>) -> Result<Self> {
        let pixels = ink.iter().map(|&i| if i { 0 } else { 255 }).collect();
        let source = GrayImage::new(width, height, pixels)?;
        Ok(Self {
            width,
            height,
            ink,
            source,
            origin: (0, 0),
        })
    }

    /// Parse an ASCII-art mask: `#` is ink, anything else background.
    /// Every row must have the same length.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut ink = Vec::with_capacity(width * height);
        for row in rows {
            assert_eq!(row.chars().count(), width, "ragged ascii mask");
            ink.extend(row.chars().map(|c| c == '#'));
        }
        Self::from_mask(width, height, ink).expect("ascii mask must be non-empty")
    }

    /// An all-background image with the same geometry and origin.
    pub fn blank_like(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            ink: vec![false; self.ink.len()],
            source: GrayImage::filled(self.width, self.height, 255),
            origin: self.origin,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn mask(&self) -> &[bool] {
        &self.ink
    }

    pub fn source(&self) -> &GrayImage {
        &self.source
    }

    /// Page coordinates of this image's top-left pixel.
    pub fn origin(&self) -> (usize, usize) {
        self.origin
    }

    pub fn is_ink(&self, x: usize, y: usize) -> bool {
        self.ink[y * self.width + x]
    }

    pub fn ink_count(&self) -> usize {
        self.ink.iter().filter(|&&i| i).count()
    }

    pub fn has_ink(&self) -> bool {
        self.ink.iter().any(|&i| i)
    }

    pub fn full_rect(&self) -> Rect {
        Rect::new(0, 0, self.width - 1, self.height - 1)
    }

    /// Sub-image covering `x_band` x `y_band`. Both ink and source pixels
    /// are copied; the origin accumulates the crop offset.
    pub fn crop(&self, x_band: Band, y_band: Band) -> Result<InkImage> {
        check_band(x_band, self.width)?;
        check_band(y_band, self.height)?;
        let (w, h) = (x_band.width(), y_band.width());
        let mut ink = Vec::with_capacity(w * h);
        let mut pixels = Vec::with_capacity(w * h);
        for y in y_band.start..=y_band.end {
            let row = y * self.width;
            ink.extend_from_slice(&self.ink[row + x_band.start..=row + x_band.end]);
            pixels.extend_from_slice(&self.source.pixels[row + x_band.start..=row + x_band.end]);
        }
        Ok(InkImage {
            width: w,
            height: h,
            ink,
            source: GrayImage::new(w, h, pixels)?,
            origin: (self.origin.0 + x_band.start, self.origin.1 + y_band.start),
        })
    }

    /// Write `patch` back at its origin (relative to this image's origin).
    /// Pixels of `patch` replace the ones underneath; the rest are kept.
    pub fn paste(&self, patch: &InkImage) -> Result<InkImage> {
        let dx = patch.origin.0.checked_sub(self.origin.0);
        let dy = patch.origin.1.checked_sub(self.origin.1);
        let (Some(dx), Some(dy)) = (dx, dy) else {
            return Err(Error::BandOutOfBounds {
                band: Band::new(patch.origin.0, patch.origin.0 + patch.width - 1),
                limit: self.width,
            });
        };
        check_band(Band::new(dx, dx + patch.width - 1), self.width)?;
        check_band(Band::new(dy, dy + patch.height - 1), self.height)?;
        let mut out = self.clone();
        for y in 0..patch.height {
            for x in 0..patch.width {
                let dst = (y + dy) * self.width + x + dx;
                let src = y * patch.width + x;
                out.ink[dst] = patch.ink[src];
                out.source.pixels[dst] = patch.source.pixels[src];
            }
        }
        Ok(out)
    }

    /// Copy with `keep(x, y)` deciding which ink survives. Cleared pixels
    /// become white in the source view.
    pub fn retain(&self, mut keep: impl FnMut(usize, usize) -> bool) -> InkImage {
        let mut out = self.clone();
        for y in 0..self.height {
            for x in 0..self.width {
                let idx = y * self.width + x;
                if out.ink[idx] && !keep(x, y) {
                    out.ink[idx] = false;
                    out.source.pixels[idx] = 255;
                }
            }
        }
        out
    }
}

fn check_band(band: Band, limit: usize) -> Result<()> {
    if band.start > band.end || band.end >= limit {
        return Err(Error::BandOutOfBounds { band, limit });
    }
    Ok(())
}

/// Classify every pixel darker than `threshold` as ink.
pub fn binarize(img: &GrayImage, threshold: u8) -> InkImage {
    InkImage {
        width: img.width,
        height: img.height,
        ink: img.pixels.iter().map(|&p| p < threshold).collect(),
        source: img.clone(),
        origin: (0, 0),
    }
}

/// Otsu's threshold: the value `t` maximizing the between-class variance
/// of the split `{p < t}` / `{p >= t}`. Ties resolve to the smallest `t`,
/// so a single-class image yields 0.
pub fn otsu_threshold(img: &GrayImage) -> u8 {
    let mut hist = [0u64; 256];
    for &p in &img.pixels {
        hist[p as usize] += 1;
    }
    let total = img.pixels.len() as f64;
    let sum_all: f64 = hist.iter().enumerate().map(|(v, &n)| v as f64 * n as f64).sum();

    let mut best_t = 0u8;
    let mut best_var = 0.0f64;
    let mut count_below = 0u64;
    let mut sum_below = 0.0f64;
    for t in 1..=255usize {
        count_below += hist[t - 1];
        sum_below += (t - 1) as f64 * hist[t - 1] as f64;
        let w0 = count_below as f64;
        let w1 = total - w0;
        if count_below == 0 || w1 == 0.0 {
            continue;
        }
        let mu0 = sum_below / w0;
        let mu1 = (sum_all - sum_below) / w1;
        let var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if var > best_var {
            best_var = var;
            best_t = t as u8;
        }
    }
    best_t
}

/// Clear ink inside `rect`; the source view is whitened there as well.
pub fn erase_box(img: &InkImage, rect: Rect) -> Result<InkImage> {
    check_band(rect.x_band(), img.width)?;
    check_band(rect.y_band(), img.height)?;
    let mut out = img.clone();
    for y in rect.y0..=rect.y1 {
        for x in rect.x0..=rect.x1 {
            let idx = y * img.width + x;
            out.ink[idx] = false;
            out.source.pixels[idx] = 255;
        }
    }
    Ok(out)
}
