//! Segmentation of printed Arabic page images into text lines, words (or
//! sub-words) and characters using projection profiles.
//!
//! The stages mirror the structure of the crate:
//!
//! * [`raster`]: grayscale/ink rasters, PGM and PNG I/O, binarization,
//!   connected components;
//! * [`profile`]: horizontal and vertical projection profiles and the
//!   one-dimensional tools run over them;
//! * [`line_seg`]: text lines and their baseline band;
//! * [`word_seg`]: connected parts and word clusters;
//! * [`char_seg`]: dot removal, connection pulses, pulse validation and
//!   character cuts, plus the page-level orchestration;
//! * [`evalsynth`]: synthetic pages with exact ground truth and the
//!   accuracy metrics used to score a segmentation.
//!
//! Coordinates: `x` is the column (rightward), `y` the row (downward).

pub mod char_seg;
pub mod cli;
pub mod config;
pub mod error;
pub mod evalsynth;
pub mod geom;
pub mod line_seg;
pub mod profile;
pub mod raster;
pub mod tree;
pub mod word_seg;

pub use char_seg::{segment_page, CharBox, CharConfig, CutSource, PulseVerdict, VerdictReason};
pub use config::{ReadingOrder, SegmentConfig};
pub use error::{Error, Result};
pub use geom::{Band, Rect};
pub use line_seg::{BaselineBand, LineConfig, LineSegment};
pub use profile::{Profile, Pulse};
pub use raster::{GrayImage, InkImage};
pub use tree::SegmentTree;
pub use word_seg::WordConfig;

/// Tool name and version recorded in every output.
pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
