use serde::{Deserialize, Serialize};

use crate::char_seg::CharConfig;
use crate::line_seg::LineConfig;
use crate::raster::DEFAULT_THRESHOLD;
use crate::word_seg::WordConfig;

/// Order of words (and of characters inside them) in emitted output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReadingOrder {
    /// Left to right, as scanned.
    #[default]
    Image,
    /// Right to left, Arabic reading order.
    Rtl,
}

/// Every tunable of the pipeline. A snapshot is embedded in each output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentConfig {
    pub threshold: u8,
    pub otsu: bool,
    pub line: LineConfig,
    pub word: WordConfig,
    pub chars: CharConfig,
    pub reading_order: ReadingOrder,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            otsu: false,
            line: LineConfig::default(),
            word: WordConfig::default(),
            chars: CharConfig::default(),
            reading_order: ReadingOrder::Image,
        }
    }
}
