//! Synthetic pages with exact ground truth, and segmentation scoring.

mod generate;
mod metrics;

pub use generate::{generate_synthetic_page, CountRange, SyntheticSpec};
pub use metrics::{evaluate, match_bands, EvalReport, LevelCounts};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::Band;

/// Expected segmentation of a page. Field names follow [`crate::tree::SegmentTree`]
/// so truth and prediction files line up in a diff.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub page: TruthPage,
    pub lines: Vec<TruthLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthPage {
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthLine {
    pub y_band: Band,
    pub words: Vec<TruthWord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthWord {
    pub x_band: Band,
    pub parts: Vec<Band>,
    pub chars: Vec<TruthChar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthChar {
    pub x_band: Band,
}

impl GroundTruth {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn word_count(&self) -> usize {
        self.lines.iter().map(|l| l.words.len()).sum()
    }

    pub fn char_count(&self) -> usize {
        self.lines.iter().flat_map(|l| &l.words).map(|w| w.chars.len()).sum()
    }
}
