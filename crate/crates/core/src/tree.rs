//! Serialized segmentation result: page, lines, words, characters.
//!
//! All bands and boxes are page coordinates. JSON is emitted with two-space
//! indentation and a fixed key order, so identical inputs give identical
//! bytes.

use serde::{Deserialize, Serialize};

use crate::char_seg::{CutSource, VerdictReason};
use crate::config::{ReadingOrder, SegmentConfig};
use crate::error::Result;
use crate::geom::{Band, Rect};
use crate::line_seg::BaselineBand;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentTree {
    pub page: PageInfo,
    pub lines: Vec<LineNode>,
    pub config: SegmentConfig,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageInfo {
    pub width: usize,
    pub height: usize,
    pub source: Option<String>,
    /// Binarization threshold actually applied (differs from the
    /// configured one in Otsu mode).
    pub threshold: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineNode {
    pub y_band: Band,
    pub baseline: BaselineBand,
    pub words: Vec<WordNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordNode {
    pub x_band: Band,
    pub parts: Vec<Band>,
    pub chars: Vec<CharNode>,
    /// Every candidate connection pulse with its verdict; cut provenance
    /// refers to these ids.
    pub pulses: Vec<PulseNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharNode {
    pub x_band: Band,
    #[serde(rename = "box")]
    pub bbox: Rect,
    pub cut_left: CutSource,
    pub cut_right: CutSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseNode {
    pub id: usize,
    pub x_band: Band,
    pub mean_amplitude: f64,
    pub verdict: VerdictReason,
    /// Rows of the pulse sub-image's single ink run, if it has exactly one.
    pub run: Option<Band>,
}

impl SegmentTree {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reorder words, parts and characters for output. Pulse lists stay in
    /// image order since cut provenance addresses them by id.
    pub fn in_reading_order(mut self, order: ReadingOrder) -> Self {
        if order == ReadingOrder::Rtl {
            for line in &mut self.lines {
                line.words.reverse();
                for word in &mut line.words {
                    word.parts.reverse();
                    word.chars.reverse();
                }
            }
        }
        self
    }

    pub fn word_count(&self) -> usize {
        self.lines.iter().map(|l| l.words.len()).sum()
    }

    pub fn char_count(&self) -> usize {
        self.lines.iter().flat_map(|l| &l.words).map(|w| w.chars.len()).sum()
    }
}
