//! Connected parts of a line and their grouping into words.
//!
//! Parts are found scanning from the left edge of the line to the right.
//! Clusters are reported in that same image order; reading order (right to
//! left for Arabic) is applied by the caller when serializing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Band;
use crate::profile::vertical_profile;
use crate::raster::InkImage;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordConfig {
    /// Fixed word-gap threshold in columns; overrides `gap_ratio`.
    pub gap_px: Option<usize>,
    /// Word-gap threshold as a fraction of the line height.
    pub gap_ratio: f64,
}

impl Default for WordConfig {
    fn default() -> Self {
        Self {
            gap_px: None,
            gap_ratio: 0.3,
        }
    }
}

impl WordConfig {
    pub fn gap_threshold(&self, line_height: usize) -> f64 {
        match self.gap_px {
            Some(px) => px as f64,
            None => self.gap_ratio * line_height as f64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConnectedPart {
    /// Line-local columns.
    pub x_band: Band,
    pub image: InkImage,
}

#[derive(Debug, Clone)]
pub struct WordCluster {
    pub parts: Vec<ConnectedPart>,
    pub x_band: Band,
}

/// Maximal runs of inked columns, left to right, each cropped to the full
/// line height.
pub fn connected_parts(line: &InkImage) -> Result<Vec<ConnectedPart>> {
    if !line.has_ink() {
        return Err(Error::EmptyLine);
    }
    let profile = vertical_profile(line);
    let mut parts = Vec::new();
    let mut start = None;
    for i in 0..=profile.len() {
        let inked = profile.values.get(i).is_some_and(|&v| v > 0);
        match (inked, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                let x_band = Band::new(s, i - 1);
                parts.push(ConnectedPart {
                    x_band,
                    image: line.crop(x_band, Band::full(line.height()))?,
                });
                start = None;
            }
            _ => {}
        }
    }
    Ok(parts)
}

/// Group consecutive parts whose blank gap is below `gap_threshold`.
pub fn cluster_words(parts: Vec<ConnectedPart>, gap_threshold: f64) -> Vec<WordCluster> {
    let mut clusters: Vec<WordCluster> = Vec::new();
    for part in parts {
        match clusters.last_mut() {
            Some(c) if ((part.x_band.start - c.x_band.end - 1) as f64) < gap_threshold => {
                c.x_band = c.x_band.union(&part.x_band);
                c.parts.push(part);
            }
            _ => clusters.push(WordCluster {
                x_band: part.x_band,
                parts: vec![part],
            }),
        }
    }
    clusters
}
