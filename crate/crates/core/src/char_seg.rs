//! Character segmentation of a word or sub-word image.
//!
//! The pipeline per word:
//!
//! 1. erase dots and Hamza (small components clear of the baseline band)
//!    to get the no-points image;
//! 2. run the constant-amplitude filter over its vertical profile, giving
//!    a train of candidate connection pulses;
//! 3. cut the no-points image to each pulse's columns and keep the pulse
//!    only if the cut's horizontal profile is a single run (two step
//!    edges) that holds the line's peak row and stays inside the baseline
//!    band;
//! 4. cut the original image, dots included, at the midpoint column of
//!    every accepted pulse.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SegmentConfig;
use crate::error::{Error, Result};
use crate::geom::{Band, Rect};
use crate::line_seg::{segment_lines, BaselineBand};
use crate::profile::{horizontal_profile, low_variation_runs, step_edges, vertical_profile, Pulse, INK_WEIGHT};
use crate::raster::{binarize, label_components, otsu_threshold, ComponentStats, Connectivity, GrayImage, InkImage};
use crate::tree::{CharNode, LineNode, PageInfo, PulseNode, SegmentTree, WordNode};
use crate::word_seg::{cluster_words, connected_parts};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharConfig {
    /// Largest spread (`max - min`) a connection pulse may have.
    pub epsilon: u64,
    /// Shortest connection pulse, in columns.
    pub min_len: usize,
    /// Fixed diacritic area bound; overrides `diacritic_area_factor`.
    pub max_diacritic_area: Option<usize>,
    /// Diacritic area bound as a multiple of the squared baseline height.
    pub diacritic_area_factor: f64,
}

impl Default for CharConfig {
    fn default() -> Self {
        Self {
            epsilon: INK_WEIGHT,
            min_len: 2,
            max_diacritic_area: None,
            diacritic_area_factor: 1.5,
        }
    }
}

impl CharConfig {
    pub fn diacritic_area_limit(&self, baseline: &BaselineBand) -> usize {
        self.max_diacritic_area.unwrap_or_else(|| {
            let h = baseline.height() as f64;
            (self.diacritic_area_factor * h * h).floor() as usize
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictReason {
    Accepted,
    EdgesNotTwo,
    OutsideBaseline,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseVerdict {
    pub pulse: Pulse,
    pub accepted: bool,
    pub reason: VerdictReason,
    /// Rows of the single ink run in the pulse sub-image, when there is one.
    pub run: Option<Band>,
}

/// What closes a character slab on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutSource {
    WordEdge,
    /// Index into the word's pulse list.
    Pulse(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharBox {
    /// Page columns of the slab.
    pub x_band: Band,
    /// Page-coordinate box around the ink assigned to this character.
    pub bbox: Rect,
    pub cut_left: CutSource,
    pub cut_right: CutSource,
    /// Ink pixels assigned to this character.
    pub ink: usize,
}

/// Everything computed for one word.
#[derive(Debug, Clone)]
pub struct WordAnalysis {
    pub no_points: InkImage,
    /// Components erased as dots or Hamza, in word-local coordinates.
    pub diacritics: Vec<ComponentStats>,
    /// One verdict per candidate pulse, left to right. Pulse bands are word-local.
    pub verdicts: Vec<PulseVerdict>,
    pub chars: Vec<CharBox>,
}

fn is_diacritic(c: &ComponentStats, baseline: &BaselineBand, max_area: usize) -> bool {
    !c.bbox.y_band().intersects(&baseline.rows()) && c.area <= max_area
}

/// Labels of the components treated as dots or Hamza.
fn diacritic_labels(
    word: &InkImage,
    baseline: &BaselineBand,
    cfg: &CharConfig,
) -> (crate::raster::Labeling, Vec<bool>) {
    let labeling = label_components(word, Connectivity::Eight);
    let max_area = cfg.diacritic_area_limit(baseline);
    let mut flags = vec![false; labeling.components.len() + 1];
    for c in &labeling.components {
        flags[c.label as usize] = is_diacritic(c, baseline, max_area);
    }
    (labeling, flags)
}

/// The no-points image: every small component lying entirely above or
/// below the baseline band is erased.
pub fn strip_diacritics(word: &InkImage, baseline: &BaselineBand, cfg: &CharConfig) -> Result<InkImage> {
    if !word.has_ink() {
        return Err(Error::EmptyWord);
    }
    let (labeling, flags) = diacritic_labels(word, baseline, cfg);
    Ok(word.retain(|x, y| !flags[labeling.label_at(x, y) as usize]))
}

/// Candidate connections: constant-amplitude runs of the vertical profile.
pub fn connection_pulses(no_points_word: &InkImage, cfg: &CharConfig) -> Vec<Pulse> {
    low_variation_runs(&vertical_profile(no_points_word), cfg.epsilon, cfg.min_len)
}

/// Two-edge baseline test for one candidate pulse.
pub fn validate_pulse(word: &InkImage, pulse: &Pulse, baseline: &BaselineBand) -> Result<PulseVerdict> {
    let sub = word.crop(pulse.band, Band::full(word.height()))?;
    let edges = step_edges(&horizontal_profile(&sub));
    let verdict = |reason, run| PulseVerdict {
        pulse: *pulse,
        accepted: reason == VerdictReason::Accepted,
        reason,
        run,
    };
    if edges.len() != 2 {
        return Ok(verdict(VerdictReason::EdgesNotTwo, None));
    }
    let run = Band::new(edges[0], edges[1] - 1);
    let inside = run.contains(baseline.v_ind_max) && baseline.top <= run.start && run.end <= baseline.bottom;
    let reason = if inside {
        VerdictReason::Accepted
    } else {
        VerdictReason::OutsideBaseline
    };
    Ok(verdict(reason, Some(run)))
}

/// Character boxes of one word; see [`analyze_word`].
pub fn segment_characters(word: &InkImage, baseline: &BaselineBand, cfg: &CharConfig) -> Result<Vec<CharBox>> {
    Ok(analyze_word(word, baseline, cfg)?.chars)
}

/// Full character segmentation of one word with every intermediate.
///
/// `baseline` is in word-local rows. Cuts fall on the midpoint column of
/// each accepted pulse: the left character keeps the midpoint column. A
/// word without accepted pulses comes back as a single character.
pub fn analyze_word(word: &InkImage, baseline: &BaselineBand, cfg: &CharConfig) -> Result<WordAnalysis> {
    if !word.has_ink() {
        return Err(Error::EmptyWord);
    }
    let (labeling, flags) = diacritic_labels(word, baseline, cfg);
    let no_points = word.retain(|x, y| !flags[labeling.label_at(x, y) as usize]);
    let verdicts = connection_pulses(&no_points, cfg)
        .iter()
        .map(|p| validate_pulse(&no_points, p, baseline))
        .collect::<Result<Vec<_>>>()?;

    let w = word.width();
    let mut cuts: Vec<(usize, usize)> = Vec::new(); // (column, pulse id)
    for (id, v) in verdicts.iter().enumerate() {
        if !v.accepted {
            continue;
        }
        let col = v.pulse.band.midpoint();
        if col + 1 >= w || cuts.last().is_some_and(|&(c, _)| col <= c) {
            continue;
        }
        cuts.push((col, id));
    }

    let mut slabs = Vec::with_capacity(cuts.len() + 1);
    let mut start = 0;
    let mut left = CutSource::WordEdge;
    for &(col, id) in &cuts {
        slabs.push((Band::new(start, col), left, CutSource::Pulse(id)));
        start = col + 1;
        left = CutSource::Pulse(id);
    }
    slabs.push((Band::new(start, w - 1), left, CutSource::WordEdge));

    let slab_of_column: Vec<usize> = {
        let mut v = vec![0; w];
        for (k, (band, _, _)) in slabs.iter().enumerate() {
            v[band.start..=band.end].fill(k);
        }
        v
    };

    // A diacritic goes whole to the slab holding most of its columns,
    // the leftmost one on ties.
    let mut diacritic_slab = vec![usize::MAX; labeling.components.len() + 1];
    let mut diacritics = Vec::new();
    for c in &labeling.components {
        if !flags[c.label as usize] {
            continue;
        }
        diacritics.push(*c);
        let mut counts = vec![0usize; slabs.len()];
        for x in c.bbox.x0..=c.bbox.x1 {
            counts[slab_of_column[x]] += 1;
        }
        let best = counts.iter().copied().max().unwrap_or(0);
        diacritic_slab[c.label as usize] = counts.iter().position(|&n| n == best).unwrap_or(0);
    }

    let mut ink = vec![0usize; slabs.len()];
    let mut boxes: Vec<Option<Rect>> = vec![None; slabs.len()];
    for y in 0..word.height() {
        for (x, &slab) in slab_of_column.iter().enumerate() {
            if !word.is_ink(x, y) {
                continue;
            }
            let label = labeling.label_at(x, y) as usize;
            let k = if flags[label] { diacritic_slab[label] } else { slab };
            ink[k] += 1;
            match &mut boxes[k] {
                Some(r) => r.include(x, y),
                slot @ None => *slot = Some(Rect::new(x, y, x, y)),
            }
        }
    }

    let (ox, oy) = word.origin();
    let chars = slabs
        .iter()
        .enumerate()
        .map(|(k, &(band, cut_left, cut_right))| {
            let local = boxes[k].unwrap_or_else(|| Rect::from_bands(band, Band::full(word.height())));
            CharBox {
                x_band: band.offset(ox),
                bbox: local.translate(ox, oy),
                cut_left,
                cut_right,
                ink: ink[k],
            }
        })
        .collect();

    Ok(WordAnalysis {
        no_points,
        diacritics,
        verdicts,
        chars,
    })
}

/// Binarize, then lines, then words, then characters, assembled into a
/// tree with page coordinates. Lines are processed in parallel; the output
/// depends only on the pixels and `cfg`.
pub fn segment_page(page: &GrayImage, cfg: &SegmentConfig) -> Result<SegmentTree> {
    let threshold = if cfg.otsu { otsu_threshold(page) } else { cfg.threshold };
    let ink = binarize(page, threshold);
    let lines = segment_lines(&ink, &cfg.line)?;

    let line_nodes = lines
        .par_iter()
        .map(|line| {
            let y0 = line.y_band.start;
            let parts = connected_parts(&line.image)?;
            let gap = cfg.word.gap_threshold(line.y_band.width());
            let words = cluster_words(parts, gap)
                .into_iter()
                .map(|cluster| {
                    // words span the full line height, so line-local rows
                    // are word-local rows and the baseline carries over
                    let word = line.image.crop(cluster.x_band, Band::full(line.image.height()))?;
                    let analysis = analyze_word(&word, &line.baseline, &cfg.chars)?;
                    let x0 = word.origin().0;
                    Ok(WordNode {
                        x_band: cluster.x_band,
                        parts: cluster.parts.iter().map(|p| p.x_band).collect(),
                        chars: analysis
                            .chars
                            .iter()
                            .map(|c| CharNode {
                                x_band: c.x_band,
                                bbox: c.bbox,
                                cut_left: c.cut_left,
                                cut_right: c.cut_right,
                            })
                            .collect(),
                        pulses: analysis
                            .verdicts
                            .iter()
                            .enumerate()
                            .map(|(id, v)| PulseNode {
                                id,
                                x_band: v.pulse.band.offset(x0),
                                mean_amplitude: v.pulse.mean_amplitude,
                                verdict: v.reason,
                                run: v.run.map(|r| r.offset(y0)),
                            })
                            .collect(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LineNode {
                y_band: line.y_band,
                baseline: line.baseline.offset(y0),
                words,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let tree = SegmentTree {
        page: PageInfo {
            width: page.width(),
            height: page.height(),
            source: None,
            threshold,
        },
        lines: line_nodes,
        config: cfg.clone(),
        version: crate::VERSION.to_string(),
    };
    Ok(tree.in_reading_order(cfg.reading_order))
}
