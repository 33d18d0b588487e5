use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Band, Rect};
use crate::raster::GrayImage;

use super::{GroundTruth, TruthChar, TruthLine, TruthPage, TruthWord};

/// Inclusive count range, written `N` or `MIN..MAX` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRange {
    pub min: usize,
    pub max: usize,
}

impl CountRange {
    pub fn exactly(n: usize) -> Self {
        Self { min: n, max: n }
    }

    pub fn new(min: usize, max: usize) -> Self {
        Self { min, max }
    }

    fn sample(&self, rng: &mut impl Rng) -> usize {
        rng.gen_range(self.min..=self.max)
    }
}

impl From<usize> for CountRange {
    fn from(n: usize) -> Self {
        Self::exactly(n)
    }
}

impl FromStr for CountRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
        let range = match s.split_once("..") {
            Some((a, b)) => Self::new(parse(a)?, parse(b)?),
            None => Self::exactly(parse(s)?),
        };
        if range.min > range.max {
            return Err(format!("empty range {s}"));
        }
        Ok(range)
    }
}

impl fmt::Display for CountRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min == self.max {
            write!(f, "{}", self.min)
        } else {
            write!(f, "{}..{}", self.min, self.max)
        }
    }
}

/// Layout of a synthetic cursive page.
///
/// Each character is a solid block `char_size_px` tall. Its first two rows
/// are crenellated (every other column is two rows shorter), so a glyph
/// body never forms a constant-amplitude column run; the only flat runs
/// are the bridges. Characters of one word are joined by bridges
/// `stroke_px` tall and `bridge_len_px` long, all lying on one baseline
/// row band a quarter of the block height above the block bottom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub lines: usize,
    pub words_per_line: CountRange,
    pub chars_per_word: CountRange,
    pub stroke_px: usize,
    pub char_size_px: usize,
    /// Block width; defaults to `char_size_px / 2 + 2`.
    pub char_width_px: Option<usize>,
    pub bridge_len_px: usize,
    /// Chance that a character carries a group of one to three dots.
    pub dot_prob: f64,
    /// Blank columns between words; defaults to `char_size_px`.
    pub gap_px: Option<usize>,
    /// Blank rows between consecutive line slots; defaults to `char_size_px`.
    pub line_gap_px: Option<usize>,
    pub margin_px: usize,
    pub page_width: Option<usize>,
    pub page_height: Option<usize>,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            lines: 3,
            words_per_line: CountRange::new(2, 5),
            chars_per_word: CountRange::new(1, 5),
            stroke_px: 2,
            char_size_px: 16,
            char_width_px: None,
            bridge_len_px: 4,
            dot_prob: 0.3,
            gap_px: None,
            line_gap_px: None,
            margin_px: 10,
            page_width: None,
            page_height: None,
        }
    }
}

/// Rows between a dot and the glyph body.
const DOT_CLEARANCE: usize = 2;
/// Rows of crenellation at the top of every block.
const CRENEL_ROWS: usize = 2;

struct Geometry {
    height: usize,
    width: usize,
    stroke: usize,
    bridge: usize,
    /// Offset of the first bridge row from the block top.
    bridge_top: usize,
    dot: usize,
    gap: usize,
    line_gap: usize,
}

impl SyntheticSpec {
    fn geometry(&self) -> Result<Geometry> {
        let misfit = |msg: String| Err(Error::SpecDoesNotFit(msg));
        if self.lines == 0 || self.words_per_line.min == 0 || self.chars_per_word.min == 0 {
            return misfit("lines, words and characters must be at least 1".into());
        }
        if self.words_per_line.min > self.words_per_line.max || self.chars_per_word.min > self.chars_per_word.max {
            return misfit("empty count range".into());
        }
        if self.stroke_px == 0 || self.char_size_px == 0 || self.bridge_len_px == 0 {
            return misfit("stroke, character size and bridge length must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.dot_prob) {
            return misfit(format!("dot probability {} outside [0, 1]", self.dot_prob));
        }
        let height = self.char_size_px;
        let stroke = self.stroke_px;
        // bridge columns must differ from both block column heights by
        // more than one pixel
        if height < stroke + CRENEL_ROWS + 2 {
            return misfit(format!("character size {height} too small for stroke {stroke}"));
        }
        let descent = height / 4;
        if height < descent + stroke + CRENEL_ROWS {
            return misfit("bridge would overlap the crenellated rows".into());
        }
        let width = self.char_width_px.unwrap_or(height / 2 + 2);
        if width == 0 {
            return misfit("character width must be at least 1".into());
        }
        let dot = stroke.max(2).min(height / 4).min(width).max(1);
        Ok(Geometry {
            height,
            width,
            stroke,
            bridge: self.bridge_len_px,
            bridge_top: height - descent - stroke,
            dot,
            gap: self.gap_px.unwrap_or(height),
            line_gap: self.line_gap_px.unwrap_or(height),
        })
    }
}

#[derive(Clone, Copy)]
enum DotSide {
    Above,
    Below,
}

struct DotGroup {
    count: usize,
    side: DotSide,
}

struct WordPlan {
    chars: Vec<Option<DotGroup>>,
}

impl WordPlan {
    fn width(&self, g: &Geometry) -> usize {
        let n = self.chars.len();
        n * g.width + (n - 1) * g.bridge
    }
}

/// Render a page and its ground truth. Same spec and seed, same output.
pub fn generate_synthetic_page(spec: &SyntheticSpec, seed: u64) -> Result<(GrayImage, GroundTruth)> {
    let g = spec.geometry()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let plans: Vec<Vec<WordPlan>> = (0..spec.lines)
        .map(|_| {
            let words = spec.words_per_line.sample(&mut rng);
            (0..words)
                .map(|_| {
                    let chars = spec.chars_per_word.sample(&mut rng);
                    WordPlan {
                        chars: (0..chars)
                            .map(|_| {
                                rng.gen_bool(spec.dot_prob).then(|| DotGroup {
                                    count: rng.gen_range(1..=3),
                                    side: if rng.gen_bool(0.5) {
                                        DotSide::Above
                                    } else {
                                        DotSide::Below
                                    },
                                })
                            })
                            .collect(),
                    }
                })
                .collect()
        })
        .collect();

    let line_width =
        |words: &[WordPlan]| -> usize { words.iter().map(|w| w.width(&g)).sum::<usize>() + (words.len() - 1) * g.gap };
    let content_width = plans.iter().map(|l| line_width(l)).max().unwrap_or(0);
    let slot = g.dot + DOT_CLEARANCE + g.height + DOT_CLEARANCE + g.dot;
    let content_height = spec.lines * slot + (spec.lines - 1) * g.line_gap;
    let need_w = content_width + 2 * spec.margin_px;
    let need_h = content_height + 2 * spec.margin_px;
    let width = spec.page_width.unwrap_or(need_w);
    let height = spec.page_height.unwrap_or(need_h);
    if width < need_w || height < need_h {
        return Err(Error::SpecDoesNotFit(format!(
            "layout needs {need_w}x{need_h}, page is {width}x{height}"
        )));
    }

    let mut img = GrayImage::filled(width, height, 255);
    let mut truth_lines = Vec::with_capacity(spec.lines);
    for (li, words) in plans.iter().enumerate() {
        let slot_top = spec.margin_px + li * (slot + g.line_gap);
        let body_top = slot_top + g.dot + DOT_CLEARANCE;
        let mut ink_rows = Band::new(body_top, body_top + g.height - 1);
        let mut x = spec.margin_px;
        let mut truth_words = Vec::with_capacity(words.len());
        for word in words {
            let word_band = Band::new(x, x + word.width(&g) - 1);
            let mut cuts = Vec::new();
            for (ci, dots) in word.chars.iter().enumerate() {
                let bx = x + ci * (g.width + g.bridge);
                draw_block(&mut img, bx, body_top, &g);
                if ci + 1 < word.chars.len() {
                    let bridge = Band::new(bx + g.width, bx + g.width + g.bridge - 1);
                    let rows = Band::new(body_top + g.bridge_top, body_top + g.bridge_top + g.stroke - 1);
                    img.fill_rect(Rect::from_bands(bridge, rows), 0);
                    cuts.push(bridge.midpoint());
                }
                if let Some(group) = dots {
                    let rows = draw_dots(&mut img, bx, body_top, group, &g);
                    ink_rows = ink_rows.union(&rows);
                }
            }
            let mut chars = Vec::with_capacity(word.chars.len());
            let mut start = word_band.start;
            for &cut in &cuts {
                chars.push(TruthChar {
                    x_band: Band::new(start, cut),
                });
                start = cut + 1;
            }
            chars.push(TruthChar {
                x_band: Band::new(start, word_band.end),
            });
            truth_words.push(TruthWord {
                x_band: word_band,
                parts: vec![word_band],
                chars,
            });
            x = word_band.end + 1 + g.gap;
        }
        truth_lines.push(TruthLine {
            y_band: ink_rows,
            words: truth_words,
        });
    }

    let truth = GroundTruth {
        page: TruthPage { width, height },
        lines: truth_lines,
    };
    Ok((img, truth))
}

fn draw_block(img: &mut GrayImage, bx: usize, top: usize, g: &Geometry) {
    for k in 0..g.width {
        let first = if k % 2 == 0 { 0 } else { CRENEL_ROWS };
        for y in top + first..top + g.height {
            img.set(bx + k, y, 0);
        }
    }
}

/// Draw a dot group centred over the block and return its rows. Dots are
/// one column apart so each is its own component; the group is trimmed to
/// fit the block width.
fn draw_dots(img: &mut GrayImage, bx: usize, body_top: usize, group: &DotGroup, g: &Geometry) -> Band {
    let mut count = group.count;
    while count > 1 && count * g.dot + (count - 1) > g.width {
        count -= 1;
    }
    let span = count * g.dot + (count - 1);
    let x0 = bx + (g.width - span) / 2;
    let top = match group.side {
        DotSide::Above => body_top - DOT_CLEARANCE - g.dot,
        DotSide::Below => body_top + g.height + DOT_CLEARANCE,
    };
    for d in 0..count {
        let dx = x0 + d * (g.dot + 1);
        img.fill_rect(Rect::new(dx, top, dx + g.dot - 1, top + g.dot - 1), 0);
    }
    Band::new(top, top + g.dot - 1)
}
