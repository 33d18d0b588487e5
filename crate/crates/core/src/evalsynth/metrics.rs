use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Band;
use crate::tree::SegmentTree;

use super::GroundTruth;

/// Matching bookkeeping at one level of the hierarchy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LevelCounts {
    pub truth: usize,
    pub predicted: usize,
    pub matched: usize,
    pub missed: usize,
    pub spurious: usize,
}

impl LevelCounts {
    /// Fraction of truth segments recovered; 1 when there is nothing to find.
    pub fn ratio(&self) -> f64 {
        if self.truth == 0 {
            1.0
        } else {
            self.matched as f64 / self.truth as f64
        }
    }

    fn finish(mut self) -> Self {
        self.missed = self.truth - self.matched;
        self.spurious = self.predicted - self.matched;
        self
    }
}

/// Correction ratios per level. `word` counts whole clusters, `part`
/// counts connected parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tol: usize,
    pub line_ratio: f64,
    pub word_ratio: f64,
    pub part_ratio: f64,
    pub char_ratio: f64,
    pub lines: LevelCounts,
    pub words: LevelCounts,
    pub parts: LevelCounts,
    pub chars: LevelCounts,
}

/// Greedy matching of two band lists. Both are visited in order of start;
/// each truth band takes the first still-free prediction whose endpoints
/// are both within `tol`. Returns, per truth index, the matched
/// prediction index.
pub fn match_bands(truth: &[Band], predicted: &[Band], tol: usize) -> Vec<Option<usize>> {
    let mut t_order: Vec<usize> = (0..truth.len()).collect();
    t_order.sort_by_key(|&i| (truth[i].start, truth[i].end));
    let mut p_order: Vec<usize> = (0..predicted.len()).collect();
    p_order.sort_by_key(|&i| (predicted[i].start, predicted[i].end));

    let mut taken = vec![false; predicted.len()];
    let mut out = vec![None; truth.len()];
    for &ti in &t_order {
        let t = truth[ti];
        let hit = p_order.iter().copied().find(|&pi| {
            let p = predicted[pi];
            !taken[pi] && t.start.abs_diff(p.start) <= tol && t.end.abs_diff(p.end) <= tol
        });
        if let Some(pi) = hit {
            taken[pi] = true;
            out[ti] = Some(pi);
        }
    }
    out
}

/// Score `tree` against `truth`. A band only counts as matched when its
/// parent matched too.
pub fn evaluate(tree: &SegmentTree, truth: &GroundTruth, tol: usize) -> Result<EvalReport> {
    let expected = (truth.page.width, truth.page.height);
    let found = (tree.page.width, tree.page.height);
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }

    let mut lines = LevelCounts {
        truth: truth.lines.len(),
        predicted: tree.lines.len(),
        ..Default::default()
    };
    let mut words = LevelCounts {
        truth: truth.word_count(),
        predicted: tree.word_count(),
        ..Default::default()
    };
    let mut parts = LevelCounts {
        truth: truth.lines.iter().flat_map(|l| &l.words).map(|w| w.parts.len()).sum(),
        predicted: tree.lines.iter().flat_map(|l| &l.words).map(|w| w.parts.len()).sum(),
        ..Default::default()
    };
    let mut chars = LevelCounts {
        truth: truth.char_count(),
        predicted: tree.char_count(),
        ..Default::default()
    };

    let t_lines: Vec<Band> = truth.lines.iter().map(|l| l.y_band).collect();
    let p_lines: Vec<Band> = tree.lines.iter().map(|l| l.y_band).collect();
    for (tl, pl) in match_bands(&t_lines, &p_lines, tol).into_iter().enumerate() {
        let Some(pl) = pl else { continue };
        lines.matched += 1;
        let (tline, pline) = (&truth.lines[tl], &tree.lines[pl]);

        let t_parts: Vec<Band> = tline.words.iter().flat_map(|w| w.parts.iter().copied()).collect();
        let p_parts: Vec<Band> = pline.words.iter().flat_map(|w| w.parts.iter().copied()).collect();
        parts.matched += match_bands(&t_parts, &p_parts, tol).iter().flatten().count();

        let t_words: Vec<Band> = tline.words.iter().map(|w| w.x_band).collect();
        let p_words: Vec<Band> = pline.words.iter().map(|w| w.x_band).collect();
        for (tw, pw) in match_bands(&t_words, &p_words, tol).into_iter().enumerate() {
            let Some(pw) = pw else { continue };
            words.matched += 1;
            let t_chars: Vec<Band> = tline.words[tw].chars.iter().map(|c| c.x_band).collect();
            let p_chars: Vec<Band> = pline.words[pw].chars.iter().map(|c| c.x_band).collect();
            chars.matched += match_bands(&t_chars, &p_chars, tol).iter().flatten().count();
        }
    }

    let (lines, words, parts, chars) = (lines.finish(), words.finish(), parts.finish(), chars.finish());
    Ok(EvalReport {
        tol,
        line_ratio: lines.ratio(),
        word_ratio: words.ratio(),
        part_ratio: parts.ratio(),
        char_ratio: chars.ratio(),
        lines,
        words,
        parts,
        chars,
    })
}
