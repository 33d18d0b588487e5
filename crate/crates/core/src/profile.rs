//! Projection profiles and the one-dimensional tools run over them:
//! threshold bands, the low-variation (constant amplitude) run filter,
//! and the zero/non-zero step-edge detector.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

pub use crate::geom::Band;
use crate::raster::InkImage;

/// Contribution of one ink pixel: `255 - P` with `P = 0`.
pub const INK_WEIGHT: u64 = 255;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// One value per row, summed along x.
    Horizontal,
    /// One value per column, summed along y.
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub axis: Axis,
    pub values: Vec<u64>,
}

impl Profile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    /// `index,value` lines with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{i},{v}\n"));
        }
        out
    }
}

/// A constant-amplitude run of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub band: Band,
    pub mean_amplitude: f64,
}

/// Per-row ink sums: `I_j = sum_i (255 - P(i, j))` on the binarized view.
pub fn horizontal_profile(img: &InkImage) -> Profile {
    let w = img.width();
    let values = img
        .mask()
        .chunks_exact(w)
        .map(|row| row.iter().filter(|&&i| i).count() as u64 * INK_WEIGHT)
        .collect();
    Profile {
        axis: Axis::Horizontal,
        values,
    }
}

/// Per-column ink sums.
pub fn vertical_profile(img: &InkImage) -> Profile {
    let w = img.width();
    let mut values = vec![0u64; w];
    for row in img.mask().chunks_exact(w) {
        for (v, &ink) in values.iter_mut().zip(row) {
            if ink {
                *v += INK_WEIGHT;
            }
        }
    }
    Profile {
        axis: Axis::Vertical,
        values,
    }
}

/// Maximal runs of `values >= threshold`. Runs separated by fewer than
/// `merge_gap` sub-threshold indices are joined, then anything narrower
/// than `min_width` is dropped.
pub fn threshold_bands(p: &Profile, threshold: u64, min_width: usize, merge_gap: usize) -> Vec<Band> {
    let mut runs: Vec<Band> = Vec::new();
    let mut start = None;
    for (i, &v) in p.values.iter().enumerate() {
        match (v >= threshold, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push(Band::new(s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push(Band::new(s, p.values.len() - 1));
    }

    let mut merged: Vec<Band> = Vec::with_capacity(runs.len());
    for run in runs {
        match merged.last_mut() {
            Some(last) if run.start - last.end - 1 < merge_gap => last.end = run.end,
            _ => merged.push(run),
        }
    }
    merged.retain(|b| b.width() >= min_width);
    merged
}

/// Constant-amplitude run filter.
///
/// Reports every maximal run of strictly positive values whose spread
/// (`max - min`) is at most `epsilon`, in order of start index. Runs are
/// maximal in both directions, so two reported runs may overlap where the
/// profile ramps slowly. Runs shorter than `min_len` are dropped after the
/// maximality test.
pub fn low_variation_runs(p: &Profile, epsilon: u64, min_len: usize) -> Vec<Pulse> {
    let values = &p.values;
    let n = values.len();
    let mut pulses = Vec::new();
    let mut seg_start = 0;
    while seg_start < n {
        if values[seg_start] == 0 {
            seg_start += 1;
            continue;
        }
        let mut seg_end = seg_start;
        while seg_end + 1 < n && values[seg_end + 1] > 0 {
            seg_end += 1;
        }
        runs_in_segment(&values[seg_start..=seg_end], seg_start, epsilon, min_len, &mut pulses);
        seg_start = seg_end + 1;
    }
    pulses
}

/// Sliding window over one all-positive segment. For each start `i` the
/// furthest admissible end `e(i)` is non-decreasing, and `[i, e(i)]` is
/// left-maximal exactly when `i` opens the segment or `e(i-1) < e(i)`.
fn runs_in_segment(seg: &[u64], offset: usize, epsilon: u64, min_len: usize, out: &mut Vec<Pulse>) {
    let n = seg.len();
    let mut max_q: VecDeque<usize> = VecDeque::new();
    let mut min_q: VecDeque<usize> = VecDeque::new();
    let mut end = 0; // exclusive
    let mut prev_end = None;
    let mut sum: u64 = 0;
    for start in 0..n {
        while end < n {
            let v = seg[end];
            let hi = max_q.front().map_or(v, |&k| seg[k].max(v));
            let lo = min_q.front().map_or(v, |&k| seg[k].min(v));
            if hi - lo > epsilon {
                break;
            }
            while max_q.back().is_some_and(|&k| seg[k] <= v) {
                max_q.pop_back();
            }
            max_q.push_back(end);
            while min_q.back().is_some_and(|&k| seg[k] >= v) {
                min_q.pop_back();
            }
            min_q.push_back(end);
            sum += v;
            end += 1;
        }
        if prev_end != Some(end) && end - start >= min_len {
            out.push(Pulse {
                band: Band::new(offset + start, offset + end - 1),
                mean_amplitude: sum as f64 / (end - start) as f64,
            });
        }
        prev_end = Some(end);
        sum -= seg[start];
        if max_q.front() == Some(&start) {
            max_q.pop_front();
        }
        if min_q.front() == Some(&start) {
            min_q.pop_front();
        }
    }
}

/// Indices where the profile switches between zero and non-zero: the
/// first index of every non-zero run and the first zero after it (or the
/// profile length when the run reaches the end).
pub fn step_edges(p: &Profile) -> Vec<usize> {
    let mut edges = Vec::new();
    let mut inside = false;
    for (i, &v) in p.values.iter().enumerate() {
        if (v > 0) != inside {
            edges.push(i);
            inside = !inside;
        }
    }
    if inside {
        edges.push(p.values.len());
    }
    edges
}
