//! Independent oracles and fixtures shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use arseg::evalsynth::{CountRange, GroundTruth, SyntheticSpec};
use arseg::profile::{Axis, Profile};
use arseg::{Band, BaselineBand, GrayImage, InkImage, Rect, SegmentTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random mask of at most `max_side` x `max_side` with the given ink density.
pub fn random_mask(rng: &mut ChaCha8Rng, max_side: usize) -> InkImage {
    let w = rng.gen_range(1..=max_side);
    let h = rng.gen_range(1..=max_side);
    let density = rng.gen_range(0.0..0.7);
    let ink = (0..w * h).map(|_| rng.gen_bool(density)).collect();
    InkImage::from_mask(w, h, ink).unwrap()
}

/// Random profile built from a few amplitude levels so that flat runs and
/// zero gaps both occur.
pub fn random_profile(rng: &mut ChaCha8Rng, max_len: usize) -> Profile {
    let n = rng.gen_range(1..=max_len);
    let mut values = Vec::with_capacity(n);
    let mut current = 0u64;
    for _ in 0..n {
        if rng.gen_bool(0.35) {
            current = 255 * rng.gen_range(0..5u64);
        }
        values.push(current);
    }
    Profile {
        axis: Axis::Vertical,
        values,
    }
}

/// Recursive flood fill; returns each component as a set of (x, y).
pub fn flood_fill_components(img: &InkImage, eight: bool) -> BTreeSet<BTreeSet<(usize, usize)>> {
    fn fill(img: &InkImage, seen: &mut Vec<bool>, x: usize, y: usize, eight: bool, out: &mut BTreeSet<(usize, usize)>) {
        let w = img.width();
        if seen[y * w + x] || !img.is_ink(x, y) {
            return;
        }
        seen[y * w + x] = true;
        out.insert((x, y));
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if (dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0) {
                    continue;
                }
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < img.height() {
                    fill(img, seen, nx as usize, ny as usize, eight, out);
                }
            }
        }
    }
    let mut seen = vec![false; img.width() * img.height()];
    let mut all = BTreeSet::new();
    for y in 0..img.height() {
        for x in 0..img.width() {
            if img.is_ink(x, y) && !seen[y * img.width() + x] {
                let mut comp = BTreeSet::new();
                fill(img, &mut seen, x, y, eight, &mut comp);
                all.insert(comp);
            }
        }
    }
    all
}

/// Threshold bands by gap filling: mark above-threshold indices, fill
/// every interior sub-threshold gap shorter than `merge_gap`, then take
/// runs of marked indices.
pub fn threshold_bands_oracle(values: &[u64], threshold: u64, min_width: usize, merge_gap: usize) -> Vec<Band> {
    let mut marked: Vec<bool> = values.iter().map(|&v| v >= threshold).collect();
    let n = marked.len();
    let mut i = 0;
    while i < n {
        if marked[i] {
            i += 1;
            continue;
        }
        let gap_start = i;
        while i < n && !marked[i] {
            i += 1;
        }
        let interior = gap_start > 0 && i < n;
        if interior && i - gap_start < merge_gap {
            marked[gap_start..i].fill(true);
        }
    }
    let mut out = Vec::new();
    let mut s = None;
    for j in 0..=n {
        let m = marked.get(j) == Some(&true);
        match (m, s) {
            (true, None) => s = Some(j),
            (false, Some(st)) => {
                if j - st >= min_width {
                    out.push(Band::new(st, j - 1));
                }
                s = None;
            }
            _ => {}
        }
    }
    out
}

/// Exhaustive enumeration of maximal low-variation runs.
pub fn low_variation_oracle(values: &[u64], epsilon: u64, min_len: usize) -> Vec<(Band, f64)> {
    let n = values.len() as i64;
    let ok = |s: i64, e: i64| -> bool {
        if s < 0 || e >= n || s > e {
            return false;
        }
        let run = &values[s as usize..=e as usize];
        run.iter().all(|&v| v > 0) && run.iter().max().unwrap() - run.iter().min().unwrap() <= epsilon
    };
    let mut out = Vec::new();
    for s in 0..n {
        for e in s..n {
            if ok(s, e) && !ok(s - 1, e) && !ok(s, e + 1) && (e - s + 1) as usize >= min_len {
                let run = &values[s as usize..=e as usize];
                let mean = run.iter().sum::<u64>() as f64 / run.len() as f64;
                out.push((Band::new(s as usize, e as usize), mean));
            }
        }
    }
    out
}

/// Zero-crossing scan with implicit zeros before and after the profile.
pub fn step_edges_oracle(values: &[u64]) -> Vec<usize> {
    let at = |i: i64| -> bool { i >= 0 && (i as usize) < values.len() && values[i as usize] > 0 };
    (0..=values.len())
        .filter(|&i| at(i as i64) != at(i as i64 - 1))
        .collect()
}

/// One page of the acceptance sweep: stroke 1..=3, character size 8..=24,
/// bridge length 2..=8, dot probability 0..=0.5.
pub fn corpus_spec(i: usize) -> SyntheticSpec {
    SyntheticSpec {
        lines: 2 + i % 3,
        words_per_line: CountRange::new(1, 6),
        chars_per_word: CountRange::new(1, 6),
        stroke_px: 1 + i % 3,
        char_size_px: 8 + (i * 7) % 17,
        bridge_len_px: 2 + (i * 3) % 7,
        dot_prob: (i % 6) as f64 * 0.1,
        ..SyntheticSpec::default()
    }
}

pub const CORPUS_PAGES: usize = 100;

pub fn corpus_seed(i: usize) -> u64 {
    1000 + i as u64
}

pub fn corpus_page(i: usize) -> (GrayImage, GroundTruth) {
    arseg::evalsynth::generate_synthetic_page(&corpus_spec(i), corpus_seed(i)).unwrap()
}

pub fn report(name: &str, pass: bool, detail: &str) {
    println!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
}

/// A tree whose bands mirror `truth` exactly.
pub fn tree_from_truth(truth: &GroundTruth) -> SegmentTree {
    use arseg::char_seg::CutSource;
    use arseg::tree::{CharNode, LineNode, PageInfo, WordNode};
    SegmentTree {
        page: PageInfo {
            width: truth.page.width,
            height: truth.page.height,
            source: None,
            threshold: 128,
        },
        lines: truth
            .lines
            .iter()
            .map(|l| LineNode {
                y_band: l.y_band,
                baseline: BaselineBand {
                    v_ind_max: l.y_band.start,
                    top: l.y_band.start,
                    bottom: l.y_band.start,
                },
                words: l
                    .words
                    .iter()
                    .map(|w| WordNode {
                        x_band: w.x_band,
                        parts: w.parts.clone(),
                        chars: w
                            .chars
                            .iter()
                            .map(|c| CharNode {
                                x_band: c.x_band,
                                bbox: Rect::from_bands(c.x_band, l.y_band),
                                cut_left: CutSource::WordEdge,
                                cut_right: CutSource::WordEdge,
                            })
                            .collect(),
                        pulses: Vec::new(),
                    })
                    .collect(),
            })
            .collect(),
        config: Default::default(),
        version: arseg::VERSION.to_string(),
    }
}
