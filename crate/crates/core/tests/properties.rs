//! Randomized invariants across the pipeline.

mod common;

use arseg::char_seg::{analyze_word, connection_pulses, strip_diacritics};
use arseg::evalsynth::{evaluate, generate_synthetic_page, CountRange, GroundTruth, SyntheticSpec};
use arseg::line_seg::{baseline_from_profile, compute_baseline, line_bands, segment_lines};
use arseg::profile::{horizontal_profile, low_variation_runs, step_edges, threshold_bands, vertical_profile, Axis};
use arseg::raster::{binarize, encode_pgm, erase_box, read_image_bytes};
use arseg::word_seg::{cluster_words, connected_parts, ConnectedPart};
use arseg::{segment_page, Band, CharConfig, GrayImage, InkImage, LineConfig, Profile, Rect, SegmentConfig};
use common::tree_from_truth;
use proptest::prelude::*;

fn mask(max_w: usize, max_h: usize) -> impl Strategy<Value = InkImage> {
    (1..=max_w, 1..=max_h).prop_flat_map(|(w, h)| {
        prop::collection::vec(prop::bool::weighted(0.35), w * h)
            .prop_map(move |ink| InkImage::from_mask(w, h, ink).unwrap())
    })
}

fn gray(max_side: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<u8>(), w * h).prop_map(move |px| GrayImage::new(w, h, px).unwrap())
    })
}

fn profile(max_len: usize) -> impl Strategy<Value = Profile> {
    prop::collection::vec(0u64..5, 0..=max_len).prop_map(|v| Profile {
        axis: Axis::Horizontal,
        values: v.into_iter().map(|x| x * 255).collect(),
    })
}

fn pad_top(img: &InkImage, k: usize) -> InkImage {
    let mut ink = vec![false; img.width() * k];
    ink.extend_from_slice(img.mask());
    InkImage::from_mask(img.width(), img.height() + k, ink).unwrap()
}

fn ink_set(img: &InkImage) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for y in 0..img.height() {
        for x in 0..img.width() {
            if img.is_ink(x, y) {
                out.push((x, y));
            }
        }
    }
    out
}

fn subset(a: &InkImage, b: &InkImage) -> bool {
    a.mask().iter().zip(b.mask()).all(|(&x, &y)| !x || y)
}

fn no_dot_spec() -> impl Strategy<Value = SyntheticSpec> {
    (1usize..=3, 1usize..=3, 10usize..=22, 2usize..=6).prop_map(|(lines, stroke, size, bridge)| SyntheticSpec {
        lines,
        words_per_line: CountRange::new(1, 4),
        chars_per_word: CountRange::new(1, 5),
        stroke_px: stroke,
        char_size_px: size,
        bridge_len_px: bridge,
        dot_prob: 0.0,
        ..SyntheticSpec::default()
    })
}

fn is_partition(bands: &[Band], whole: Band) -> bool {
    let mut next = whole.start;
    for b in bands {
        if b.start != next {
            return false;
        }
        next = b.end + 1;
    }
    next == whole.end + 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn binarize_is_monotone_in_threshold(img in gray(20), t1 in any::<u8>(), t2 in any::<u8>()) {
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        prop_assert!(subset(&binarize(&img, lo), &binarize(&img, hi)));
    }

    #[test]
    fn erase_never_invents_ink(img in mask(20, 20), x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>(),
                               x2 in any::<prop::sample::Index>(), y2 in any::<prop::sample::Index>()) {
        let (xa, xb) = (x.index(img.width()), x2.index(img.width()));
        let (ya, yb) = (y.index(img.height()), y2.index(img.height()));
        let rect = Rect::new(xa.min(xb), ya.min(yb), xa.max(xb), ya.max(yb));
        let out = erase_box(&img, rect).unwrap();
        prop_assert!(subset(&out, &img));
        for (px, py) in ink_set(&img) {
            let inside = rect.x_band().contains(px) && rect.y_band().contains(py);
            prop_assert_eq!(out.is_ink(px, py), !inside);
        }
    }

    #[test]
    fn crop_paste_round_trip(img in mask(24, 24), xs in any::<prop::sample::Index>(), xe in any::<prop::sample::Index>(),
                             ys in any::<prop::sample::Index>(), ye in any::<prop::sample::Index>()) {
        let (a, b) = (xs.index(img.width()), xe.index(img.width()));
        let (c, d) = (ys.index(img.height()), ye.index(img.height()));
        let crop = img.crop(Band::new(a.min(b), a.max(b)), Band::new(c.min(d), c.max(d))).unwrap();
        let blanked = img.blank_like();
        let restored = img.paste(&crop).unwrap();
        prop_assert_eq!(restored.mask(), img.mask());
        // pasting into a blank canvas keeps only the crop's pixels
        let partial = blanked.paste(&crop).unwrap();
        prop_assert_eq!(partial.ink_count(), crop.ink_count());
    }

    #[test]
    fn pgm_round_trip(img in gray(24)) {
        let bytes = encode_pgm(&img);
        let back = read_image_bytes(&bytes).unwrap();
        prop_assert_eq!(&back, &img);
        prop_assert_eq!(encode_pgm(&back), bytes);
    }

    #[test]
    fn horizontal_indices_shift_with_top_padding(img in mask(16, 24), k in 0usize..8, t in 1u64..4) {
        let padded = pad_top(&img, k);
        let (p, q) = (horizontal_profile(&img), horizontal_profile(&padded));
        let shift = |b: &Band| b.offset(k);
        prop_assert_eq!(
            threshold_bands(&q, t * 255, 1, 0),
            threshold_bands(&p, t * 255, 1, 0).iter().map(shift).collect::<Vec<_>>()
        );
        prop_assert_eq!(step_edges(&q), step_edges(&p).iter().map(|e| e + k).collect::<Vec<_>>());
        prop_assert_eq!(
            low_variation_runs(&q, 255, 1).iter().map(|r| r.band).collect::<Vec<_>>(),
            low_variation_runs(&p, 255, 1).iter().map(|r| r.band.offset(k)).collect::<Vec<_>>()
        );
        prop_assert_eq!(vertical_profile(&padded), vertical_profile(&img));
    }

    #[test]
    fn threshold_bands_are_sorted_disjoint_and_anchored(p in profile(64), t in 1u64..4, min_width in 1usize..5, merge_gap in 0usize..5) {
        let threshold = t * 255;
        let bands = threshold_bands(&p, threshold, min_width, merge_gap);
        for b in &bands {
            prop_assert!(b.width() >= min_width);
            prop_assert!(p.values[b.start] >= threshold && p.values[b.end] >= threshold);
        }
        for w in bands.windows(2) {
            prop_assert!(w[0].end < w[1].start);
        }
        // every above-threshold index lies in a band unless its whole run was too narrow
        let all = threshold_bands(&p, threshold, 1, merge_gap);
        for b in &all {
            let kept = bands.iter().any(|k| k == b);
            prop_assert_eq!(kept, b.width() >= min_width);
        }
    }

    #[test]
    fn low_variation_runs_satisfy_predicate_and_are_maximal(p in profile(64), e in 0u64..3, min_len in 1usize..4) {
        let epsilon = e * 255;
        let v = &p.values;
        let ok = |s: usize, e: usize| {
            let run = &v[s..=e];
            run.iter().all(|&x| x > 0) && run.iter().max().unwrap() - run.iter().min().unwrap() <= epsilon
        };
        for r in low_variation_runs(&p, epsilon, min_len) {
            let (s, e) = (r.band.start, r.band.end);
            prop_assert!(ok(s, e));
            prop_assert!(r.band.width() >= min_len);
            prop_assert!(r.mean_amplitude > 0.0);
            prop_assert!(s == 0 || !ok(s - 1, e));
            prop_assert!(e + 1 == v.len() || !ok(s, e + 1));
        }
    }

    #[test]
    fn step_edges_pair_up_nonzero_runs(p in profile(64)) {
        let edges = step_edges(&p);
        prop_assert_eq!(edges.len() % 2, 0);
        prop_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        for pair in edges.chunks(2) {
            prop_assert!(p.values[pair[0]..pair[1]].iter().all(|&x| x > 0));
            prop_assert!(pair[0] == 0 || p.values[pair[0] - 1] == 0);
            prop_assert!(pair[1] == p.len() || p.values[pair[1]] == 0);
        }
        let nonzero: usize = edges.chunks(2).map(|c| c[1] - c[0]).sum();
        prop_assert_eq!(nonzero, p.values.iter().filter(|&&x| x > 0).count());
    }

    #[test]
    fn line_bands_cover_every_ink_row(img in mask(12, 40)) {
        let cfg = LineConfig::default();
        let bands = line_bands(&horizontal_profile(&img), &cfg);
        for w in bands.windows(2) {
            prop_assert!(w[0].end < w[1].start);
        }
        for (_, y) in ink_set(&img) {
            prop_assert_eq!(bands.iter().filter(|b| b.contains(y)).count(), 1);
        }
        let lines = segment_lines(&img, &cfg).unwrap();
        prop_assert_eq!(lines.len(), bands.len());
        let total: usize = lines.iter().map(|l| l.image.ink_count()).sum();
        prop_assert_eq!(total, img.ink_count());
    }

    #[test]
    fn baseline_contains_profile_maximum(p in profile(48), beta in 0.05f64..1.0) {
        let b = baseline_from_profile(&p, beta);
        prop_assert_eq!(b.is_none(), p.max() == 0);
        if let Some(b) = b {
            prop_assert!(b.top <= b.v_ind_max && b.v_ind_max <= b.bottom);
            prop_assert_eq!(p.values[b.v_ind_max], p.max());
            prop_assert!(p.values[..b.v_ind_max].iter().all(|&x| x < p.max()));
        }
    }

    #[test]
    fn parts_cover_inked_columns_and_clusters_partition_them(img in mask(40, 8), t in 0.0f64..8.0) {
        prop_assume!(img.has_ink());
        let parts = connected_parts(&img).unwrap();
        let vp = vertical_profile(&img);
        for w in parts.windows(2) {
            prop_assert!(w[0].x_band.end + 1 < w[1].x_band.start);
        }
        for (x, &v) in vp.values.iter().enumerate() {
            prop_assert_eq!(v > 0, parts.iter().any(|p| p.x_band.contains(x)));
        }
        let bands: Vec<Band> = parts.iter().map(|p| p.x_band).collect();
        let clusters = cluster_words(parts, t);
        let regrouped: Vec<Band> = clusters.iter().flat_map(|c| c.parts.iter().map(|p| p.x_band)).collect();
        prop_assert_eq!(regrouped, bands);
        for c in &clusters {
            for w in c.parts.windows(2) {
                prop_assert!(((w[1].x_band.start - w[0].x_band.end - 1) as f64) < t);
            }
        }
    }

    #[test]
    fn cluster_words_idempotent_and_monotone(img in mask(40, 6), t1 in 0.0f64..8.0, t2 in 0.0f64..8.0) {
        prop_assume!(img.has_ink());
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        let parts = connected_parts(&img).unwrap();
        let once = cluster_words(parts.clone(), lo);
        let as_parts: Vec<ConnectedPart> = once
            .iter()
            .map(|c| ConnectedPart { x_band: c.x_band, image: c.parts[0].image.clone() })
            .collect();
        let twice = cluster_words(as_parts, lo);
        prop_assert_eq!(
            twice.iter().map(|c| c.x_band).collect::<Vec<_>>(),
            once.iter().map(|c| c.x_band).collect::<Vec<_>>()
        );
        prop_assert!(cluster_words(parts, hi).len() <= once.len());
    }

    #[test]
    fn stripping_keeps_baseline_rows(img in mask(24, 24)) {
        prop_assume!(img.has_ink());
        let baseline = compute_baseline(&img, 0.5).unwrap();
        let out = strip_diacritics(&img, &baseline, &CharConfig::default()).unwrap();
        prop_assert!(subset(&out, &img));
        for x in 0..img.width() {
            for y in baseline.top..=baseline.bottom {
                prop_assert_eq!(out.is_ink(x, y), img.is_ink(x, y));
            }
        }
    }

    #[test]
    fn larger_epsilon_runs_cover_smaller_epsilon_runs(img in mask(32, 12), e1 in 0u64..3, e2 in 0u64..3) {
        let (lo, hi) = (e1.min(e2) * 255, e1.max(e2) * 255);
        let cfg = |epsilon| CharConfig { epsilon, ..CharConfig::default() };
        let narrow = connection_pulses(&img, &cfg(lo));
        let wide = connection_pulses(&img, &cfg(hi));
        for p in &narrow {
            prop_assert!(wide.iter().any(|q| q.band.start <= p.band.start && p.band.end <= q.band.end));
        }
    }

    #[test]
    fn char_boxes_partition_words_and_conserve_ink(img in mask(32, 16)) {
        prop_assume!(img.has_ink());
        let baseline = compute_baseline(&img, 0.5).unwrap();
        let a = analyze_word(&img, &baseline, &CharConfig::default()).unwrap();
        let bands: Vec<Band> = a.chars.iter().map(|c| c.x_band).collect();
        prop_assert!(is_partition(&bands, Band::full(img.width())));
        prop_assert_eq!(a.chars.iter().map(|c| c.ink).sum::<usize>(), img.ink_count());
        for v in &a.verdicts {
            prop_assert_eq!(v.accepted, v.reason == arseg::VerdictReason::Accepted);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn segment_page_is_pure(seed in any::<u64>()) {
        let (img, _) = generate_synthetic_page(&SyntheticSpec::default(), seed).unwrap();
        let cfg = SegmentConfig::default();
        prop_assert_eq!(
            segment_page(&img, &cfg).unwrap().to_json().unwrap(),
            segment_page(&img, &cfg).unwrap().to_json().unwrap()
        );
    }

    #[test]
    fn no_dot_pages_are_recovered(spec in no_dot_spec(), seed in any::<u64>()) {
        let (img, truth) = generate_synthetic_page(&spec, seed).unwrap();
        let tree = segment_page(&img, &SegmentConfig::default()).unwrap();
        let r = evaluate(&tree, &truth, 1).unwrap();
        prop_assert_eq!((r.line_ratio, r.word_ratio, r.part_ratio, r.char_ratio), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn evaluator_bookkeeping_and_tol_monotonicity(seed in any::<u64>(), shifts in prop::collection::vec(0usize..4, 64)) {
        let (_, truth) = generate_synthetic_page(&SyntheticSpec::default(), seed).unwrap();
        let mut tree = tree_from_truth(&truth);
        let mut k = 0;
        for line in &mut tree.lines {
            for word in &mut line.words {
                for c in &mut word.chars {
                    let s = shifts[k % shifts.len()];
                    k += 1;
                    if c.x_band.width() > s {
                        c.x_band = Band::new(c.x_band.start + s, c.x_band.end);
                    }
                }
            }
        }
        let mut prev: Option<arseg::evalsynth::EvalReport> = None;
        for tol in (0..5).rev() {
            let r = evaluate(&tree, &truth, tol).unwrap();
            for lv in [r.lines, r.words, r.parts, r.chars] {
                prop_assert_eq!(lv.matched + lv.missed, lv.truth);
                prop_assert_eq!(lv.matched + lv.spurious, lv.predicted);
            }
            for ratio in [r.line_ratio, r.word_ratio, r.part_ratio, r.char_ratio] {
                prop_assert!((0.0..=1.0).contains(&ratio));
            }
            if let Some(p) = prev {
                prop_assert!(r.char_ratio <= p.char_ratio);
                prop_assert!(r.word_ratio <= p.word_ratio);
            }
            prev = Some(r);
        }
        let exact = evaluate(&tree_from_truth(&truth), &truth, 0).unwrap();
        prop_assert_eq!((exact.line_ratio, exact.word_ratio, exact.char_ratio), (1.0, 1.0, 1.0));
    }
}

fn one_word_truth(chars: &[Band]) -> GroundTruth {
    use arseg::evalsynth::{TruthChar, TruthLine, TruthPage, TruthWord};
    let word = Band::new(chars[0].start, chars[chars.len() - 1].end);
    GroundTruth {
        page: TruthPage {
            width: word.end + 10,
            height: 30,
        },
        lines: vec![TruthLine {
            y_band: Band::new(5, 20),
            words: vec![TruthWord {
                x_band: word,
                parts: vec![word],
                chars: chars.iter().map(|&x_band| TruthChar { x_band }).collect(),
            }],
        }],
    }
}

fn ten_chars() -> Vec<Band> {
    (0..10).map(|i| Band::new(5 + 6 * i, 10 + 6 * i)).collect()
}

#[test]
fn one_missed_cut_in_ten_characters() {
    let truth = one_word_truth(&ten_chars());
    let mut tree = tree_from_truth(&truth);
    let chars = &mut tree.lines[0].words[0].chars;
    chars[3].x_band = chars[3].x_band.union(&chars[4].x_band);
    chars.remove(4);
    let r = evaluate(&tree, &truth, 1).unwrap();
    assert_eq!(r.chars.matched, 8);
    assert_eq!(r.char_ratio, 0.8);
    assert_eq!(r.chars.spurious, 1);
}

#[test]
fn off_by_one_cuts_fail_at_zero_tolerance() {
    let truth = one_word_truth(&ten_chars());
    let mut tree = tree_from_truth(&truth);
    let chars = &mut tree.lines[0].words[0].chars;
    for i in 0..chars.len() - 1 {
        chars[i].x_band.end += 1;
        chars[i + 1].x_band.start += 1;
    }
    assert!(evaluate(&tree, &truth, 0).unwrap().char_ratio < 1.0);
    assert_eq!(evaluate(&tree, &truth, 1).unwrap().char_ratio, 1.0);
}

#[test]
fn empty_tree_scores_zero() {
    let truth = one_word_truth(&ten_chars());
    let mut tree = tree_from_truth(&truth);
    tree.lines.clear();
    let r = evaluate(&tree, &truth, 1).unwrap();
    assert_eq!(
        (r.line_ratio, r.word_ratio, r.part_ratio, r.char_ratio),
        (0.0, 0.0, 0.0, 0.0)
    );
}

/// Raising epsilon can merge neighbouring runs into one, so the raw run
/// count is not monotone; coverage is (see the property above).
#[test]
fn larger_epsilon_can_merge_runs() {
    let p = Profile {
        axis: Axis::Vertical,
        values: vec![255, 255, 510, 510, 255, 255],
    };
    assert_eq!(low_variation_runs(&p, 0, 2).len(), 3);
    assert_eq!(low_variation_runs(&p, 255, 2).len(), 1);
}
