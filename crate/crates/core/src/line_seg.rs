//! Text-line extraction from the horizontal profile and the baseline band
//! of each line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Band;
use crate::profile::{horizontal_profile, threshold_bands, Profile, INK_WEIGHT};
use crate::raster::InkImage;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineConfig {
    /// Absolute profile threshold. When unset, `max(255, threshold_ratio * max)`.
    pub threshold: Option<u64>,
    pub threshold_ratio: f64,
    pub min_width: usize,
    pub merge_gap: usize,
    /// Bands shorter than this fraction of the reference body height are
    /// candidates for attachment to a neighbour.
    pub min_body_ratio: f64,
    /// Attachment distance as a fraction of the reference body height.
    pub attach_gap_ratio: f64,
    /// Baseline band keeps rows at or above `beta * max`.
    pub beta: f64,
}

impl Default for LineConfig {
    fn default() -> Self {
        Self {
            threshold: None,
            threshold_ratio: 0.0,
            min_width: 1,
            merge_gap: 0,
            min_body_ratio: 0.3,
            attach_gap_ratio: 0.5,
            beta: 0.5,
        }
    }
}

impl LineConfig {
    pub fn threshold_for(&self, p: &Profile) -> u64 {
        self.threshold.unwrap_or_else(|| {
            let relative = (self.threshold_ratio * p.max() as f64).ceil() as u64;
            relative.max(INK_WEIGHT)
        })
    }
}

/// Rows around the horizontal-profile peak of a line, in line-local rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineBand {
    pub v_ind_max: usize,
    pub top: usize,
    pub bottom: usize,
}

impl BaselineBand {
    pub fn rows(&self) -> Band {
        Band::new(self.top, self.bottom)
    }

    pub fn height(&self) -> usize {
        self.bottom - self.top + 1
    }

    pub fn offset(&self, rows: usize) -> Self {
        Self {
            v_ind_max: self.v_ind_max + rows,
            top: self.top + rows,
            bottom: self.bottom + rows,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LineSegment {
    /// Page rows.
    pub y_band: Band,
    /// Line-local rows.
    pub baseline: BaselineBand,
    /// Full page width, `y_band` rows.
    pub image: InkImage,
}

/// Split a page into text lines, top to bottom.
///
/// Stage one finds the dark bands of the horizontal profile. Stage two
/// folds short bands (rows of dots riding above or below a line) into the
/// nearest neighbouring band when the gap to it is small.
pub fn segment_lines(page: &InkImage, cfg: &LineConfig) -> Result<Vec<LineSegment>> {
    let profile = horizontal_profile(page);
    let bands = line_bands(&profile, cfg);
    bands
        .into_iter()
        .map(|y_band| {
            let image = page.crop(Band::full(page.width()), y_band)?;
            let baseline = compute_baseline(&image, cfg.beta)?;
            Ok(LineSegment {
                y_band,
                baseline,
                image,
            })
        })
        .collect()
}

/// Both stages on a precomputed horizontal profile.
pub fn line_bands(profile: &Profile, cfg: &LineConfig) -> Vec<Band> {
    let bands = threshold_bands(profile, cfg.threshold_for(profile), cfg.min_width, cfg.merge_gap);
    attach_small_bands(&bands, profile, cfg)
}

fn attach_small_bands(bands: &[Band], profile: &Profile, cfg: &LineConfig) -> Vec<Band> {
    if bands.len() < 2 {
        return bands.to_vec();
    }
    let mass: Vec<u64> = bands
        .iter()
        .map(|b| profile.values[b.start..=b.end].iter().sum())
        .collect();
    let reference = weighted_median_height(bands, &mass) as f64;
    let small_limit = cfg.min_body_ratio * reference;
    let attach_gap = cfg.attach_gap_ratio * reference;

    // joined[i] links band i with band i + 1
    let mut joined = vec![false; bands.len() - 1];
    for (i, band) in bands.iter().enumerate() {
        if band.width() as f64 >= small_limit {
            continue;
        }
        let prev = i.checked_sub(1).map(|p| (p, band.start - bands[p].end - 1));
        let next = bands.get(i + 1).map(|n| (i + 1, n.start - band.end - 1));
        let nearest = match (prev, next) {
            (Some(p), Some(n)) if n.1 < p.1 || (n.1 == p.1 && mass[n.0] > mass[p.0]) => n,
            (Some(p), _) => p,
            (None, Some(n)) => n,
            (None, None) => continue,
        };
        if (nearest.1 as f64) < attach_gap {
            joined[i.min(nearest.0)] = true;
        }
    }

    let mut out: Vec<Band> = vec![bands[0]];
    for (i, band) in bands.iter().enumerate().skip(1) {
        if joined[i - 1] {
            let last = out.last_mut().expect("non-empty");
            *last = last.union(band);
        } else {
            out.push(*band);
        }
    }
    out
}

/// Height of the band at which half of the total ink mass is reached when
/// bands are ordered by height. Thin dot rows carry little ink, so the
/// reference stays at the text body height even when dot bands outnumber
/// body bands.
fn weighted_median_height(bands: &[Band], mass: &[u64]) -> usize {
    let mut order: Vec<usize> = (0..bands.len()).collect();
    order.sort_by_key(|&i| (bands[i].width(), i));
    let total: u64 = mass.iter().sum();
    let mut acc = 0u64;
    for &i in &order {
        acc += mass[i];
        if 2 * acc >= total {
            return bands[i].width();
        }
    }
    bands[order[order.len() - 1]].width()
}

/// Peak row of the line profile (first one on ties) and the contiguous
/// run of rows around it whose value stays at or above `beta * max`.
pub fn compute_baseline(line: &InkImage, beta: f64) -> Result<BaselineBand> {
    let profile = horizontal_profile(line);
    baseline_from_profile(&profile, beta).ok_or(Error::EmptyLine)
}

pub fn baseline_from_profile(profile: &Profile, beta: f64) -> Option<BaselineBand> {
    let max = profile.max();
    if max == 0 {
        return None;
    }
    let v_ind_max = profile.values.iter().position(|&v| v == max)?;
    let floor = beta * max as f64;
    let keep = |j: usize| profile.values[j] as f64 >= floor;
    let mut top = v_ind_max;
    while top > 0 && keep(top - 1) {
        top -= 1;
    }
    let mut bottom = v_ind_max;
    while bottom + 1 < profile.len() && keep(bottom + 1) {
        bottom += 1;
    }
    Some(BaselineBand { v_ind_max, top, bottom })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Axis;

    fn rows(mask: &[&str]) -> InkImage {
        InkImage::from_ascii(mask)
    }

    #[test]
    fn blank_page_has_no_lines() {
        let page = rows(&["....", "....", "...."]);
        assert!(segment_lines(&page, &LineConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn three_bars() {
        let page = rows(&[
            "..........",
            "##########",
            "##########",
            "..........",
            "..........",
            "..######..",
            "..######..",
            "..........",
            "..........",
            ".####.....",
            ".####.....",
        ]);
        let lines = segment_lines(&page, &LineConfig::default()).unwrap();
        let bands: Vec<_> = lines.iter().map(|l| l.y_band).collect();
        assert_eq!(bands, vec![Band::new(1, 2), Band::new(5, 6), Band::new(9, 10)]);
        assert_eq!(lines[1].image.origin(), (0, 5));
    }

    #[test]
    fn dot_band_attaches_to_body() {
        let page = rows(&[
            "....#.....",
            "..........",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "..........",
            "..........",
            "..........",
            "..........",
            "..........",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
            "##########",
        ]);
        let lines = segment_lines(&page, &LineConfig::default()).unwrap();
        let bands: Vec<_> = lines.iter().map(|l| l.y_band).collect();
        assert_eq!(bands, vec![Band::new(0, 7), Band::new(13, 18)]);
    }

    #[test]
    fn baseline_single_row() {
        let mut mask = vec!["......"; 10];
        mask[7] = "######";
        let b = compute_baseline(&rows(&mask), 0.5).unwrap();
        assert_eq!(
            b,
            BaselineBand {
                v_ind_max: 7,
                top: 7,
                bottom: 7
            }
        );
    }

    #[test]
    fn baseline_contiguous_run() {
        let p = Profile {
            axis: Axis::Horizontal,
            values: vec![0, 255, 510, 1020, 1020, 510, 255, 0],
        };
        let b = baseline_from_profile(&p, 0.6).unwrap();
        assert_eq!(
            b,
            BaselineBand {
                v_ind_max: 3,
                top: 3,
                bottom: 4
            }
        );
        let b = baseline_from_profile(&p, 0.5).unwrap();
        assert_eq!((b.top, b.bottom), (2, 5));
    }

    #[test]
    fn baseline_empty_line() {
        assert!(matches!(compute_baseline(&rows(&["..."]), 0.5), Err(Error::EmptyLine)));
    }

    #[test]
    fn weighted_median_ignores_many_dot_bands() {
        let bands = [Band::new(0, 1), Band::new(3, 12), Band::new(14, 15), Band::new(17, 18)];
        let mass = [510, 25500, 510, 510];
        assert_eq!(weighted_median_height(&bands, &mass), 10);
    }
}
