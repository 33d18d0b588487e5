//! Command-line front end. Exit codes: 0 success, 1 input or data error,
//! 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::char_seg::{segment_page, CutSource, VerdictReason};
use crate::config::{ReadingOrder, SegmentConfig};
use crate::error::{Error, Result};
use crate::evalsynth::{evaluate, generate_synthetic_page, CountRange, GroundTruth, SyntheticSpec};
use crate::profile::{horizontal_profile, vertical_profile};
use crate::raster::io::{encode_png, encode_png_gray, write_atomic};
use crate::raster::{binarize, encode_pgm, load_image, otsu_threshold, GrayImage};
use crate::tree::SegmentTree;

#[derive(Debug, Parser)]
#[command(
    name = "arseg",
    version,
    about = "Projection-profile segmentation of Arabic page images"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment a page image into lines, words and characters (JSON).
    Segment {
        input: PathBuf,
        /// Output JSON path; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Draw line bands, baseline bands, pulses and cuts over a page.
    Overlay {
        input: PathBuf,
        tree: PathBuf,
        /// Output image (.png for colour, .pgm for grayscale).
        output: PathBuf,
    },
    /// Dump a projection profile as CSV.
    Profile {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = AxisArg::Horizontal)]
        axis: AxisArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = crate::raster::DEFAULT_THRESHOLD)]
        threshold: u8,
        #[arg(long)]
        otsu: bool,
    },
    /// Generate a synthetic page and its ground truth.
    Synth {
        /// Output image (.pgm or .png).
        #[arg(long)]
        image: PathBuf,
        /// Output ground-truth JSON.
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Score a segmentation against ground truth; prints a JSON report.
    Eval {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, default_value_t = 1)]
        tol: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Horizontal,
    Vertical,
}

/// Pipeline tunables. Defaults match [`SegmentConfig::default`].
#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Fixed binarization threshold (pixels below it are ink).
    #[arg(long, default_value_t = crate::raster::DEFAULT_THRESHOLD)]
    pub threshold: u8,
    /// Pick the binarization threshold with Otsu's method.
    #[arg(long)]
    pub otsu: bool,
    /// Absolute line-profile threshold.
    #[arg(long)]
    pub line_threshold: Option<u64>,
    /// Line-profile threshold as a fraction of the profile maximum.
    #[arg(long, default_value_t = 0.0)]
    pub line_threshold_ratio: f64,
    #[arg(long, default_value_t = 1)]
    pub line_min_width: usize,
    #[arg(long, default_value_t = 0)]
    pub line_merge_gap: usize,
    #[arg(long, default_value_t = 0.3)]
    pub min_body_ratio: f64,
    #[arg(long, default_value_t = 0.5)]
    pub attach_gap_ratio: f64,
    /// Baseline band keeps rows at or above this fraction of the peak.
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Word gap in columns (overrides --word-gap-ratio).
    #[arg(long)]
    pub word_gap: Option<usize>,
    #[arg(long, default_value_t = 0.3)]
    pub word_gap_ratio: f64,
    /// Amplitude filter tolerance.
    #[arg(long, default_value_t = crate::profile::INK_WEIGHT)]
    pub epsilon: u64,
    /// Shortest connection pulse in columns.
    #[arg(long, default_value_t = 2)]
    pub min_len: usize,
    #[arg(long)]
    pub max_diacritic_area: Option<usize>,
    #[arg(long, default_value_t = 1.5)]
    pub diacritic_area_factor: f64,
    #[arg(long, value_enum, default_value_t = ReadingOrder::Image)]
    pub reading_order: ReadingOrder,
}

impl ConfigArgs {
    pub fn to_config(&self) -> SegmentConfig {
        let mut cfg = SegmentConfig {
            threshold: self.threshold,
            otsu: self.otsu,
            reading_order: self.reading_order,
            ..SegmentConfig::default()
        };
        cfg.line.threshold = self.line_threshold;
        cfg.line.threshold_ratio = self.line_threshold_ratio;
        cfg.line.min_width = self.line_min_width;
        cfg.line.merge_gap = self.line_merge_gap;
        cfg.line.min_body_ratio = self.min_body_ratio;
        cfg.line.attach_gap_ratio = self.attach_gap_ratio;
        cfg.line.beta = self.beta;
        cfg.word.gap_px = self.word_gap;
        cfg.word.gap_ratio = self.word_gap_ratio;
        cfg.chars.epsilon = self.epsilon;
        cfg.chars.min_len = self.min_len;
        cfg.chars.max_diacritic_area = self.max_diacritic_area;
        cfg.chars.diacritic_area_factor = self.diacritic_area_factor;
        cfg
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    #[arg(long, default_value_t = 3)]
    pub lines: usize,
    /// Words per line, `N` or `MIN..MAX`.
    #[arg(long, default_value = "2..5")]
    pub words_per_line: CountRange,
    /// Characters per word, `N` or `MIN..MAX`.
    #[arg(long, default_value = "1..5")]
    pub chars_per_word: CountRange,
    #[arg(long, default_value_t = 2)]
    pub stroke: usize,
    #[arg(long, default_value_t = 16)]
    pub char_size: usize,
    #[arg(long)]
    pub char_width: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub bridge_len: usize,
    #[arg(long, default_value_t = 0.3)]
    pub dot_prob: f64,
    #[arg(long)]
    pub gap: Option<usize>,
    #[arg(long)]
    pub line_gap: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub margin: usize,
    #[arg(long)]
    pub page_width: Option<usize>,
    #[arg(long)]
    pub page_height: Option<usize>,
}

impl SpecArgs {
    pub fn to_spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            lines: self.lines,
            words_per_line: self.words_per_line,
            chars_per_word: self.chars_per_word,
            stroke_px: self.stroke,
            char_size_px: self.char_size,
            char_width_px: self.char_width,
            bridge_len_px: self.bridge_len,
            dot_prob: self.dot_prob,
            gap_px: self.gap,
            line_gap_px: self.line_gap,
            margin_px: self.margin,
            page_width: self.page_width,
            page_height: self.page_height,
        }
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Segment { input, output, config } => cmd_segment(&input, output.as_deref(), &config.to_config()),
        Command::Overlay { input, tree, output } => cmd_overlay(&input, &tree, &output),
        Command::Profile {
            input,
            axis,
            output,
            threshold,
            otsu,
        } => cmd_profile(&input, axis, output.as_deref(), threshold, otsu),
        Command::Synth {
            image,
            truth,
            seed,
            spec,
        } => cmd_synth(&spec.to_spec(), seed, &image, &truth),
        Command::Eval { tree, truth, tol } => cmd_eval(&tree, &truth, tol),
    }
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => write_atomic(path, bytes),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn cmd_segment(input: &Path, output: Option<&Path>, cfg: &SegmentConfig) -> Result<()> {
    let page = load_image(input)?;
    let mut tree = segment_page(&page, cfg)?;
    tree.page.source = Some(input.display().to_string());
    emit(output, tree.to_json()?.as_bytes())
}

pub fn cmd_profile(input: &Path, axis: AxisArg, output: Option<&Path>, threshold: u8, otsu: bool) -> Result<()> {
    let page = load_image(input)?;
    let t = if otsu { otsu_threshold(&page) } else { threshold };
    let ink = binarize(&page, t);
    let profile = match axis {
        AxisArg::Horizontal => horizontal_profile(&ink),
        AxisArg::Vertical => vertical_profile(&ink),
    };
    emit(output, profile.to_csv().as_bytes())
}

fn encode_for_path(path: &Path, img: &GrayImage) -> Result<Vec<u8>> {
    if has_extension(path, "png") {
        encode_png_gray(img)
    } else {
        Ok(encode_pgm(img))
    }
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

pub fn cmd_synth(spec: &SyntheticSpec, seed: u64, image: &Path, truth: &Path) -> Result<()> {
    let (img, gt) = generate_synthetic_page(spec, seed)?;
    write_atomic(image, &encode_for_path(image, &img)?)?;
    write_atomic(truth, gt.to_json()?.as_bytes())
}

pub fn cmd_eval(tree: &Path, truth: &Path, tol: usize) -> Result<()> {
    let tree = SegmentTree::from_json(&read_text(tree)?)?;
    let truth = GroundTruth::from_json(&read_text(truth)?)?;
    let report = evaluate(&tree, &truth, tol)?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(None, text.as_bytes())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::UnreadableFile {
        path: path.to_path_buf(),
        source,
    })
}

const LINE_MARK: [u8; 3] = [0, 0, 255];
const BASELINE_TINT: [u8; 3] = [190, 215, 255];
const PULSE_ACCEPTED: [u8; 3] = [0, 170, 0];
const PULSE_REJECTED: [u8; 3] = [255, 150, 0];
const CUT_MARK: [u8; 3] = [255, 0, 0];

/// Render markers for `tree` over `page` as interleaved RGB.
///
/// * the row above each line band is drawn in blue;
/// * background pixels of the baseline band under each word are tinted;
/// * the row below each line band shows every candidate pulse (green when
///   accepted, orange otherwise);
/// * each character cut column is drawn in red across the line band.
///
/// Pixels outside these markers keep their gray value.
pub fn render_overlay(page: &GrayImage, tree: &SegmentTree) -> Result<Vec<u8>> {
    let expected = (page.width(), page.height());
    let found = (tree.page.width, tree.page.height);
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    let (w, h) = expected;
    let mut rgb: Vec<u8> = page.pixels().iter().flat_map(|&g| [g, g, g]).collect();
    let mut paint = |x: usize, y: usize, c: [u8; 3]| {
        let i = 3 * (y * w + x);
        rgb[i..i + 3].copy_from_slice(&c);
    };
    let threshold = tree.page.threshold;

    for line in &tree.lines {
        if let Some(y) = line.y_band.start.checked_sub(1) {
            for x in 0..w {
                paint(x, y, LINE_MARK);
            }
        }
        for word in &line.words {
            for y in line.baseline.top..=line.baseline.bottom.min(h - 1) {
                for x in word.x_band.start..=word.x_band.end.min(w - 1) {
                    if page.get(x, y) >= threshold {
                        paint(x, y, BASELINE_TINT);
                    }
                }
            }
        }
        let below = line.y_band.end + 1;
        if below < h {
            for pulse in line.words.iter().flat_map(|word| &word.pulses) {
                let color = if pulse.verdict == VerdictReason::Accepted {
                    PULSE_ACCEPTED
                } else {
                    PULSE_REJECTED
                };
                for x in pulse.x_band.start..=pulse.x_band.end.min(w - 1) {
                    paint(x, below, color);
                }
            }
        }
        for ch in line.words.iter().flat_map(|word| &word.chars) {
            if matches!(ch.cut_right, CutSource::Pulse(_)) && ch.x_band.end < w {
                for y in line.y_band.start..=line.y_band.end.min(h - 1) {
                    paint(ch.x_band.end, y, CUT_MARK);
                }
            }
        }
    }
    Ok(rgb)
}

pub fn cmd_overlay(input: &Path, tree: &Path, output: &Path) -> Result<()> {
    let page = load_image(input)?;
    let tree = SegmentTree::from_json(&read_text(tree)?)?;
    let rgb = render_overlay(&page, &tree)?;
    let bytes = if has_extension(output, "pgm") {
        let gray = rgb
            .chunks_exact(3)
            .map(|p| (0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64).round() as u8)
            .collect();
        encode_pgm(&GrayImage::new(page.width(), page.height(), gray)?)
    } else {
        encode_png(page.width(), page.height(), 3, &rgb)?
    };
    write_atomic(output, &bytes)
}
