//! PGM (P5/P2) and PNG codecs.

use std::fs;
use std::io::{Cursor, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::GrayImage;

const PNG_SIGNATURE: &[u8] = &[0x89, b'P', b'N', b'G', b'\r', b'\n', 0x1a, b'\n'];

/// Read a PGM or PNG file into 8-bit grayscale.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::UnreadableFile {
        path: path.to_path_buf(),
        source,
    })?;
    read_image_bytes(&bytes)
}

/// Decode an in-memory PGM or PNG, sniffing the format from its magic.
pub fn read_image_bytes(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.starts_with(PNG_SIGNATURE) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P5") || bytes.starts_with(b"P2") {
        decode_pgm(bytes)
    } else if bytes.len() >= 2 && bytes[0] == b'P' && bytes[1].is_ascii_digit() {
        Err(Error::UnsupportedFormat(format!(
            "netpbm variant P{} (only P2/P5 graymaps are accepted)",
            bytes[1] as char
        )))
    } else {
        Err(Error::UnsupportedFormat("not a PGM or PNG file".into()))
    }
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("{what} out of range")))
    }
}

fn rescale(value: usize, maxval: usize) -> u8 {
    if maxval == 255 {
        value as u8
    } else {
        ((value * 255 + maxval / 2) / maxval) as u8
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let binary = bytes.starts_with(b"P5");
    let mut reader = HeaderReader { bytes, pos: 2 };
    let width = reader.number("width")?;
    let height = reader.number("height")?;
    let maxval = reader.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::MalformedHeader(format!("maxval {maxval} outside 1..=65535")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedHeader("image too large".into()))?;

    let mut pixels = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        match bytes.get(reader.pos) {
            Some(b) if b.is_ascii_whitespace() => reader.pos += 1,
            _ => return Err(Error::MalformedHeader("missing separator after maxval".into())),
        }
        let data = &bytes[reader.pos..];
        let sample_bytes = if maxval > 255 { 2 } else { 1 };
        if data.len() < count * sample_bytes {
            return Err(Error::MalformedHeader(format!(
                "raster truncated: need {} bytes, have {}",
                count * sample_bytes,
                data.len()
            )));
        }
        for i in 0..count {
            let v = if sample_bytes == 2 {
                u16::from_be_bytes([data[2 * i], data[2 * i + 1]]) as usize
            } else {
                data[i] as usize
            };
            if v > maxval {
                return Err(Error::MalformedHeader(format!("sample {v} exceeds maxval {maxval}")));
            }
            pixels.push(rescale(v, maxval));
        }
    } else {
        for _ in 0..count {
            let v = reader.number("sample")?;
            if v > maxval {
                return Err(Error::MalformedHeader(format!("sample {v} exceeds maxval {maxval}")));
            }
            pixels.push(rescale(v, maxval));
        }
    }
    GrayImage::new(width, height, pixels)
}

fn luma(r: u8, g: u8, b: u8) -> u8 {
    (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64).round() as u8
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    let png_err = |e: png::DecodingError| Error::MalformedHeader(format!("png: {e}"));
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = decoder.read_info().map_err(png_err)?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::MalformedHeader("png: image too large".into()))?;
    let mut buf = vec![0u8; size];
    let frame = reader.next_frame(&mut buf).map_err(png_err)?;
    buf.truncate(frame.buffer_size());
    let (w, h) = (frame.width as usize, frame.height as usize);

    let pixels: Vec<u8> = match frame.color_type {
        png::ColorType::Grayscale => buf,
        png::ColorType::GrayscaleAlpha => buf.chunks_exact(2).map(|p| p[0]).collect(),
        png::ColorType::Rgb => buf.chunks_exact(3).map(|p| luma(p[0], p[1], p[2])).collect(),
        png::ColorType::Rgba => buf.chunks_exact(4).map(|p| luma(p[0], p[1], p[2])).collect(),
        png::ColorType::Indexed => return Err(Error::UnsupportedFormat("indexed png after expansion".into())),
    };
    GrayImage::new(w, h, pixels)
}

/// Binary PGM (P5, maxval 255) bytes for `img`.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn write_pgm(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    fs::write(path, encode_pgm(img))?;
    Ok(())
}

/// Encode 8-bit PNG; `channels` is 1 (gray) or 3 (RGB).
pub fn encode_png(width: usize, height: usize, channels: usize, data: &[u8]) -> Result<Vec<u8>> {
    let color = match channels {
        1 => png::ColorType::Grayscale,
        3 => png::ColorType::Rgb,
        n => return Err(Error::UnsupportedFormat(format!("{n}-channel png output"))),
    };
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, width as u32, height as u32);
        encoder.set_color(color);
        encoder.set_depth(png::BitDepth::Eight);
        let enc_err = |e: png::EncodingError| Error::Io(std::io::Error::other(e));
        let mut writer = encoder.write_header().map_err(enc_err)?;
        writer.write_image_data(data).map_err(enc_err)?;
        writer.finish().map_err(enc_err)?;
    }
    Ok(out)
}

/// Grayscale PNG bytes for `img`.
pub fn encode_png_gray(img: &GrayImage) -> Result<Vec<u8>> {
    encode_png(img.width(), img.height(), 1, img.pixels())
}

/// Write `bytes` to `path` through a temporary sibling file and a rename,
/// so readers never observe a half-written file.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
