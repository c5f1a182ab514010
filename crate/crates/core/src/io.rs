//! Grayscale images and their plain-text formats.
//!
//! PGM files are written as `P2` with values in `[0, 1]` mapped to `0..=255`.
//! The float CSV format stores one image row per line with 17 significant
//! digits, so a write/read cycle is exact.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::splitting::fmt_f64;

/// Row-major grayscale image.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                found: pixels.len(),
            });
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Image {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }
}

fn format_error(format: &'static str, message: impl Into<String>) -> Error {
    Error::Format {
        format,
        message: message.into(),
    }
}

pub fn write_pgm(image: &Image, mut out: impl Write) -> Result<()> {
    writeln!(out, "P2")?;
    writeln!(out, "{} {}", image.width, image.height)?;
    writeln!(out, "255")?;
    for row in image.pixels.chunks(image.width.max(1)) {
        let line: Vec<String> = row
            .iter()
            .map(|v| ((v.clamp(0.0, 1.0) * 255.0).round() as u8).to_string())
            .collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Reads a plain (`P2`) PGM; `#` comments are skipped and samples are scaled by the max value.
pub fn read_pgm(input: impl BufRead) -> Result<Image> {
    let mut tokens = Vec::new();
    for line in input.lines() {
        let line = line?;
        let content = line.split('#').next().unwrap_or("");
        tokens.extend(content.split_whitespace().map(str::to_owned));
    }
    let mut it = tokens.into_iter();
    match it.next().as_deref() {
        Some("P2") => {}
        Some(other) => {
            return Err(format_error(
                "PGM",
                format!("unsupported magic number {other:?}"),
            ))
        }
        None => return Err(format_error("PGM", "empty file")),
    }
    let mut header = |what: &str| -> Result<usize> {
        let tok = it
            .next()
            .ok_or_else(|| format_error("PGM", format!("missing {what}")))?;
        tok.parse::<usize>()
            .map_err(|_| format_error("PGM", format!("bad {what} {tok:?}")))
    };
    let width = header("width")?;
    let height = header("height")?;
    let maxval = header("maximum value")?;
    if width == 0 || height == 0 {
        return Err(format_error("PGM", "zero-sized image"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(format_error(
            "PGM",
            format!("maximum value {maxval} out of range"),
        ));
    }
    let mut pixels = Vec::with_capacity(width * height);
    for tok in it.by_ref().take(width * height) {
        let v: usize = tok
            .parse()
            .map_err(|_| format_error("PGM", format!("bad sample {tok:?}")))?;
        if v > maxval {
            return Err(format_error(
                "PGM",
                format!("sample {v} exceeds maximum {maxval}"),
            ));
        }
        pixels.push(v as f64 / maxval as f64);
    }
    if pixels.len() != width * height {
        return Err(format_error(
            "PGM",
            format!(
                "expected {} samples, found {}",
                width * height,
                pixels.len()
            ),
        ));
    }
    if it.next().is_some() {
        return Err(format_error("PGM", "trailing data after samples"));
    }
    Image::new(width, height, pixels)
}

pub fn write_float_csv(image: &Image, mut out: impl Write) -> Result<()> {
    for row in image.pixels.chunks(image.width.max(1)) {
        let line: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_float_csv(input: impl BufRead) -> Result<Image> {
    let mut pixels = Vec::new();
    let mut width = None;
    let mut height = 0;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| format_error("CSV", format!("line {}: {e}", i + 1)))?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(format_error(
                    "CSV",
                    format!("line {}: expected {w} values, found {}", i + 1, row.len()),
                ))
            }
            _ => {}
        }
        pixels.extend(row);
        height += 1;
    }
    let width = width.ok_or_else(|| format_error("CSV", "empty file"))?;
    Image::new(width, height, pixels)
}
