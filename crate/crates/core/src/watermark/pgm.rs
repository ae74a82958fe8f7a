//! 8-bit grayscale rasters and binary PGM (`P5`) files.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major 8-bit grayscale image.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Pgm(format!("empty image {width}x{height}")));
        }
        if pixels.len() != width * height {
            return Err(Error::Pgm(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> Option<u8> {
        (x < self.width && y < self.height).then(|| self.pixels[y * self.width + x])
    }
}

/// A decoded PGM file. Comments are kept for inspection but never written back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgm {
    pub image: GrayImage,
    pub comments: Vec<String>,
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Pgm> {
    let mut cursor = Header {
        bytes,
        pos: 0,
        comments: Vec::new(),
    };
    if bytes.get(..2) != Some(b"P5") {
        return Err(Error::Pgm("missing P5 magic number".into()));
    }
    cursor.pos = 2;
    let width = cursor.number("width")?;
    let height = cursor.number("height")?;
    let maxval = cursor.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Pgm(format!(
            "only maxval 255 is supported, got {maxval}"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => return Err(Error::Pgm("missing whitespace after maxval".into())),
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::Pgm("image dimensions overflow".into()))?;
    let raster = bytes
        .get(cursor.pos..cursor.pos + len)
        .ok_or_else(|| Error::Pgm(format!("raster truncated: expected {len} bytes")))?;
    Ok(Pgm {
        image: GrayImage::new(width, height, raster.to_vec())?,
        comments: cursor.comments,
    })
}

pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width, image.height).into_bytes();
    out.extend_from_slice(&image.pixels);
    out
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<Pgm> {
    decode_pgm(&fs::read(path)?)
}

pub fn write_pgm(image: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(&encode_pgm(image))?;
    Ok(())
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
    comments: Vec<String>,
}

impl Header<'_> {
    fn skip_blanks(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                let end = self.bytes[self.pos..]
                    .iter()
                    .position(|&c| c == b'\n')
                    .map_or(self.bytes.len(), |p| self.pos + p);
                let text = String::from_utf8_lossy(&self.bytes[self.pos + 1..end]);
                self.comments.push(text.trim().to_string());
                self.pos = end;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_blanks();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Pgm(format!("expected {what} at byte {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|e| Error::Pgm(format!("bad {what}: {e}")))
    }
}
