//! Binary greyscale PGM (`P5`, 8-bit) images with pixels scaled to `[0, 1]`.

use std::path::Path;

use tfkrylov_core::deblur::Image;

use crate::error::HarnessError;

fn err(offset: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Pgm { offset, message: message.into() }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&c) = self.data.get(self.pos) {
            if c == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, HarnessError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err(start, format!("{what} out of range")))
    }
}

pub fn decode(data: &[u8]) -> Result<Image, HarnessError> {
    if !data.starts_with(b"P5") {
        return Err(err(0, "missing P5 magic number"));
    }
    let mut cur = Cursor { data, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    cur.skip_space_and_comments();
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(err(maxval_at, format!("maxval {maxval} unsupported, expected 255")));
    }
    if width == 0 || height == 0 {
        return Err(err(maxval_at, "empty image"));
    }
    if !data.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(err(cur.pos, "expected a single whitespace before the raster"));
    }
    let start = cur.pos + 1;
    let len = width * height;
    if data.len() < start + len {
        return Err(err(data.len(), format!("raster truncated, expected {len} bytes")));
    }
    let pixels = data[start..start + len].iter().map(|&b| f64::from(b) / 255.0).collect();
    Ok(Image::new(width, height, pixels)?)
}

pub fn encode(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.pixels().iter().map(|&p| (p.clamp(0.0, 1.0) * 255.0).round() as u8));
    out
}

pub fn pgm_read(path: &Path) -> Result<Image, HarnessError> {
    let data = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    decode(&data)
}

pub fn pgm_write(path: &Path, img: &Image) -> Result<(), HarnessError> {
    std::fs::write(path, encode(img)).map_err(|e| HarnessError::io(path, e))
}
