//! Binary greyscale PGM (`P5`) with 8-bit samples, scaled to `[0, 1]`.

use std::path::Path;

use ndarray::Array1;

use crate::error::{HarnessError, Result};

/// Row-major greyscale image with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub rows: usize,
    pub cols: usize,
    pub pixels: Array1<f64>,
}

pub fn load_pgm(path: &Path) -> Result<GrayImage> {
    let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    parse_pgm(&bytes, path)
}

pub fn parse_pgm(bytes: &[u8], path: &Path) -> Result<GrayImage> {
    let fail = |message: String| HarnessError::Format {
        path: path.to_path_buf(),
        message,
    };
    if !bytes.starts_with(b"P5") {
        return Err(fail("not a binary PGM (magic P5 missing)".into()));
    }
    let mut pos = 2;
    let mut header = [0usize; 3];
    for (slot, what) in header.iter_mut().zip(["width", "height", "maxval"]) {
        // whitespace and comments before each field
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *slot = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| fail(format!("bad {what} in header")))?;
    }
    let [cols, rows, maxval] = header;
    if !(1..=255).contains(&maxval) {
        return Err(fail(format!("maxval {maxval} unsupported, need 1..=255")));
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(fail("missing whitespace after header".into()));
    }
    pos += 1;
    let n = rows * cols;
    let payload = bytes
        .get(pos..pos + n)
        .ok_or_else(|| fail(format!("truncated payload: need {n} bytes, have {}", bytes.len() - pos)))?;
    let scale = 1.0 / maxval as f64;
    Ok(GrayImage {
        rows,
        cols,
        pixels: payload.iter().map(|&b| (b as f64 * scale).min(1.0)).collect(),
    })
}

/// Quantizes to 8 bits (round to nearest, clamped to `[0, 1]`).
pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.cols, image.rows).into_bytes();
    out.extend(image.pixels.iter().map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8));
    out
}

pub fn write_pgm(path: &Path, image: &GrayImage) -> Result<()> {
    if image.pixels.len() != image.rows * image.cols {
        return Err(HarnessError::Config(format!(
            "image is {}x{} but has {} pixels",
            image.rows,
            image.cols,
            image.pixels.len()
        )));
    }
    std::fs::write(path, encode_pgm(image)).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_image() {
        let img = parse_pgm(b"P5\n2 2\n255\n\0\0\0\0", Path::new("z")).unwrap();
        assert_eq!((img.rows, img.cols), (2, 2));
        assert!(img.pixels.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn full_scale_and_comments() {
        let img = parse_pgm(b"P5 # made by hand\n3 1\n# max\n255\n\xff\x00\x80", Path::new("c")).unwrap();
        assert_eq!((img.rows, img.cols), (1, 3));
        assert_eq!(img.pixels[0], 1.0);
        assert_eq!(img.pixels[2], 128.0 / 255.0);
    }

    #[test]
    fn rejects_bad_input() {
        for bytes in [&b"P2\n1 1\n255\n0"[..], b"P5\n2 2\n255\n\0\0", b"P5\n1 1\n65535\n\0\0", b"P5\nx 1\n255\n\0"] {
            let err = parse_pgm(bytes, Path::new("bad")).unwrap_err();
            assert!(matches!(err, HarnessError::Format { .. }), "{err}");
            assert_eq!(err.exit_code(), 4);
        }
    }
}
