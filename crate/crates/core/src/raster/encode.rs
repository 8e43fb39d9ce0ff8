//! Image output. PPM is binary P6 with maxval 255, written byte for byte
//! here; PNG goes through the `png` crate.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use super::RgbImage;

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("cannot encode an empty image")]
    Empty,
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("PNG encoding failed: {0}")]
    Png(#[from] png::EncodingError),
    #[error("malformed PPM: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ImageFormat {
    #[default]
    Ppm,
    Png,
}

impl ImageFormat {
    pub fn name(self) -> &'static str {
        match self {
            ImageFormat::Ppm => "ppm",
            ImageFormat::Png => "png",
        }
    }

    pub fn content_type(self) -> &'static str {
        match self {
            ImageFormat::Ppm => "image/x-portable-pixmap",
            ImageFormat::Png => "image/png",
        }
    }

    /// Format implied by a file extension, defaulting to PPM.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("png") => ImageFormat::Png,
            _ => ImageFormat::Ppm,
        }
    }
}

impl fmt::Display for ImageFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ImageFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ppm" => Ok(ImageFormat::Ppm),
            "png" => Ok(ImageFormat::Png),
            _ => Err(format!("unknown format `{s}` (expected ppm or png)")),
        }
    }
}

fn encode_ppm(image: &RgbImage, out: &mut impl Write) -> io::Result<()> {
    write!(out, "P6\n{} {}\n255\n", image.width(), image.height())?;
    out.write_all(image.data())
}

fn encode_png(image: &RgbImage, out: &mut impl Write) -> Result<(), png::EncodingError> {
    let mut encoder = png::Encoder::new(out, image.width(), image.height());
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder.write_header()?;
    writer.write_image_data(image.data())?;
    writer.finish()
}

pub fn encode_image(image: &RgbImage, format: ImageFormat) -> Result<Vec<u8>, EncodeError> {
    if image.data().is_empty() {
        return Err(EncodeError::Empty);
    }
    let mut out = Vec::with_capacity(image.data().len() + 32);
    match format {
        ImageFormat::Ppm => encode_ppm(image, &mut out)?,
        ImageFormat::Png => encode_png(image, &mut out)?,
    }
    Ok(out)
}

pub fn write_image(image: &RgbImage, format: ImageFormat, path: &Path) -> Result<(), EncodeError> {
    let bytes = encode_image(image, format)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Read a binary P6 image with maxval 255.
pub fn decode_ppm(bytes: &[u8]) -> Result<RgbImage, EncodeError> {
    let malformed = |m: &str| EncodeError::Malformed(m.to_string());
    let mut pos = 0usize;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        // whitespace and comments between header fields
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(malformed("truncated header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| !b.is_ascii_whitespace()) {
            pos += 1;
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| malformed("header"))?);
    }
    if fields[0] != "P6" {
        return Err(malformed("magic number is not P6"));
    }
    let parse = |s: &str, what: &str| {
        s.parse::<u32>()
            .map_err(|_| EncodeError::Malformed(format!("bad {what} `{s}`")))
    };
    let width = parse(fields[1], "width")?;
    let height = parse(fields[2], "height")?;
    if parse(fields[3], "maxval")? != 255 {
        return Err(malformed("only maxval 255 is supported"));
    }
    // exactly one whitespace byte separates the header from the raster
    if !bytes.get(pos).is_some_and(|b| b.is_ascii_whitespace()) {
        return Err(malformed("missing raster separator"));
    }
    pos += 1;
    let expected = width as usize * height as usize * 3;
    let raster = &bytes[pos..];
    if raster.len() != expected {
        return Err(EncodeError::Malformed(format!(
            "expected {expected} raster bytes, found {}",
            raster.len()
        )));
    }
    Ok(RgbImage::new(width, height, raster.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_white_pixel() {
        let img = RgbImage::filled(1, 1, [255, 255, 255]);
        let bytes = encode_image(&img, ImageFormat::Ppm).unwrap();
        assert_eq!(bytes, b"P6\n1 1\n255\n\xff\xff\xff");
    }

    #[test]
    fn black_then_white() {
        let img = RgbImage::new(2, 1, vec![0, 0, 0, 255, 255, 255]);
        let bytes = encode_image(&img, ImageFormat::Ppm).unwrap();
        let header = b"P6\n2 1\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(&bytes[header.len()..], &[0, 0, 0, 255, 255, 255]);
    }

    #[test]
    fn empty_image_is_rejected() {
        let img = RgbImage::new(0, 0, vec![]);
        assert!(matches!(
            encode_image(&img, ImageFormat::Ppm),
            Err(EncodeError::Empty)
        ));
    }

    #[test]
    fn png_has_signature() {
        let img = RgbImage::filled(3, 2, [10, 20, 30]);
        let bytes = encode_image(&img, ImageFormat::Png).unwrap();
        assert_eq!(&bytes[..8], b"\x89PNG\r\n\x1a\n");
    }

    #[test]
    fn decode_accepts_comments() {
        let bytes = b"P6 # made by hand\n2 1 # size\n255\n\x01\x02\x03\x04\x05\x06";
        let img = decode_ppm(bytes).unwrap();
        assert_eq!(img.data(), &[1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn decode_rejects_garbage() {
        assert!(decode_ppm(b"P5\n1 1\n255\n\x00").is_err());
        assert!(decode_ppm(b"P6\n1 1\n65535\n\x00\x00\x00").is_err());
        assert!(decode_ppm(b"P6\n2 1\n255\n\x00\x00\x00").is_err());
        assert!(decode_ppm(b"P6\n1").is_err());
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(ImageFormat::from_path(Path::new("a/b.PNG")), ImageFormat::Png);
        assert_eq!(ImageFormat::from_path(Path::new("out.ppm")), ImageFormat::Ppm);
        assert_eq!(ImageFormat::from_path(Path::new("noext")), ImageFormat::Ppm);
    }

    proptest! {
        #[test]
        fn ppm_round_trip(w in 1u32..24, h in 1u32..24, seed in any::<u64>()) {
            let mut state = seed;
            let data: Vec<u8> = (0..w * h * 3)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (state >> 56) as u8
                })
                .collect();
            let img = RgbImage::new(w, h, data);
            let bytes = encode_image(&img, ImageFormat::Ppm).unwrap();
            prop_assert_eq!(decode_ppm(&bytes).unwrap(), img);
        }
    }
}
