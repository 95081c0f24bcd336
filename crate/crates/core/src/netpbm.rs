//! 8-bit binary PGM (`P5`) / PPM (`P6`) input and output.
//!
//! Only maxval 255 is accepted. Decoding and encoding go through the `image`
//! crate's PNM codec; this module enforces the subset used by the tools.

use std::io::Cursor;

use image::codecs::pnm::{PnmDecoder, PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::superpixel::{Image, ImageError};
use crate::tensor::{BinaryMask, Label, LabelMap};

#[derive(Debug, Error)]
pub enum NetpbmError {
    #[error("not a binary PGM/PPM file (expected P5 or P6)")]
    UnsupportedSubtype,
    #[error("maxval {0} is not supported, expected 255")]
    UnsupportedMaxval(u32),
    #[error("netpbm decode failed: {0}")]
    Decode(#[from] image::ImageError),
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Decodes a `P5` or `P6` file with maxval 255 into intensities in `[0, 1]`.
pub fn decode_image<T: Scalar>(bytes: &[u8]) -> Result<Image<T>, NetpbmError> {
    let decoder = PnmDecoder::new(Cursor::new(bytes))?;
    let header = decoder.header();
    let channels = match header.subtype() {
        PnmSubtype::Graymap(SampleEncoding::Binary) => 1,
        PnmSubtype::Pixmap(SampleEncoding::Binary) => 3,
        _ => return Err(NetpbmError::UnsupportedSubtype),
    };
    if header.maximal_sample() != 255 {
        return Err(NetpbmError::UnsupportedMaxval(header.maximal_sample()));
    }
    let (width, height) = (header.width() as usize, header.height() as usize);
    let raw = match DynamicImage::from_decoder(decoder)? {
        DynamicImage::ImageLuma8(buf) => buf.into_raw(),
        DynamicImage::ImageRgb8(buf) => buf.into_raw(),
        _ => return Err(NetpbmError::UnsupportedSubtype),
    };
    Ok(Image::from_u8(height, width, channels, &raw)?)
}

pub fn encode_gray(rows: usize, cols: usize, samples: &[u8]) -> Vec<u8> {
    encode(rows, cols, samples, PnmSubtype::Graymap(SampleEncoding::Binary), ExtendedColorType::L8)
}

pub fn encode_rgb(rows: usize, cols: usize, samples: &[u8]) -> Vec<u8> {
    encode(rows, cols, samples, PnmSubtype::Pixmap(SampleEncoding::Binary), ExtendedColorType::Rgb8)
}

fn encode(rows: usize, cols: usize, samples: &[u8], subtype: PnmSubtype, color: ExtendedColorType) -> Vec<u8> {
    let mut out = Vec::new();
    PnmEncoder::new(&mut out)
        .with_subtype(subtype)
        .encode(samples, cols as u32, rows as u32, color)
        .expect("in-memory netpbm encoding of a well-formed buffer");
    out
}

/// Encodes an image as `P5` (gray) or `P6` (RGB), rounding intensities to 8 bits.
pub fn encode_image<T: Scalar>(img: &Image<T>) -> Vec<u8> {
    let bytes = img.to_u8();
    match img.channels() {
        1 => encode_gray(img.rows(), img.cols(), &bytes),
        _ => encode_rgb(img.rows(), img.cols(), &bytes),
    }
}

/// Mask as `P5`: 0 for unset, 255 for set.
pub fn encode_mask(mask: &BinaryMask) -> Vec<u8> {
    encode_gray(mask.rows(), mask.cols(), &mask.to_gray_bytes())
}

/// Palette color for a label: hue advanced by the golden ratio conjugate per label id.
pub fn label_color(label: Label) -> [u8; 3] {
    const GOLDEN_CONJUGATE: f64 = 0.618_033_988_749_894_9;
    let hue = (f64::from(label) * GOLDEN_CONJUGATE).fract();
    hsv_to_rgb(hue, 0.65, 0.95)
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let h6 = h * 6.0;
    let sector = h6.floor() as u32 % 6;
    let f = h6 - h6.floor();
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    let (r, g, b) = match sector {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    let to_u8 = |x: f64| (x * 255.0).round().clamp(0.0, 255.0) as u8;
    [to_u8(r), to_u8(g), to_u8(b)]
}

/// Color-coded `P6` rendering of a label map.
pub fn encode_label_palette(map: &LabelMap) -> Vec<u8> {
    let samples: Vec<u8> = map.as_slice().iter().flat_map(|&l| label_color(l)).collect();
    encode_rgb(map.rows(), map.cols(), &samples)
}
