//! Channel-last feature tensors and the `FMAP` binary container.
//!
//! Binary layout (all little-endian):
//!
//! ```text
//! b"FMAP" | rows: u32 | cols: u32 | channels: u32 | rows*cols*channels x f32
//! ```
//!
//! Values are row-major with the channel index varying fastest.

use thiserror::Error;

use super::ShapeError;
use crate::scalar::Scalar;

pub const FMAP_MAGIC: &[u8; 4] = b"FMAP";
const HEADER_LEN: usize = 16;

/// `rows x cols x channels` tensor of finite values, channel-last.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap<T> {
    rows: usize,
    cols: usize,
    channels: usize,
    data: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureMapError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("feature map has zero channels")]
    NoChannels,
    #[error("non-finite value at flat index {index}")]
    NonFinite { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureMapReadError {
    #[error("bad magic bytes {0:?}, expected \"FMAP\"")]
    BadMagic(Vec<u8>),
    #[error("dimensions {rows}x{cols}x{channels} are zero or overflow")]
    DimensionOverflow { rows: u32, cols: u32, channels: u32 },
    #[error("payload truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{extra} trailing bytes after payload")]
    TrailingBytes { extra: usize },
    #[error("non-finite value at flat index {index}")]
    NonFinite { index: usize },
}

impl<T: Scalar> FeatureMap<T> {
    pub fn new(rows: usize, cols: usize, channels: usize, data: Vec<T>) -> Result<Self, FeatureMapError> {
        if rows == 0 || cols == 0 {
            return Err(ShapeError::Empty { rows, cols }.into());
        }
        if channels == 0 {
            return Err(FeatureMapError::NoChannels);
        }
        let expected =
            rows.checked_mul(cols).and_then(|n| n.checked_mul(channels)).ok_or(ShapeError::TooLarge { rows, cols })?;
        if data.len() != expected {
            return Err(ShapeError::Length { expected, found: data.len() }.into());
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(FeatureMapError::NonFinite { index });
        }
        Ok(Self { rows, cols, channels, data })
    }

    pub fn filled(rows: usize, cols: usize, channels: usize, value: T) -> Result<Self, FeatureMapError> {
        let n = rows.saturating_mul(cols).saturating_mul(channels);
        Self::new(rows, cols, channels, vec![value; n])
    }

    /// Builds a map by evaluating `f(row, col, channel)` at every element.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> T,
    ) -> Result<Self, FeatureMapError> {
        let mut data = Vec::with_capacity(rows * cols * channels);
        for r in 0..rows {
            for c in 0..cols {
                for ch in 0..channels {
                    data.push(f(r, c, ch));
                }
            }
        }
        Self::new(rows, cols, channels, data)
    }

    /// Construction for internal producers whose outputs are finite by construction.
    pub(crate) fn from_parts_unchecked(rows: usize, cols: usize, channels: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), rows * cols * channels);
        Self { rows, cols, channels, data }
    }
}

impl<T: Copy> FeatureMap<T> {
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, channel: usize) -> T {
        self.data[(row * self.cols + col) * self.channels + channel]
    }

    /// All channels at one spatial position.
    #[inline]
    pub fn pixel(&self, row: usize, col: usize) -> &[T] {
        let start = (row * self.cols + col) * self.channels;
        &self.data[start..start + self.channels]
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }
}

impl FeatureMap<f32> {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.data.len() * 4);
        out.extend_from_slice(FMAP_MAGIC);
        for d in [self.rows, self.cols, self.channels] {
            let d = u32::try_from(d).expect("feature map dimension exceeds u32");
            out.extend_from_slice(&d.to_le_bytes());
        }
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FeatureMapReadError> {
        if bytes.len() < 4 || &bytes[..4] != FMAP_MAGIC {
            return Err(FeatureMapReadError::BadMagic(bytes[..bytes.len().min(4)].to_vec()));
        }
        if bytes.len() < HEADER_LEN {
            return Err(FeatureMapReadError::Truncated { expected: HEADER_LEN, found: bytes.len() });
        }
        let word = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap());
        let (rows, cols, channels) = (word(0), word(1), word(2));
        let overflow = FeatureMapReadError::DimensionOverflow { rows, cols, channels };
        if rows == 0 || cols == 0 || channels == 0 {
            return Err(overflow);
        }
        let count = (rows as usize)
            .checked_mul(cols as usize)
            .and_then(|n| n.checked_mul(channels as usize))
            .ok_or(overflow.clone())?;
        let payload = count.checked_mul(4).ok_or(overflow)?;
        let body = &bytes[HEADER_LEN..];
        if body.len() < payload {
            return Err(FeatureMapReadError::Truncated { expected: payload, found: body.len() });
        }
        if body.len() > payload {
            return Err(FeatureMapReadError::TrailingBytes { extra: body.len() - payload });
        }
        let mut data = Vec::with_capacity(count);
        for (index, chunk) in body.chunks_exact(4).enumerate() {
            let v = f32::from_le_bytes(chunk.try_into().unwrap());
            if !v.is_finite() {
                return Err(FeatureMapReadError::NonFinite { index });
            }
            data.push(v);
        }
        Ok(Self::from_parts_unchecked(rows as usize, cols as usize, channels as usize, data))
    }
}

pub fn read_feature_map(bytes: &[u8]) -> Result<FeatureMap<f32>, FeatureMapReadError> {
    FeatureMap::from_bytes(bytes)
}

pub fn write_feature_map(map: &FeatureMap<f32>) -> Vec<u8> {
    map.to_bytes()
}

impl<T: Scalar> FeatureMap<T> {
    /// Converts element type, e.g. an `f64` pipeline result to `f32` for writing.
    pub fn cast<U: Scalar>(&self) -> Result<FeatureMap<U>, FeatureMapError> {
        let data = self.data.iter().map(|v| U::from_f64_lossy(v.to_f64_lossy())).collect();
        FeatureMap::new(self.rows, self.cols, self.channels, data)
    }
}
