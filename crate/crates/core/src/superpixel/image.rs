use thiserror::Error;

use crate::scalar::Scalar;

/// Gray (1 channel) or RGB (3 channels) image with intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<T> {
    rows: usize,
    cols: usize,
    channels: usize,
    data: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("image must have 1 or 3 channels, got {0}")]
    Channels(usize),
    #[error("empty image {rows}x{cols}")]
    Empty { rows: usize, cols: usize },
    #[error("expected {expected} samples, found {found}")]
    Length { expected: usize, found: usize },
    #[error("intensity at flat index {index} is outside [0, 1]")]
    OutOfRange { index: usize },
}

impl<T: Scalar> Image<T> {
    pub fn new(rows: usize, cols: usize, channels: usize, data: Vec<T>) -> Result<Self, ImageError> {
        if channels != 1 && channels != 3 {
            return Err(ImageError::Channels(channels));
        }
        if rows == 0 || cols == 0 {
            return Err(ImageError::Empty { rows, cols });
        }
        let expected = rows * cols * channels;
        if data.len() != expected {
            return Err(ImageError::Length { expected, found: data.len() });
        }
        // NaN fails both comparisons and is rejected with the rest.
        if let Some(index) = data.iter().position(|&v| !(v >= T::zero() && v <= T::one())) {
            return Err(ImageError::OutOfRange { index });
        }
        Ok(Self { rows, cols, channels, data })
    }

    /// Maps 8-bit samples to `[0, 1]` by division by 255.
    pub fn from_u8(rows: usize, cols: usize, channels: usize, samples: &[u8]) -> Result<Self, ImageError> {
        let scale = T::from_f64_lossy(255.0);
        let data = samples.iter().map(|&b| T::from_f64_lossy(f64::from(b)) / scale).collect();
        Self::new(rows, cols, channels, data)
    }

    pub fn to_u8(&self) -> Vec<u8> {
        self.data.iter().map(|v| (v.to_f64_lossy() * 255.0).round().clamp(0.0, 255.0) as u8).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn pixel(&self, row: usize, col: usize) -> &[T] {
        let start = (row * self.cols + col) * self.channels;
        &self.data[start..start + self.channels]
    }
}
