//! Over-segmentation: SLIC superpixels and connected-component relabelling.
//!
//! Any over-segmentation works as input to the fusion stage; label maps from
//! external tools can be read with [`crate::tensor::read_label_map`] and
//! normalized with [`relabel_connected`].

mod connectivity;
mod image;
mod slic;

pub use connectivity::relabel_connected;
pub use image::{Image, ImageError};
pub use slic::{slic_segment, SlicError, SlicParams, LABEL_COUNT_FACTOR};
