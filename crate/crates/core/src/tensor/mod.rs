//! Label maps, feature maps, binary masks and fusion configuration.
//!
//! All values are immutable after construction. Indexing is 0-based and row-major.

mod config;
mod feature_map;
mod label_map;
mod mask;

use thiserror::Error;

pub use config::{ConfigError, FusionConfig, Variant, DEFAULT_AS_STRIDE, DEFAULT_FILLIN_SCALE};
pub use feature_map::{
    read_feature_map, write_feature_map, FeatureMap, FeatureMapError, FeatureMapReadError, FMAP_MAGIC,
};
pub use label_map::{read_label_map, write_label_map, Label, LabelMap, LabelMapParseError};
pub use mask::BinaryMask;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("empty shape {rows}x{cols}")]
    Empty { rows: usize, cols: usize },
    #[error("shape {rows}x{cols} is too large")]
    TooLarge { rows: usize, cols: usize },
    #[error("expected {expected} elements, found {found}")]
    Length { expected: usize, found: usize },
}
