use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default appearance-signal stride.
pub const DEFAULT_AS_STRIDE: usize = 16;
/// Default FillIn scale (decoder at 1/4 resolution).
pub const DEFAULT_FILLIN_SCALE: usize = 4;

/// Decoder structure the fusion is run for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// One fusion at the 1/4 decoder scale.
    Bi4,
    /// Both feature levels upsampled to 1/2 scale, then fused once.
    Bi2,
    /// Two fusions with complementary signals, for concatenation.
    Reverse,
}

impl Variant {
    /// FillIn scale the structure is defined at.
    pub fn default_scale(self) -> usize {
        match self {
            Variant::Bi4 | Variant::Reverse => 4,
            Variant::Bi2 => 2,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Bi4 => "bi4",
            Variant::Bi2 => "bi2",
            Variant::Reverse => "reverse",
        })
    }
}

impl FromStr for Variant {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bi4" => Ok(Variant::Bi4),
            "bi2" => Ok(Variant::Bi2),
            "reverse" => Ok(Variant::Reverse),
            _ => Err(ConfigError::UnknownVariant(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("fillin scale must be >= 1")]
    ZeroScale,
    #[error("appearance-signal stride must be >= 1")]
    ZeroStride,
    #[error("reverse flag ({reverse}) disagrees with variant {variant}")]
    ReverseMismatch { reverse: bool, variant: Variant },
    #[error("unknown structure variant {0:?}")]
    UnknownVariant(String),
}

/// FillIn scale `t`, appearance-signal stride `p`, and the structure variant.
///
/// The two strides are independent: `p` controls how much of the map is handed to
/// low-level features, `t` is the resolution ratio of the maps being fused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FusionConfig {
    fillin_scale: usize,
    as_stride: usize,
    reverse: bool,
    variant: Variant,
}

impl FusionConfig {
    pub fn new(variant: Variant, fillin_scale: usize, as_stride: usize) -> Result<Self, ConfigError> {
        Self::from_parts(fillin_scale, as_stride, variant == Variant::Reverse, variant)
    }

    pub fn from_parts(
        fillin_scale: usize,
        as_stride: usize,
        reverse: bool,
        variant: Variant,
    ) -> Result<Self, ConfigError> {
        if fillin_scale == 0 {
            return Err(ConfigError::ZeroScale);
        }
        if as_stride == 0 {
            return Err(ConfigError::ZeroStride);
        }
        if reverse != (variant == Variant::Reverse) {
            return Err(ConfigError::ReverseMismatch { reverse, variant });
        }
        Ok(Self { fillin_scale, as_stride, reverse, variant })
    }

    pub fn bi4(as_stride: usize) -> Result<Self, ConfigError> {
        Self::new(Variant::Bi4, 4, as_stride)
    }

    pub fn bi2(as_stride: usize) -> Result<Self, ConfigError> {
        Self::new(Variant::Bi2, 2, as_stride)
    }

    pub fn fillin_scale(&self) -> usize {
        self.fillin_scale
    }

    pub fn as_stride(&self) -> usize {
        self.as_stride
    }

    pub fn reverse(&self) -> bool {
        self.reverse
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self { fillin_scale: DEFAULT_FILLIN_SCALE, as_stride: DEFAULT_AS_STRIDE, reverse: false, variant: Variant::Bi4 }
    }
}
