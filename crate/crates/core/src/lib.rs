//! Superpixel-guided FillIn feature fusion.
//!
//! A full-resolution superpixel map decides, region by region, whether a fused
//! feature map copies the high-level (coarse, semantic) features or the
//! low-level (fine) ones. A superpixel keeps its high-level features only if it
//! survives point-sampled downsampling at the appearance-signal stride; small
//! superpixels that would vanish are filled in from the low-level map.
//!
//! Feature math is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! name the common instantiations.

pub mod cli;
pub mod demo;
pub mod fusion;
pub mod netpbm;
pub mod oracle;
pub mod scalar;
pub mod signal;
pub mod superpixel;
pub mod tensor;

pub use fusion::{
    bilinear_upsample, build_masks, concat_channels, fillin_fuse, run_structure, FusedPair, FusionError,
    StructureOutput,
};
pub use scalar::Scalar;
pub use signal::{compute_signal, downsample, label_set, reverse_signal, AppearanceSignal, SignalError};
pub use superpixel::{relabel_connected, slic_segment, Image, SlicParams};
pub use tensor::{BinaryMask, FeatureMap, FusionConfig, Label, LabelMap, Variant};

pub type FeatureMapF32 = FeatureMap<f32>;
pub type FeatureMapF64 = FeatureMap<f64>;
pub type ImageF32 = Image<f32>;
pub type ImageF64 = Image<f64>;
pub type FusedPairF32 = FusedPair<f32>;
pub type FusedPairF64 = FusedPair<f64>;
