//! Decoder structure variants expressed as fusion configurations.
//!
//! * `Bi4` / `Bi2`: bring both maps to `1/t` of the superpixel map's resolution
//!   (bilinear, upsampling only) and fuse once with the stride-`p` signal.
//! * `Reverse`: fuse twice at the same resolution, once with the signal and once
//!   with its complement. The two results are meant to be concatenated.

use super::{bilinear_upsample, build_masks, concat_channels, fillin_fuse, FusedPair, FusionError};
use crate::scalar::Scalar;
use crate::signal::compute_signal;
use crate::tensor::{FeatureMap, FusionConfig, LabelMap};

#[derive(Debug, Clone, PartialEq)]
pub enum StructureOutput<T> {
    Single(FusedPair<T>),
    Reverse { thick: FusedPair<T>, thin: FusedPair<T> },
}

impl<T: Scalar> StructureOutput<T> {
    /// The primary fused pair (the thick one for `Reverse`).
    pub fn primary(&self) -> &FusedPair<T> {
        match self {
            StructureOutput::Single(pair) => pair,
            StructureOutput::Reverse { thick, .. } => thick,
        }
    }

    pub fn pairs(&self) -> Vec<&FusedPair<T>> {
        match self {
            StructureOutput::Single(pair) => vec![pair],
            StructureOutput::Reverse { thick, thin } => vec![thick, thin],
        }
    }

    /// Channel concatenation of all fused maps, thick first.
    pub fn concatenated(&self) -> FeatureMap<T> {
        match self {
            StructureOutput::Single(pair) => pair.fused.clone(),
            StructureOutput::Reverse { thick, thin } => {
                concat_channels(&thick.fused, &thin.fused).expect("both fused at the same resolution")
            }
        }
    }
}

/// Spatial size of the maps fused at scale `t` for a full-resolution superpixel map.
pub fn fusion_dims(superpixels: &LabelMap, t: usize) -> (usize, usize) {
    (superpixels.rows().div_ceil(t), superpixels.cols().div_ceil(t))
}

/// Bilinearly upsamples `map` to `target`; maps already at `target` pass through.
pub fn align_to<T: Scalar>(
    what: &'static str,
    map: &FeatureMap<T>,
    target: (usize, usize),
) -> Result<FeatureMap<T>, FusionError> {
    if map.rows() > target.0 || map.cols() > target.1 {
        return Err(FusionError::TooLarge { what, actual: map.dims(), target });
    }
    Ok(bilinear_upsample(map, target.0, target.1))
}

pub fn run_structure<T: Scalar>(
    cfg: &FusionConfig,
    superpixels: &LabelMap,
    low: &FeatureMap<T>,
    high: &FeatureMap<T>,
) -> Result<StructureOutput<T>, FusionError> {
    let target = fusion_dims(superpixels, cfg.fillin_scale());
    let low = align_to("low-level features", low, target)?;
    let high = align_to("high-level features", high, target)?;
    let signal = compute_signal(superpixels, cfg.as_stride())?;
    let (mask_h, mask_l) = build_masks(superpixels, cfg.fillin_scale(), &signal)?;
    let thick = fillin_fuse(&low, &high, &mask_h)?;
    if !cfg.reverse() {
        return Ok(StructureOutput::Single(thick));
    }
    let thin = fillin_fuse(&low, &high, &mask_l)?;
    Ok(StructureOutput::Reverse { thick, thin })
}
