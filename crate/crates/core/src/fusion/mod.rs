//! FillIn fusion: every spatial cell of the output is copied, across all
//! channels, from exactly one of the two input feature maps.
//!
//! The high-level mask `H` comes from the appearance signal looked up through the
//! superpixel map downsampled to feature resolution; `L = 1 - H`. The fused map is
//! `F_L * L + F_H * H` per channel, computed here as a per-element select.

mod bilinear;
mod structure;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::signal::{downsample, AppearanceSignal, SignalError};
use crate::tensor::{BinaryMask, FeatureMap, Label, LabelMap};

pub use bilinear::bilinear_upsample;
pub use structure::{align_to, fusion_dims, run_structure, StructureOutput};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FusionError {
    #[error("{what}: shape {left:?} does not match {right:?}")]
    ShapeMismatch { what: &'static str, left: (usize, usize, usize), right: (usize, usize, usize) },
    #[error("label {0} is not in the appearance signal's domain")]
    UnknownLabel(Label),
    #[error("{what} is {actual:?}, larger than the fusion resolution {target:?}")]
    TooLarge { what: &'static str, actual: (usize, usize), target: (usize, usize) },
    #[error(transparent)]
    Signal(#[from] SignalError),
}

/// Fused map plus the mask that produced it (1 = taken from the high-level map).
#[derive(Debug, Clone, PartialEq)]
pub struct FusedPair<T> {
    pub fused: FeatureMap<T>,
    pub mask_h: BinaryMask,
}

/// Builds `H` and `L = 1 - H` at the resolution of `superpixels` downsampled by `t`.
pub fn build_masks(
    superpixels: &LabelMap,
    t: usize,
    signal: &AppearanceSignal,
) -> Result<(BinaryMask, BinaryMask), FusionError> {
    let small = downsample(superpixels, t)?;
    let bits = small
        .as_slice()
        .iter()
        .map(|&label| signal.bit(label).ok_or(FusionError::UnknownLabel(label)))
        .collect::<Result<Vec<_>, _>>()?;
    let h = BinaryMask::new(small.rows(), small.cols(), bits).expect("shape of downsampled map");
    let l = h.complement();
    Ok((h, l))
}

fn shape3<T: Copy>(f: &FeatureMap<T>) -> (usize, usize, usize) {
    (f.rows(), f.cols(), f.channels())
}

/// Copies each cell from `high` where `mask_h` is set and from `low` elsewhere.
pub fn fillin_fuse<T: Scalar>(
    low: &FeatureMap<T>,
    high: &FeatureMap<T>,
    mask_h: &BinaryMask,
) -> Result<FusedPair<T>, FusionError> {
    if shape3(low) != shape3(high) {
        return Err(FusionError::ShapeMismatch {
            what: "low vs high features",
            left: shape3(low),
            right: shape3(high),
        });
    }
    if low.dims() != mask_h.dims() {
        let (mr, mc) = mask_h.dims();
        return Err(FusionError::ShapeMismatch {
            what: "features vs mask",
            left: shape3(low),
            right: (mr, mc, low.channels()),
        });
    }
    let channels = low.channels();
    let data = low
        .as_slice()
        .chunks_exact(channels)
        .zip(high.as_slice().chunks_exact(channels))
        .zip(mask_h.as_slice())
        .flat_map(|((lo, hi), &from_high)| if from_high { hi } else { lo })
        .copied()
        .collect();
    let fused = FeatureMap::from_parts_unchecked(low.rows(), low.cols(), channels, data);
    Ok(FusedPair { fused, mask_h: mask_h.clone() })
}

/// Stacks `b`'s channels after `a`'s at every spatial position.
pub fn concat_channels<T: Scalar>(a: &FeatureMap<T>, b: &FeatureMap<T>) -> Result<FeatureMap<T>, FusionError> {
    if a.dims() != b.dims() {
        return Err(FusionError::ShapeMismatch { what: "concatenation", left: shape3(a), right: shape3(b) });
    }
    let channels = a.channels() + b.channels();
    let data = a
        .as_slice()
        .chunks_exact(a.channels())
        .zip(b.as_slice().chunks_exact(b.channels()))
        .flat_map(|(pa, pb)| pa.iter().chain(pb).copied())
        .collect();
    Ok(FeatureMap::from_parts_unchecked(a.rows(), a.cols(), channels, data))
}
