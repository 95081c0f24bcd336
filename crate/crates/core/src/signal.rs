//! Point-sampled downsampling of label maps and the per-superpixel appearance signal.
//!
//! A superpixel *survives* at stride `p` when at least one of its pixels sits on
//! the sampling grid `{(i*p, j*p)}`. Survivors get bit 1 (take high-level
//! features); superpixels that vanish get bit 0 (take low-level features).
//!
//! Any run of `p` consecutive indices contains a multiple of `p`, so a superpixel
//! containing a full `p x p` square (and a fortiori `(p+1) x (p+1)`) always survives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::tensor::{Label, LabelMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SignalError {
    #[error("stride must be >= 1")]
    ZeroStride,
}

/// Point-samples `map` at stride `t`: `out[i][j] = map[min(i*t, rows-1)][min(j*t, cols-1)]`,
/// with output size `ceil(rows/t) x ceil(cols/t)`.
pub fn downsample(map: &LabelMap, t: usize) -> Result<LabelMap, SignalError> {
    if t == 0 {
        return Err(SignalError::ZeroStride);
    }
    let (rows, cols) = map.dims();
    let out_rows = rows.div_ceil(t);
    let out_cols = cols.div_ceil(t);
    let data = (0..out_rows)
        .flat_map(|i| {
            let src = map.row((i * t).min(rows - 1));
            (0..out_cols).map(move |j| src[(j * t).min(cols - 1)])
        })
        .collect();
    Ok(LabelMap::new(out_rows, out_cols, data).expect("nonzero output dims"))
}

/// Distinct labels of `map`.
pub fn label_set(map: &LabelMap) -> BTreeSet<Label> {
    map.distinct_labels()
}

/// Survival bit per superpixel of a source map, at a given stride.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppearanceSignal {
    bits: BTreeMap<Label, bool>,
    as_stride: usize,
}

impl AppearanceSignal {
    pub fn as_stride(&self) -> usize {
        self.as_stride
    }

    pub fn bit(&self, label: Label) -> Option<bool> {
        self.bits.get(&label).copied()
    }

    pub fn bits(&self) -> &BTreeMap<Label, bool> {
        &self.bits
    }

    /// The labels the signal was computed over.
    pub fn source_labels(&self) -> BTreeSet<Label> {
        self.bits.keys().copied().collect()
    }

    /// Labels with bit 1.
    pub fn survivors(&self) -> BTreeSet<Label> {
        self.bits.iter().filter(|(_, &b)| b).map(|(&l, _)| l).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Complemented signal, same domain and stride.
    pub fn reversed(&self) -> Self {
        Self { bits: self.bits.iter().map(|(&l, &b)| (l, !b)).collect(), as_stride: self.as_stride }
    }

    /// One `label bit` line per label, ascending.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (label, &bit) in &self.bits {
            let _ = writeln!(out, "{label} {}", u8::from(bit));
        }
        out
    }
}

/// Computes the survival bit of every label of `map` under stride-`p` sampling.
pub fn compute_signal(map: &LabelMap, p: usize) -> Result<AppearanceSignal, SignalError> {
    let sampled = downsample(map, p)?;
    let survivors = label_set(&sampled);
    let bits = label_set(map).into_iter().map(|l| (l, survivors.contains(&l))).collect();
    Ok(AppearanceSignal { bits, as_stride: p })
}

pub fn reverse_signal(signal: &AppearanceSignal) -> AppearanceSignal {
    signal.reversed()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn downsample_quadrants() {
        let s = LabelMap::from_rows(&[[0, 0, 1, 1], [0, 0, 1, 1], [2, 2, 3, 3], [2, 2, 3, 3]]);
        assert_eq!(downsample(&s, 2).unwrap(), LabelMap::from_rows(&[[0, 1], [2, 3]]));
    }

    #[test]
    fn downsample_identity_and_zero() {
        let s = LabelMap::from_rows(&[[4, 1, 9], [2, 2, 7]]);
        assert_eq!(downsample(&s, 1).unwrap(), s);
        assert_eq!(downsample(&s, 0), Err(SignalError::ZeroStride));
    }

    #[test]
    fn downsample_5x5_stride_3_samples_rows_and_cols_0_and_3() {
        let s = LabelMap::new(5, 5, (0..25).collect()).unwrap();
        assert_eq!(downsample(&s, 3).unwrap(), LabelMap::from_rows(&[[0, 3], [15, 18]]));
    }

    #[test]
    fn downsample_large_stride_keeps_origin() {
        let s = LabelMap::from_rows(&[[6, 1], [2, 3]]);
        assert_eq!(downsample(&s, 17).unwrap(), LabelMap::from_rows(&[[6]]));
    }

    #[test]
    fn label_sets() {
        assert_eq!(label_set(&LabelMap::from_rows(&[[0, 0], [0, 7]])), BTreeSet::from([0, 7]));
        assert_eq!(label_set(&LabelMap::from_rows(&[[3]])), BTreeSet::from([3]));
    }

    #[test]
    fn signal_of_small_map() {
        let s = LabelMap::from_rows(&[[0, 0], [0, 7]]);
        let a = compute_signal(&s, 2).unwrap();
        assert_eq!(a.bits(), &BTreeMap::from([(0, true), (7, false)]));
        assert_eq!(a.as_stride(), 2);
        assert_eq!(a.to_text(), "0 1\n7 0\n");
    }

    #[test]
    fn stride_one_keeps_everything() {
        let s = LabelMap::from_rows(&[[5, 3, 3], [1, 1, 8]]);
        let a = compute_signal(&s, 1).unwrap();
        assert_eq!(a.survivors(), label_set(&s));
    }

    #[test]
    fn uniform_map_survives_any_stride() {
        let s = LabelMap::filled(9, 13, 42).unwrap();
        for p in 1..20 {
            assert_eq!(compute_signal(&s, p).unwrap().bit(42), Some(true));
        }
        assert_eq!(compute_signal(&s, 0), Err(SignalError::ZeroStride));
    }

    #[test]
    fn reverse_complements() {
        let s = LabelMap::from_rows(&[[0, 0], [0, 7]]);
        let a = compute_signal(&s, 2).unwrap();
        let r = reverse_signal(&a);
        assert_eq!(r.bits(), &BTreeMap::from([(0, false), (7, true)]));
        assert_eq!(reverse_signal(&r), a);
        let all = compute_signal(&s, 1).unwrap();
        assert!(reverse_signal(&all).survivors().is_empty());
    }
}
