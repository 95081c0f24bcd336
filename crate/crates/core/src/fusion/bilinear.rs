//! Bilinear resize with half-pixel centers and edge clamping.
//!
//! Output sample `x` reads source coordinate `(x + 0.5) * in / out - 0.5`,
//! clamped to `[0, in - 1]`. Each result is clamped to the range of its four
//! contributing samples, so rounding never leaves their convex hull.

use rayon::prelude::*;

use crate::scalar::Scalar;
use crate::tensor::FeatureMap;

#[derive(Debug, Clone, Copy)]
struct Tap {
    lo: usize,
    hi: usize,
    frac: f64,
}

fn taps(input: usize, output: usize) -> Vec<Tap> {
    let scale = input as f64 / output as f64;
    let last = (input - 1) as f64;
    (0..output)
        .map(|o| {
            let src = ((o as f64 + 0.5) * scale - 0.5).clamp(0.0, last);
            let lo = src.floor() as usize;
            Tap { lo, hi: (lo + 1).min(input - 1), frac: src - lo as f64 }
        })
        .collect()
}

#[inline]
fn lerp<T: Scalar>(a: T, b: T, frac: T) -> T {
    if frac == T::zero() {
        a
    } else if frac == T::one() {
        b
    } else {
        a + frac * (b - a)
    }
}

/// Resizes `map` to `out_rows x out_cols`, preserving the channel count.
///
/// # Panics
/// If either output dimension is zero.
pub fn bilinear_upsample<T: Scalar>(map: &FeatureMap<T>, out_rows: usize, out_cols: usize) -> FeatureMap<T> {
    assert!(out_rows >= 1 && out_cols >= 1, "output dimensions must be positive");
    if map.dims() == (out_rows, out_cols) {
        return map.clone();
    }
    let channels = map.channels();
    let row_taps = taps(map.rows(), out_rows);
    let col_taps = taps(map.cols(), out_cols);
    let mut data = vec![T::zero(); out_rows * out_cols * channels];
    data.par_chunks_mut(out_cols * channels).zip(row_taps.par_iter()).for_each(|(out_row, ry)| {
        let fy = T::from_f64_lossy(ry.frac);
        for (oc, cx) in col_taps.iter().enumerate() {
            let fx = T::from_f64_lossy(cx.frac);
            let (p00, p01) = (map.pixel(ry.lo, cx.lo), map.pixel(ry.lo, cx.hi));
            let (p10, p11) = (map.pixel(ry.hi, cx.lo), map.pixel(ry.hi, cx.hi));
            for ch in 0..channels {
                let (a, b, c, d) = (p00[ch], p01[ch], p10[ch], p11[ch]);
                let top = lerp(a, b, fx);
                let bottom = lerp(c, d, fx);
                let v = lerp(top, bottom, fy);
                let lo = a.min(b).min(c).min(d);
                let hi = a.max(b).max(c).max(d);
                out_row[oc * channels + ch] = v.max(lo).min(hi);
            }
        }
    });
    FeatureMap::from_parts_unchecked(out_rows, out_cols, channels, data)
}
