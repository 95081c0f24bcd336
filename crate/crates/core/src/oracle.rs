//! Brute-force reference implementations for cross-checking the main paths.
//!
//! These share no helpers with the production modules: they read raw slices,
//! index with explicit loops, and evaluate formulas literally. They are meant for
//! small inputs (at most 256 x 256) and make no attempt at speed.

use std::collections::BTreeSet;

use crate::scalar::Scalar;
use crate::tensor::{BinaryMask, FeatureMap, Label, LabelMap};

/// Largest side length the oracles accept.
pub const ORACLE_MAX_SIDE: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("stride must be >= 1")]
    ZeroStride,
    #[error("input of {rows}x{cols} exceeds the oracle limit")]
    TooLarge { rows: usize, cols: usize },
    #[error("shape mismatch")]
    ShapeMismatch,
}

fn check_size(rows: usize, cols: usize) -> Result<(), OracleError> {
    if rows > ORACLE_MAX_SIDE || cols > ORACLE_MAX_SIDE {
        return Err(OracleError::TooLarge { rows, cols });
    }
    Ok(())
}

/// `U[i][j] = S[min(i*t, m-1)][min(j*t, n-1)]` with `ceil(m/t) x ceil(n/t)` outputs.
pub fn oracle_downsample(s: &LabelMap, t: usize) -> Result<LabelMap, OracleError> {
    if t == 0 {
        return Err(OracleError::ZeroStride);
    }
    let m = s.rows();
    let n = s.cols();
    check_size(m, n)?;
    let raw = s.as_slice();

    let mut out_rows = 0;
    while out_rows * t < m {
        out_rows += 1;
    }
    let mut out_cols = 0;
    while out_cols * t < n {
        out_cols += 1;
    }

    let mut out = Vec::new();
    for i in 0..out_rows {
        for j in 0..out_cols {
            let mut si = i * t;
            if si > m - 1 {
                si = m - 1;
            }
            let mut sj = j * t;
            if sj > n - 1 {
                sj = n - 1;
            }
            out.push(raw[si * n + sj]);
        }
    }
    Ok(LabelMap::new(out_rows, out_cols, out).expect("oracle output shape"))
}

/// Labels found at the sampled cells `(i*p, j*p)`, clamped to the last row/column.
pub fn oracle_survivors(s: &LabelMap, p: usize) -> Result<BTreeSet<Label>, OracleError> {
    if p == 0 {
        return Err(OracleError::ZeroStride);
    }
    let m = s.rows();
    let n = s.cols();
    check_size(m, n)?;
    let raw = s.as_slice();
    let mut survivors = BTreeSet::new();
    let mut i = 0;
    loop {
        let r = if i * p > m - 1 { m - 1 } else { i * p };
        let mut j = 0;
        loop {
            let c = if j * p > n - 1 { n - 1 } else { j * p };
            survivors.insert(raw[r * n + c]);
            j += 1;
            if j * p >= n {
                break;
            }
        }
        i += 1;
        if i * p >= m {
            break;
        }
    }
    Ok(survivors)
}

/// `F_L * (1 - H) + F_H * H`, evaluated literally per element.
pub fn oracle_fuse<T: Scalar>(
    low: &FeatureMap<T>,
    high: &FeatureMap<T>,
    h: &BinaryMask,
) -> Result<FeatureMap<T>, OracleError> {
    let (rows, cols, channels) = (low.rows(), low.cols(), low.channels());
    if high.rows() != rows || high.cols() != cols || high.channels() != channels {
        return Err(OracleError::ShapeMismatch);
    }
    if h.rows() != rows || h.cols() != cols {
        return Err(OracleError::ShapeMismatch);
    }
    check_size(rows, cols)?;
    let mut out = vec![T::zero(); rows * cols * channels];
    for c in 0..channels {
        for i in 0..rows {
            for j in 0..cols {
                let hv = if h.as_slice()[i * cols + j] { T::one() } else { T::zero() };
                let lv = T::one() - hv;
                let idx = (i * cols + j) * channels + c;
                out[idx] = low.as_slice()[idx] * lv + high.as_slice()[idx] * hv;
            }
        }
    }
    Ok(FeatureMap::new(rows, cols, channels, out).expect("finite inputs give finite outputs"))
}
