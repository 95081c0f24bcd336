//! Binary masks at feature resolution.

use super::{Label, LabelMap, ShapeError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(rows: usize, cols: usize, data: Vec<bool>) -> Result<Self, ShapeError> {
        if rows == 0 || cols == 0 {
            return Err(ShapeError::Empty { rows, cols });
        }
        let expected = rows.checked_mul(cols).ok_or(ShapeError::TooLarge { rows, cols })?;
        if data.len() != expected {
            return Err(ShapeError::Length { expected, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, bit: bool) -> Result<Self, ShapeError> {
        Self::new(rows, cols, vec![bit; rows.saturating_mul(cols)])
    }

    /// Panics on ragged input; intended for literals.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|r| {
                r.as_ref().iter().map(|&b| {
                    assert!(b <= 1, "mask literal must be 0 or 1");
                    b == 1
                })
            })
            .collect();
        Self::new(rows.len(), cols, data).expect("invalid mask literal")
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn as_slice(&self) -> &[bool] {
        &self.data
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Elementwise `1 - mask`.
    pub fn complement(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|b| !b).collect() }
    }

    /// Lossless view as a 0/1 label map.
    pub fn to_label_map(&self) -> LabelMap {
        let data = self.data.iter().map(|&b| Label::from(b)).collect();
        LabelMap::new(self.rows, self.cols, data).expect("mask shape is a valid label map shape")
    }

    /// Inverse of [`to_label_map`](Self::to_label_map); `None` if any label is not 0 or 1.
    pub fn from_label_map(map: &LabelMap) -> Option<Self> {
        let data = map
            .as_slice()
            .iter()
            .map(|&v| match v {
                0 => Some(false),
                1 => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Self::new(map.rows(), map.cols(), data).ok()
    }

    /// 8-bit grayscale samples: 0 for unset, 255 for set.
    pub fn to_gray_bytes(&self) -> Vec<u8> {
        self.data.iter().map(|&b| if b { 255 } else { 0 }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_map_view_is_lossless() {
        let m = BinaryMask::from_rows(&[[1, 0, 1], [0, 0, 1]]);
        let lm = m.to_label_map();
        assert_eq!(lm.as_slice(), &[1, 0, 1, 0, 0, 1]);
        assert_eq!(BinaryMask::from_label_map(&lm).unwrap(), m);
        assert!(BinaryMask::from_label_map(&LabelMap::from_rows(&[[2]])).is_none());
    }

    #[test]
    fn complement_and_counts() {
        let m = BinaryMask::from_rows(&[[1, 0], [0, 0]]);
        assert_eq!(m.count_ones(), 1);
        assert_eq!(m.complement().count_ones(), 3);
        assert_eq!(m.complement().complement(), m);
        assert_eq!(m.to_gray_bytes(), vec![255, 0, 0, 0]);
    }
}
