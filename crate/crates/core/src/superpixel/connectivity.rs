//! 4-connected component labelling of label maps.

use crate::tensor::{Label, LabelMap};

/// Component index per pixel (4-connectivity, equal labels), numbered in raster
/// order of first occurrence, plus the component count.
pub(crate) fn component_ids(map: &LabelMap) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let (rows, cols) = map.dims();
    let labels = map.as_slice();
    let mut ids = vec![UNSEEN; labels.len()];
    let mut stack = Vec::new();
    let mut next = 0;
    for start in 0..labels.len() {
        if ids[start] != UNSEEN {
            continue;
        }
        let label = labels[start];
        ids[start] = next;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (r, c) = (idx / cols, idx % cols);
            let mut visit = |n: usize| {
                if ids[n] == UNSEEN && labels[n] == label {
                    ids[n] = next;
                    stack.push(n);
                }
            };
            if r > 0 {
                visit(idx - cols);
            }
            if r + 1 < rows {
                visit(idx + cols);
            }
            if c > 0 {
                visit(idx - 1);
            }
            if c + 1 < cols {
                visit(idx + 1);
            }
        }
        next += 1;
    }
    (ids, next)
}

/// Splits every label into its 4-connected components and renumbers them
/// `0..L` in raster order of first occurrence.
///
/// The output partition refines the input partition; it never merges pixels
/// that carried different labels.
pub fn relabel_connected(map: &LabelMap) -> LabelMap {
    let (ids, _) = component_ids(map);
    let data = ids.into_iter().map(|id| id as Label).collect();
    LabelMap::new(map.rows(), map.cols(), data).expect("same shape as input")
}
