//! SLIC superpixels: k-means in (color, position) space restricted to a local window.
//!
//! Seeds are laid out as `bands` horizontal bands whose seed counts differ by at
//! most one, so exactly `target_superpixels` clusters start out. After the
//! k-means iterations every cluster is split into 4-connected components and any
//! component smaller than `rows * cols / (4 * target_superpixels)` is merged into
//! the adjacent region sharing the longest boundary (ties: smaller cluster
//! label, then earlier region). Output labels are `0..L` in raster order.
//!
//! Every region that survives merging holds at least the merge threshold of
//! pixels, so the label count never exceeds `4 * target_superpixels`. The
//! documented tolerance is the symmetric band `ceil(K / 4) ..= 4 * K`
//! ([`LABEL_COUNT_FACTOR`]). On natural or piecewise-smooth images the count is
//! within one or two of `K`; uniform color noise at low compactness fragments
//! the most (about `2.5 * K` for `K = 4`).

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use super::connectivity::component_ids;
use super::Image;
use crate::scalar::Scalar;
use crate::tensor::{Label, LabelMap};

/// Final label count `L` lies in `ceil(K / LABEL_COUNT_FACTOR) ..= K * LABEL_COUNT_FACTOR`.
/// The upper end is guaranteed by the merge threshold `rows * cols / (4 * K)`.
pub const LABEL_COUNT_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicParams {
    pub target_superpixels: usize,
    /// Weight of spatial distance against color distance (CIELAB units).
    pub compactness: f64,
    pub iterations: usize,
}

impl Default for SlicParams {
    fn default() -> Self {
        Self { target_superpixels: 100, compactness: 10.0, iterations: 10 }
    }
}

impl SlicParams {
    pub fn new(target_superpixels: usize, compactness: f64, iterations: usize) -> Self {
        Self { target_superpixels, compactness, iterations }
    }

    /// Whether `count` labels lie within the documented tolerance of the target.
    pub fn count_within_tolerance(&self, count: usize) -> bool {
        let k = self.target_superpixels;
        (k.div_ceil(LABEL_COUNT_FACTOR)..=k * LABEL_COUNT_FACTOR).contains(&count)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SlicError {
    #[error("target of {requested} superpixels exceeds the {pixels} pixels of the image")]
    TooManySuperpixels { requested: usize, pixels: usize },
    #[error("target superpixel count must be >= 1")]
    ZeroSuperpixels,
    #[error("iteration count must be >= 1")]
    ZeroIterations,
    #[error("compactness must be positive and finite, got {0}")]
    Compactness(f64),
}

#[derive(Debug, Clone, Copy, Default)]
struct Center {
    color: [f64; 3],
    y: f64,
    x: f64,
}

struct Layout {
    bands: usize,
    per_band: Vec<usize>,
    /// First seed index of each band.
    offsets: Vec<usize>,
}

impl Layout {
    fn new(rows: usize, cols: usize, k: usize) -> Self {
        let min_bands = k.div_ceil(cols).max(1);
        let max_bands = rows.min(k);
        let ideal = ((k * rows) as f64 / cols as f64).sqrt().round() as usize;
        let bands = ideal.clamp(min_bands, max_bands);
        let per_band: Vec<usize> = (0..bands).map(|b| k / bands + usize::from(b < k % bands)).collect();
        let offsets = per_band
            .iter()
            .scan(0, |acc, &n| {
                let start = *acc;
                *acc += n;
                Some(start)
            })
            .collect();
        Self { bands, per_band, offsets }
    }

    fn initial_label(&self, rows: usize, cols: usize, r: usize, c: usize) -> usize {
        let band = r * self.bands / rows;
        self.offsets[band] + c * self.per_band[band] / cols
    }
}

/// Pixel features: CIELAB for RGB, `100 * intensity` on the L axis for gray.
fn pixel_features<T: Scalar>(img: &Image<T>) -> Vec<[f64; 3]> {
    (0..img.rows() * img.cols())
        .map(|i| {
            let px = img.pixel(i / img.cols(), i % img.cols());
            match px {
                [g] => [100.0 * g.to_f64_lossy(), 0.0, 0.0],
                [r, g, b] => srgb_to_lab(r.to_f64_lossy(), g.to_f64_lossy(), b.to_f64_lossy()),
                _ => unreachable!("image channel invariant"),
            }
        })
        .collect()
}

fn srgb_to_lab(r: f64, g: f64, b: f64) -> [f64; 3] {
    fn linear(c: f64) -> f64 {
        if c <= 0.04045 {
            c / 12.92
        } else {
            ((c + 0.055) / 1.055).powf(2.4)
        }
    }
    fn f(t: f64) -> f64 {
        const DELTA: f64 = 6.0 / 29.0;
        if t > DELTA * DELTA * DELTA {
            t.cbrt()
        } else {
            t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
        }
    }
    let (r, g, b) = (linear(r), linear(g), linear(b));
    // D65 white point
    let x = (0.412_456_4 * r + 0.357_576_1 * g + 0.180_437_5 * b) / 0.950_47;
    let y = 0.212_672_9 * r + 0.715_152_2 * g + 0.072_175_0 * b;
    let z = (0.019_333_9 * r + 0.119_192_0 * g + 0.950_304_1 * b) / 1.088_83;
    let (fx, fy, fz) = (f(x), f(y), f(z));
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}

/// Lowest-gradient pixel of the 3x3 neighborhood of `(r0, c0)`, if strictly
/// lower than the gradient at `(r0, c0)` itself.
fn perturb_seed(features: &[[f64; 3]], rows: usize, cols: usize, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let at = |r: usize, c: usize| &features[r * cols + c];
    let gradient = |r: usize, c: usize| {
        let dx = dist2(at(r, (c + 1).min(cols - 1)), at(r, c.saturating_sub(1)));
        let dy = dist2(at((r + 1).min(rows - 1), c), at(r.saturating_sub(1), c));
        dx + dy
    };
    let mut best = None;
    let mut best_g = gradient(r0, c0);
    for r in r0.saturating_sub(1)..=(r0 + 1).min(rows - 1) {
        for c in c0.saturating_sub(1)..=(c0 + 1).min(cols - 1) {
            let g = gradient(r, c);
            if g < best_g {
                best_g = g;
                best = Some((r, c));
            }
        }
    }
    best
}

/// Segments `img` into superpixels. Deterministic for a given image and parameters.
pub fn slic_segment<T: Scalar>(img: &Image<T>, params: &SlicParams) -> Result<LabelMap, SlicError> {
    let (rows, cols) = (img.rows(), img.cols());
    let n = rows * cols;
    let k = params.target_superpixels;
    if k == 0 {
        return Err(SlicError::ZeroSuperpixels);
    }
    if k > n {
        return Err(SlicError::TooManySuperpixels { requested: k, pixels: n });
    }
    if params.iterations == 0 {
        return Err(SlicError::ZeroIterations);
    }
    if !(params.compactness.is_finite() && params.compactness > 0.0) {
        return Err(SlicError::Compactness(params.compactness));
    }

    let features = pixel_features(img);
    let layout = Layout::new(rows, cols, k);
    let step = (n as f64 / k as f64).sqrt();
    let spatial_weight = (params.compactness / step).powi(2);

    let mut centers = Vec::with_capacity(k);
    for band in 0..layout.bands {
        let band_h = rows as f64 / layout.bands as f64;
        let count = layout.per_band[band];
        for j in 0..count {
            let y = (band as f64 + 0.5) * band_h;
            let x = (j as f64 + 0.5) * cols as f64 / count as f64;
            let (r0, c0) = ((y as usize).min(rows - 1), (x as usize).min(cols - 1));
            // Unmoved seeds keep the exact cell center.
            let center = match perturb_seed(&features, rows, cols, r0, c0) {
                Some((r, c)) => Center { color: features[r * cols + c], y: r as f64 + 0.5, x: c as f64 + 0.5 },
                None => Center { color: features[r0 * cols + c0], y, x },
            };
            centers.push(center);
        }
    }

    let max_per_band = layout.per_band.iter().copied().max().unwrap_or(1);
    let half_h = step.max(rows as f64 / layout.bands as f64);
    let half_w = step.max(cols as f64 / max_per_band as f64);

    let mut labels: Vec<usize> = (0..n).map(|i| layout.initial_label(rows, cols, i / cols, i % cols)).collect();

    for _ in 0..params.iterations {
        labels.par_chunks_mut(cols).enumerate().for_each(|(r, row_labels)| {
            let py = r as f64 + 0.5;
            let mut best = vec![f64::INFINITY; cols];
            for (ci, center) in centers.iter().enumerate() {
                if (py - center.y).abs() > half_h {
                    continue;
                }
                let c_lo = (center.x - half_w).floor().max(0.0) as usize;
                let c_hi = ((center.x + half_w).ceil() as usize).min(cols);
                for c in c_lo..c_hi {
                    let px = c as f64 + 0.5;
                    if (px - center.x).abs() > half_w {
                        continue;
                    }
                    let spatial = (py - center.y).powi(2) + (px - center.x).powi(2);
                    let d = dist2(&features[r * cols + c], &center.color) + spatial * spatial_weight;
                    if d < best[c] {
                        best[c] = d;
                        row_labels[c] = ci;
                    }
                }
            }
        });

        let mut sums = vec![(Center::default(), 0usize); k];
        for (i, &l) in labels.iter().enumerate() {
            let (acc, count) = &mut sums[l];
            for (a, f) in acc.color.iter_mut().zip(&features[i]) {
                *a += f;
            }
            acc.y += (i / cols) as f64 + 0.5;
            acc.x += (i % cols) as f64 + 0.5;
            *count += 1;
        }
        for (center, (acc, count)) in centers.iter_mut().zip(sums) {
            if count > 0 {
                let inv = 1.0 / count as f64;
                *center = Center { color: acc.color.map(|v| v * inv), y: acc.y * inv, x: acc.x * inv };
            }
        }
    }

    let clustered =
        LabelMap::new(rows, cols, labels.into_iter().map(|l| l as Label).collect()).expect("same shape as image");
    let min_size = n as f64 / (4.0 * k as f64);
    Ok(merge_small_regions(&clustered, min_size))
}

/// Splits labels into 4-connected regions and merges every region with fewer
/// than `min_size` pixels into its longest-boundary neighbor, smallest first.
pub(crate) fn merge_small_regions(map: &LabelMap, min_size: f64) -> LabelMap {
    let (rows, cols) = map.dims();
    let (ids, count) = component_ids(map);

    let mut size = vec![0usize; count];
    let mut label = vec![0 as Label; count];
    for (i, &id) in ids.iter().enumerate() {
        size[id] += 1;
        label[id] = map.as_slice()[i];
    }
    let mut adjacency: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); count];
    let mut touch = |a: usize, b: usize| {
        if a != b {
            *adjacency[a].entry(b).or_default() += 1;
            *adjacency[b].entry(a).or_default() += 1;
        }
    };
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if c + 1 < cols {
                touch(ids[i], ids[i + 1]);
            }
            if r + 1 < rows {
                touch(ids[i], ids[i + cols]);
            }
        }
    }

    let mut parent: Vec<usize> = (0..count).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..count).map(|id| (size[id], id)).collect();
    while let Some(&(sz, id)) = queue.first() {
        if sz as f64 >= min_size {
            break;
        }
        queue.remove(&(sz, id));
        let neighbors = std::mem::take(&mut adjacency[id]);
        let Some((&target, _)) =
            neighbors.iter().max_by(|(&a, &ca), (&b, &cb)| ca.cmp(&cb).then(label[b].cmp(&label[a])).then(b.cmp(&a)))
        else {
            continue;
        };
        queue.remove(&(size[target], target));
        size[target] += sz;
        parent[id] = target;
        for (&nbr, &shared) in &neighbors {
            adjacency[nbr].remove(&id);
            if nbr != target {
                *adjacency[nbr].entry(target).or_default() += shared;
                *adjacency[target].entry(nbr).or_default() += shared;
            }
        }
        queue.insert((size[target], target));
    }

    let root = |mut id: usize| {
        while parent[id] != id {
            id = parent[id];
        }
        id
    };
    let mut renumber = vec![Label::MAX; count];
    let mut next: Label = 0;
    let data = ids
        .iter()
        .map(|&id| {
            let r = root(id);
            if renumber[r] == Label::MAX {
                renumber[r] = next;
                next += 1;
            }
            renumber[r]
        })
        .collect();
    LabelMap::new(rows, cols, data).expect("same shape as input")
}
