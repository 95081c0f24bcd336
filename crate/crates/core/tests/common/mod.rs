//! Random instance generators and brute-force checks shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use fillin::{FeatureMap, Image, Label, LabelMap};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random label map: either per-cell noise over a small alphabet or random
/// axis-aligned blocks, so both tiny and large regions occur.
pub fn random_label_map(rng: &mut impl Rng, rows: usize, cols: usize) -> LabelMap {
    let data = if rng.gen_bool(0.5) {
        let alphabet = rng.gen_range(1..=12u32);
        let offset = rng.gen_range(0..1000u32);
        (0..rows * cols).map(|_| offset + rng.gen_range(0..alphabet)).collect()
    } else {
        let bh = rng.gen_range(1..=rows.max(1));
        let bw = rng.gen_range(1..=cols.max(1));
        let mut ids = BTreeMap::new();
        (0..rows * cols)
            .map(|i| {
                let key = ((i / cols) / bh, (i % cols) / bw);
                let next = rng.gen_range(0..u32::MAX);
                *ids.entry(key).or_insert(next)
            })
            .collect()
    };
    LabelMap::new(rows, cols, data).unwrap()
}

pub fn random_feature_map(rng: &mut impl Rng, rows: usize, cols: usize, channels: usize) -> FeatureMap<f32> {
    let data = (0..rows * cols * channels).map(|_| rng.gen_range(-10.0f32..10.0)).collect();
    FeatureMap::new(rows, cols, channels, data).unwrap()
}

/// Random 64x64-style RGB test image of one of three kinds: uniform noise,
/// a Voronoi mosaic of flat colors, or smooth gradients.
pub fn random_image(rng: &mut impl Rng, rows: usize, cols: usize) -> Image<f32> {
    let kind = rng.gen_range(0..3);
    let data: Vec<f32> = match kind {
        0 => (0..rows * cols * 3).map(|_| rng.gen::<f32>()).collect(),
        1 => {
            let n = rng.gen_range(2..10);
            let sites: Vec<(f32, f32, [f32; 3])> = (0..n)
                .map(|_| {
                    (rng.gen::<f32>() * rows as f32, rng.gen::<f32>() * cols as f32, [rng.gen(), rng.gen(), rng.gen()])
                })
                .collect();
            (0..rows * cols)
                .flat_map(|i| {
                    let (r, c) = ((i / cols) as f32, (i % cols) as f32);
                    let nearest = sites
                        .iter()
                        .min_by(|a, b| {
                            let da = (a.0 - r).powi(2) + (a.1 - c).powi(2);
                            let db = (b.0 - r).powi(2) + (b.1 - c).powi(2);
                            da.total_cmp(&db)
                        })
                        .unwrap();
                    nearest.2
                })
                .collect()
        }
        _ => {
            let (a, b, f): (f32, f32, f32) = (rng.gen(), rng.gen(), rng.gen_range(1.0..8.0));
            (0..rows * cols)
                .flat_map(|i| {
                    let (r, c) = ((i / cols) as f32 / rows as f32, (i % cols) as f32 / cols as f32);
                    [a * r + (1.0 - a) * c, b * r * c, 0.5 + 0.5 * (f * r).sin()]
                })
                .collect()
        }
    };
    Image::new(rows, cols, 3, data).unwrap()
}

/// Number of 4-connected pieces per label, by BFS.
pub fn pieces_per_label(map: &LabelMap) -> BTreeMap<Label, usize> {
    let (rows, cols) = map.dims();
    let mut seen = vec![false; rows * cols];
    let mut pieces = BTreeMap::new();
    for start in 0..rows * cols {
        if seen[start] {
            continue;
        }
        let label = map.as_slice()[start];
        *pieces.entry(label).or_insert(0) += 1;
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            let (r, c) = (i / cols, i % cols);
            let mut neighbors = Vec::with_capacity(4);
            if r > 0 {
                neighbors.push(i - cols);
            }
            if r + 1 < rows {
                neighbors.push(i + cols);
            }
            if c > 0 {
                neighbors.push(i - 1);
            }
            if c + 1 < cols {
                neighbors.push(i + 1);
            }
            for n in neighbors {
                if !seen[n] && map.as_slice()[n] == label {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
    }
    pieces
}

/// Labels whose pixel set contains a full `side x side` axis-aligned square.
pub fn labels_with_square(map: &LabelMap, side: usize) -> BTreeSet<Label> {
    let (rows, cols) = map.dims();
    let mut found = BTreeSet::new();
    if side > rows || side > cols {
        return found;
    }
    for r0 in 0..=rows - side {
        for c0 in 0..=cols - side {
            let label = map.get(r0, c0);
            if (r0..r0 + side).all(|r| (c0..c0 + side).all(|c| map.get(r, c) == label)) {
                found.insert(label);
            }
        }
    }
    found
}

/// Pixel partition induced by a label map, as sets of flat indices.
pub fn partition(map: &LabelMap) -> BTreeSet<Vec<usize>> {
    let mut groups: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
    for (i, &l) in map.as_slice().iter().enumerate() {
        groups.entry(l).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Half-pixel-center bilinear sample, evaluated from scratch in `f64`.
pub fn reference_bilinear(
    src: &[f64],
    in_rows: usize,
    in_cols: usize,
    out_rows: usize,
    out_cols: usize,
    r: usize,
    c: usize,
) -> (f64, [f64; 4]) {
    let coord = |o: usize, n_in: usize, n_out: usize| -> (usize, usize, f64) {
        let mut x = (o as f64 + 0.5) * (n_in as f64 / n_out as f64) - 0.5;
        if x < 0.0 {
            x = 0.0;
        }
        if x > (n_in - 1) as f64 {
            x = (n_in - 1) as f64;
        }
        let x0 = x.floor() as usize;
        let x1 = if x0 + 1 < n_in { x0 + 1 } else { x0 };
        (x0, x1, x - x0 as f64)
    };
    let (y0, y1, wy) = coord(r, in_rows, out_rows);
    let (x0, x1, wx) = coord(c, in_cols, out_cols);
    let s = |y: usize, x: usize| src[y * in_cols + x];
    let corners = [s(y0, x0), s(y0, x1), s(y1, x0), s(y1, x1)];
    let v = (1.0 - wy) * ((1.0 - wx) * corners[0] + wx * corners[1]) + wy * ((1.0 - wx) * corners[2] + wx * corners[3]);
    (v, corners)
}
