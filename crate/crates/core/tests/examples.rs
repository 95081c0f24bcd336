//! Worked examples whose expected values come from brute-force checks in
//! this file rather than from the library.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{pieces_per_label, random_feature_map, random_label_map, reference_bilinear, rng};
use fillin::demo::{argmax_decode, run_demo, Coverage, DemoObject, DemoSpec, ObjectShape};
use fillin::oracle::oracle_fuse;
use fillin::{
    bilinear_upsample, build_masks, compute_signal, concat_channels, downsample, fillin_fuse, label_set, run_structure,
    slic_segment, BinaryMask, FeatureMap, FusionConfig, Image, LabelMap, SlicParams,
};
use rand::Rng;

fn region_sizes(map: &LabelMap) -> BTreeMap<u32, usize> {
    let mut sizes = BTreeMap::new();
    for &l in map.as_slice() {
        *sizes.entry(l).or_insert(0) += 1;
    }
    sizes
}

#[test]
fn slic_constant_8x8_gives_four_connected_quarters() {
    let img = Image::new(8, 8, 1, vec![0.5f64; 64]).unwrap();
    let labels = slic_segment(&img, &SlicParams::new(4, 10.0, 10)).unwrap();
    let sizes = region_sizes(&labels);
    assert_eq!(sizes.len(), 4);
    assert!(sizes.values().all(|&n| (8..=24).contains(&n)), "{sizes:?}");
    assert!(pieces_per_label(&labels).values().all(|&n| n == 1));
}

#[test]
fn slic_half_black_half_white_splits_near_the_edge() {
    let img =
        Image::<f32>::from_u8(8, 8, 1, &(0..64).map(|i| if i % 8 < 4 { 0 } else { 255 }).collect::<Vec<u8>>()).unwrap();
    let labels = slic_segment(&img, &SlicParams::new(2, 1.0, 10)).unwrap();
    assert_eq!(region_sizes(&labels).len(), 2);
    for r in 0..8 {
        let first = labels.get(r, 0);
        let boundary = (0..8).find(|&c| labels.get(r, c) != first).unwrap_or(8);
        assert!(boundary.abs_diff(4) <= 1, "row {r}: boundary at column {boundary}");
        assert!((boundary..8).all(|c| labels.get(r, c) != first), "row {r} is not split once");
    }
}

#[test]
fn downsample_5x5_stride_3_samples_rows_and_cols_0_and_3() {
    let s = LabelMap::new(5, 5, (0..25).collect()).unwrap();
    let mut want = Vec::new();
    for i in 0..2usize {
        for j in 0..2usize {
            let (r, c) = ((i * 3).min(4), (j * 3).min(4));
            want.push((r * 5 + c) as u32);
        }
    }
    assert_eq!(downsample(&s, 3).unwrap(), LabelMap::new(2, 2, want).unwrap());
}

#[test]
fn label_set_of_random_64x64_matches_scan() {
    let mut rng = rng(7);
    let map = random_label_map(&mut rng, 64, 64);
    let mut scanned = BTreeSet::new();
    for r in 0..64 {
        for c in 0..64 {
            scanned.insert(map.get(r, c));
        }
    }
    assert_eq!(label_set(&map), scanned);
}

#[test]
fn signal_of_two_by_two_at_stride_two() {
    let s = LabelMap::from_rows(&[[0, 0], [0, 7]]);
    let signal = compute_signal(&s, 2).unwrap();
    assert_eq!(signal.to_text(), "0 1\n7 0\n");
    let (h, l) = build_masks(&s, 1, &signal).unwrap();
    assert_eq!(h, BinaryMask::from_rows(&[[1, 1], [1, 0]]));
    assert_eq!(l, BinaryMask::from_rows(&[[0, 0], [0, 1]]));
}

#[test]
fn random_4x4x3_fuse_equals_multiply_add() {
    let mut rng = rng(11);
    for _ in 0..50 {
        let low = random_feature_map(&mut rng, 4, 4, 3);
        let high = random_feature_map(&mut rng, 4, 4, 3);
        let mask = BinaryMask::new(4, 4, (0..16).map(|_| rng.gen()).collect()).unwrap();
        let fused = fillin_fuse(&low, &high, &mask).unwrap().fused;
        let oracle = oracle_fuse(&low, &high, &mask).unwrap();
        assert!(fused.as_slice().iter().zip(oracle.as_slice()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}

#[test]
fn bilinear_2x2_to_4x4() {
    let src = [0.0, 1.0, 2.0, 3.0];
    let small = FeatureMap::new(2, 2, 1, src.map(|v| v as f32).to_vec()).unwrap();
    let up = bilinear_upsample(&small, 4, 4);
    // Source coordinates are 0, 0.25, 0.75, 1 along both axes and the input is 2y + x.
    let axis = [0.0, 0.25, 0.75, 1.0];
    for r in 0..4 {
        for c in 0..4 {
            let (reference, _) = reference_bilinear(&src, 2, 2, 4, 4, r, c);
            let by_hand = 2.0 * axis[r] + axis[c];
            assert!((reference - by_hand).abs() < 1e-12);
            assert!((up.get(r, c, 0) as f64 - reference).abs() <= 1e-6, "({r},{c})");
        }
    }
}

#[test]
fn concat_2x2x2_with_2x2x3() {
    let a = FeatureMap::from_fn(2, 2, 2, |r, c, ch| (100 * r + 10 * c + ch) as f32).unwrap();
    let b = FeatureMap::from_fn(2, 2, 3, |r, c, ch| -((100 * r + 10 * c + ch) as f32) - 1.0).unwrap();
    let out = concat_channels(&a, &b).unwrap();
    assert_eq!((out.rows(), out.cols(), out.channels()), (2, 2, 5));
    for r in 0..2 {
        for c in 0..2 {
            for ch in 0..5 {
                let want = if ch < 2 { a.get(r, c, ch) } else { b.get(r, c, ch - 2) };
                assert_eq!(out.get(r, c, ch), want);
            }
        }
    }
}

/// Per-superpixel majority vote of the mask, keyed by the superpixel id each
/// fused cell samples.
fn source_by_superpixel(s: &LabelMap, t: usize, mask: &BinaryMask) -> BTreeMap<u32, bool> {
    let small = downsample(s, t).unwrap();
    let mut votes: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for (&label, &h) in small.as_slice().iter().zip(mask.as_slice()) {
        let e = votes.entry(label).or_default();
        if h {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    votes.into_iter().map(|(l, (h, n))| (l, h > n)).collect()
}

#[test]
fn bi2_and_bi4_assign_superpixels_alike() {
    let mut rng = rng(13);
    for _ in 0..20 {
        // Block superpixels with sides that are multiples of 4, so both scales see every label.
        let (bh, bw) = (4 * rng.gen_range(1..=4), 4 * rng.gen_range(1..=4));
        let s = LabelMap::new(48, 48, (0..48 * 48).map(|i| ((i / 48 / bh) * 100 + (i % 48) / bw) as u32).collect())
            .unwrap();
        let p = rng.gen_range(1..=24);
        let per_sp = |t: usize| {
            let (r, c) = (48 / t, 48 / t);
            let small = downsample(&s, t).unwrap();
            let low = FeatureMap::from_fn(r, c, 1, |i, j, _| small.get(i, j) as f32).unwrap();
            let high = FeatureMap::from_fn(r, c, 1, |i, j, _| -(small.get(i, j) as f32) - 1.0).unwrap();
            (low, high)
        };
        let (low2, high2) = per_sp(2);
        let (low4, high4) = per_sp(4);
        let bi2 = run_structure(&FusionConfig::bi2(p).unwrap(), &s, &low2, &high2).unwrap();
        let bi4 = run_structure(&FusionConfig::bi4(p).unwrap(), &s, &low4, &high4).unwrap();
        assert_eq!(bi2.primary().fused.dims(), (24, 24));
        assert_eq!(bi4.primary().fused.dims(), (12, 12));
        let a2 = source_by_superpixel(&s, 2, &bi2.primary().mask_h);
        let a4 = source_by_superpixel(&s, 4, &bi4.primary().mask_h);
        assert_eq!(a2, a4);
        // The fused values themselves say which source was used.
        for (v, h) in bi4.primary().fused.as_slice().iter().zip(bi4.primary().mask_h.as_slice()) {
            assert_eq!(*v < 0.0, *h);
        }
    }
}

#[test]
fn demo_large_object_is_decoded_from_high() {
    let object = DemoObject { shape: ObjectShape::Rect, size: 20, class: 2, position: Some([6, 6]) };
    let mut spec = DemoSpec::new(64, 64, vec![object]);
    spec.as_stride = 16;
    spec.superpixels = 4;
    let out = run_demo(&spec).unwrap();
    let label = out.superpixels.get(6, 6);
    let sp: Vec<usize> = (0..64 * 64).filter(|&i| out.superpixels.as_slice()[i] == label).collect();
    let obj: Vec<usize> = (0..64 * 64).filter(|&i| out.class_map.as_slice()[i] == 2).collect();
    assert_eq!(sp, obj, "superpixel does not isolate the object");
    let report = &out.objects[0];
    assert_eq!(report.coverage, Coverage::High);
    for &i in &obj {
        assert_eq!(out.decoded_fused.as_slice()[i], out.decoded_high.as_slice()[i]);
    }
    assert_eq!(report.fused_recovery, report.high_only_recovery);
}

#[test]
fn demo_cells_decode_from_their_selected_source() {
    let objects = vec![
        DemoObject { shape: ObjectShape::Rect, size: 1, class: 1, position: Some([21, 37]) },
        DemoObject { shape: ObjectShape::Disk, size: 20, class: 2, position: None },
        DemoObject { shape: ObjectShape::Rect, size: 3, class: 3, position: None },
    ];
    let mut spec = DemoSpec::new(64, 64, objects);
    spec.seed = 5;
    let out = run_demo(&spec).unwrap();
    let mask = out.mask_h();
    let high = argmax_decode(&out.high);
    let low = argmax_decode(&out.low);
    for (i, &h) in mask.as_slice().iter().enumerate() {
        let want = if h { high.as_slice()[i] } else { low.as_slice()[i] };
        assert_eq!(out.decoded_fused.as_slice()[i], want, "cell {i}");
    }
}

#[test]
fn demo_without_objects_is_all_background() {
    for variant in ["bi4", "bi2", "reverse"] {
        let mut spec = DemoSpec::new(32, 32, Vec::new());
        spec.variant = variant.parse().unwrap();
        let out = run_demo(&spec).unwrap();
        assert!(out.decoded_fused.as_slice().iter().all(|&c| c == 0), "{variant}");
        assert!(out.objects.is_empty());
    }
}
