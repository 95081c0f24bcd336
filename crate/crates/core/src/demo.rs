//! Synthetic small-object preservation demo.
//!
//! A class map with planted objects is rendered to an RGB image and
//! over-segmented. The low-level feature is the one-hot class encoding at
//! fusion resolution. The high-level feature is the one-hot encoding of the
//! class map point-sampled at `high_stride`, bilinearly upsampled back, so
//! objects that miss the sampling grid are absent from it. The fused map is
//! decoded by per-cell argmax and every object is scored for recovery and for
//! which source covered it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::{align_to, fusion_dims, run_structure, FusionError, StructureOutput};
use crate::netpbm::label_color;
use crate::signal::downsample;
use crate::superpixel::{relabel_connected, slic_segment, Image, SlicError, SlicParams};
use crate::tensor::{BinaryMask, ConfigError, FeatureMap, FusionConfig, Label, LabelMap, Variant, DEFAULT_AS_STRIDE};

pub const BACKGROUND: Label = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectShape {
    /// `size x size` square.
    Rect,
    /// Disk of diameter `size`.
    Disk,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoObject {
    pub shape: ObjectShape,
    pub size: usize,
    pub class: Label,
    /// Top-left corner of the bounding box; drawn from the seed when absent.
    #[serde(default)]
    pub position: Option<[usize; 2]>,
}

impl FromStr for DemoObject {
    type Err = DemoError;

    /// `rect:SIZE:CLASS` or `disk:SIZE:CLASS`, optionally followed by `@ROW,COL`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DemoError::ObjectSyntax(s.to_string());
        let (body, position) = match s.split_once('@') {
            Some((body, pos)) => {
                let (r, c) = pos.split_once(',').ok_or_else(bad)?;
                (body, Some([r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?]))
            }
            None => (s, None),
        };
        let mut parts = body.split(':');
        let shape = match parts.next() {
            Some("rect") => ObjectShape::Rect,
            Some("disk") => ObjectShape::Disk,
            _ => return Err(bad()),
        };
        let size = parts.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        let class = parts.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Self { shape, size, class, position })
    }
}

/// How the rendered image is over-segmented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Segmenter {
    /// Plain SLIC.
    Slic,
    /// SLIC, then each superpixel split into connected runs of identical color.
    #[default]
    SlicColorSplit,
}

fn default_stride() -> usize {
    DEFAULT_AS_STRIDE
}
fn default_one() -> usize {
    1
}
fn default_superpixels() -> usize {
    16
}
fn default_compactness() -> f64 {
    10.0
}
fn default_iterations() -> usize {
    10
}
fn default_variant() -> Variant {
    Variant::Bi4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoSpec {
    pub rows: usize,
    pub cols: usize,
    #[serde(default)]
    pub objects: Vec<DemoObject>,
    #[serde(default)]
    pub seed: u64,
    /// Simulated encoder downsampling of the high-level feature.
    #[serde(default = "default_stride")]
    pub high_stride: usize,
    #[serde(default = "default_stride")]
    pub as_stride: usize,
    #[serde(default = "default_one")]
    pub fillin_scale: usize,
    #[serde(default = "default_variant")]
    pub variant: Variant,
    #[serde(default)]
    pub segmenter: Segmenter,
    #[serde(default = "default_superpixels")]
    pub superpixels: usize,
    #[serde(default = "default_compactness")]
    pub compactness: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
}

impl DemoSpec {
    pub fn new(rows: usize, cols: usize, objects: Vec<DemoObject>) -> Self {
        Self {
            rows,
            cols,
            objects,
            seed: 0,
            high_stride: DEFAULT_AS_STRIDE,
            as_stride: DEFAULT_AS_STRIDE,
            fillin_scale: 1,
            variant: Variant::Bi4,
            segmenter: Segmenter::default(),
            superpixels: default_superpixels(),
            compactness: default_compactness(),
            iterations: default_iterations(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, DemoError> {
        serde_json::from_str(text).map_err(|e| DemoError::SpecSyntax(e.to_string()))
    }

    fn validate(&self) -> Result<FusionConfig, DemoError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(DemoError::EmptyCanvas);
        }
        if self.high_stride == 0 {
            return Err(DemoError::ZeroHighStride);
        }
        for (index, obj) in self.objects.iter().enumerate() {
            if obj.class == BACKGROUND {
                return Err(DemoError::BackgroundClass { index });
            }
            if obj.size == 0 || obj.size > self.rows || obj.size > self.cols {
                return Err(DemoError::DoesNotFit { index });
            }
            if let Some([r, c]) = obj.position {
                if r + obj.size > self.rows || c + obj.size > self.cols {
                    return Err(DemoError::DoesNotFit { index });
                }
            }
        }
        Ok(FusionConfig::new(self.variant, self.fillin_scale, self.as_stride)?)
    }
}

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("canvas must be at least 1x1")]
    EmptyCanvas,
    #[error("high-level stride must be >= 1")]
    ZeroHighStride,
    #[error("object {index} uses the background class 0")]
    BackgroundClass { index: usize },
    #[error("object {index} does not fit the canvas")]
    DoesNotFit { index: usize },
    #[error("cannot parse object {0:?}, expected rect|disk:SIZE:CLASS[@ROW,COL]")]
    ObjectSyntax(String),
    #[error("invalid demo spec: {0}")]
    SpecSyntax(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Slic(#[from] SlicError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

/// Which feature source covered an object's pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    High,
    Low,
    Mixed,
    /// The object was fully painted over by later objects.
    None,
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coverage::High => "HIGH",
            Coverage::Low => "LOW",
            Coverage::Mixed => "MIXED",
            Coverage::None => "NONE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectReport {
    pub index: usize,
    pub class: Label,
    pub position: [usize; 2],
    /// Visible pixels of the object in the final class map.
    pub pixels: usize,
    /// Fraction of pixels whose fused decode is the object's class.
    pub fused_recovery: f64,
    /// Same, decoding the high-level feature alone.
    pub high_only_recovery: f64,
    /// Fraction of pixels taken from the high-level feature.
    pub high_fraction: f64,
    pub coverage: Coverage,
}

#[derive(Debug, Clone)]
pub struct DemoOutcome {
    pub spec: DemoSpec,
    pub config: FusionConfig,
    pub class_map: LabelMap,
    pub image: Image<f32>,
    pub superpixels: LabelMap,
    pub low: FeatureMap<f32>,
    pub high: FeatureMap<f32>,
    pub output: StructureOutput<f32>,
    pub decoded_fused: LabelMap,
    pub decoded_high: LabelMap,
    pub decoded_low: LabelMap,
    pub objects: Vec<ObjectReport>,
}

impl DemoOutcome {
    pub fn mask_h(&self) -> &BinaryMask {
        &self.output.primary().mask_h
    }

    /// Fraction of full-resolution pixels whose fused decode matches the class map.
    pub fn fused_accuracy(&self) -> f64 {
        self.accuracy(&self.decoded_fused)
    }

    pub fn high_only_accuracy(&self) -> f64 {
        self.accuracy(&self.decoded_high)
    }

    fn accuracy(&self, decoded: &LabelMap) -> f64 {
        let t = self.config.fillin_scale();
        let (rows, cols) = self.class_map.dims();
        let hits = (0..rows * cols)
            .filter(|&i| decoded.get(i / cols / t, i % cols / t) == self.class_map.as_slice()[i])
            .count();
        hits as f64 / (rows * cols) as f64
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        let s = &self.spec;
        out.push_str(&format!(
            "canvas {}x{} variant {} fillin-scale {} as-stride {} high-stride {} superpixels {}\n",
            s.rows,
            s.cols,
            self.config.variant(),
            self.config.fillin_scale(),
            self.config.as_stride(),
            s.high_stride,
            self.superpixels.distinct_labels().len(),
        ));
        out.push_str(&format!(
            "high-mask fraction {:.4} fused accuracy {:.4} high-only accuracy {:.4}\n",
            self.mask_h().count_ones() as f64 / self.mask_h().as_slice().len() as f64,
            self.fused_accuracy(),
            self.high_only_accuracy(),
        ));
        for o in &self.objects {
            out.push_str(&format!(
                "object {} class {} at ({},{}) pixels {} fused {:.4} high-only {:.4} source {} (high {:.4})\n",
                o.index,
                o.class,
                o.position[0],
                o.position[1],
                o.pixels,
                o.fused_recovery,
                o.high_only_recovery,
                o.coverage,
                o.high_fraction,
            ));
        }
        out
    }
}

fn footprint(shape: ObjectShape, size: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    let center = (size as f64 - 1.0) / 2.0;
    let radius2 = (size as f64 / 2.0).powi(2);
    for dr in 0..size {
        for dc in 0..size {
            let inside = match shape {
                ObjectShape::Rect => true,
                ObjectShape::Disk => (dr as f64 - center).powi(2) + (dc as f64 - center).powi(2) <= radius2,
            };
            if inside {
                cells.push((dr, dc));
            }
        }
    }
    cells
}

fn one_hot(map: &LabelMap, classes: usize) -> FeatureMap<f32> {
    FeatureMap::from_fn(
        map.rows(),
        map.cols(),
        classes,
        |r, c, ch| {
            if map.get(r, c) as usize == ch {
                1.0
            } else {
                0.0
            }
        },
    )
    .expect("one-hot values are finite")
}

/// Per-cell argmax over channels; ties go to the lowest channel.
pub fn argmax_decode(map: &FeatureMap<f32>) -> LabelMap {
    let data = map
        .as_slice()
        .chunks_exact(map.channels())
        .map(|px| {
            let mut best = 0;
            for (ch, &v) in px.iter().enumerate() {
                if v > px[best] {
                    best = ch;
                }
            }
            best as Label
        })
        .collect();
    LabelMap::new(map.rows(), map.cols(), data).expect("same shape as features")
}

fn segment(spec: &DemoSpec, image: &Image<f32>) -> Result<LabelMap, DemoError> {
    let params = SlicParams::new(spec.superpixels, spec.compactness, spec.iterations);
    let slic = slic_segment(image, &params)?;
    match spec.segmenter {
        Segmenter::Slic => Ok(slic),
        Segmenter::SlicColorSplit => {
            let bytes = image.to_u8();
            let mut keys = BTreeMap::new();
            let data = slic
                .as_slice()
                .iter()
                .zip(bytes.chunks_exact(3))
                .map(|(&label, rgb)| {
                    let next = keys.len() as Label;
                    *keys.entry((label, [rgb[0], rgb[1], rgb[2]])).or_insert(next)
                })
                .collect();
            let keyed = LabelMap::new(slic.rows(), slic.cols(), data).expect("same shape");
            Ok(relabel_connected(&keyed))
        }
    }
}

pub fn run_demo(spec: &DemoSpec) -> Result<DemoOutcome, DemoError> {
    let config = spec.validate()?;
    let (rows, cols) = (spec.rows, spec.cols);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut class_map = vec![BACKGROUND; rows * cols];
    let mut owner = vec![usize::MAX; rows * cols];
    let mut positions = Vec::with_capacity(spec.objects.len());
    for (index, obj) in spec.objects.iter().enumerate() {
        let [r0, c0] =
            obj.position.unwrap_or_else(|| [rng.gen_range(0..=rows - obj.size), rng.gen_range(0..=cols - obj.size)]);
        positions.push([r0, c0]);
        for (dr, dc) in footprint(obj.shape, obj.size) {
            let i = (r0 + dr) * cols + c0 + dc;
            class_map[i] = obj.class;
            owner[i] = index;
        }
    }
    let class_map = LabelMap::new(rows, cols, class_map).expect("canvas shape");
    let classes = spec.objects.iter().map(|o| o.class as usize + 1).max().unwrap_or(1);

    let pixels: Vec<u8> = class_map.as_slice().iter().flat_map(|&c| label_color(c)).collect();
    let image = Image::<f32>::from_u8(rows, cols, 3, &pixels).expect("rendered image is valid");
    let superpixels = segment(spec, &image)?;

    let t = config.fillin_scale();
    let target = fusion_dims(&superpixels, t);
    let low = one_hot(&downsample(&class_map, t).map_err(FusionError::from)?, classes);
    let coarse = one_hot(&downsample(&class_map, spec.high_stride).map_err(FusionError::from)?, classes);
    let high = align_to("high-level features", &coarse, target)?;
    let output = run_structure(&config, &superpixels, &low, &high)?;

    let decoded_fused = argmax_decode(&output.primary().fused);
    let decoded_high = argmax_decode(&high);
    let decoded_low = argmax_decode(&low);
    let mask_h = &output.primary().mask_h;

    let objects = spec
        .objects
        .iter()
        .enumerate()
        .map(|(index, obj)| {
            let mine: Vec<(usize, usize)> =
                (0..rows * cols).filter(|&i| owner[i] == index).map(|i| (i / cols / t, i % cols / t)).collect();
            let n = mine.len();
            let frac = |pred: &dyn Fn(usize, usize) -> bool| {
                if n == 0 {
                    0.0
                } else {
                    mine.iter().filter(|&&(r, c)| pred(r, c)).count() as f64 / n as f64
                }
            };
            let high_fraction = frac(&|r, c| mask_h.get(r, c));
            let coverage = match (n, high_fraction) {
                (0, _) => Coverage::None,
                (_, 1.0) => Coverage::High,
                (_, 0.0) => Coverage::Low,
                _ => Coverage::Mixed,
            };
            ObjectReport {
                index,
                class: obj.class,
                position: positions[index],
                pixels: n,
                fused_recovery: frac(&|r, c| decoded_fused.get(r, c) == obj.class),
                high_only_recovery: frac(&|r, c| decoded_high.get(r, c) == obj.class),
                high_fraction,
                coverage,
            }
        })
        .collect();

    Ok(DemoOutcome {
        spec: spec.clone(),
        config,
        class_map,
        image,
        superpixels,
        low,
        high,
        output,
        decoded_fused,
        decoded_high,
        decoded_low,
        objects,
    })
}
