//! Command-line front end: `segment`, `signal`, `fuse`, `demo`.
//!
//! Exit codes: 0 on success, 2 for input/format errors (unreadable files,
//! malformed label maps or feature maps, bad flags), 3 for shape or contract
//! violations (mismatched feature shapes, invalid parameters for the data).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::demo::{run_demo, DemoError, DemoObject, DemoSpec, Segmenter};
use crate::fusion::{align_to, build_masks, fillin_fuse, fusion_dims, FusionError};
use crate::netpbm::{decode_image, encode_image, encode_label_palette, encode_mask};
use crate::signal::compute_signal;
use crate::superpixel::{slic_segment, SlicError, SlicParams};
use crate::tensor::{
    read_feature_map, read_label_map, write_feature_map, write_label_map, FeatureMap, LabelMap, Variant,
    DEFAULT_AS_STRIDE, DEFAULT_FILLIN_SCALE,
};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Contract(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Contract(_) => EXIT_CONTRACT,
        }
    }
}

impl From<FusionError> for CliError {
    fn from(e: FusionError) -> Self {
        CliError::Contract(e.to_string())
    }
}

impl From<SlicError> for CliError {
    fn from(e: SlicError) -> Self {
        CliError::Contract(e.to_string())
    }
}

impl From<DemoError> for CliError {
    fn from(e: DemoError) -> Self {
        match e {
            DemoError::SpecSyntax(_) | DemoError::ObjectSyntax(_) => CliError::Input(e.to_string()),
            _ => CliError::Contract(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fillin", version, about = "Superpixel-guided FillIn feature fusion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Over-segment a PGM/PPM image into superpixels.
    Segment(SegmentArgs),
    /// Compute the per-superpixel appearance signal of a label map.
    Signal(SignalArgs),
    /// Fuse a low-level and a high-level feature map.
    Fuse(FuseArgs),
    /// Run the synthetic small-object demo.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Input image (binary PGM or PPM, maxval 255).
    pub image: PathBuf,
    #[arg(short = 'k', long = "superpixels", default_value_t = 100)]
    pub superpixels: usize,
    #[arg(long, default_value_t = 10.0)]
    pub compactness: f64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub iterations: u32,
    /// Label-map output (text format).
    #[arg(short, long)]
    pub out: PathBuf,
    /// Palette visualization; defaults to the output path with a `.ppm` extension.
    #[arg(long)]
    pub vis: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SignalArgs {
    /// Superpixel label map (text format).
    pub labels: PathBuf,
    #[arg(long = "as-stride", default_value_t = DEFAULT_AS_STRIDE as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub as_stride: u64,
    /// Complement every bit.
    #[arg(long)]
    pub reverse: bool,
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    /// Full-resolution superpixel label map.
    #[arg(long)]
    pub superpixels: PathBuf,
    #[arg(long)]
    pub low: PathBuf,
    #[arg(long)]
    pub high: PathBuf,
    #[arg(long = "fillin-scale", default_value_t = DEFAULT_FILLIN_SCALE as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub fillin_scale: u64,
    #[arg(long = "as-stride", default_value_t = DEFAULT_AS_STRIDE as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub as_stride: u64,
    /// Fill with the complemented signal (the thin map of the reverse structure).
    #[arg(long)]
    pub reverse: bool,
    #[arg(long)]
    pub out: PathBuf,
    /// Optional PGM of the high-level mask (255 = high-level source).
    #[arg(long = "mask-out")]
    pub mask_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// JSON demo spec; when given, the scene flags below are ignored.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    pub rows: usize,
    #[arg(long, default_value_t = 64)]
    pub cols: usize,
    /// Object as `rect|disk:SIZE:CLASS[@ROW,COL]`; repeatable.
    #[arg(long = "object")]
    pub objects: Vec<DemoObject>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "high-stride", default_value_t = DEFAULT_AS_STRIDE)]
    pub high_stride: usize,
    #[arg(long = "as-stride", default_value_t = DEFAULT_AS_STRIDE)]
    pub as_stride: usize,
    #[arg(long = "fillin-scale", default_value_t = 1)]
    pub fillin_scale: usize,
    #[arg(long, default_value_t = Variant::Bi4)]
    pub variant: Variant,
    #[arg(short = 'k', long, default_value_t = 16)]
    pub superpixels: usize,
    /// Skip the color split after SLIC.
    #[arg(long = "plain-slic")]
    pub plain_slic: bool,
    /// Directory for the report and visualizations.
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_labels(path: &Path) -> Result<LabelMap, CliError> {
    read_label_map(&read_file(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_features(path: &Path) -> Result<FeatureMap<f32>, CliError> {
    read_feature_map(&read_file(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Segment(args) => cmd_segment(&args),
        Command::Signal(args) => cmd_signal(&args, stdout),
        Command::Fuse(args) => cmd_fuse(&args),
        Command::Demo(args) => cmd_demo(&args, stdout),
    }
}

pub fn cmd_segment(args: &SegmentArgs) -> Result<(), CliError> {
    let bytes = read_file(&args.image)?;
    let image = decode_image::<f32>(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", args.image.display())))?;
    let params = SlicParams::new(args.superpixels, args.compactness, args.iterations as usize);
    let labels = slic_segment(&image, &params)?;
    write_file(&args.out, &write_label_map(&labels))?;
    let vis = args.vis.clone().unwrap_or_else(|| args.out.with_extension("ppm"));
    write_file(&vis, &encode_label_palette(&labels))
}

pub fn cmd_signal(args: &SignalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let labels = load_labels(&args.labels)?;
    let signal = compute_signal(&labels, args.as_stride as usize).map_err(|e| CliError::Contract(e.to_string()))?;
    let signal = if args.reverse { signal.reversed() } else { signal };
    let text = signal.to_text();
    match &args.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string())),
    }
}

/// Fused map and the high-level mask for the `fuse` command.
pub fn fuse_in_memory(
    superpixels: &LabelMap,
    low: &FeatureMap<f32>,
    high: &FeatureMap<f32>,
    fillin_scale: usize,
    as_stride: usize,
    reverse: bool,
) -> Result<crate::fusion::FusedPair<f32>, CliError> {
    let target = fusion_dims(superpixels, fillin_scale);
    let low = align_to("low-level features", low, target)?;
    let high = align_to("high-level features", high, target)?;
    let signal = compute_signal(superpixels, as_stride).map_err(|e| CliError::Contract(e.to_string()))?;
    let signal = if reverse { signal.reversed() } else { signal };
    let (mask_h, _) = build_masks(superpixels, fillin_scale, &signal)?;
    Ok(fillin_fuse(&low, &high, &mask_h)?)
}

pub fn cmd_fuse(args: &FuseArgs) -> Result<(), CliError> {
    let superpixels = load_labels(&args.superpixels)?;
    let low = load_features(&args.low)?;
    let high = load_features(&args.high)?;
    let pair =
        fuse_in_memory(&superpixels, &low, &high, args.fillin_scale as usize, args.as_stride as usize, args.reverse)?;
    write_file(&args.out, &write_feature_map(&pair.fused))?;
    if let Some(path) = &args.mask_out {
        write_file(path, &encode_mask(&pair.mask_h))?;
    }
    Ok(())
}

pub fn demo_spec(args: &DemoArgs) -> Result<DemoSpec, CliError> {
    if let Some(path) = &args.spec {
        let bytes = read_file(path)?;
        let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))?;
        return Ok(DemoSpec::from_json(&text)?);
    }
    let mut spec = DemoSpec::new(args.rows, args.cols, args.objects.clone());
    spec.seed = args.seed;
    spec.high_stride = args.high_stride;
    spec.as_stride = args.as_stride;
    spec.fillin_scale = args.fillin_scale;
    spec.variant = args.variant;
    spec.superpixels = args.superpixels;
    spec.segmenter = if args.plain_slic { Segmenter::Slic } else { Segmenter::SlicColorSplit };
    Ok(spec)
}

pub fn cmd_demo(args: &DemoArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = demo_spec(args)?;
    let outcome = run_demo(&spec)?;
    let report = outcome.report();
    stdout.write_all(report.as_bytes()).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
        write_file(&dir.join("report.txt"), report.as_bytes())?;
        write_file(&dir.join("image.ppm"), &encode_image(&outcome.image))?;
        write_file(&dir.join("classes.ppm"), &encode_label_palette(&outcome.class_map))?;
        write_file(&dir.join("superpixels.ppm"), &encode_label_palette(&outcome.superpixels))?;
        write_file(&dir.join("superpixels.txt"), &write_label_map(&outcome.superpixels))?;
        write_file(&dir.join("mask_h.pgm"), &encode_mask(outcome.mask_h()))?;
        write_file(&dir.join("decoded_fused.ppm"), &encode_label_palette(&outcome.decoded_fused))?;
        write_file(&dir.join("decoded_high.ppm"), &encode_label_palette(&outcome.decoded_high))?;
    }
    Ok(())
}
