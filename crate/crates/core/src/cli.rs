//! Command-line front end. Exit codes: 0 success, 1 I/O or data error,
//! 2 usage error, 3 payload does not fit the cover.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::attacks::{apply_attack, AttackSpec};
use crate::blockengine::EnhanceRule;
use crate::compare::{run_comparison, CompareConfig};
use crate::error::{Error, Result};
use crate::imagecore::{load_gray, load_rgb_any, load_wav, save_gray, save_rgb, save_wav, RasterImage};
use crate::metrics::{format_value, layer_quality, logo_quality, recovery_quality, QualityReport};
use crate::payload::{canvas_to_audio, canvas_to_image, canvas_to_text, PayloadKind};
use crate::stego::{
    embed, extract, parse_enhance, parse_master_key, parse_sidecar, write_sidecar, EmbedParams, Modulation, Payloads,
    SlotKeys,
};
use crate::transforms::TransformKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "wavesteg", version, about = "Wavelet-domain steganography for text, image and audio payloads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hide a text, a logo and an audio clip in a grayscale cover.
    Embed(EmbedArgs),
    /// Recover the payloads from a stego image (needs the cover and sidecar).
    Extract(ExtractArgs),
    /// Imperceptibility metrics of a stego image against its cover.
    Evaluate(EvaluateArgs),
    /// Apply a channel attack to a stego image.
    Attack(AttackArgs),
    /// Run a transform comparison described by a config file.
    Compare(CompareArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Nonadaptive,
    Adaptive,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TransformArg {
    Dwt,
    Dct,
    Wht,
    Dft,
}

fn parse_key(s: &str) -> std::result::Result<u64, String> {
    parse_master_key(s).map_err(|e| e.to_string())
}

fn parse_alpha(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(format!("expected a finite number >= 0, got {s:?}")),
    }
}

fn parse_gain(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 1.0 => Ok(v),
        _ => Err(format!("expected a finite number >= 1, got {s:?}")),
    }
}

fn parse_rule(s: &str) -> std::result::Result<EnhanceRule, String> {
    parse_enhance(s).ok_or_else(|| format!("expected ties, count:N or fraction:F, got {s:?}"))
}

fn parse_attack(s: &str) -> std::result::Result<AttackSpec, String> {
    s.parse::<AttackSpec>().map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct EmbedArgs {
    /// Grayscale cover (binary PGM).
    #[arg(long)]
    cover: PathBuf,
    /// Text file, at most 256 bytes.
    #[arg(long)]
    text: PathBuf,
    /// Grayscale logo (binary PGM), at most a quarter of the cover per side.
    #[arg(long)]
    logo: PathBuf,
    /// 8-bit mono PCM WAV.
    #[arg(long)]
    audio: PathBuf,
    /// Master key, up to 16 hex digits.
    #[arg(long, value_parser = parse_key)]
    master_key: u64,
    /// Output stego image (binary PPM).
    #[arg(long)]
    out_stego: PathBuf,
    /// Output sidecar; defaults to the stego path with a `.sidecar` extension.
    #[arg(long)]
    out_sidecar: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1, value_parser = parse_alpha)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "nonadaptive")]
    mode: ModeArg,
    /// Enhancement gain; 1 disables enhancement.
    #[arg(long, default_value_t = 1.2, value_parser = parse_gain)]
    gain: f64,
    /// Which unselected blocks to enhance: ties, count:N or fraction:F.
    #[arg(long, default_value = "ties", value_parser = parse_rule)]
    enhance: EnhanceRule,
    #[arg(long, value_enum, default_value = "dwt")]
    transform: TransformArg,
    /// Also write the quality report as CSV.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    #[arg(long)]
    stego: PathBuf,
    #[arg(long)]
    cover: PathBuf,
    #[arg(long)]
    sidecar: PathBuf,
    #[arg(long, value_parser = parse_key)]
    master_key: u64,
    /// Directory for the recovered payloads and report.csv.
    #[arg(long)]
    out_dir: PathBuf,
    /// Original payloads; when all three are given the report scores the
    /// recovery against them.
    #[arg(long, requires_all = ["reference_logo", "reference_audio"])]
    reference_text: Option<PathBuf>,
    #[arg(long, requires_all = ["reference_text", "reference_audio"])]
    reference_logo: Option<PathBuf>,
    #[arg(long, requires_all = ["reference_text", "reference_logo"])]
    reference_audio: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[arg(long)]
    cover: PathBuf,
    /// Stego image, PPM or PGM.
    #[arg(long)]
    stego: PathBuf,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AttackArgs {
    /// Input image, PPM or PGM.
    #[arg(long)]
    stego: PathBuf,
    /// none, gauss:SIGMA, saltpepper:D, mean:K, median:K, jpeg:Q, histeq, rescale:F
    #[arg(long, value_parser = parse_attack)]
    spec: AttackSpec,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    config: PathBuf,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `std::env::args` and runs the command.
pub fn run() -> i32 {
    run_with(std::env::args_os())
}

pub fn run_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Embed(a) => cmd_embed(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Compare(a) => cmd_compare(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("wavesteg: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => EXIT_CAPACITY,
        _ => EXIT_FAILURE,
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_embed(a: EmbedArgs) -> Result<()> {
    let cover = load_gray(&a.cover)?;
    let text = fs::read(&a.text)?;
    let logo = load_gray(&a.logo)?;
    let audio = load_wav(&a.audio)?;
    let payloads = Payloads::new(&text, &logo, &audio, cover.width(), cover.height())?;
    let params = EmbedParams {
        alpha: a.alpha,
        mode: match a.mode {
            ModeArg::Nonadaptive => Modulation::NonAdaptive,
            ModeArg::Adaptive => Modulation::Adaptive,
        },
        gain: a.gain,
        enhance: a.enhance,
        transform: match a.transform {
            TransformArg::Dwt => TransformKind::Dwt,
            TransformArg::Dct => TransformKind::Dct,
            TransformArg::Wht => TransformKind::Wht,
            TransformArg::Dft => TransformKind::Dft,
        },
    };
    let out = embed(&cover, &payloads, &SlotKeys::from_master(a.master_key), &params)?;
    save_rgb(&out.stego, &a.out_stego)?;
    let sidecar_path = a.out_sidecar.unwrap_or_else(|| a.out_stego.with_extension("sidecar"));
    fs::write(&sidecar_path, write_sidecar(&out.sidecar))?;
    let report = QualityReport {
        layers: layer_quality(&cover, &out.stego)?,
        logos: Vec::new(),
    };
    if let Some(p) = &a.report {
        fs::write(p, report.to_csv())?;
    }
    print!("{}", report.to_text());
    Ok(())
}

fn cmd_extract(a: ExtractArgs) -> Result<()> {
    let stego = load_rgb_any(&a.stego)?;
    let cover = load_gray(&a.cover)?;
    let sidecar = parse_sidecar(&fs::read_to_string(&a.sidecar)?)?;
    let extraction = extract(&stego, &cover, &sidecar, &SlotKeys::from_master(a.master_key))?;
    fs::create_dir_all(&a.out_dir)?;
    let dir = &a.out_dir;

    let text = &extraction.text;
    fs::write(dir.join("text.txt"), canvas_to_text(&text.fused)?)?;
    fs::write(dir.join("text_ll.txt"), canvas_to_text(&text.copy_ll.canvas)?)?;
    fs::write(dir.join("text_hh.txt"), canvas_to_text(&text.copy_hh.canvas)?)?;
    let image = &extraction.image;
    save_gray(&canvas_to_image(&image.fused)?, dir.join("logo.pgm"))?;
    save_gray(&canvas_to_image(&image.copy_ll.canvas)?, dir.join("logo_ll.pgm"))?;
    save_gray(&canvas_to_image(&image.copy_hh.canvas)?, dir.join("logo_hh.pgm"))?;
    let audio = &extraction.audio;
    save_wav(&canvas_to_audio(&audio.fused)?, dir.join("audio.wav"))?;
    save_wav(&canvas_to_audio(&audio.copy_ll.canvas)?, dir.join("audio_ll.wav"))?;
    save_wav(&canvas_to_audio(&audio.copy_hh.canvas)?, dir.join("audio_hh.wav"))?;

    let csv = match (&a.reference_text, &a.reference_logo, &a.reference_audio) {
        (Some(t), Some(l), Some(w)) => {
            let payloads = Payloads::new(&fs::read(t)?, &load_gray(l)?, &load_wav(w)?, cover.width(), cover.height())?;
            QualityReport {
                layers: layer_quality(&cover, &stego)?,
                logos: recovery_quality(&payloads, &extraction)?,
            }
            .to_csv()
        }
        _ => agreement_csv(&cover, &stego, &extraction)?,
    };
    fs::write(dir.join("report.csv"), csv)?;
    Ok(())
}

/// Without references, scores how well the LL and HH copies agree.
fn agreement_csv(cover: &RasterImage, stego: &crate::RgbImage, extraction: &crate::stego::Extraction) -> Result<String> {
    let mut out = QualityReport {
        layers: layer_quality(cover, stego)?,
        logos: Vec::new(),
    }
    .to_csv();
    for kind in PayloadKind::ALL {
        let logo = extraction.logo(kind);
        let q = logo_quality(&logo.copy_ll.canvas, &logo.copy_hh.canvas, None)?;
        for (metric, v) in [
            ("ssim", q.ssim.unwrap_or(f64::NAN)),
            ("ber", q.ber),
            ("ber_tolerant", q.ber_tolerant),
            ("mi", q.mi),
        ] {
            let _ = writeln!(out, "agreement,{},LL-HH,{metric},{}", kind.name(), format_value(v));
        }
    }
    Ok(out)
}

fn cmd_evaluate(a: EvaluateArgs) -> Result<()> {
    let cover = load_gray(&a.cover)?;
    let stego = load_rgb_any(&a.stego)?;
    let report = QualityReport {
        layers: layer_quality(&cover, &stego)?,
        logos: Vec::new(),
    };
    write_out(a.out.as_deref(), &report.to_csv())
}

fn cmd_attack(a: AttackArgs) -> Result<()> {
    let image = load_rgb_any(&a.stego)?;
    save_rgb(&apply_attack(&image, &a.spec, a.seed)?, &a.out)
}

fn cmd_compare(a: CompareArgs) -> Result<()> {
    let cfg = CompareConfig::from_file(&a.config)?;
    let table = run_comparison(&cfg)?;
    write_out(a.out.as_deref(), &table.to_csv())
}
