//! Transform-comparison harness: the same selection, embedding and
//! extraction pipeline run over DWT, block DCT, block WHT and block DFT
//! carriers, with optional attack sweeps.
//!
//! Config files are `key = value` lines; `#` starts a comment. Keys:
//!
//! ```text
//! cover      = PATH.pgm | synthetic:SEED
//! text       = PATH | synthetic:LENGTH
//! logo       = PATH.pgm | synthetic:SEED
//! audio      = PATH.wav | synthetic:SEED
//! master_key = HEX                       (default 0)
//! alpha      = REAL                      (default 0.1)
//! mode       = nonadaptive | adaptive    (default nonadaptive)
//! gain       = REAL                      (default 1.2)
//! enhance    = ties | count:N | fraction:F (default ties)
//! transforms = dwt,dct,wht,dft           (default all four)
//! attack     = FAMILY[:S1,S2,...]        (repeatable; default none)
//! seeds      = N                         (default 1)
//! channel    = quantized | lossless      (default quantized)
//! ```
//!
//! Relative paths are resolved against the config file's directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::attacks::{apply_attack, AttackSpec};
use crate::blockengine::EnhanceRule;
use crate::error::{Error, Result};
use crate::imagecore::{load_gray, load_wav, PcmAudio, RasterImage};
use crate::metrics::{format_value, logo_quality, psnr};
use crate::payload::PayloadKind;
use crate::stego::{embed, extract, extract_planes, parse_master_key, EmbedParams, Modulation, Payloads, SlotKeys};
use crate::synthetic;
use crate::transforms::TransformKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    /// 8-bit stego image, attacks applied.
    Quantized,
    /// Real-valued stego planes; no attacks.
    Lossless,
}

#[derive(Clone, Debug)]
pub struct CompareConfig {
    pub cover: RasterImage,
    pub text: Vec<u8>,
    pub logo: RasterImage,
    pub audio: PcmAudio,
    pub master_key: u64,
    pub alpha: f64,
    pub mode: Modulation,
    pub gain: f64,
    pub enhance: EnhanceRule,
    pub transforms: Vec<TransformKind>,
    pub attacks: Vec<AttackSpec>,
    pub seeds: u64,
    pub channel: Channel,
}

impl CompareConfig {
    /// Synthetic inputs, no attack, all transforms.
    pub fn synthetic(seed: u64) -> Self {
        Self {
            cover: synthetic::cover(256, 256, seed),
            text: synthetic::text(256),
            logo: synthetic::logo(64, seed),
            audio: synthetic::voice(16000, 8000, seed),
            master_key: 0,
            alpha: 0.1,
            mode: Modulation::NonAdaptive,
            gain: 1.2,
            enhance: EnhanceRule::TiesWithSelected,
            transforms: TransformKind::ALL.to_vec(),
            attacks: vec![AttackSpec::Identity],
            seeds: 1,
            channel: Channel::Quantized,
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = Self::synthetic(0);
        let mut attacks = Vec::new();
        let bad = |line: usize, detail: String| Error::format("compare config", format!("line {}: {detail}", line + 1));
        let resolve = |p: &str| -> PathBuf {
            let p = Path::new(p);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };
        let synthetic_arg = |v: &str| v.strip_prefix("synthetic:").map(|s| s.trim().parse::<u64>());
        let (mut have_cover, mut have_text, mut have_logo, mut have_audio) = (false, false, false, false);
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| bad(n, format!("expected `key = value`, found {line:?}")))?;
            match key {
                "cover" => {
                    cfg.cover = match synthetic_arg(value) {
                        Some(seed) => synthetic::cover(256, 256, seed.map_err(|e| bad(n, e.to_string()))?),
                        None => load_gray(resolve(value))?,
                    };
                    have_cover = true;
                }
                "text" => {
                    cfg.text = match synthetic_arg(value) {
                        Some(len) => synthetic::text(len.map_err(|e| bad(n, e.to_string()))? as usize),
                        None => std::fs::read(resolve(value))?,
                    };
                    have_text = true;
                }
                "logo" => {
                    cfg.logo = match synthetic_arg(value) {
                        Some(seed) => synthetic::logo(64, seed.map_err(|e| bad(n, e.to_string()))?),
                        None => load_gray(resolve(value))?,
                    };
                    have_logo = true;
                }
                "audio" => {
                    cfg.audio = match synthetic_arg(value) {
                        Some(seed) => synthetic::voice(16000, 8000, seed.map_err(|e| bad(n, e.to_string()))?),
                        None => load_wav(resolve(value))?,
                    };
                    have_audio = true;
                }
                "master_key" => cfg.master_key = parse_master_key(value)?,
                "alpha" => cfg.alpha = value.parse().map_err(|_| bad(n, format!("bad alpha {value:?}")))?,
                "gain" => cfg.gain = value.parse().map_err(|_| bad(n, format!("bad gain {value:?}")))?,
                "mode" => cfg.mode = Modulation::parse(value).ok_or_else(|| bad(n, format!("bad mode {value:?}")))?,
                "enhance" => {
                    cfg.enhance = crate::stego::parse_enhance(value)
                        .ok_or_else(|| bad(n, format!("bad enhancement rule {value:?}")))?
                }
                "transforms" => {
                    cfg.transforms = value
                        .split(',')
                        .map(|t| TransformKind::parse(t).ok_or_else(|| bad(n, format!("unknown transform {t:?}"))))
                        .collect::<Result<_>>()?
                }
                "attack" => match value.split_once(':') {
                    None => attacks.push(value.parse::<AttackSpec>()?),
                    Some((family, levels)) => {
                        for level in levels.split(',') {
                            attacks.push(format!("{family}:{}", level.trim()).parse::<AttackSpec>()?);
                        }
                    }
                },
                "seeds" => cfg.seeds = value.parse().map_err(|_| bad(n, format!("bad seed count {value:?}")))?,
                "channel" => {
                    cfg.channel = match value {
                        "quantized" => Channel::Quantized,
                        "lossless" => Channel::Lossless,
                        _ => return Err(bad(n, format!("bad channel {value:?}"))),
                    }
                }
                _ => return Err(bad(n, format!("unknown key {key:?}"))),
            }
        }
        if !(have_cover && have_text && have_logo && have_audio) {
            return Err(Error::format("compare config", "cover, text, logo and audio are all required"));
        }
        if !attacks.is_empty() {
            cfg.attacks = attacks;
        }
        if cfg.seeds == 0 {
            return Err(Error::format("compare config", "seeds must be positive"));
        }
        Ok(cfg)
    }

    pub fn params(&self, transform: TransformKind) -> EmbedParams {
        EmbedParams {
            alpha: self.alpha,
            mode: self.mode,
            gain: self.gain,
            enhance: self.enhance,
            transform,
        }
    }

    /// First 16 hex digits of SHA-256 over the settings and input samples.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        let settings = format!(
            "key={:016x};alpha={};mode={};gain={};enhance={:?};transforms={:?};attacks={:?};seeds={};channel={:?};",
            self.master_key,
            self.alpha,
            self.mode.name(),
            self.gain,
            self.enhance,
            self.transforms,
            self.attacks.iter().map(ToString::to_string).collect::<Vec<_>>(),
            self.seeds,
            self.channel
        );
        h.update(settings.as_bytes());
        h.update((self.cover.width() as u64).to_le_bytes());
        h.update(self.cover.samples());
        h.update((self.text.len() as u64).to_le_bytes());
        h.update(&self.text);
        h.update((self.logo.width() as u64).to_le_bytes());
        h.update(self.logo.samples());
        h.update(self.audio.sample_rate().to_le_bytes());
        h.update(self.audio.samples().iter().map(|&s| s as u8).collect::<Vec<_>>());
        h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub transform: TransformKind,
    pub attack: AttackSpec,
    /// `stego`, `mean`, or a payload kind name.
    pub logo: &'static str,
    pub metric: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonTable {
    pub config_hash: String,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub const CSV_HEADER: &'static str = "config_hash,transform,attack,severity,logo,metric,value";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.config_hash,
                r.transform.name(),
                r.attack.family(),
                r.attack.severity().map_or("-".to_string(), |s| s.to_string()),
                r.logo,
                r.metric,
                format_value(r.value)
            );
        }
        out
    }

    pub fn value(&self, transform: TransformKind, attack: &AttackSpec, logo: &str, metric: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.transform == transform && r.attack == *attack && r.logo == logo && r.metric == metric)
            .map(|r| r.value)
    }
}

/// Per-run metrics, in a fixed order.
struct RunMetrics {
    psnr: f64,
    /// For text, image, audio: ssim, ber, ber_tolerant, mi.
    logos: [[f64; 4]; 3],
}

const LOGO_METRICS: [&str; 4] = ["ssim", "ber", "ber_tolerant", "mi"];

fn finite_mean_psnr(values: impl Iterator<Item = f64>) -> f64 {
    // identical layers would be infinite; cap at 100 dB so means stay finite
    let v: Vec<f64> = values.map(|p| p.min(100.0)).collect();
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn run_comparison(cfg: &CompareConfig) -> Result<ComparisonTable> {
    if cfg.channel == Channel::Lossless && cfg.attacks.iter().any(|a| *a != AttackSpec::Identity) {
        return Err(Error::InvalidParameter("the lossless channel cannot be attacked".into()));
    }
    let payloads = Payloads::new(&cfg.text, &cfg.logo, &cfg.audio, cfg.cover.width(), cfg.cover.height())?;
    let keys = SlotKeys::from_master(cfg.master_key);

    let embedded = cfg
        .transforms
        .par_iter()
        .map(|&t| embed(&cfg.cover, &payloads, &keys, &cfg.params(t)))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, usize, u64)> = (0..cfg.transforms.len())
        .flat_map(|t| (0..cfg.attacks.len()).flat_map(move |a| (0..cfg.seeds).map(move |s| (t, a, s))))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(t, a, seed)| -> Result<RunMetrics> {
            let out = &embedded[t];
            let (extraction, psnr_value) = match cfg.channel {
                Channel::Lossless => {
                    let ex = extract_planes(&out.stego_planes, &cfg.cover, &out.sidecar, &keys)?;
                    let p = finite_mean_psnr(
                        out.stego_planes
                            .iter()
                            .map(|pl| pl.to_image().and_then(|img| psnr(&cfg.cover, &img)))
                            .collect::<Result<Vec<_>>>()?
                            .into_iter(),
                    );
                    (ex, p)
                }
                Channel::Quantized => {
                    let attacked = apply_attack(&out.stego, &cfg.attacks[a], seed)?;
                    let ex = extract(&attacked, &cfg.cover, &out.sidecar, &keys)?;
                    let p = finite_mean_psnr(
                        attacked
                            .layers()
                            .iter()
                            .map(|l| psnr(&cfg.cover, l))
                            .collect::<Result<Vec<_>>>()?
                            .into_iter(),
                    );
                    (ex, p)
                }
            };
            let mut logos = [[0.0; 4]; 3];
            for (i, kind) in PayloadKind::ALL.iter().enumerate() {
                let q = logo_quality(payloads.get(*kind), &extraction.logo(*kind).fused, None)?;
                logos[i] = [q.ssim.unwrap_or(f64::NAN), q.ber, q.ber_tolerant, q.mi];
            }
            Ok(RunMetrics {
                psnr: psnr_value,
                logos,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let per_point = cfg.seeds as usize;
    for (chunk_idx, chunk) in runs.chunks(per_point).enumerate() {
        let t = chunk_idx / cfg.attacks.len();
        let a = chunk_idx % cfg.attacks.len();
        let (transform, attack) = (cfg.transforms[t], cfg.attacks[a]);
        let mean = |f: &dyn Fn(&RunMetrics) -> f64| chunk.iter().map(f).sum::<f64>() / chunk.len() as f64;
        rows.push(ComparisonRow {
            transform,
            attack,
            logo: "stego",
            metric: "psnr",
            value: mean(&|r| r.psnr),
        });
        for (i, kind) in PayloadKind::ALL.iter().enumerate() {
            for (m, metric) in LOGO_METRICS.iter().enumerate() {
                rows.push(ComparisonRow {
                    transform,
                    attack,
                    logo: kind.name(),
                    metric,
                    value: mean(&|r| r.logos[i][m]),
                });
            }
        }
        rows.push(ComparisonRow {
            transform,
            attack,
            logo: "mean",
            metric: "ber",
            value: mean(&|r| r.logos.iter().map(|l| l[1]).sum::<f64>() / 3.0),
        });
    }
    Ok(ComparisonTable {
        config_hash: cfg.hash(),
        rows,
    })
}
