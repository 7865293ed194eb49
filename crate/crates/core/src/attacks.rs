//! Channel impairments applied to stego images before extraction.
//!
//! Every attack runs per colour layer and produces 8-bit output. Stochastic
//! attacks draw from ChaCha8 seeded with the caller's seed, layers in R, G,
//! B order from a single stream. `jpeg` is quantization only: 8×8 DCT, the
//! standard luminance table scaled by quality (IJG rule), dequantization and
//! inverse DCT, with no entropy coding.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::imagecore::{quantize_sample, RasterImage, RgbImage};
use crate::transforms::BlockBasis;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AttackSpec {
    Identity,
    GaussianNoise { sigma: f64 },
    SaltPepper { density: f64 },
    MeanFilter { k: usize },
    MedianFilter { k: usize },
    JpegQuantize { quality: u8 },
    HistogramEqualize,
    /// Resample by `factor`, then back to the original size (bilinear).
    Rescale { factor: f64 },
}

impl AttackSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            AttackSpec::GaussianNoise { sigma } if !(sigma >= 0.0 && sigma.is_finite()) => {
                bad(format!("noise sigma must be >= 0, got {sigma}"))
            }
            AttackSpec::SaltPepper { density } if !(0.0..=1.0).contains(&density) => {
                bad(format!("salt-and-pepper density must lie in [0, 1], got {density}"))
            }
            AttackSpec::MeanFilter { k } | AttackSpec::MedianFilter { k } if k < 3 || k % 2 == 0 => {
                bad(format!("filter size must be odd and >= 3, got {k}"))
            }
            AttackSpec::JpegQuantize { quality } if !(1..=100).contains(&quality) => {
                bad(format!("jpeg quality must lie in [1, 100], got {quality}"))
            }
            AttackSpec::Rescale { factor } if !(factor > 0.0 && factor.is_finite()) => {
                bad(format!("rescale factor must be > 0, got {factor}"))
            }
            _ => Ok(()),
        }
    }

    /// Family name used in spec strings and CSV output.
    pub fn family(&self) -> &'static str {
        match self {
            AttackSpec::Identity => "none",
            AttackSpec::GaussianNoise { .. } => "gauss",
            AttackSpec::SaltPepper { .. } => "saltpepper",
            AttackSpec::MeanFilter { .. } => "mean",
            AttackSpec::MedianFilter { .. } => "median",
            AttackSpec::JpegQuantize { .. } => "jpeg",
            AttackSpec::HistogramEqualize => "histeq",
            AttackSpec::Rescale { .. } => "rescale",
        }
    }

    pub fn severity(&self) -> Option<f64> {
        match *self {
            AttackSpec::GaussianNoise { sigma } => Some(sigma),
            AttackSpec::SaltPepper { density } => Some(density),
            AttackSpec::MeanFilter { k } | AttackSpec::MedianFilter { k } => Some(k as f64),
            AttackSpec::JpegQuantize { quality } => Some(f64::from(quality)),
            AttackSpec::Rescale { factor } => Some(factor),
            AttackSpec::Identity | AttackSpec::HistogramEqualize => None,
        }
    }
}

impl fmt::Display for AttackSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.severity() {
            Some(s) => write!(f, "{}:{s}", self.family()),
            None => f.write_str(self.family()),
        }
    }
}

impl FromStr for AttackSpec {
    type Err = Error;

    /// `none`, `gauss:SIGMA`, `saltpepper:DENSITY`, `mean:K`, `median:K`,
    /// `jpeg:QUALITY`, `histeq`, `rescale:FACTOR`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a.trim())),
            None => (s, None),
        };
        let bad = || Error::InvalidParameter(format!("cannot parse attack spec {s:?}"));
        let float = || arg.and_then(|a| a.parse::<f64>().ok()).ok_or_else(bad);
        let spec = match (name, arg) {
            ("none", None) => AttackSpec::Identity,
            ("histeq", None) => AttackSpec::HistogramEqualize,
            ("gauss", Some(_)) => AttackSpec::GaussianNoise { sigma: float()? },
            ("saltpepper", Some(_)) => AttackSpec::SaltPepper { density: float()? },
            ("rescale", Some(_)) => AttackSpec::Rescale { factor: float()? },
            ("mean", Some(a)) => AttackSpec::MeanFilter {
                k: a.parse().map_err(|_| bad())?,
            },
            ("median", Some(a)) => AttackSpec::MedianFilter {
                k: a.parse().map_err(|_| bad())?,
            },
            ("jpeg", Some(a)) => AttackSpec::JpegQuantize {
                quality: a.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn apply_attack(image: &RgbImage, spec: &AttackSpec, seed: u64) -> Result<RgbImage> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    image.map_layers(|layer| apply_to_layer(layer, spec, &mut rng))
}

pub fn apply_to_layer(image: &RasterImage, spec: &AttackSpec, rng: &mut ChaCha8Rng) -> Result<RasterImage> {
    match *spec {
        AttackSpec::Identity => Ok(image.clone()),
        AttackSpec::GaussianNoise { sigma } => gaussian_noise(image, sigma, rng),
        AttackSpec::SaltPepper { density } => Ok(salt_pepper(image, density, rng)),
        AttackSpec::MeanFilter { k } => Ok(window_filter(image, k, |w| {
            quantize_sample(w.iter().map(|&v| f64::from(v)).sum::<f64>() / w.len() as f64)
        })),
        AttackSpec::MedianFilter { k } => Ok(window_filter(image, k, |w| {
            w.sort_unstable();
            w[w.len() / 2]
        })),
        AttackSpec::JpegQuantize { quality } => jpeg_quantize(image, quality),
        AttackSpec::HistogramEqualize => Ok(histogram_equalize(image)),
        AttackSpec::Rescale { factor } => rescale(image, factor),
    }
}

fn gaussian_noise(image: &RasterImage, sigma: f64, rng: &mut ChaCha8Rng) -> Result<RasterImage> {
    if sigma == 0.0 {
        return Ok(image.clone());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let values: Vec<f64> = image
        .samples()
        .iter()
        .map(|&v| f64::from(v) + normal.sample(rng))
        .collect();
    RasterImage::from_f64(image.width(), image.height(), &values)
}

fn salt_pepper(image: &RasterImage, density: f64, rng: &mut ChaCha8Rng) -> RasterImage {
    let mut out = image.clone();
    for r in 0..image.height() {
        for c in 0..image.width() {
            if rng.random::<f64>() < density {
                out.set(r, c, if rng.random::<bool>() { 255 } else { 0 });
            }
        }
    }
    out
}

/// Applies `f` to each k×k neighbourhood, edges replicated.
fn window_filter(image: &RasterImage, k: usize, mut f: impl FnMut(&mut [u8]) -> u8) -> RasterImage {
    let (w, h) = (image.width() as isize, image.height() as isize);
    let half = (k / 2) as isize;
    let mut window = Vec::with_capacity(k * k);
    RasterImage::from_fn(image.width(), image.height(), |r, c| {
        window.clear();
        for dr in -half..=half {
            for dc in -half..=half {
                let rr = (r as isize + dr).clamp(0, h - 1) as usize;
                let cc = (c as isize + dc).clamp(0, w - 1) as usize;
                window.push(image.get(rr, cc));
            }
        }
        f(&mut window)
    })
    .expect("same dims")
}

const LUMA_TABLE: [u16; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Luminance quantization table scaled for `quality` (IJG convention).
pub fn quant_table(quality: u8) -> [f64; 64] {
    let q = u32::from(quality.clamp(1, 100));
    let scale = if q < 50 { 5000 / q } else { 200 - 2 * q };
    let mut out = [0.0; 64];
    for (o, &t) in out.iter_mut().zip(&LUMA_TABLE) {
        *o = ((u32::from(t) * scale + 50) / 100).clamp(1, 255) as f64;
    }
    out
}

fn jpeg_quantize(image: &RasterImage, quality: u8) -> Result<RasterImage> {
    let table = quant_table(quality);
    let basis = BlockBasis::dct();
    let (w, h) = (image.width(), image.height());
    let mut out = vec![0.0; w * h];
    // partial edge blocks are completed by edge replication
    for br in (0..h).step_by(8) {
        for bc in (0..w).step_by(8) {
            let mut block = [0.0; 64];
            for r in 0..8 {
                for c in 0..8 {
                    let v = image.get((br + r).min(h - 1), (bc + c).min(w - 1));
                    block[r * 8 + c] = f64::from(v) - 128.0;
                }
            }
            let mut coeffs = basis.forward_block(&block);
            for (x, q) in coeffs.iter_mut().zip(&table) {
                *x = (*x / q).round() * q;
            }
            let back = basis.inverse_block(&coeffs);
            for r in 0..8 {
                for c in 0..8 {
                    if br + r < h && bc + c < w {
                        out[(br + r) * w + bc + c] = back[r * 8 + c] + 128.0;
                    }
                }
            }
        }
    }
    RasterImage::from_f64(w, h, &out)
}

fn histogram_equalize(image: &RasterImage) -> RasterImage {
    let mut hist = [0u64; 256];
    for &v in image.samples() {
        hist[v as usize] += 1;
    }
    let n = image.samples().len() as u64;
    let mut cdf = [0u64; 256];
    let mut acc = 0;
    for (c, &h) in cdf.iter_mut().zip(&hist) {
        acc += h;
        *c = acc;
    }
    let cdf_min = cdf.iter().copied().find(|&c| c > 0).unwrap_or(0);
    if n == cdf_min {
        return image.clone();
    }
    let lut: Vec<u8> = cdf
        .iter()
        .map(|&c| quantize_sample((c.saturating_sub(cdf_min)) as f64 * 255.0 / (n - cdf_min) as f64))
        .collect();
    let samples = image.samples().iter().map(|&v| lut[v as usize]).collect();
    RasterImage::new(image.width(), image.height(), samples).expect("same dims")
}

fn bilinear(src: &[f64], sw: usize, sh: usize, dw: usize, dh: usize) -> Vec<f64> {
    let (sx, sy) = (sw as f64 / dw as f64, sh as f64 / dh as f64);
    let mut out = Vec::with_capacity(dw * dh);
    for r in 0..dh {
        let y = ((r as f64 + 0.5) * sy - 0.5).clamp(0.0, (sh - 1) as f64);
        let (y0, fy) = (y.floor() as usize, y - y.floor());
        let y1 = (y0 + 1).min(sh - 1);
        for c in 0..dw {
            let x = ((c as f64 + 0.5) * sx - 0.5).clamp(0.0, (sw - 1) as f64);
            let (x0, fx) = (x.floor() as usize, x - x.floor());
            let x1 = (x0 + 1).min(sw - 1);
            let top = src[y0 * sw + x0] * (1.0 - fx) + src[y0 * sw + x1] * fx;
            let bottom = src[y1 * sw + x0] * (1.0 - fx) + src[y1 * sw + x1] * fx;
            out.push(top * (1.0 - fy) + bottom * fy);
        }
    }
    out
}

fn rescale(image: &RasterImage, factor: f64) -> Result<RasterImage> {
    let (w, h) = (image.width(), image.height());
    let dw = ((w as f64 * factor).round() as usize).max(1);
    let dh = ((h as f64 * factor).round() as usize).max(1);
    // the intermediate image is 8-bit, as a real resize would store it
    let small: Vec<f64> = bilinear(&image.to_f64(), w, h, dw, dh)
        .into_iter()
        .map(|v| f64::from(quantize_sample(v)))
        .collect();
    RasterImage::from_f64(w, h, &bilinear(&small, dw, dh, w, h))
}
