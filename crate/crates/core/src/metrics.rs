//! Imperceptibility (PSNR, SSIM), security (KL divergence between pixel
//! histograms) and recovery quality (BER, mutual information).
//!
//! PSNR uses the textbook definition `10·log10(255²·X·Y / Σ(a−b)²)`.
//! Logarithms for KL and MI are base 2, so both are in bits.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::imagecore::{Layer, RasterImage, RgbImage};
use crate::payload::{threshold_text_canvas, PayloadDescriptor, PayloadKind};
use crate::stego::{Extraction, Payloads};
use crate::transforms::Band;

pub const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
pub const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);
pub const SSIM_WINDOW: usize = 8;
/// Additive smoothing applied to PMFs before the KL divergence.
pub const KL_SMOOTHING: f64 = 1e-9;
/// Pixel tolerance of the tolerant BER variant.
pub const BER_TOLERANCE: u8 = 8;

fn check_dims(a: &RasterImage, b: &RasterImage) -> Result<()> {
    if !a.same_dims(b) {
        return Err(Error::Dimension(format!(
            "images differ in size: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

pub fn squared_error(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    check_dims(a, b)?;
    Ok(a.samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum())
}

/// Peak signal-to-noise ratio in dB; `f64::INFINITY` for identical images.
pub fn psnr(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    let sse = squared_error(a, b)?;
    if sse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let n = a.samples().len() as f64;
    Ok(10.0 * (255.0 * 255.0 * n / sse).log10())
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum SsimWindow {
    /// 8×8 uniform window, stride 1.
    #[default]
    Uniform8,
    /// 11×11 Gaussian window with σ = 1.5, stride 1.
    Gaussian11,
}

/// Mean SSIM over 8×8 uniform windows (exponents 1, C3 = C2/2).
pub fn ssim(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    ssim_with(a, b, SsimWindow::Uniform8)
}

pub fn ssim_with(a: &RasterImage, b: &RasterImage, window: SsimWindow) -> Result<f64> {
    check_dims(a, b)?;
    let size = match window {
        SsimWindow::Uniform8 => SSIM_WINDOW,
        SsimWindow::Gaussian11 => 11,
    };
    if a.width() < size || a.height() < size {
        return Err(Error::Dimension(format!(
            "SSIM needs at least {size}x{size} pixels, got {}x{}",
            a.width(),
            a.height()
        )));
    }
    Ok(match window {
        SsimWindow::Uniform8 => ssim_uniform(a, b),
        SsimWindow::Gaussian11 => ssim_gaussian(a, b),
    })
}

#[inline]
fn ssim_term(mx: f64, my: f64, vx: f64, vy: f64, cov: f64) -> f64 {
    ((2.0 * mx * my + SSIM_C1) * (2.0 * cov + SSIM_C2)) / ((mx * mx + my * my + SSIM_C1) * (vx + vy + SSIM_C2))
}

/// Summed-area tables of x, y, x², y², xy.
fn ssim_uniform(a: &RasterImage, b: &RasterImage) -> f64 {
    let (w, h) = (a.width(), a.height());
    let stride = w + 1;
    let mut tables = vec![[0.0f64; 5]; stride * (h + 1)];
    for r in 0..h {
        let mut row = [0.0f64; 5];
        for c in 0..w {
            let x = f64::from(a.get(r, c));
            let y = f64::from(b.get(r, c));
            for (acc, v) in row.iter_mut().zip([x, y, x * x, y * y, x * y]) {
                *acc += v;
            }
            let above = tables[r * stride + c + 1];
            let cell = &mut tables[(r + 1) * stride + c + 1];
            for k in 0..5 {
                cell[k] = above[k] + row[k];
            }
        }
    }
    let n = (SSIM_WINDOW * SSIM_WINDOW) as f64;
    let mut total = 0.0;
    let mut count = 0usize;
    for r in 0..=h - SSIM_WINDOW {
        for c in 0..=w - SSIM_WINDOW {
            let (r1, c1) = (r + SSIM_WINDOW, c + SSIM_WINDOW);
            let mut s = [0.0; 5];
            for (k, sk) in s.iter_mut().enumerate() {
                *sk = tables[r1 * stride + c1][k] - tables[r * stride + c1][k] - tables[r1 * stride + c][k]
                    + tables[r * stride + c][k];
            }
            let (mx, my) = (s[0] / n, s[1] / n);
            let vx = s[2] / n - mx * mx;
            let vy = s[3] / n - my * my;
            let cov = s[4] / n - mx * my;
            total += ssim_term(mx, my, vx, vy, cov);
            count += 1;
        }
    }
    total / count as f64
}

fn ssim_gaussian(a: &RasterImage, b: &RasterImage) -> f64 {
    const SIZE: usize = 11;
    const SIGMA: f64 = 1.5;
    let half = (SIZE / 2) as f64;
    let mut weights = [0.0; SIZE * SIZE];
    for r in 0..SIZE {
        for c in 0..SIZE {
            let (dr, dc) = (r as f64 - half, c as f64 - half);
            weights[r * SIZE + c] = (-(dr * dr + dc * dc) / (2.0 * SIGMA * SIGMA)).exp();
        }
    }
    let sum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= sum);

    let (w, h) = (a.width(), a.height());
    let mut total = 0.0;
    let mut count = 0usize;
    for r in 0..=h - SIZE {
        for c in 0..=w - SIZE {
            let mut m = [0.0; 5];
            for i in 0..SIZE {
                for j in 0..SIZE {
                    let wt = weights[i * SIZE + j];
                    let x = f64::from(a.get(r + i, c + j));
                    let y = f64::from(b.get(r + i, c + j));
                    m[0] += wt * x;
                    m[1] += wt * y;
                    m[2] += wt * x * x;
                    m[3] += wt * y * y;
                    m[4] += wt * x * y;
                }
            }
            let (mx, my) = (m[0], m[1]);
            total += ssim_term(mx, my, m[2] - mx * mx, m[3] - my * my, m[4] - mx * my);
            count += 1;
        }
    }
    total / count as f64
}

/// 256-bin pixel histogram.
pub fn histogram(image: &RasterImage) -> [u64; 256] {
    let mut h = [0u64; 256];
    for &v in image.samples() {
        h[v as usize] += 1;
    }
    h
}

fn smoothed_pmf(image: &RasterImage) -> [f64; 256] {
    let h = histogram(image);
    let n = image.samples().len() as f64;
    let norm = 1.0 + 256.0 * KL_SMOOTHING;
    let mut p = [0.0; 256];
    for (pi, &hi) in p.iter_mut().zip(&h) {
        *pi = (hi as f64 / n + KL_SMOOTHING) / norm;
    }
    p
}

/// ε-security: KL divergence D(P_cover ‖ P_stego) of the pixel PMFs, in bits.
pub fn epsilon_security(cover: &RasterImage, stego: &RasterImage) -> f64 {
    let p = smoothed_pmf(cover);
    let q = smoothed_pmf(stego);
    let d: f64 = p.iter().zip(&q).map(|(&pi, &qi)| pi * (pi / qi).log2()).sum();
    d.max(0.0)
}

/// Shannon entropy of the pixel histogram, in bits.
pub fn entropy(image: &RasterImage) -> f64 {
    let n = image.samples().len() as f64;
    -histogram(image)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum::<f64>()
}

fn mutual_information_levels(a: &[usize], b: &[usize], levels: usize) -> f64 {
    let n = a.len() as f64;
    let mut joint = vec![0u64; levels * levels];
    let mut pa = vec![0u64; levels];
    let mut pb = vec![0u64; levels];
    for (&x, &y) in a.iter().zip(b) {
        joint[x * levels + y] += 1;
        pa[x] += 1;
        pb[y] += 1;
    }
    let mut mi = 0.0;
    for x in 0..levels {
        for y in 0..levels {
            let c = joint[x * levels + y];
            if c == 0 {
                continue;
            }
            let pxy = c as f64 / n;
            let px = pa[x] as f64 / n;
            let py = pb[y] as f64 / n;
            mi += pxy * (pxy / (px * py)).log2();
        }
    }
    mi.max(0.0)
}

/// Plug-in mutual information over the 256×256 joint histogram, in bits.
/// Empty cells contribute nothing (their limit is zero), so no smoothing is
/// needed.
pub fn mutual_information(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    check_dims(a, b)?;
    let xs: Vec<usize> = a.samples().iter().map(|&v| v as usize).collect();
    let ys: Vec<usize> = b.samples().iter().map(|&v| v as usize).collect();
    Ok(mutual_information_levels(&xs, &ys, 256))
}

/// Mutual information of canvases binarized at 128 (2×2 joint histogram).
pub fn mutual_information_binary(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    check_dims(a, b)?;
    let bit = |v: &u8| usize::from(*v >= 128);
    let xs: Vec<usize> = a.samples().iter().map(bit).collect();
    let ys: Vec<usize> = b.samples().iter().map(bit).collect();
    Ok(mutual_information_levels(&xs, &ys, 2))
}

/// Error rate between an original and a recovered canvas. Text canvases are
/// compared bit by bit after thresholding at 128; image and audio canvases
/// count pixels that differ by more than `tolerance`.
pub fn ber_with_tolerance(original: &RasterImage, recovered: &RasterImage, kind: PayloadKind, tolerance: u8) -> Result<f64> {
    check_dims(original, recovered)?;
    let n = original.samples().len() as f64;
    let errors = original
        .samples()
        .iter()
        .zip(recovered.samples())
        .filter(|(&x, &y)| match kind {
            PayloadKind::Text => (x >= 128) != (y >= 128),
            _ => x.abs_diff(y) > tolerance,
        })
        .count();
    Ok(errors as f64 / n)
}

/// Exact variant (tolerance 0) of [`ber_with_tolerance`].
pub fn ber(original: &RasterImage, recovered: &RasterImage, kind: PayloadKind) -> Result<f64> {
    ber_with_tolerance(original, recovered, kind, 0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerQuality {
    pub layer: Layer,
    pub psnr: f64,
    pub ssim: f64,
    pub epsilon: f64,
}

/// Recovery quality of one logo copy; `band == None` is the fused logo.
#[derive(Clone, Debug, PartialEq)]
pub struct LogoQuality {
    pub kind: PayloadKind,
    pub band: Option<Band>,
    /// `None` when the canvas is smaller than the SSIM window.
    pub ssim: Option<f64>,
    pub ber: f64,
    pub ber_tolerant: f64,
    pub mi: f64,
}

/// Compares a recovered canvas against the original one. Text canvases
/// are binarized first, as the text decoder does.
pub fn logo_quality(original: &PayloadDescriptor, recovered: &PayloadDescriptor, band: Option<Band>) -> Result<LogoQuality> {
    let kind = original.kind();
    let (a, b) = if kind == PayloadKind::Text {
        (threshold_text_canvas(&original.canvas), threshold_text_canvas(&recovered.canvas))
    } else {
        (original.canvas.clone(), recovered.canvas.clone())
    };
    let ssim = match ssim(&a, &b) {
        Ok(v) => Some(v),
        Err(Error::Dimension(_)) if a.same_dims(&b) => None,
        Err(e) => return Err(e),
    };
    let mi = if kind == PayloadKind::Text {
        mutual_information_binary(&a, &b)?
    } else {
        mutual_information(&a, &b)?
    };
    Ok(LogoQuality {
        kind,
        band,
        ssim,
        ber: ber(&a, &b, kind)?,
        ber_tolerant: ber_with_tolerance(&a, &b, kind, BER_TOLERANCE)?,
        mi,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct QualityReport {
    pub layers: Vec<LayerQuality>,
    pub logos: Vec<LogoQuality>,
}

pub fn layer_quality(cover: &RasterImage, stego: &RgbImage) -> Result<Vec<LayerQuality>> {
    Layer::ALL
        .iter()
        .map(|&layer| {
            let s = stego.layer(layer);
            Ok(LayerQuality {
                layer,
                psnr: psnr(cover, s)?,
                ssim: ssim(cover, s)?,
                epsilon: epsilon_security(cover, s),
            })
        })
        .collect()
}

/// Per-logo quality of the LL copy, HH copy and fused logo.
pub fn recovery_quality(payloads: &Payloads, extraction: &Extraction) -> Result<Vec<LogoQuality>> {
    let mut out = Vec::new();
    for kind in PayloadKind::ALL {
        let original = payloads.get(kind);
        let logo = extraction.logo(kind);
        out.push(logo_quality(original, &logo.copy_ll.canvas, Some(Band::LL))?);
        out.push(logo_quality(original, &logo.copy_hh.canvas, Some(Band::HH))?);
        out.push(logo_quality(original, &logo.fused, None)?);
    }
    Ok(out)
}

pub fn format_value(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.6}")
    }
}

fn band_label(band: Option<Band>) -> &'static str {
    band.map_or("fused", Band::name)
}

impl QualityReport {
    pub const CSV_HEADER: &'static str = "scope,name,band,metric,value";

    /// Long-format CSV, one metric per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for l in &self.layers {
            for (metric, v) in [("psnr", l.psnr), ("ssim", l.ssim), ("epsilon", l.epsilon)] {
                let _ = writeln!(out, "layer,{},-,{metric},{}", l.layer.name(), format_value(v));
            }
        }
        for q in &self.logos {
            let rows = [
                ("ssim", q.ssim.unwrap_or(f64::NAN)),
                ("ber", q.ber),
                ("ber_tolerant", q.ber_tolerant),
                ("mi", q.mi),
            ];
            for (metric, v) in rows {
                let _ = writeln!(out, "logo,{},{},{metric},{}", q.kind.name(), band_label(q.band), format_value(v));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.layers.is_empty() {
            let _ = writeln!(out, "layer  PSNR (dB)   SSIM      epsilon");
            for l in &self.layers {
                let _ = writeln!(
                    out,
                    "{:<6} {:>9}   {:.4}    {:.4}",
                    l.layer.name(),
                    if l.psnr.is_infinite() { "inf".to_string() } else { format!("{:.4}", l.psnr) },
                    l.ssim,
                    l.epsilon
                );
            }
        }
        if !self.logos.is_empty() {
            let _ = writeln!(out, "logo   band   SSIM     BER      BER(t={BER_TOLERANCE})  MI (bits)");
            for q in &self.logos {
                let _ = writeln!(
                    out,
                    "{:<6} {:<6} {:<8} {:.4}   {:.4}     {:.4}",
                    q.kind.name(),
                    band_label(q.band),
                    q.ssim.map_or("n/a".to_string(), |s| format!("{s:.4}")),
                    q.ber,
                    q.ber_tolerant,
                    q.mi
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(w: usize, h: usize, f: impl FnMut(usize, usize) -> u8) -> RasterImage {
        RasterImage::from_fn(w, h, f).unwrap()
    }

    #[test]
    fn psnr_cases() {
        let a = img(16, 16, |r, c| (r * 9 + c * 5) as u8);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        let b = img(16, 16, |r, c| (r * 9 + c * 5) as u8 + 1);
        assert!((psnr(&a, &b).unwrap() - 48.130_803_608_679_1).abs() < 1e-9);
        assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
        assert!(psnr(&a, &img(8, 8, |_, _| 0)).is_err());
    }

    #[test]
    fn ssim_identity_and_inversion() {
        let a = img(20, 12, |r, c| ((r * 37 + c * 11) % 256) as u8);
        assert_eq!(ssim(&a, &a).unwrap(), 1.0);
        let inv = img(20, 12, |r, c| 255 - a.get(r, c));
        assert!(ssim(&a, &inv).unwrap() < 1.0);
        assert!(ssim(&img(7, 9, |_, _| 0), &img(7, 9, |_, _| 0)).is_err());
        assert_eq!(ssim_with(&a, &a, SsimWindow::Gaussian11).unwrap(), 1.0);
    }

    #[test]
    fn epsilon_cases() {
        let a = img(16, 16, |r, c| (r * 16 + c) as u8);
        assert!(epsilon_security(&a, &a).abs() < 1e-12);
        let b = img(16, 16, |r, _| r as u8);
        assert!(epsilon_security(&a, &b) > 0.0);
    }

    #[test]
    fn ber_counts() {
        let a = img(64, 64, |_, _| 10);
        let mut b = a.clone();
        for i in 0..41 {
            b.set(i, i, 11);
        }
        assert_eq!(ber(&a, &b, PayloadKind::Image).unwrap(), 41.0 / 4096.0);
        assert_eq!(ber_with_tolerance(&a, &b, PayloadKind::Image, 1).unwrap(), 0.0);
        assert_eq!(ber(&a, &a, PayloadKind::Audio).unwrap(), 0.0);
        let t = img(8, 8, |_, c| if c % 2 == 0 { 255 } else { 0 });
        let u = img(8, 8, |_, c| if c % 2 == 0 { 140 } else { 100 });
        assert_eq!(ber(&t, &u, PayloadKind::Text).unwrap(), 0.0);
    }

    #[test]
    fn mi_of_identical_is_entropy() {
        let a = img(32, 32, |r, c| ((r * c) % 7) as u8 * 30);
        let mi = mutual_information(&a, &a).unwrap();
        assert!((mi - entropy(&a)).abs() < 1e-9);
        let constant = img(8, 8, |_, _| 3);
        assert!(mutual_information(&a.clone(), &a).unwrap() >= 0.0);
        assert_eq!(mutual_information(&constant, &constant).unwrap(), 0.0);
    }

    #[test]
    fn report_csv_shape() {
        let a = img(16, 16, |r, c| (r + c) as u8);
        let rgb = crate::imagecore::gray_to_rgb(&a);
        let report = QualityReport {
            layers: layer_quality(&a, &rgb).unwrap(),
            logos: vec![],
        };
        let csv = report.to_csv();
        assert!(csv.starts_with("scope,name,band,metric,value\nlayer,R,-,psnr,inf\nlayer,R,-,ssim,1.000000\nlayer,R,-,epsilon,0.000000\n"));
        assert_eq!(csv.lines().count(), 10);
    }
}
