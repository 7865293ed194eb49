//! Payload canvases: text, image and audio payloads are all carried as
//! 8-bit grayscale canvases, then scrambled into noise images.

mod scramble;

pub use scramble::{derive_slot_seed, im2noise, noise2im, SplitMix64, StegoKey};

use crate::error::{Error, Result};
use crate::imagecore::{PcmAudio, RasterImage};

pub const MAX_TEXT_CHARS: usize = 256;
pub const TEXT_CANVAS_WIDTH: usize = 64;
pub const TEXT_CANVAS_HEIGHT: usize = 32;
pub const AUDIO_BIAS: i16 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PayloadKind {
    Text,
    Image,
    Audio,
}

impl PayloadKind {
    pub const ALL: [PayloadKind; 3] = [PayloadKind::Text, PayloadKind::Image, PayloadKind::Audio];

    pub fn name(self) -> &'static str {
        match self {
            PayloadKind::Text => "text",
            PayloadKind::Image => "image",
            PayloadKind::Audio => "audio",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "text" => Some(PayloadKind::Text),
            "image" => Some(PayloadKind::Image),
            "audio" => Some(PayloadKind::Audio),
            _ => None,
        }
    }
}

/// What a decoder needs besides the canvas itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PayloadMeta {
    Text { chars: usize },
    Image { width: usize, height: usize },
    Audio { samples: usize, sample_rate: u32, bias: i16 },
}

impl PayloadMeta {
    pub fn kind(&self) -> PayloadKind {
        match self {
            PayloadMeta::Text { .. } => PayloadKind::Text,
            PayloadMeta::Image { .. } => PayloadKind::Image,
            PayloadMeta::Audio { .. } => PayloadKind::Audio,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayloadDescriptor {
    pub canvas: RasterImage,
    pub meta: PayloadMeta,
}

impl PayloadDescriptor {
    pub fn kind(&self) -> PayloadKind {
        self.meta.kind()
    }

    fn expect(&self, kind: PayloadKind) -> Result<()> {
        if self.kind() != kind {
            return Err(Error::KindMismatch {
                expected: kind.name(),
                got: self.kind().name(),
            });
        }
        Ok(())
    }
}

/// Lays the bits of `text` (MSB first, one byte per character) row-major on
/// a 64×32 canvas: bit 1 → 255, bit 0 → 0, zero padded to 2048 bits.
pub fn text_to_canvas(text: &[u8]) -> Result<PayloadDescriptor> {
    if text.len() > MAX_TEXT_CHARS {
        return Err(Error::InvalidParameter(format!(
            "text holds {} characters, limit is {MAX_TEXT_CHARS}",
            text.len()
        )));
    }
    let mut samples = vec![0u8; TEXT_CANVAS_WIDTH * TEXT_CANVAS_HEIGHT];
    for (i, &byte) in text.iter().enumerate() {
        for bit in 0..8 {
            if byte & (0x80 >> bit) != 0 {
                samples[i * 8 + bit] = 255;
            }
        }
    }
    Ok(PayloadDescriptor {
        canvas: RasterImage::new(TEXT_CANVAS_WIDTH, TEXT_CANVAS_HEIGHT, samples)?,
        meta: PayloadMeta::Text { chars: text.len() },
    })
}

/// Thresholds at 128 (≥128 is a 1 bit) and repacks MSB first.
pub fn canvas_to_text(desc: &PayloadDescriptor) -> Result<Vec<u8>> {
    desc.expect(PayloadKind::Text)?;
    let PayloadMeta::Text { chars } = desc.meta else {
        unreachable!()
    };
    let bits = desc.canvas.samples();
    if chars * 8 > bits.len() {
        return Err(Error::Dimension(format!(
            "text canvas of {} pixels cannot hold {chars} characters",
            bits.len()
        )));
    }
    Ok(bits[..chars * 8]
        .chunks_exact(8)
        .map(|byte| byte.iter().fold(0u8, |acc, &p| (acc << 1) | u8::from(p >= 128)))
        .collect())
}

/// Binarizes a text canvas the way [`canvas_to_text`] reads it.
pub fn threshold_text_canvas(canvas: &RasterImage) -> RasterImage {
    let samples = canvas.samples().iter().map(|&p| if p >= 128 { 255 } else { 0 }).collect();
    RasterImage::new(canvas.width(), canvas.height(), samples).expect("same dims")
}

fn audio_side(n: usize) -> usize {
    let mut side = (n as f64).sqrt() as usize;
    while side * side < n {
        side += 1;
    }
    while side > 0 && (side - 1) * (side - 1) >= n {
        side -= 1;
    }
    side.max(1)
}

/// Shifts samples by the 128 bias and lays them row-major on the smallest
/// square canvas that holds them, zero padded.
pub fn audio_to_canvas(audio: &PcmAudio) -> PayloadDescriptor {
    let n = audio.samples().len();
    let side = audio_side(n);
    let mut samples = vec![0u8; side * side];
    for (dst, &s) in samples.iter_mut().zip(audio.samples()) {
        *dst = (i16::from(s) + AUDIO_BIAS) as u8;
    }
    PayloadDescriptor {
        canvas: RasterImage::new(side, side, samples).expect("square canvas"),
        meta: PayloadMeta::Audio {
            samples: n,
            sample_rate: audio.sample_rate(),
            bias: AUDIO_BIAS,
        },
    }
}

pub fn canvas_to_audio(desc: &PayloadDescriptor) -> Result<PcmAudio> {
    desc.expect(PayloadKind::Audio)?;
    let PayloadMeta::Audio {
        samples: n,
        sample_rate,
        bias,
    } = desc.meta
    else {
        unreachable!()
    };
    let pixels = desc.canvas.samples();
    if n > pixels.len() {
        return Err(Error::Dimension(format!(
            "audio canvas of {} pixels cannot hold {n} samples",
            pixels.len()
        )));
    }
    let samples = pixels[..n]
        .iter()
        .map(|&p| (i16::from(p) - bias).clamp(-128, 127) as i8)
        .collect();
    Ok(PcmAudio::new(sample_rate, samples))
}

/// Image payloads are carried verbatim; each dimension may be at most a
/// quarter of the corresponding cover dimension.
pub fn image_to_canvas(image: &RasterImage, cover_width: usize, cover_height: usize) -> Result<PayloadDescriptor> {
    let (max_w, max_h) = (cover_width / 4, cover_height / 4);
    if image.width() > max_w || image.height() > max_h {
        return Err(Error::Dimension(format!(
            "image payload {}x{} exceeds {max_w}x{max_h} (a quarter of the {cover_width}x{cover_height} cover)",
            image.width(),
            image.height()
        )));
    }
    Ok(PayloadDescriptor {
        canvas: image.clone(),
        meta: PayloadMeta::Image {
            width: image.width(),
            height: image.height(),
        },
    })
}

pub fn canvas_to_image(desc: &PayloadDescriptor) -> Result<RasterImage> {
    desc.expect(PayloadKind::Image)?;
    Ok(desc.canvas.clone())
}

/// Rounds `n` up to a multiple of `block`.
pub fn padded_len(n: usize, block: usize) -> usize {
    n.div_ceil(block) * block
}

/// Zero pads the right and bottom edges up to multiples of `block`.
pub fn pad_canvas(canvas: &RasterImage, block: usize) -> RasterImage {
    let (w, h) = (canvas.width(), canvas.height());
    let (pw, ph) = (padded_len(w, block), padded_len(h, block));
    if (pw, ph) == (w, h) {
        return canvas.clone();
    }
    RasterImage::from_fn(pw, ph, |r, c| if r < h && c < w { canvas.get(r, c) } else { 0 }).expect("non-empty")
}

/// Keeps the top-left `width`×`height` region.
pub fn crop_canvas(canvas: &RasterImage, width: usize, height: usize) -> Result<RasterImage> {
    if width > canvas.width() || height > canvas.height() {
        return Err(Error::Dimension(format!(
            "cannot crop {}x{} to {width}x{height}",
            canvas.width(),
            canvas.height()
        )));
    }
    RasterImage::from_fn(width, height, |r, c| canvas.get(r, c))
}
