//! 8-bit raster images, replicated-gray RGB images and 8-bit mono PCM audio,
//! with bit-exact Netpbm (P5/P6) and RIFF WAVE I/O.

mod netpbm;
mod wav;

pub use netpbm::{decode_netpbm, encode_pgm, encode_ppm, load_gray, load_rgb, load_rgb_any, save_gray, save_rgb, Netpbm};
pub use wav::{decode_wav, encode_wav, load_wav, save_wav};

use crate::error::{Error, Result};

/// Row-major grid of 8-bit unsigned samples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RasterImage {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if samples.len() != width * height {
            return Err(Error::Dimension(format!(
                "{width}x{height} image needs {} samples, got {}",
                width * height,
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                samples.push(f(r, c));
            }
        }
        Self::new(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.samples[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.samples[row * self.width + col] = value;
    }

    pub fn same_dims(&self, other: &RasterImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Samples as `f64`, row-major.
    pub fn to_f64(&self) -> Vec<f64> {
        self.samples.iter().map(|&v| f64::from(v)).collect()
    }

    /// Quantizes real values to 8 bits: clamp to [0, 255], then round half
    /// away from zero.
    pub fn from_f64(width: usize, height: usize, values: &[f64]) -> Result<Self> {
        let samples = values.iter().map(|&v| quantize_sample(v)).collect();
        Self::new(width, height, samples)
    }
}

#[inline]
pub fn quantize_sample(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    v.clamp(0.0, 255.0).round() as u8
}

/// Colour layer index of an [`RgbImage`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    R,
    G,
    B,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::R, Layer::G, Layer::B];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Layer::R => "R",
            Layer::G => "G",
            Layer::B => "B",
        }
    }

    pub fn parse(s: &str) -> Option<Layer> {
        match s {
            "R" => Some(Layer::R),
            "G" => Some(Layer::G),
            "B" => Some(Layer::B),
            _ => None,
        }
    }
}

/// Three equally sized colour planes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    layers: [RasterImage; 3],
}

impl RgbImage {
    pub fn from_layers(layers: [RasterImage; 3]) -> Result<Self> {
        let [r, g, b] = &layers;
        if !r.same_dims(g) || !r.same_dims(b) {
            return Err(Error::Dimension("colour layers differ in size".into()));
        }
        Ok(Self { layers })
    }

    pub fn width(&self) -> usize {
        self.layers[0].width
    }

    pub fn height(&self) -> usize {
        self.layers[0].height
    }

    pub fn layer(&self, layer: Layer) -> &RasterImage {
        &self.layers[layer.index()]
    }

    pub fn layers(&self) -> &[RasterImage; 3] {
        &self.layers
    }

    pub fn into_layers(self) -> [RasterImage; 3] {
        self.layers
    }

    pub fn map_layers(&self, mut f: impl FnMut(&RasterImage) -> Result<RasterImage>) -> Result<Self> {
        let [r, g, b] = &self.layers;
        Self::from_layers([f(r)?, f(g)?, f(b)?])
    }
}

/// Replicates a grayscale cover into three identical colour layers.
pub fn gray_to_rgb(cover: &RasterImage) -> RgbImage {
    RgbImage {
        layers: [cover.clone(), cover.clone(), cover.clone()],
    }
}

/// Mono 8-bit PCM audio held as signed samples in [-128, 127].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcmAudio {
    sample_rate: u32,
    samples: Vec<i8>,
}

impl PcmAudio {
    pub fn new(sample_rate: u32, samples: Vec<i8>) -> Self {
        Self {
            sample_rate,
            samples,
        }
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn channels(&self) -> u16 {
        1
    }

    pub fn samples(&self) -> &[i8] {
        &self.samples
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dims() {
        assert!(RasterImage::new(0, 3, vec![]).is_err());
        assert!(RasterImage::new(2, 2, vec![1, 2, 3]).is_err());
    }

    #[test]
    fn gray_to_rgb_single_pixel() {
        let img = RasterImage::new(1, 1, vec![7]).unwrap();
        let rgb = gray_to_rgb(&img);
        for layer in Layer::ALL {
            assert_eq!(rgb.layer(layer).samples(), &[7]);
        }
    }

    #[test]
    fn gray_to_rgb_layers_identical() {
        let img = RasterImage::from_fn(256, 256, |r, c| ((r * 31 + c * 17) % 256) as u8).unwrap();
        let rgb = gray_to_rgb(&img);
        for i in 0..img.samples().len() {
            let (r, g, b) = (
                rgb.layer(Layer::R).samples()[i],
                rgb.layer(Layer::G).samples()[i],
                rgb.layer(Layer::B).samples()[i],
            );
            assert!(r == g && g == b);
        }
        assert_eq!(rgb.layer(Layer::G), &img);
    }

    #[test]
    fn quantize_rounds_half_away_and_clamps() {
        assert_eq!(quantize_sample(2.5), 3);
        assert_eq!(quantize_sample(2.49), 2);
        assert_eq!(quantize_sample(-3.0), 0);
        assert_eq!(quantize_sample(300.0), 255);
    }
}
