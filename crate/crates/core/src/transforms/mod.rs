//! Real-valued coefficient planes and the orthonormal transforms used for
//! embedding: single-level 2D Daubechies 4-tap DWT, 8×8 block DCT and
//! Walsh–Hadamard, and the unitary 2D DFT.
//!
//! All transforms are normalized to be orthonormal (unitary for the DFT),
//! so inverse∘forward is the identity and energy is preserved.

mod block;
mod dft;
mod dwt;

pub use block::{
    dct2_block, idct2_block, iwht2_block, wht2_block, zigzag_order, BlockBasis, BLOCK,
};
pub use dft::{dft2, idft2, ComplexPlane};
pub use dwt::{dwt2_forward, dwt2_inverse, Band, SubbandSet, D4_HIGHPASS, D4_LOWPASS};

use crate::error::{Error, Result};
use crate::imagecore::RasterImage;

/// Row-major plane of real numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffPlane {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl CoeffPlane {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::Dimension(format!(
                "{width}x{height} plane needs {} values, got {}",
                width * height,
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; width * height],
        }
    }

    pub fn from_image(image: &RasterImage) -> Self {
        Self {
            width: image.width(),
            height: image.height(),
            values: image.to_f64(),
        }
    }

    /// Clamps and rounds to 8 bits.
    pub fn to_image(&self) -> Result<RasterImage> {
        RasterImage::from_f64(self.width, self.height, &self.values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.values[row * self.width + col] = v;
    }

    pub fn same_dims(&self, other: &CoeffPlane) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn max_abs_diff(&self, other: &CoeffPlane) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// The transform families available to the embedding pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformKind {
    Dwt,
    Dct,
    Wht,
    Dft,
}

impl TransformKind {
    pub const ALL: [TransformKind; 4] = [
        TransformKind::Dwt,
        TransformKind::Dct,
        TransformKind::Wht,
        TransformKind::Dft,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Dwt => "dwt",
            TransformKind::Dct => "dct",
            TransformKind::Wht => "wht",
            TransformKind::Dft => "dft",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dwt" => Some(TransformKind::Dwt),
            "dct" => Some(TransformKind::Dct),
            "wht" => Some(TransformKind::Wht),
            "dft" => Some(TransformKind::Dft),
            _ => None,
        }
    }
}
