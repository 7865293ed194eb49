use num_complex::Complex64;
use rustfft::FftPlanner;

use super::CoeffPlane;
use crate::error::{Error, Result};

/// Row-major plane of complex numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPlane {
    pub width: usize,
    pub height: usize,
    pub values: Vec<Complex64>,
}

impl ComplexPlane {
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn transform(width: usize, height: usize, data: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let (row_fft, col_fft) = if inverse {
        (planner.plan_fft_inverse(width), planner.plan_fft_inverse(height))
    } else {
        (planner.plan_fft_forward(width), planner.plan_fft_forward(height))
    };
    for row in data.chunks_exact_mut(width) {
        row_fft.process(row);
    }
    let mut col = vec![Complex64::default(); height];
    for c in 0..width {
        for r in 0..height {
            col[r] = data[r * width + c];
        }
        col_fft.process(&mut col);
        for r in 0..height {
            data[r * width + c] = col[r];
        }
    }
    let scale = 1.0 / ((width * height) as f64).sqrt();
    for z in data.iter_mut() {
        *z *= scale;
    }
}

/// Unitary 2D DFT (scaled by 1/√(W·H)); any dimensions.
pub fn dft2(plane: &CoeffPlane) -> Result<ComplexPlane> {
    let (w, h) = (plane.width(), plane.height());
    if w == 0 || h == 0 {
        return Err(Error::Dimension("DFT of an empty plane".into()));
    }
    let mut values: Vec<Complex64> = plane.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(w, h, &mut values, false);
    Ok(ComplexPlane {
        width: w,
        height: h,
        values,
    })
}

/// Inverse of [`dft2`]; the imaginary residue is discarded.
pub fn idft2(spectrum: &ComplexPlane) -> Result<CoeffPlane> {
    let (w, h) = (spectrum.width, spectrum.height);
    if w == 0 || h == 0 || spectrum.values.len() != w * h {
        return Err(Error::Dimension(format!(
            "complex plane {w}x{h} holds {} values",
            spectrum.values.len()
        )));
    }
    let mut values = spectrum.values.clone();
    transform(w, h, &mut values, true);
    CoeffPlane::new(w, h, values.into_iter().map(|z| z.re).collect())
}
