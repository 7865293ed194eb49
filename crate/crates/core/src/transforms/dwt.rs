//! Single-level separable 2D DWT with the orthonormal Daubechies 4-tap
//! filter pair ("D4", also called db2) and periodic boundary extension.
//!
//! Rows are filtered first, then columns. `LH` is lowpass along rows and
//! highpass along columns; `HL` is the reverse.

use super::CoeffPlane;
use crate::error::{Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;
const NORM: f64 = 4.0 * std::f64::consts::SQRT_2;

/// Analysis lowpass taps, summing to √2.
pub const D4_LOWPASS: [f64; 4] = [
    (1.0 + SQRT3) / NORM,
    (3.0 + SQRT3) / NORM,
    (3.0 - SQRT3) / NORM,
    (1.0 - SQRT3) / NORM,
];

/// Quadrature mirror of the lowpass: g[k] = (-1)^k h[3-k].
pub const D4_HIGHPASS: [f64; 4] = [D4_LOWPASS[3], -D4_LOWPASS[2], D4_LOWPASS[1], -D4_LOWPASS[0]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Band {
    LL,
    LH,
    HL,
    HH,
}

impl Band {
    pub fn name(self) -> &'static str {
        match self {
            Band::LL => "LL",
            Band::LH => "LH",
            Band::HL => "HL",
            Band::HH => "HH",
        }
    }

    pub fn parse(s: &str) -> Option<Band> {
        match s {
            "LL" => Some(Band::LL),
            "LH" => Some(Band::LH),
            "HL" => Some(Band::HL),
            "HH" => Some(Band::HH),
            _ => None,
        }
    }
}

/// The four first-level subbands, each (H/2)×(W/2).
#[derive(Clone, Debug, PartialEq)]
pub struct SubbandSet {
    pub ll: CoeffPlane,
    pub lh: CoeffPlane,
    pub hl: CoeffPlane,
    pub hh: CoeffPlane,
}

impl SubbandSet {
    pub fn band(&self, band: Band) -> &CoeffPlane {
        match band {
            Band::LL => &self.ll,
            Band::LH => &self.lh,
            Band::HL => &self.hl,
            Band::HH => &self.hh,
        }
    }

    pub fn band_mut(&mut self, band: Band) -> &mut CoeffPlane {
        match band {
            Band::LL => &mut self.ll,
            Band::LH => &mut self.lh,
            Band::HL => &mut self.hl,
            Band::HH => &mut self.hh,
        }
    }

    pub fn energy(&self) -> f64 {
        self.ll.energy() + self.lh.energy() + self.hl.energy() + self.hh.energy()
    }

    fn check(&self) -> Result<(usize, usize)> {
        let (w, h) = (self.ll.width(), self.ll.height());
        if w == 0 || h == 0 {
            return Err(Error::Dimension("empty subband".into()));
        }
        for p in [&self.lh, &self.hl, &self.hh] {
            if p.width() != w || p.height() != h {
                return Err(Error::Dimension(format!(
                    "subband planes differ in size: {}x{} vs {}x{}",
                    w,
                    h,
                    p.width(),
                    p.height()
                )));
            }
        }
        Ok((w, h))
    }
}

fn analyze_1d(x: &[f64], low: &mut [f64], high: &mut [f64]) {
    let n = x.len();
    for i in 0..n / 2 {
        let (mut a, mut d) = (0.0, 0.0);
        for k in 0..4 {
            let v = x[(2 * i + k) % n];
            a += D4_LOWPASS[k] * v;
            d += D4_HIGHPASS[k] * v;
        }
        low[i] = a;
        high[i] = d;
    }
}

fn synthesize_1d(low: &[f64], high: &[f64], out: &mut [f64]) {
    let n = out.len();
    out.fill(0.0);
    for i in 0..n / 2 {
        for k in 0..4 {
            out[(2 * i + k) % n] += D4_LOWPASS[k] * low[i] + D4_HIGHPASS[k] * high[i];
        }
    }
}

/// Forward single-level 2D DWT. Both dimensions must be even.
pub fn dwt2_forward(plane: &CoeffPlane) -> Result<SubbandSet> {
    let (w, h) = (plane.width(), plane.height());
    if w == 0 || h == 0 || w % 2 != 0 || h % 2 != 0 {
        return Err(Error::Dimension(format!(
            "DWT needs positive even dimensions, got {w}x{h}"
        )));
    }
    let (hw, hh) = (w / 2, h / 2);

    // rows: left half low, right half high
    let mut rows = vec![0.0; w * h];
    for r in 0..h {
        let src = &plane.values()[r * w..(r + 1) * w];
        let (low, high) = rows[r * w..(r + 1) * w].split_at_mut(hw);
        analyze_1d(src, low, high);
    }

    let mut col = vec![0.0; h];
    let mut low = vec![0.0; hh];
    let mut high = vec![0.0; hh];
    let mut out = [
        CoeffPlane::zeros(hw, hh),
        CoeffPlane::zeros(hw, hh),
        CoeffPlane::zeros(hw, hh),
        CoeffPlane::zeros(hw, hh),
    ];
    for c in 0..w {
        for r in 0..h {
            col[r] = rows[r * w + c];
        }
        analyze_1d(&col, &mut low, &mut high);
        let (row_high, cc) = (c >= hw, c % hw);
        let (top, bottom) = if row_high { (2, 3) } else { (0, 1) };
        for r in 0..hh {
            out[top].set(r, cc, low[r]);
            out[bottom].set(r, cc, high[r]);
        }
    }
    let [ll, lh, hl, hh_] = out;
    Ok(SubbandSet {
        ll,
        lh,
        hl,
        hh: hh_,
    })
}

/// Inverse of [`dwt2_forward`].
pub fn dwt2_inverse(bands: &SubbandSet) -> Result<CoeffPlane> {
    let (hw, hh) = bands.check()?;
    let (w, h) = (hw * 2, hh * 2);

    let mut rows = vec![0.0; w * h];
    let mut low = vec![0.0; hh];
    let mut high = vec![0.0; hh];
    let mut col = vec![0.0; h];
    for c in 0..w {
        let (top, bottom) = if c >= hw {
            (&bands.hl, &bands.hh)
        } else {
            (&bands.ll, &bands.lh)
        };
        let cc = c % hw;
        for r in 0..hh {
            low[r] = top.get(r, cc);
            high[r] = bottom.get(r, cc);
        }
        synthesize_1d(&low, &high, &mut col);
        for r in 0..h {
            rows[r * w + c] = col[r];
        }
    }

    let mut out = vec![0.0; w * h];
    for r in 0..h {
        let (low, high) = rows[r * w..(r + 1) * w].split_at(hw);
        synthesize_1d(low, high, &mut out[r * w..(r + 1) * w]);
    }
    CoeffPlane::new(w, h, out)
}
