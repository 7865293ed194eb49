//! Transform-domain carriers: a uniform view of "coefficient groups" so the
//! same selection/embedding code runs on the DWT and on the block-transform
//! baselines.
//!
//! Group layout per transform (blocks are 8×8, listed in raster order):
//!
//! * `dwt`: storage is the Mallat layout (LL top-left, HL top-right, LH
//!   bottom-left, HH bottom-right). A group is one 8×8 block of the LL or HH
//!   quadrant, 64 coefficients in raster order.
//! * `dct`, `wht`: storage is the block-transformed plane. Each image block
//!   gives one LL-role group (zigzag positions 0..32, i.e. DC plus the 31
//!   lowest AC terms) and one HH-role group (zigzag positions 32..64).
//! * `dft`: storage is the unitary 8×8 block DFT. Of the 34 conjugate-pair
//!   representatives of a real block, sorted by squared wrapped frequency
//!   `min(u,8-u)² + min(v,8-v)²` then by raster index, the first 17 form the
//!   LL-role group and the last 17 the HH-role group. A group value is the
//!   coefficient's projection on the cover's phase (its magnitude, for the
//!   cover); writes keep the cover phase and mirror into the conjugate.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::blockengine::BLOCK_SIZE;
use crate::error::{Error, Result};
use crate::transforms::{
    dft2, dwt2_forward, dwt2_inverse, idft2, zigzag_order, Band, BlockBasis, CoeffPlane, ComplexPlane,
    SubbandSet, TransformKind,
};

const B: usize = BLOCK_SIZE;

/// One embedding group: the block it belongs to and the storage positions
/// of its coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unit {
    pub row_block: usize,
    pub col_block: usize,
    pub positions: Vec<usize>,
}

/// Coefficients of one colour layer in a given transform domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Carrier {
    kind: TransformKind,
    width: usize,
    height: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

/// Per-coefficient projection direction taken from the cover. Identity for
/// real-valued transforms.
#[derive(Clone, Debug, PartialEq)]
pub struct Reference {
    phase: Option<Vec<(f64, f64)>>,
}

pub fn check_dims(kind: TransformKind, width: usize, height: usize) -> Result<()> {
    let step = match kind {
        TransformKind::Dwt => 2 * B,
        _ => B,
    };
    if width == 0 || height == 0 || !width.is_multiple_of(step) || !height.is_multiple_of(step) {
        return Err(Error::Dimension(format!(
            "{} carrier needs dimensions divisible by {step}, got {width}x{height}",
            kind.name()
        )));
    }
    Ok(())
}

/// Values per group for a transform.
pub fn group_size(kind: TransformKind) -> usize {
    match kind {
        TransformKind::Dwt => B * B,
        TransformKind::Dct | TransformKind::Wht => B * B / 2,
        TransformKind::Dft => dft_groups().0.len(),
    }
}

/// Block-grid shape (columns, rows) of one band's groups.
pub fn grid(kind: TransformKind, width: usize, height: usize) -> (usize, usize) {
    match kind {
        TransformKind::Dwt => (width / (2 * B), height / (2 * B)),
        _ => (width / B, height / B),
    }
}

fn zigzag_groups() -> &'static (Vec<usize>, Vec<usize>) {
    static GROUPS: OnceLock<(Vec<usize>, Vec<usize>)> = OnceLock::new();
    GROUPS.get_or_init(|| {
        let offsets: Vec<usize> = zigzag_order().iter().map(|&(r, c)| r * B + c).collect();
        (offsets[..32].to_vec(), offsets[32..].to_vec())
    })
}

fn conjugate_offset(offset: usize) -> usize {
    let (u, v) = (offset / B, offset % B);
    ((B - u) % B) * B + (B - v) % B
}

fn dft_groups() -> &'static (Vec<usize>, Vec<usize>) {
    static GROUPS: OnceLock<(Vec<usize>, Vec<usize>)> = OnceLock::new();
    GROUPS.get_or_init(|| {
        let mut reps: Vec<usize> = (0..B * B).filter(|&o| o <= conjugate_offset(o)).collect();
        let freq = |o: usize| {
            let (u, v) = (o / B, o % B);
            let (fu, fv) = (u.min(B - u), v.min(B - v));
            fu * fu + fv * fv
        };
        reps.sort_by_key(|&o| (freq(o), o));
        let half = reps.len() / 2;
        (reps[..half].to_vec(), reps[half..].to_vec())
    })
}

/// Groups of `band` (LL or HH role) in raster block order.
pub fn units(kind: TransformKind, width: usize, height: usize, band: Band) -> Result<Vec<Unit>> {
    check_dims(kind, width, height)?;
    let (cols, rows) = grid(kind, width, height);
    let mut out = Vec::with_capacity(cols * rows);
    match kind {
        TransformKind::Dwt => {
            let (r0, c0) = match band {
                Band::LL => (0, 0),
                Band::HH => (height / 2, width / 2),
                Band::HL => (0, width / 2),
                Band::LH => (height / 2, 0),
            };
            for rb in 0..rows {
                for cb in 0..cols {
                    let mut positions = Vec::with_capacity(B * B);
                    for r in 0..B {
                        for c in 0..B {
                            positions.push((r0 + rb * B + r) * width + c0 + cb * B + c);
                        }
                    }
                    out.push(Unit {
                        row_block: rb,
                        col_block: cb,
                        positions,
                    });
                }
            }
        }
        _ => {
            let groups = if kind == TransformKind::Dft {
                dft_groups()
            } else {
                zigzag_groups()
            };
            let offsets = match band {
                Band::LL => &groups.0,
                Band::HH => &groups.1,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "{} carrier has only LL and HH roles",
                        kind.name()
                    )))
                }
            };
            for rb in 0..rows {
                for cb in 0..cols {
                    let positions = offsets
                        .iter()
                        .map(|&o| (rb * B + o / B) * width + cb * B + o % B)
                        .collect();
                    out.push(Unit {
                        row_block: rb,
                        col_block: cb,
                        positions,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn copy_block(src: &[f64], width: usize, br: usize, bc: usize) -> [f64; 64] {
    let mut buf = [0.0; 64];
    for r in 0..B {
        let start = (br + r) * width + bc;
        buf[r * B..(r + 1) * B].copy_from_slice(&src[start..start + B]);
    }
    buf
}

fn paste_block(dst: &mut [f64], width: usize, br: usize, bc: usize, block: &[f64]) {
    for r in 0..B {
        let start = (br + r) * width + bc;
        dst[start..start + B].copy_from_slice(&block[r * B..(r + 1) * B]);
    }
}

impl Carrier {
    pub fn analyze(kind: TransformKind, plane: &CoeffPlane) -> Result<Self> {
        let (w, h) = (plane.width(), plane.height());
        check_dims(kind, w, h)?;
        let mut re = vec![0.0; w * h];
        let mut im = Vec::new();
        match kind {
            TransformKind::Dwt => {
                let bands = dwt2_forward(plane)?;
                let (hw, hh) = (w / 2, h / 2);
                for (p, r0, c0) in [
                    (&bands.ll, 0, 0),
                    (&bands.hl, 0, hw),
                    (&bands.lh, hh, 0),
                    (&bands.hh, hh, hw),
                ] {
                    for r in 0..hh {
                        let dst = (r0 + r) * w + c0;
                        re[dst..dst + hw].copy_from_slice(&p.values()[r * hw..(r + 1) * hw]);
                    }
                }
            }
            TransformKind::Dct | TransformKind::Wht => {
                let basis = if kind == TransformKind::Dct {
                    BlockBasis::dct()
                } else {
                    BlockBasis::wht()
                };
                for br in (0..h).step_by(B) {
                    for bc in (0..w).step_by(B) {
                        let t = basis.forward_block(&copy_block(plane.values(), w, br, bc));
                        paste_block(&mut re, w, br, bc, &t);
                    }
                }
            }
            TransformKind::Dft => {
                im = vec![0.0; w * h];
                for br in (0..h).step_by(B) {
                    for bc in (0..w).step_by(B) {
                        let block = CoeffPlane::new(B, B, copy_block(plane.values(), w, br, bc).to_vec())?;
                        let s = dft2(&block)?;
                        let (bre, bim): (Vec<f64>, Vec<f64>) = s.values.iter().map(|z| (z.re, z.im)).unzip();
                        paste_block(&mut re, w, br, bc, &bre);
                        paste_block(&mut im, w, br, bc, &bim);
                    }
                }
            }
        }
        Ok(Self {
            kind,
            width: w,
            height: h,
            re,
            im,
        })
    }

    pub fn synthesize(&self) -> Result<CoeffPlane> {
        let (w, h) = (self.width, self.height);
        match self.kind {
            TransformKind::Dwt => {
                let bands = self.subbands()?;
                dwt2_inverse(&bands)
            }
            TransformKind::Dct | TransformKind::Wht => {
                let basis = if self.kind == TransformKind::Dct {
                    BlockBasis::dct()
                } else {
                    BlockBasis::wht()
                };
                let mut out = vec![0.0; w * h];
                for br in (0..h).step_by(B) {
                    for bc in (0..w).step_by(B) {
                        let x = basis.inverse_block(&copy_block(&self.re, w, br, bc));
                        paste_block(&mut out, w, br, bc, &x);
                    }
                }
                CoeffPlane::new(w, h, out)
            }
            TransformKind::Dft => {
                let mut out = vec![0.0; w * h];
                for br in (0..h).step_by(B) {
                    for bc in (0..w).step_by(B) {
                        let re = copy_block(&self.re, w, br, bc);
                        let im = copy_block(&self.im, w, br, bc);
                        let spectrum = ComplexPlane {
                            width: B,
                            height: B,
                            values: re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect(),
                        };
                        let x = idft2(&spectrum)?;
                        paste_block(&mut out, w, br, bc, x.values());
                    }
                }
                CoeffPlane::new(w, h, out)
            }
        }
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Subbands of a DWT carrier.
    pub fn subbands(&self) -> Result<SubbandSet> {
        if self.kind != TransformKind::Dwt {
            return Err(Error::InvalidParameter("subbands exist only for the DWT carrier".into()));
        }
        let (w, hw, hh) = (self.width, self.width / 2, self.height / 2);
        let quadrant = |r0: usize, c0: usize| {
            let mut v = Vec::with_capacity(hw * hh);
            for r in 0..hh {
                let start = (r0 + r) * w + c0;
                v.extend_from_slice(&self.re[start..start + hw]);
            }
            CoeffPlane::new(hw, hh, v).expect("quadrant dims")
        };
        Ok(SubbandSet {
            ll: quadrant(0, 0),
            hl: quadrant(0, hw),
            lh: quadrant(hh, 0),
            hh: quadrant(hh, hw),
        })
    }

    pub fn reference(&self) -> Reference {
        if self.kind != TransformKind::Dft {
            return Reference { phase: None };
        }
        let phase = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| {
                let norm = re.hypot(im);
                if norm > 0.0 {
                    (re / norm, im / norm)
                } else {
                    (1.0, 0.0)
                }
            })
            .collect();
        Reference { phase: Some(phase) }
    }

    #[inline]
    pub fn read(&self, pos: usize, reference: &Reference) -> f64 {
        match &reference.phase {
            None => self.re[pos],
            Some(phase) => {
                let (c, s) = phase[pos];
                self.re[pos] * c + self.im[pos] * s
            }
        }
    }

    #[inline]
    pub fn write(&mut self, pos: usize, value: f64, reference: &Reference) {
        match &reference.phase {
            None => self.re[pos] = value,
            Some(phase) => {
                let (c, s) = phase[pos];
                self.re[pos] = value * c;
                self.im[pos] = value * s;
                let (row, col) = (pos / self.width, pos % self.width);
                let (br, bc) = (row - row % B, col - col % B);
                let partner_offset = conjugate_offset((row % B) * B + col % B);
                let partner = (br + partner_offset / B) * self.width + bc + partner_offset % B;
                if partner != pos {
                    self.re[partner] = value * c;
                    self.im[partner] = -value * s;
                }
            }
        }
    }

    pub fn read_unit(&self, unit: &Unit, reference: &Reference) -> Vec<f64> {
        unit.positions.iter().map(|&p| self.read(p, reference)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> CoeffPlane {
        CoeffPlane::new(w, h, (0..w * h).map(|i| ((i * 37) % 251) as f64).collect()).unwrap()
    }

    #[test]
    fn group_sizes() {
        assert_eq!(group_size(TransformKind::Dwt), 64);
        assert_eq!(group_size(TransformKind::Dct), 32);
        assert_eq!(group_size(TransformKind::Wht), 32);
        assert_eq!(group_size(TransformKind::Dft), 17);
        assert_eq!(dft_groups().1.len(), 17);
    }

    #[test]
    fn dft_groups_cover_all_pairs() {
        let (lo, hi) = dft_groups();
        assert_eq!(lo[0], 0);
        let mut all: Vec<usize> = lo.iter().chain(hi).copied().collect();
        for &o in lo.iter().chain(hi) {
            all.push(conjugate_offset(o));
        }
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 64);
    }

    #[test]
    fn carriers_round_trip() {
        let plane = ramp(32, 16);
        for kind in TransformKind::ALL {
            let carrier = Carrier::analyze(kind, &plane).unwrap();
            let back = carrier.synthesize().unwrap();
            assert!(plane.max_abs_diff(&back) < 1e-9, "{kind:?}");
        }
    }

    #[test]
    fn units_partition_disjointly() {
        for kind in TransformKind::ALL {
            let mut seen = std::collections::HashSet::new();
            for band in [Band::LL, Band::HH] {
                for unit in units(kind, 32, 32, band).unwrap() {
                    assert_eq!(unit.positions.len(), group_size(kind));
                    for p in unit.positions {
                        assert!(seen.insert(p), "{kind:?} reuses position {p}");
                    }
                }
            }
        }
        assert_eq!(units(TransformKind::Dwt, 256, 256, Band::HH).unwrap().len(), 256);
        assert_eq!(units(TransformKind::Dct, 256, 256, Band::LL).unwrap().len(), 1024);
    }

    #[test]
    fn dft_writes_keep_the_image_real() {
        let plane = ramp(16, 16);
        let mut carrier = Carrier::analyze(TransformKind::Dft, &plane).unwrap();
        let reference = carrier.reference();
        let unit = &units(TransformKind::Dft, 16, 16, Band::HH).unwrap()[3];
        for (i, &p) in unit.positions.iter().enumerate() {
            let v = carrier.read(p, &reference);
            carrier.write(p, v + i as f64 - 4.0, &reference);
        }
        let out = carrier.synthesize().unwrap();
        let again = Carrier::analyze(TransformKind::Dft, &out).unwrap();
        for (i, &p) in unit.positions.iter().enumerate() {
            let expect = Carrier::analyze(TransformKind::Dft, &plane).unwrap().read(p, &reference) + i as f64 - 4.0;
            assert!((again.read(p, &reference) - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn dims_checked() {
        assert!(Carrier::analyze(TransformKind::Dwt, &ramp(24, 32)).is_err());
        assert!(Carrier::analyze(TransformKind::Dct, &ramp(24, 32)).is_ok());
    }
}
