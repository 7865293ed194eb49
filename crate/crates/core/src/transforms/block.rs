//! 8×8 block transforms: orthonormal DCT-II and sequency-ordered
//! Walsh–Hadamard.

use std::sync::OnceLock;

use super::CoeffPlane;
use crate::error::{Error, Result};

pub const BLOCK: usize = 8;

/// An orthonormal 8×8 basis applied separably: `Y = M·X·Mᵀ`.
#[derive(Clone, Debug)]
pub struct BlockBasis {
    rows: [[f64; BLOCK]; BLOCK],
}

impl BlockBasis {
    pub fn dct() -> &'static BlockBasis {
        static DCT: OnceLock<BlockBasis> = OnceLock::new();
        DCT.get_or_init(|| {
            let mut rows = [[0.0; BLOCK]; BLOCK];
            let n = BLOCK as f64;
            for (u, row) in rows.iter_mut().enumerate() {
                let scale = if u == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
                for (x, v) in row.iter_mut().enumerate() {
                    *v = scale
                        * ((2.0 * x as f64 + 1.0) * u as f64 * std::f64::consts::PI / (2.0 * n)).cos();
                }
            }
            BlockBasis { rows }
        })
    }

    /// Walsh functions ordered by number of sign changes.
    pub fn wht() -> &'static BlockBasis {
        static WHT: OnceLock<BlockBasis> = OnceLock::new();
        WHT.get_or_init(|| {
            let scale = 1.0 / (BLOCK as f64).sqrt();
            let mut natural: Vec<[f64; BLOCK]> = (0..BLOCK)
                .map(|i| {
                    let mut row = [0.0; BLOCK];
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = if (i & j).count_ones() % 2 == 0 { scale } else { -scale };
                    }
                    row
                })
                .collect();
            natural.sort_by_key(|row| row.windows(2).filter(|w| w[0] != w[1]).count());
            let mut rows = [[0.0; BLOCK]; BLOCK];
            rows.copy_from_slice(&natural);
            BlockBasis { rows }
        })
    }

    pub fn rows(&self) -> &[[f64; BLOCK]; BLOCK] {
        &self.rows
    }

    /// `Y = M·X·Mᵀ` on one block stored row-major in `x`.
    pub fn forward_block(&self, x: &[f64; 64]) -> [f64; 64] {
        let m = &self.rows;
        let mut tmp = [0.0; 64];
        // tmp = M·X
        for u in 0..BLOCK {
            for c in 0..BLOCK {
                tmp[u * BLOCK + c] = (0..BLOCK).map(|k| m[u][k] * x[k * BLOCK + c]).sum();
            }
        }
        let mut out = [0.0; 64];
        for u in 0..BLOCK {
            for v in 0..BLOCK {
                out[u * BLOCK + v] = (0..BLOCK).map(|k| tmp[u * BLOCK + k] * m[v][k]).sum();
            }
        }
        out
    }

    /// `X = Mᵀ·Y·M`.
    pub fn inverse_block(&self, y: &[f64; 64]) -> [f64; 64] {
        let m = &self.rows;
        let mut tmp = [0.0; 64];
        for r in 0..BLOCK {
            for v in 0..BLOCK {
                tmp[r * BLOCK + v] = (0..BLOCK).map(|k| m[k][r] * y[k * BLOCK + v]).sum();
            }
        }
        let mut out = [0.0; 64];
        for r in 0..BLOCK {
            for c in 0..BLOCK {
                out[r * BLOCK + c] = (0..BLOCK).map(|k| tmp[r * BLOCK + k] * m[k][c]).sum();
            }
        }
        out
    }

    fn apply(&self, plane: &CoeffPlane, block: usize, inverse: bool) -> Result<CoeffPlane> {
        if block != BLOCK {
            return Err(Error::InvalidParameter(format!(
                "only {BLOCK}x{BLOCK} blocks are supported, got {block}"
            )));
        }
        let (w, h) = (plane.width(), plane.height());
        if w == 0 || h == 0 || w % BLOCK != 0 || h % BLOCK != 0 {
            return Err(Error::Dimension(format!(
                "block transform needs dimensions divisible by {BLOCK}, got {w}x{h}"
            )));
        }
        let mut out = CoeffPlane::zeros(w, h);
        let mut buf = [0.0; 64];
        for br in (0..h).step_by(BLOCK) {
            for bc in (0..w).step_by(BLOCK) {
                for r in 0..BLOCK {
                    for c in 0..BLOCK {
                        buf[r * BLOCK + c] = plane.get(br + r, bc + c);
                    }
                }
                let t = if inverse {
                    self.inverse_block(&buf)
                } else {
                    self.forward_block(&buf)
                };
                for r in 0..BLOCK {
                    for c in 0..BLOCK {
                        out.set(br + r, bc + c, t[r * BLOCK + c]);
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn dct2_block(plane: &CoeffPlane, block: usize) -> Result<CoeffPlane> {
    BlockBasis::dct().apply(plane, block, false)
}

pub fn idct2_block(plane: &CoeffPlane, block: usize) -> Result<CoeffPlane> {
    BlockBasis::dct().apply(plane, block, true)
}

pub fn wht2_block(plane: &CoeffPlane, block: usize) -> Result<CoeffPlane> {
    BlockBasis::wht().apply(plane, block, false)
}

pub fn iwht2_block(plane: &CoeffPlane, block: usize) -> Result<CoeffPlane> {
    BlockBasis::wht().apply(plane, block, true)
}

/// JPEG zigzag scan of an 8×8 block as (row, col) pairs.
pub fn zigzag_order() -> &'static [(usize, usize); 64] {
    static ZIGZAG: OnceLock<[(usize, usize); 64]> = OnceLock::new();
    ZIGZAG.get_or_init(|| {
        let mut order = [(0, 0); 64];
        let mut i = 0;
        for s in 0..(2 * BLOCK - 1) {
            let lo = s.saturating_sub(BLOCK - 1);
            let hi = s.min(BLOCK - 1);
            // odd diagonals run top-right to bottom-left
            if s % 2 == 1 {
                for r in lo..=hi {
                    order[i] = (r, s - r);
                    i += 1;
                }
            } else {
                for r in (lo..=hi).rev() {
                    order[i] = (r, s - r);
                    i += 1;
                }
            }
        }
        order
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormal(b: &BlockBasis) -> bool {
        let m = b.rows();
        (0..BLOCK).all(|i| {
            (0..BLOCK).all(|j| {
                let dot: f64 = (0..BLOCK).map(|k| m[i][k] * m[j][k]).sum();
                (dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12
            })
        })
    }

    #[test]
    fn bases_are_orthonormal() {
        assert!(orthonormal(BlockBasis::dct()));
        assert!(orthonormal(BlockBasis::wht()));
    }

    #[test]
    fn dct_of_constant_block() {
        let plane = CoeffPlane::new(8, 8, vec![5.0; 64]).unwrap();
        let t = dct2_block(&plane, 8).unwrap();
        assert!((t.get(0, 0) - 40.0).abs() < 1e-12);
        let ac: f64 = t.values()[1..].iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(ac < 1e-12);
    }

    #[test]
    fn wht_of_ones_row() {
        let m = BlockBasis::wht().rows();
        let coeffs: Vec<f64> = (0..BLOCK).map(|u| m[u].iter().sum()).collect();
        assert!(coeffs[0].abs() > 1.0);
        assert!(coeffs[1..].iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn wht_rows_are_in_sequency_order() {
        for (s, row) in BlockBasis::wht().rows().iter().enumerate() {
            let changes = row.windows(2).filter(|w| w[0] != w[1]).count();
            assert_eq!(changes, s);
        }
    }

    #[test]
    fn zigzag_starts_like_jpeg() {
        let z = zigzag_order();
        assert_eq!(&z[..6], &[(0, 0), (0, 1), (1, 0), (2, 0), (1, 1), (0, 2)]);
        assert_eq!(z[63], (7, 7));
        let mut seen = [false; 64];
        for &(r, c) in z.iter() {
            seen[r * 8 + c] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn rejects_non_multiple_dims() {
        assert!(dct2_block(&CoeffPlane::zeros(12, 8), 8).is_err());
        assert!(wht2_block(&CoeffPlane::zeros(8, 8), 4).is_err());
    }
}
