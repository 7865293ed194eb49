//! 8×8 block partitioning, variance ranking and mean-preserving
//! enhancement of residual homogeneous blocks.

use crate::error::{Error, Result};
use crate::imagecore::Layer;
use crate::transforms::{Band, CoeffPlane};

pub const BLOCK_SIZE: usize = 8;

/// Location of one carrier block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockIndex {
    pub layer: Layer,
    pub band: Band,
    pub row_block: usize,
    pub col_block: usize,
}

/// A block cut out of a plane, values row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub row_block: usize,
    pub col_block: usize,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockStats {
    /// Position in the raster-scan order of the input.
    pub position: usize,
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
}

/// Raster-scan partition into `block`×`block` tiles.
pub fn partition_blocks(plane: &CoeffPlane, block: usize) -> Result<Vec<Block>> {
    let (w, h) = (plane.width(), plane.height());
    if block == 0 || w == 0 || h == 0 || w % block != 0 || h % block != 0 {
        return Err(Error::Dimension(format!(
            "{w}x{h} plane does not divide into {block}x{block} blocks"
        )));
    }
    let mut blocks = Vec::with_capacity((w / block) * (h / block));
    for rb in 0..h / block {
        for cb in 0..w / block {
            let mut values = Vec::with_capacity(block * block);
            for r in 0..block {
                let start = (rb * block + r) * w + cb * block;
                values.extend_from_slice(&plane.values()[start..start + block]);
            }
            blocks.push(Block {
                row_block: rb,
                col_block: cb,
                values,
            });
        }
    }
    Ok(blocks)
}

/// Inverse of [`partition_blocks`].
pub fn merge_blocks(blocks: &[Block], width: usize, height: usize, block: usize) -> Result<CoeffPlane> {
    let mut plane = CoeffPlane::zeros(width, height);
    for b in blocks {
        if b.values.len() != block * block
            || (b.row_block + 1) * block > height
            || (b.col_block + 1) * block > width
        {
            return Err(Error::Dimension(format!(
                "block ({}, {}) does not fit a {width}x{height} plane",
                b.row_block, b.col_block
            )));
        }
        for r in 0..block {
            for c in 0..block {
                plane.set(b.row_block * block + r, b.col_block * block + c, b.values[r * block + c]);
            }
        }
    }
    Ok(plane)
}

/// Mean and population variance.
pub fn mean_variance(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

/// Sorts blocks by ascending variance; equal variances keep raster order.
pub fn rank_homogeneous<B: AsRef<[f64]>>(blocks: &[B]) -> Vec<BlockStats> {
    let mut stats: Vec<BlockStats> = blocks
        .iter()
        .enumerate()
        .map(|(position, b)| {
            let (mean, variance) = mean_variance(b.as_ref());
            BlockStats {
                position,
                mean,
                variance,
            }
        })
        .collect();
    stats.sort_by(|a, b| a.variance.total_cmp(&b.variance).then(a.position.cmp(&b.position)));
    stats
}

/// `B → mean(B) + g·(B − mean(B))` in place.
pub fn enhance_block(values: &mut [f64], gain: f64) -> Result<()> {
    check_gain(gain)?;
    let (mean, _) = mean_variance(values);
    for v in values.iter_mut() {
        *v = mean + gain * (*v - mean);
    }
    Ok(())
}

/// Enhances every block; rejects `gain <= 1`.
pub fn enhance_residual_blocks<B: AsRef<[f64]>>(blocks: &[B], gain: f64) -> Result<Vec<Vec<f64>>> {
    check_gain(gain)?;
    blocks
        .iter()
        .map(|b| {
            let mut v = b.as_ref().to_vec();
            enhance_block(&mut v, gain)?;
            Ok(v)
        })
        .collect()
}

fn check_gain(gain: f64) -> Result<()> {
    if !gain.is_finite() || gain <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "enhancement gain must be a finite number > 1, got {gain}"
        )));
    }
    Ok(())
}

/// Which unselected blocks count as "remaining homogeneous" and get enhanced.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum EnhanceRule {
    /// Unselected blocks whose variance does not exceed the variance of the
    /// last selected block.
    #[default]
    TiesWithSelected,
    /// The `n` lowest-variance unselected blocks.
    Count(usize),
    /// Unselected blocks within the lowest `fraction` of the ranking.
    Fraction(f64),
}


/// Ranking positions split into carriers and enhanced residual blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Selection {
    /// Raster positions of the carrier blocks, in ranking order.
    pub selected: Vec<usize>,
    /// Raster positions of the enhanced blocks, in ranking order.
    pub enhanced: Vec<usize>,
}

/// Takes the `k` lowest-variance blocks as carriers and picks the enhanced
/// set from the rest according to `rule`.
pub fn select_blocks(ranking: &[BlockStats], k: usize, rule: EnhanceRule) -> Result<Selection> {
    if k > ranking.len() {
        return Err(Error::Capacity {
            slot: "band".into(),
            needed: k,
            available: ranking.len(),
        });
    }
    let selected: Vec<usize> = ranking[..k].iter().map(|s| s.position).collect();
    let rest = &ranking[k..];
    let enhanced_count = match rule {
        EnhanceRule::TiesWithSelected => match k.checked_sub(1).map(|i| ranking[i].variance) {
            Some(kth) => rest.iter().take_while(|s| s.variance <= kth).count(),
            None => 0,
        },
        EnhanceRule::Count(n) => n.min(rest.len()),
        EnhanceRule::Fraction(f) => {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::InvalidParameter(format!(
                    "homogeneous fraction must lie in [0, 1], got {f}"
                )));
            }
            let homogeneous = (f * ranking.len() as f64).floor() as usize;
            homogeneous.saturating_sub(k)
        }
    };
    let enhanced = rest[..enhanced_count].iter().map(|s| s.position).collect();
    Ok(Selection { selected, enhanced })
}
