//! Keyed row/column scrambling (`im2noise`) and its inverse (`noise2im`).
//!
//! The permutation generator is part of the stego file-format contract and
//! must never change for a given sidecar format version:
//!
//! * PRNG: SplitMix64 (state += 0x9E3779B97F4A7C15, then the
//!   30/27/31-shift finalizer with multipliers 0xBF58476D1CE4E5B9 and
//!   0x94D049BB133111EB), state initialized to the key seed.
//! * Bounded draws: Lemire's multiply-shift with rejection.
//! * Permutations: Fisher–Yates, `for i in (1..n).rev() { swap(i, below(i+1)) }`,
//!   starting from the identity.
//! * One stream per key: the row permutation is drawn first, then the
//!   column permutation.
//!
//! Scrambling is a permutation of whole rows and whole columns. It hides
//! structure but is not encryption: the pixel histogram is unchanged.

use crate::imagecore::RasterImage;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream generator behind every key-driven permutation.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = u128::from(self.next_u64()) * u128::from(n);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        perm
    }
}

/// Secret for one embedding slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StegoKey {
    pub key_id: String,
    pub seed: u64,
}

impl StegoKey {
    pub fn new(key_id: impl Into<String>, seed: u64) -> Self {
        Self {
            key_id: key_id.into(),
            seed,
        }
    }

    /// Row permutation ρ and column permutation σ for a `height`×`width` canvas.
    pub fn permutations(&self, width: usize, height: usize) -> (Vec<usize>, Vec<usize>) {
        let mut rng = SplitMix64::new(self.seed);
        let rows = rng.permutation(height);
        let cols = rng.permutation(width);
        (rows, cols)
    }
}

/// Seed for slot `slot` (0-based) derived from a 64-bit master key: the
/// first SplitMix64 output of `master XOR (slot + 1)·0xD1B54A32D192ED03`.
pub fn derive_slot_seed(master: u64, slot: usize) -> u64 {
    let mix = (slot as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03);
    SplitMix64::new(master ^ mix).next_u64()
}

/// Output pixel (r, c) is input pixel (ρ(r), σ(c)).
pub fn im2noise(canvas: &RasterImage, key: &StegoKey) -> RasterImage {
    let (w, h) = (canvas.width(), canvas.height());
    let (rows, cols) = key.permutations(w, h);
    let mut out = canvas.clone();
    for (r, &src_r) in rows.iter().enumerate() {
        for (c, &src_c) in cols.iter().enumerate() {
            out.set(r, c, canvas.get(src_r, src_c));
        }
    }
    out
}

/// Exact inverse of [`im2noise`] under the same key.
pub fn noise2im(noise: &RasterImage, key: &StegoKey) -> RasterImage {
    let (w, h) = (noise.width(), noise.height());
    let (rows, cols) = key.permutations(w, h);
    let mut out = noise.clone();
    for (r, &dst_r) in rows.iter().enumerate() {
        for (c, &dst_c) in cols.iter().enumerate() {
            out.set(dst_r, dst_c, noise.get(r, c));
        }
    }
    out
}
