//! Deterministic stand-in covers and payloads for demos and tests: a
//! 256×256 textured cover, a 64×64 logo, a 2 s 8 kHz voice-like tone and a
//! text message.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::imagecore::{quantize_sample, PcmAudio, RasterImage};

/// Smooth shading, a few flat shapes, a striped patch and mild sensor noise,
/// kept inside [24, 232].
pub fn cover(width: usize, height: usize, seed: u64) -> RasterImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 2.0).expect("valid sigma");
    let (fw, fh) = (width as f64, height as f64);
    let (cx, cy, rad) = (
        rng.random_range(0.3..0.7) * fw,
        rng.random_range(0.3..0.7) * fh,
        rng.random_range(0.12..0.22) * fw.min(fh),
    );
    let phase = rng.random_range(0.0..2.0 * PI);
    let values: Vec<f64> = (0..width * height)
        .map(|i| {
            let (r, c) = ((i / width) as f64, (i % width) as f64);
            let mut v = 70.0 + 90.0 * (r / fh) + 40.0 * (c / fw * PI + phase).sin();
            let d = ((r - cy).powi(2) + (c - cx).powi(2)).sqrt();
            if d < rad {
                v = 0.6 * v + 70.0;
            }
            if r > 0.70 * fh && c < 0.35 * fw {
                v += 25.0 * (c / 3.0).sin();
            }
            if r < 0.2 * fh && c > 0.7 * fw {
                v = 200.0;
            }
            (v + noise.sample(&mut rng)).clamp(24.0, 232.0)
        })
        .collect();
    RasterImage::from_f64(width, height, &values).expect("positive dims")
}

/// Rings over a diagonal gradient with grain, range roughly [20, 235].
pub fn logo(size: usize, seed: u64) -> RasterImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grain = Normal::new(0.0, 10.0).expect("valid sigma");
    let s = size as f64;
    let values: Vec<f64> = (0..size * size)
        .map(|i| {
            let (r, c) = ((i / size) as f64, (i % size) as f64);
            let d = ((r - s / 2.0).powi(2) + (c - s / 2.0).powi(2)).sqrt();
            let v = 128.0 + 60.0 * (d / 3.0).cos() + 40.0 * ((r + c) / (2.0 * s) - 0.5);
            (v + grain.sample(&mut rng)).clamp(20.0, 235.0)
        })
        .collect();
    RasterImage::from_f64(size, size, &values).expect("positive dims")
}

/// Voiced "syllables": harmonics of a gliding pitch under a slow envelope.
pub fn voice(samples: usize, sample_rate: u32, seed: u64) -> PcmAudio {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 3.0).expect("valid sigma");
    let fs = f64::from(sample_rate);
    let f0 = rng.random_range(110.0..180.0);
    let mut phase = 0.0;
    let out = (0..samples)
        .map(|n| {
            let t = n as f64 / fs;
            let pitch = f0 * (1.0 + 0.15 * (2.0 * PI * 1.3 * t).sin());
            phase += 2.0 * PI * pitch / fs;
            let env = 0.55 + 0.45 * (2.0 * PI * 3.0 * t).sin().abs();
            let v = 0.6 * phase.sin() + 0.3 * (2.0 * phase).sin() + 0.15 * (3.0 * phase).sin();
            let s = 100.0 * env * v + noise.sample(&mut rng);
            (quantize_sample(s + 128.0) as i16 - 128) as i8
        })
        .collect();
    PcmAudio::new(sample_rate, out)
}

const PANGRAM: &[u8] = b"The quick brown fox jumps over the lazy dog. ";

/// `len` characters of repeated pangram.
pub fn text(len: usize) -> Vec<u8> {
    PANGRAM.iter().copied().cycle().take(len).collect()
}

/// `len` random printable ASCII characters.
pub fn random_text(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(0x20u8..0x7F)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(cover(64, 64, 1), cover(64, 64, 1));
        assert_ne!(cover(64, 64, 1), cover(64, 64, 2));
        assert_eq!(voice(100, 8000, 4), voice(100, 8000, 4));
        assert_eq!(text(50).len(), 50);
        assert!(random_text(300, 1).iter().all(|b| (0x20..0x7F).contains(b)));
    }

    #[test]
    fn ranges() {
        let c = cover(256, 256, 7);
        assert!(c.samples().iter().all(|&v| (24..=232).contains(&v)));
        let l = logo(64, 7);
        assert!(l.samples().iter().all(|&v| (20..=235).contains(&v)));
    }
}
