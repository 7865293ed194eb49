#![allow(dead_code)]

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavesteg::imagecore::{save_gray, save_wav};
use wavesteg::{synthetic, PcmAudio, RasterImage};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut impl Rng, width: usize, height: usize) -> RasterImage {
    RasterImage::from_fn(width, height, |_, _| rng.random()).unwrap()
}

/// Noise, textured or flat-with-steps covers; flat ones exercise ranking ties.
pub fn random_cover(rng: &mut impl Rng, width: usize, height: usize) -> RasterImage {
    match rng.random_range(0..3) {
        0 => random_image(rng, width, height),
        1 => synthetic::cover(width, height, rng.random()),
        _ => {
            let base: u8 = rng.random_range(20..200);
            let step: u8 = rng.random_range(1..40);
            RasterImage::from_fn(width, height, |r, c| base + if (r / 32 + c / 32) % 2 == 0 { 0 } else { step }).unwrap()
        }
    }
}

pub fn random_text(rng: &mut impl Rng, max: usize) -> Vec<u8> {
    let len = rng.random_range(0..=max);
    (0..len).map(|_| rng.random()).collect()
}

pub fn random_logo(rng: &mut impl Rng, max_side: usize) -> RasterImage {
    let w = rng.random_range(1..=max_side);
    let h = rng.random_range(1..=max_side);
    random_image(rng, w, h)
}

pub fn random_audio(rng: &mut impl Rng, max_samples: usize) -> PcmAudio {
    let n = rng.random_range(1..=max_samples);
    PcmAudio::new(8000, (0..n).map(|_| rng.random()).collect())
}

/// The standard operating point: 256×256 cover, 256-character text, 64×64
/// logo, two seconds of 8 kHz voice.
pub struct Standard {
    pub cover: RasterImage,
    pub text: Vec<u8>,
    pub logo: RasterImage,
    pub audio: PcmAudio,
}

pub fn standard(seed: u64) -> Standard {
    Standard {
        cover: synthetic::cover(256, 256, seed),
        text: synthetic::text(256),
        logo: synthetic::logo(64, seed),
        audio: synthetic::voice(16000, 8000, seed),
    }
}

/// Writes cover.pgm, text.txt, logo.pgm and audio.wav into `dir`.
pub fn write_standard(dir: &Path, seed: u64) {
    let s = standard(seed);
    save_gray(&s.cover, dir.join("cover.pgm")).unwrap();
    std::fs::write(dir.join("text.txt"), &s.text).unwrap();
    save_gray(&s.logo, dir.join("logo.pgm")).unwrap();
    save_wav(&s.audio, dir.join("audio.wav")).unwrap();
}
