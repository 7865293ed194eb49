//! Block-based wavelet-domain steganography for RGB covers.
//!
//! A grayscale cover is replicated into three colour layers. Each layer is
//! decomposed with a single-level Daubechies 4-tap DWT, and three payloads
//! (text, image, audio) are scrambled into noise images and added onto the
//! lowest-variance 8×8 blocks of the LL and HH subbands. Every payload is
//! carried twice, once in an LL slot and once in an HH slot:
//!
//! | layer | LL    | HH    |
//! |-------|-------|-------|
//! | R     | text  | image |
//! | G     | image | audio |
//! | B     | audio | text  |
//!
//! Extraction is non-oblivious: it needs the original cover, the sidecar
//! describing the embedding plan, and the master key.

pub mod attacks;
pub mod blockengine;
pub mod compare;
pub mod error;
pub mod imagecore;
pub mod metrics;
pub mod payload;
pub mod stego;
pub mod synthetic;
pub mod transforms;

#[doc(hidden)]
pub mod cli;

pub use error::{Error, Result};
pub use imagecore::{PcmAudio, RasterImage, RgbImage};
