//! Embedding and non-oblivious extraction.
//!
//! Per colour layer the cover is transformed, and each of its two slots
//! (LL and HH role) receives one scrambled payload canvas:
//!
//! 1. pad the canvas to multiples of 8 and scramble it with the slot key;
//! 2. cut the scrambled canvas into 8×8 tiles (raster order) and read the
//!    pixels tile by tile, raster order inside each tile;
//! 3. rank the band's coefficient groups by ascending variance and write
//!    one pixel per coefficient into the first K groups;
//! 4. enhance the remaining homogeneous groups (mean kept, variance ×g²).
//!
//! Non-adaptive modulation adds `α·p` to a coefficient, `p` being the raw
//! 0..=255 pixel value of the noise image. Adaptive modulation scales the
//! coefficient: `c·(1 + α·w)` with `w = (p − 128)/128`.

mod carrier;
mod sidecar;

pub use carrier::{check_dims, group_size, grid, units, Carrier, Reference, Unit};
pub use sidecar::{parse_enhance, parse_sidecar, write_sidecar, SIDECAR_MAGIC, SIDECAR_VERSION};

use rayon::prelude::*;

use crate::blockengine::{enhance_block, rank_homogeneous, select_blocks, EnhanceRule, BLOCK_SIZE};
use crate::error::{Error, Result};
use crate::imagecore::{gray_to_rgb, Layer, PcmAudio, RasterImage, RgbImage};
use crate::payload::{
    audio_to_canvas, canvas_to_audio, canvas_to_image, canvas_to_text, crop_canvas, derive_slot_seed,
    im2noise, image_to_canvas, noise2im, pad_canvas, text_to_canvas, PayloadDescriptor, PayloadKind,
    PayloadMeta, StegoKey,
};
use crate::transforms::{Band, CoeffPlane, TransformKind};

/// Coefficients with magnitude below this are unreliable in adaptive extraction.
pub const ADAPTIVE_TAU: f64 = 1e-3;

/// Which payload rides in which (layer, band) slot. Slot order also fixes
/// key derivation.
pub const SLOTS: [(Layer, Band, PayloadKind); 6] = [
    (Layer::R, Band::LL, PayloadKind::Text),
    (Layer::R, Band::HH, PayloadKind::Image),
    (Layer::G, Band::LL, PayloadKind::Image),
    (Layer::G, Band::HH, PayloadKind::Audio),
    (Layer::B, Band::LL, PayloadKind::Audio),
    (Layer::B, Band::HH, PayloadKind::Text),
];

pub fn slot_key_id(layer: Layer, band: Band) -> String {
    format!("{}/{}", layer.name(), band.name())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Modulation {
    NonAdaptive,
    Adaptive,
}

impl Modulation {
    pub fn name(self) -> &'static str {
        match self {
            Modulation::NonAdaptive => "nonadaptive",
            Modulation::Adaptive => "adaptive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "nonadaptive" => Some(Modulation::NonAdaptive),
            "adaptive" => Some(Modulation::Adaptive),
            _ => None,
        }
    }

    fn modulate(self, coeff: f64, pixel: u8, alpha: f64) -> f64 {
        match self {
            Modulation::NonAdaptive => coeff + alpha * f64::from(pixel),
            Modulation::Adaptive => coeff * (1.0 + alpha * (f64::from(pixel) - 128.0) / 128.0),
        }
    }

    /// Recovers the pixel, or `None` where the coefficient cannot carry it.
    fn demodulate(self, stego: f64, cover: f64, alpha: f64) -> Option<u8> {
        let w = match self {
            Modulation::NonAdaptive => (stego - cover) / alpha,
            Modulation::Adaptive => {
                if cover.abs() < ADAPTIVE_TAU {
                    return None;
                }
                128.0 * (stego - cover) / (alpha * cover) + 128.0
            }
        };
        Some(crate::imagecore::quantize_sample(w))
    }
}

/// The six slot keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotKeys(pub [StegoKey; 6]);

impl SlotKeys {
    /// Expands a master key with [`derive_slot_seed`], in [`SLOTS`] order.
    pub fn from_master(master: u64) -> Self {
        SlotKeys(std::array::from_fn(|i| {
            let (layer, band, _) = SLOTS[i];
            StegoKey::new(slot_key_id(layer, band), derive_slot_seed(master, i))
        }))
    }

    pub fn get(&self, slot: usize) -> &StegoKey {
        &self.0[slot]
    }
}

/// Parses a master key written as up to 16 hex digits (optional `0x`).
pub fn parse_master_key(s: &str) -> Result<u64> {
    let digits = s.trim().trim_start_matches("0x").trim_start_matches("0X");
    if digits.is_empty() || digits.len() > 16 {
        return Err(Error::InvalidParameter(format!(
            "master key must be 1 to 16 hex digits, got {:?}",
            s
        )));
    }
    u64::from_str_radix(digits, 16)
        .map_err(|_| Error::InvalidParameter(format!("master key {s:?} is not hexadecimal")))
}

/// The three payloads as canvases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Payloads {
    pub text: PayloadDescriptor,
    pub image: PayloadDescriptor,
    pub audio: PayloadDescriptor,
}

impl Payloads {
    pub fn new(text: &[u8], image: &RasterImage, audio: &PcmAudio, cover_width: usize, cover_height: usize) -> Result<Self> {
        Ok(Self {
            text: text_to_canvas(text)?,
            image: image_to_canvas(image, cover_width, cover_height)?,
            audio: audio_to_canvas(audio),
        })
    }

    pub fn get(&self, kind: PayloadKind) -> &PayloadDescriptor {
        match kind {
            PayloadKind::Text => &self.text,
            PayloadKind::Image => &self.image,
            PayloadKind::Audio => &self.audio,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmbedParams {
    pub alpha: f64,
    pub mode: Modulation,
    /// Enhancement gain; 1 disables enhancement.
    pub gain: f64,
    pub enhance: EnhanceRule,
    pub transform: TransformKind,
}

impl Default for EmbedParams {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            mode: Modulation::NonAdaptive,
            gain: 1.2,
            enhance: EnhanceRule::default(),
            transform: TransformKind::Dwt,
        }
    }
}

impl EmbedParams {
    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "modulation index must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        if !self.gain.is_finite() || self.gain < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "enhancement gain must be finite and >= 1, got {}",
                self.gain
            )));
        }
        Ok(())
    }
}

/// Block coordinates inside one band's block grid.
pub type BlockCoord = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotPlan {
    pub layer: Layer,
    pub band: Band,
    pub kind: PayloadKind,
    pub key_id: String,
    pub canvas_width: usize,
    pub canvas_height: usize,
    pub padded_width: usize,
    pub padded_height: usize,
    pub group_size: usize,
    /// Carrier groups in embedding order.
    pub selected: Vec<BlockCoord>,
    pub enhanced: Vec<BlockCoord>,
}

impl SlotPlan {
    pub fn name(&self) -> String {
        slot_key_id(self.layer, self.band)
    }

    pub fn pixel_count(&self) -> usize {
        self.padded_width * self.padded_height
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingPlan {
    pub transform: TransformKind,
    pub mode: Modulation,
    pub alpha: f64,
    pub gain: f64,
    pub enhance: EnhanceRule,
    pub cover_width: usize,
    pub cover_height: usize,
    /// In [`SLOTS`] order.
    pub slots: Vec<SlotPlan>,
}

/// Everything extraction needs besides the cover and the keys.
#[derive(Clone, Debug, PartialEq)]
pub struct StegoSidecar {
    pub version: u32,
    pub plan: EmbeddingPlan,
    pub text_meta: PayloadMeta,
    pub image_meta: PayloadMeta,
    pub audio_meta: PayloadMeta,
}

impl StegoSidecar {
    pub fn meta(&self, kind: PayloadKind) -> &PayloadMeta {
        match kind {
            PayloadKind::Text => &self.text_meta,
            PayloadKind::Image => &self.image_meta,
            PayloadKind::Audio => &self.audio_meta,
        }
    }
}

pub struct EmbedOutput {
    /// 8-bit stego image (clamped and rounded).
    pub stego: RgbImage,
    /// Real-valued stego layers before quantization.
    pub stego_planes: [CoeffPlane; 3],
    pub sidecar: StegoSidecar,
}

/// Scrambled, padded canvas read tile by tile.
fn tile_sequence(canvas: &RasterImage) -> Vec<u8> {
    let (w, h) = (canvas.width(), canvas.height());
    let mut seq = Vec::with_capacity(w * h);
    for tr in (0..h).step_by(BLOCK_SIZE) {
        for tc in (0..w).step_by(BLOCK_SIZE) {
            for r in tr..tr + BLOCK_SIZE {
                for c in tc..tc + BLOCK_SIZE {
                    seq.push(canvas.get(r, c));
                }
            }
        }
    }
    seq
}

fn untile_sequence(seq: &[u8], width: usize, height: usize) -> RasterImage {
    let mut out = RasterImage::filled(width, height, 0).expect("non-empty");
    let mut i = 0;
    for tr in (0..height).step_by(BLOCK_SIZE) {
        for tc in (0..width).step_by(BLOCK_SIZE) {
            for r in tr..tr + BLOCK_SIZE {
                for c in tc..tc + BLOCK_SIZE {
                    out.set(r, c, seq[i]);
                    i += 1;
                }
            }
        }
    }
    out
}

fn unit_at(units: &[Unit], cols: usize, coord: BlockCoord) -> Result<&Unit> {
    let (row, col) = coord;
    if col >= cols {
        return Err(Error::Dimension(format!("block ({row}, {col}) outside the band grid")));
    }
    units
        .get(row * cols + col)
        .ok_or_else(|| Error::Dimension(format!("block ({row}, {col}) outside the band grid")))
}

/// Embeds one slot into `stego`, reading unmodified values from `cover`.
#[allow(clippy::too_many_arguments)]
fn embed_slot(
    cover: &Carrier,
    stego: &mut Carrier,
    reference: &Reference,
    layer: Layer,
    band: Band,
    payload: &PayloadDescriptor,
    key: &StegoKey,
    params: &EmbedParams,
) -> Result<SlotPlan> {
    let kind = params.transform;
    let band_units = units(kind, cover.width(), cover.height(), band)?;
    let group = group_size(kind);
    let padded = pad_canvas(&payload.canvas, BLOCK_SIZE);
    let sequence = tile_sequence(&im2noise(&padded, key));
    let needed = sequence.len().div_ceil(group);
    if needed > band_units.len() {
        return Err(Error::Capacity {
            slot: slot_key_id(layer, band),
            needed,
            available: band_units.len(),
        });
    }

    let values: Vec<Vec<f64>> = band_units.iter().map(|u| cover.read_unit(u, reference)).collect();
    let ranking = rank_homogeneous(&values);
    let selection = select_blocks(&ranking, needed, params.enhance)?;

    for (j, &unit_idx) in selection.selected.iter().enumerate() {
        let unit = &band_units[unit_idx];
        let chunk = &sequence[j * group..((j + 1) * group).min(sequence.len())];
        for (&pos, (&pixel, &c)) in unit.positions.iter().zip(chunk.iter().zip(&values[unit_idx])) {
            stego.write(pos, params.mode.modulate(c, pixel, params.alpha), reference);
        }
    }
    if params.gain > 1.0 {
        for &unit_idx in &selection.enhanced {
            let unit = &band_units[unit_idx];
            let mut v = values[unit_idx].clone();
            enhance_block(&mut v, params.gain)?;
            for (&pos, &x) in unit.positions.iter().zip(&v) {
                stego.write(pos, x, reference);
            }
        }
    }

    let coord = |i: &usize| (band_units[*i].row_block, band_units[*i].col_block);
    Ok(SlotPlan {
        layer,
        band,
        kind: payload.kind(),
        key_id: key.key_id.clone(),
        canvas_width: payload.canvas.width(),
        canvas_height: payload.canvas.height(),
        padded_width: padded.width(),
        padded_height: padded.height(),
        group_size: group,
        selected: selection.selected.iter().map(coord).collect(),
        enhanced: if params.gain > 1.0 {
            selection.enhanced.iter().map(coord).collect()
        } else {
            Vec::new()
        },
    })
}

/// Embeds both slots of one layer and returns the modified carrier.
pub fn embed_layer(
    cover: &RasterImage,
    layer: Layer,
    payloads: &Payloads,
    keys: &SlotKeys,
    params: &EmbedParams,
) -> Result<(Carrier, Vec<SlotPlan>)> {
    params.validate()?;
    let cover_carrier = Carrier::analyze(params.transform, &CoeffPlane::from_image(cover))?;
    let reference = cover_carrier.reference();
    let mut stego = cover_carrier.clone();
    let mut plans = Vec::with_capacity(2);
    for (slot, &(l, band, kind)) in SLOTS.iter().enumerate() {
        if l != layer {
            continue;
        }
        plans.push(embed_slot(
            &cover_carrier,
            &mut stego,
            &reference,
            layer,
            band,
            payloads.get(kind),
            keys.get(slot),
            params,
        )?);
    }
    Ok((stego, plans))
}

/// Embeds the three payloads into a grayscale cover replicated to RGB.
pub fn embed(cover: &RasterImage, payloads: &Payloads, keys: &SlotKeys, params: &EmbedParams) -> Result<EmbedOutput> {
    params.validate()?;
    check_dims(params.transform, cover.width(), cover.height())?;
    let rgb = gray_to_rgb(cover);
    let layers: Vec<Result<(CoeffPlane, Vec<SlotPlan>)>> = Layer::ALL
        .par_iter()
        .map(|&layer| {
            let (carrier, plans) = embed_layer(rgb.layer(layer), layer, payloads, keys, params)?;
            Ok((carrier.synthesize()?, plans))
        })
        .collect();
    let mut planes = Vec::with_capacity(3);
    let mut slots = Vec::with_capacity(6);
    for layer in layers {
        let (plane, plans) = layer?;
        planes.push(plane);
        slots.extend(plans);
    }
    let stego_planes: [CoeffPlane; 3] = planes.try_into().expect("three layers");
    let stego = RgbImage::from_layers([
        stego_planes[0].to_image()?,
        stego_planes[1].to_image()?,
        stego_planes[2].to_image()?,
    ])?;
    let plan = EmbeddingPlan {
        transform: params.transform,
        mode: params.mode,
        alpha: params.alpha,
        gain: params.gain,
        enhance: params.enhance,
        cover_width: cover.width(),
        cover_height: cover.height(),
        slots,
    };
    Ok(EmbedOutput {
        stego,
        stego_planes,
        sidecar: StegoSidecar {
            version: SIDECAR_VERSION,
            plan,
            text_meta: payloads.text.meta.clone(),
            image_meta: payloads.image.meta.clone(),
            audio_meta: payloads.audio.meta.clone(),
        },
    })
}

/// One recovered canvas plus the pixels that could not be demodulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredCopy {
    pub slot: String,
    pub canvas: PayloadDescriptor,
    /// Canvas-sized mask, `true` where the pixel is unreliable (adaptive mode).
    pub unreliable: Vec<bool>,
}

impl RecoveredCopy {
    pub fn unreliable_count(&self) -> usize {
        self.unreliable.iter().filter(|&&u| u).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredLogo {
    pub kind: PayloadKind,
    pub copy_ll: RecoveredCopy,
    pub copy_hh: RecoveredCopy,
    pub fused: PayloadDescriptor,
}

impl RecoveredLogo {
    pub fn copy(&self, band: Band) -> &RecoveredCopy {
        match band {
            Band::HH => &self.copy_hh,
            _ => &self.copy_ll,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    pub text: RecoveredLogo,
    pub image: RecoveredLogo,
    pub audio: RecoveredLogo,
}

impl Extraction {
    pub fn logo(&self, kind: PayloadKind) -> &RecoveredLogo {
        match kind {
            PayloadKind::Text => &self.text,
            PayloadKind::Image => &self.image,
            PayloadKind::Audio => &self.audio,
        }
    }

    pub fn decoded_text(&self) -> Result<Vec<u8>> {
        canvas_to_text(&self.text.fused)
    }

    pub fn decoded_image(&self) -> Result<RasterImage> {
        canvas_to_image(&self.image.fused)
    }

    pub fn decoded_audio(&self) -> Result<PcmAudio> {
        canvas_to_audio(&self.audio.fused)
    }
}

fn extract_slot(
    cover: &Carrier,
    stego: &Carrier,
    reference: &Reference,
    plan: &EmbeddingPlan,
    slot: &SlotPlan,
    meta: &PayloadMeta,
    key: &StegoKey,
) -> Result<RecoveredCopy> {
    if key.key_id != slot.key_id {
        return Err(Error::InvalidParameter(format!(
            "key {} supplied for slot {}",
            key.key_id, slot.key_id
        )));
    }
    if slot.group_size != group_size(plan.transform) {
        return Err(Error::format("sidecar", format!("group size {} does not match transform", slot.group_size)));
    }
    let band_units = units(plan.transform, cover.width(), cover.height(), slot.band)?;
    let (cols, _) = grid(plan.transform, cover.width(), cover.height());
    let n = slot.pixel_count();
    if slot.selected.len() * slot.group_size < n {
        return Err(Error::format("sidecar", format!("slot {} lists too few blocks", slot.key_id)));
    }
    let mut sequence = Vec::with_capacity(n);
    let mut bad = Vec::with_capacity(n);
    'outer: for &coord in &slot.selected {
        let unit = unit_at(&band_units, cols, coord)?;
        for &pos in &unit.positions {
            if sequence.len() == n {
                break 'outer;
            }
            let got = plan
                .mode
                .demodulate(stego.read(pos, reference), cover.read(pos, reference), plan.alpha);
            sequence.push(got.unwrap_or(0));
            bad.push(got.is_none());
        }
    }

    let scrambled = untile_sequence(&sequence, slot.padded_width, slot.padded_height);
    let canvas = crop_canvas(&noise2im(&scrambled, key), slot.canvas_width, slot.canvas_height)?;
    let bad_bytes: Vec<u8> = bad.iter().map(|&b| u8::from(b)).collect();
    let mask = untile_sequence(&bad_bytes, slot.padded_width, slot.padded_height);
    let mask = crop_canvas(&noise2im(&mask, key), slot.canvas_width, slot.canvas_height)?;
    Ok(RecoveredCopy {
        slot: slot.name(),
        canvas: PayloadDescriptor {
            canvas,
            meta: meta.clone(),
        },
        unreliable: mask.samples().iter().map(|&b| b != 0).collect(),
    })
}

/// Pixel-wise mean of two copies, rounding halves up.
pub fn fuse_copies(copy_ll: &RasterImage, copy_hh: &RasterImage) -> Result<RasterImage> {
    fuse_masked(copy_ll, &[], copy_hh, &[])
}

/// Like [`fuse_copies`], but a pixel flagged unreliable in one copy is taken
/// from the other copy alone.
pub fn fuse_masked(a: &RasterImage, a_bad: &[bool], b: &RasterImage, b_bad: &[bool]) -> Result<RasterImage> {
    if !a.same_dims(b) {
        return Err(Error::Dimension(format!(
            "cannot fuse {}x{} with {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let flag = |m: &[bool], i: usize| m.get(i).copied().unwrap_or(false);
    let samples = a
        .samples()
        .iter()
        .zip(b.samples())
        .enumerate()
        .map(|(i, (&x, &y))| match (flag(a_bad, i), flag(b_bad, i)) {
            (false, true) => x,
            (true, false) => y,
            _ => (u16::from(x) + u16::from(y)).div_ceil(2) as u8,
        })
        .collect();
    RasterImage::new(a.width(), a.height(), samples)
}

/// Extracts from real-valued stego layers (no quantization).
pub fn extract_planes(
    stego: &[CoeffPlane; 3],
    cover: &RasterImage,
    sidecar: &StegoSidecar,
    keys: &SlotKeys,
) -> Result<Extraction> {
    let plan = &sidecar.plan;
    if cover.width() != plan.cover_width || cover.height() != plan.cover_height {
        return Err(Error::Dimension(format!(
            "cover is {}x{}, sidecar expects {}x{}",
            cover.width(),
            cover.height(),
            plan.cover_width,
            plan.cover_height
        )));
    }
    for p in stego {
        if p.width() != cover.width() || p.height() != cover.height() {
            return Err(Error::Dimension(format!(
                "stego is {}x{}, cover is {}x{}",
                p.width(),
                p.height(),
                cover.width(),
                cover.height()
            )));
        }
    }
    if plan.alpha <= 0.0 {
        return Err(Error::InvalidParameter("extraction needs a modulation index > 0".into()));
    }
    if plan.slots.len() != SLOTS.len() {
        return Err(Error::format("sidecar", format!("expected 6 slots, found {}", plan.slots.len())));
    }

    let cover_carrier = Carrier::analyze(plan.transform, &CoeffPlane::from_image(cover))?;
    let reference = cover_carrier.reference();
    let copies: Vec<Result<RecoveredCopy>> = Layer::ALL
        .par_iter()
        .map(|&layer| {
            let stego_carrier = Carrier::analyze(plan.transform, &stego[layer.index()])?;
            let mut out = Vec::with_capacity(2);
            for (i, slot) in plan.slots.iter().enumerate() {
                let (l, band, kind) = SLOTS[i];
                if l != layer {
                    continue;
                }
                if slot.layer != l || slot.band != band || slot.kind != kind {
                    return Err(Error::format("sidecar", format!("slot {i} does not follow the spreading table")));
                }
                out.push(extract_slot(
                    &cover_carrier,
                    &stego_carrier,
                    &reference,
                    plan,
                    slot,
                    sidecar.meta(kind),
                    keys.get(i),
                ));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let copies = copies.into_iter().collect::<Result<Vec<_>>>()?;

    let logo = |kind: PayloadKind| -> Result<RecoveredLogo> {
        let find = |band: Band| {
            let i = SLOTS.iter().position(|&(_, b, k)| b == band && k == kind).expect("slot table");
            copies[i].clone()
        };
        let (ll, hh) = (find(Band::LL), find(Band::HH));
        let fused = fuse_masked(&ll.canvas.canvas, &ll.unreliable, &hh.canvas.canvas, &hh.unreliable)?;
        Ok(RecoveredLogo {
            kind,
            fused: PayloadDescriptor {
                canvas: fused,
                meta: ll.canvas.meta.clone(),
            },
            copy_ll: ll,
            copy_hh: hh,
        })
    };
    Ok(Extraction {
        text: logo(PayloadKind::Text)?,
        image: logo(PayloadKind::Image)?,
        audio: logo(PayloadKind::Audio)?,
    })
}

/// Extracts from an 8-bit stego image.
pub fn extract(stego: &RgbImage, cover: &RasterImage, sidecar: &StegoSidecar, keys: &SlotKeys) -> Result<Extraction> {
    let planes = [
        CoeffPlane::from_image(stego.layer(Layer::R)),
        CoeffPlane::from_image(stego.layer(Layer::G)),
        CoeffPlane::from_image(stego.layer(Layer::B)),
    ];
    extract_planes(&planes, cover, sidecar, keys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiling_round_trip() {
        let img = RasterImage::from_fn(16, 24, |r, c| (r * 16 + c) as u8).unwrap();
        let seq = tile_sequence(&img);
        assert_eq!(&seq[..3], &[0, 1, 2]);
        assert_eq!(seq[8], 16);
        assert_eq!(seq[64], 8);
        assert_eq!(untile_sequence(&seq, 16, 24), img);
    }

    #[test]
    fn fuse_rounds_half_up() {
        let a = RasterImage::new(3, 1, vec![0, 10, 7]).unwrap();
        let b = RasterImage::new(3, 1, vec![255, 10, 8]).unwrap();
        assert_eq!(fuse_copies(&a, &b).unwrap().samples(), &[128, 10, 8]);
        assert_eq!(fuse_copies(&a, &a).unwrap(), a);
        assert!(fuse_copies(&a, &RasterImage::filled(1, 3, 0).unwrap()).is_err());
        let fused = fuse_masked(&a, &[true, false, false], &b, &[false, false, true]).unwrap();
        assert_eq!(fused.samples(), &[255, 10, 7]);
    }

    #[test]
    fn master_key_parsing() {
        assert_eq!(parse_master_key("00000000000000ff").unwrap(), 255);
        assert_eq!(parse_master_key("0xDEADBEEF").unwrap(), 0xDEAD_BEEF);
        assert!(parse_master_key("").is_err());
        assert!(parse_master_key("xyz").is_err());
        assert!(parse_master_key("11112222333344445").is_err());
    }

    #[test]
    fn demodulation_inverts_modulation() {
        for p in [0u8, 1, 127, 128, 255] {
            for c in [-40.0, 0.5, 300.25] {
                for mode in [Modulation::NonAdaptive, Modulation::Adaptive] {
                    let s = mode.modulate(c, p, 0.1);
                    assert_eq!(mode.demodulate(s, c, 0.1), Some(p), "{mode:?} c={c} p={p}");
                }
            }
        }
        assert_eq!(Modulation::Adaptive.demodulate(1.0, 1e-4, 0.1), None);
    }

    #[test]
    fn slot_table_spreads_each_logo_twice() {
        for kind in PayloadKind::ALL {
            let bands: Vec<Band> = SLOTS.iter().filter(|s| s.2 == kind).map(|s| s.1).collect();
            assert_eq!(bands.len(), 2);
            assert!(bands.contains(&Band::LL) && bands.contains(&Band::HH));
        }
    }
}
