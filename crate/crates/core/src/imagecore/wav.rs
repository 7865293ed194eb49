use std::fs;
use std::path::Path;

use super::PcmAudio;
use crate::error::{Error, Result};

const PCM_FORMAT: u16 = 1;

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

/// Decodes a RIFF WAVE file holding mono 8-bit PCM. On-disk bytes are
/// unsigned with a 128 bias; in memory they become signed.
pub fn decode_wav(bytes: &[u8]) -> Result<PcmAudio> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::format("wav", "missing RIFF/WAVE header"));
    }
    let mut pos = 12;
    let mut sample_rate = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body = pos + 8;
        let end = body.checked_add(size).filter(|&e| e <= bytes.len());
        match id {
            b"fmt " => {
                let end = end.ok_or_else(|| Error::format("wav", "truncated fmt chunk"))?;
                if size < 16 {
                    return Err(Error::format("wav", "fmt chunk shorter than 16 bytes"));
                }
                let fmt = &bytes[body..end];
                let format = u16_at(fmt, 0);
                let channels = u16_at(fmt, 2);
                let rate = u32_at(fmt, 4);
                let bits = u16_at(fmt, 14);
                if format != PCM_FORMAT {
                    return Err(Error::format(
                        "wav",
                        format!("unsupported encoding tag {format}; only PCM (1) is accepted"),
                    ));
                }
                if channels != 1 {
                    return Err(Error::format(
                        "wav",
                        format!("{channels} channels; only mono is accepted"),
                    ));
                }
                if bits != 8 {
                    return Err(Error::format(
                        "wav",
                        format!("{bits}-bit samples; only 8-bit is accepted"),
                    ));
                }
                sample_rate = Some(rate);
            }
            b"data" => {
                let rate = sample_rate.ok_or_else(|| Error::format("wav", "data chunk before fmt chunk"))?;
                let end = end.ok_or_else(|| Error::format("wav", "truncated data chunk"))?;
                let samples = bytes[body..end].iter().map(|&b| (b ^ 0x80) as i8).collect();
                return Ok(PcmAudio::new(rate, samples));
            }
            _ => {}
        }
        // chunks are word aligned
        pos = body + size + (size & 1);
    }
    Err(Error::format("wav", "no data chunk"))
}

/// Canonical 44-byte-header encoding, padded to an even data length.
pub fn encode_wav(audio: &PcmAudio) -> Vec<u8> {
    let n = audio.samples().len();
    let pad = n & 1;
    let riff_size = 4 + (8 + 16) + (8 + n + pad);
    let mut out = Vec::with_capacity(8 + riff_size);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(riff_size as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM_FORMAT.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&audio.sample_rate().to_le_bytes());
    // byte rate and block align for 8-bit mono
    out.extend_from_slice(&audio.sample_rate().to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&8u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend(audio.samples().iter().map(|&s| (s as u8) ^ 0x80));
    if pad == 1 {
        out.push(0);
    }
    out
}

pub fn load_wav(path: impl AsRef<Path>) -> Result<PcmAudio> {
    decode_wav(&fs::read(path)?)
}

pub fn save_wav(audio: &PcmAudio, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_wav(audio))?;
    Ok(())
}
