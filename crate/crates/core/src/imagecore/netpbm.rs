use std::fs;
use std::path::Path;

use super::{gray_to_rgb, RasterImage, RgbImage};
use crate::error::{Error, Result};

/// A decoded binary Netpbm file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Netpbm {
    Gray(RasterImage),
    Rgb(RgbImage),
}

struct Header {
    magic: [u8; 2],
    width: usize,
    height: usize,
    data_offset: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    if bytes.len() < 2 || bytes[0] != b'P' || !matches!(bytes[1], b'5' | b'6') {
        return Err(Error::format("netpbm", "expected P5 or P6 magic number"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for (i, field) in fields.iter_mut().enumerate() {
        // whitespace and comments between tokens
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while let Some(&b) = bytes.get(pos) {
                        pos += 1;
                        if b == b'\n' || b == b'\r' {
                            break;
                        }
                    }
                }
                Some(_) => break,
                None => return Err(Error::format("netpbm", "truncated header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::format("netpbm", format!("header field {i} is not a number")));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        *field = text
            .parse()
            .map_err(|_| Error::format("netpbm", format!("header field {i} out of range")))?;
    }
    // exactly one whitespace byte separates maxval from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::format("netpbm", "missing whitespace after maxval")),
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::format("netpbm", format!("maxval must be 255, got {maxval}")));
    }
    if width == 0 || height == 0 {
        return Err(Error::format("netpbm", "zero width or height"));
    }
    Ok(Header {
        magic: [bytes[0], bytes[1]],
        width,
        height,
        data_offset: pos,
    })
}

/// Decodes a P5 or P6 file with maxval 255. Bytes past the raster are ignored.
pub fn decode_netpbm(bytes: &[u8]) -> Result<Netpbm> {
    let header = parse_header(bytes)?;
    let channels = if header.magic[1] == b'5' { 1 } else { 3 };
    let needed = header
        .width
        .checked_mul(header.height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| Error::format("netpbm", "dimensions overflow"))?;
    let data = &bytes[header.data_offset..];
    if data.len() < needed {
        return Err(Error::format(
            "netpbm",
            format!("truncated raster: need {needed} bytes, have {}", data.len()),
        ));
    }
    let data = &data[..needed];
    let (w, h) = (header.width, header.height);
    if channels == 1 {
        return Ok(Netpbm::Gray(RasterImage::new(w, h, data.to_vec())?));
    }
    let mut planes = [Vec::with_capacity(w * h), Vec::with_capacity(w * h), Vec::with_capacity(w * h)];
    for px in data.chunks_exact(3) {
        for (plane, &v) in planes.iter_mut().zip(px) {
            plane.push(v);
        }
    }
    let [r, g, b] = planes;
    Ok(Netpbm::Rgb(RgbImage::from_layers([
        RasterImage::new(w, h, r)?,
        RasterImage::new(w, h, g)?,
        RasterImage::new(w, h, b)?,
    ])?))
}

pub fn encode_pgm(image: &RasterImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.samples());
    out
}

pub fn encode_ppm(image: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    let [r, g, b] = image.layers();
    out.reserve(r.samples().len() * 3);
    for ((&r, &g), &b) in r.samples().iter().zip(g.samples()).zip(b.samples()) {
        out.extend_from_slice(&[r, g, b]);
    }
    out
}

pub fn load_gray(path: impl AsRef<Path>) -> Result<RasterImage> {
    match decode_netpbm(&fs::read(path)?)? {
        Netpbm::Gray(img) => Ok(img),
        Netpbm::Rgb(_) => Err(Error::format("netpbm", "expected P5 (grayscale), found P6")),
    }
}

pub fn save_gray(image: &RasterImage, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(image))?;
    Ok(())
}

pub fn load_rgb(path: impl AsRef<Path>) -> Result<RgbImage> {
    match decode_netpbm(&fs::read(path)?)? {
        Netpbm::Rgb(img) => Ok(img),
        Netpbm::Gray(_) => Err(Error::format("netpbm", "expected P6 (colour), found P5")),
    }
}

/// Loads P6 directly, or P5 replicated into three layers.
pub fn load_rgb_any(path: impl AsRef<Path>) -> Result<RgbImage> {
    match decode_netpbm(&fs::read(path)?)? {
        Netpbm::Rgb(img) => Ok(img),
        Netpbm::Gray(img) => Ok(gray_to_rgb(&img)),
    }
}

pub fn save_rgb(image: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_ppm(image))?;
    Ok(())
}
