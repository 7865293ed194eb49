//! Line-oriented sidecar text format (see `docs/sidecar-format.md`).

use super::{EmbeddingPlan, Modulation, SlotPlan, StegoSidecar};
use crate::blockengine::EnhanceRule;
use crate::error::{Error, Result};
use crate::imagecore::Layer;
use crate::payload::{PayloadKind, PayloadMeta};
use crate::transforms::{Band, TransformKind};

pub const SIDECAR_MAGIC: &str = "wavesteg-sidecar";
pub const SIDECAR_VERSION: u32 = 1;

fn enhance_token(rule: EnhanceRule) -> String {
    match rule {
        EnhanceRule::TiesWithSelected => "ties".into(),
        EnhanceRule::Count(n) => format!("count:{n}"),
        EnhanceRule::Fraction(f) => format!("fraction:{f}"),
    }
}

pub fn parse_enhance(s: &str) -> Option<EnhanceRule> {
    match s.split_once(':') {
        None if s == "ties" => Some(EnhanceRule::TiesWithSelected),
        Some(("count", n)) => n.parse().ok().map(EnhanceRule::Count),
        Some(("fraction", f)) => f.parse().ok().map(EnhanceRule::Fraction),
        _ => None,
    }
}

pub fn write_sidecar(sidecar: &StegoSidecar) -> String {
    use std::fmt::Write;
    let plan = &sidecar.plan;
    let mut out = String::new();
    let _ = writeln!(out, "{SIDECAR_MAGIC} {}", sidecar.version);
    let _ = writeln!(out, "transform {}", plan.transform.name());
    let _ = writeln!(out, "mode {}", plan.mode.name());
    let _ = writeln!(out, "alpha {}", plan.alpha);
    let _ = writeln!(out, "gain {}", plan.gain);
    let _ = writeln!(out, "enhance {}", enhance_token(plan.enhance));
    let _ = writeln!(out, "cover {} {}", plan.cover_width, plan.cover_height);
    for meta in [&sidecar.text_meta, &sidecar.image_meta, &sidecar.audio_meta] {
        match meta {
            PayloadMeta::Text { chars } => {
                let _ = writeln!(out, "meta text {chars}");
            }
            PayloadMeta::Image { width, height } => {
                let _ = writeln!(out, "meta image {width} {height}");
            }
            PayloadMeta::Audio {
                samples,
                sample_rate,
                bias,
            } => {
                let _ = writeln!(out, "meta audio {samples} {sample_rate} {bias}");
            }
        }
    }
    for slot in &plan.slots {
        let _ = writeln!(
            out,
            "slot {} {} {} {}",
            slot.layer.name(),
            slot.band.name(),
            slot.kind.name(),
            slot.key_id
        );
        let _ = writeln!(
            out,
            "canvas {} {} {} {}",
            slot.canvas_width, slot.canvas_height, slot.padded_width, slot.padded_height
        );
        let _ = writeln!(out, "group {}", slot.group_size);
        for &(r, c) in &slot.selected {
            let _ = writeln!(out, "sel {} {r} {c}", slot.band.name());
        }
        for &(r, c) in &slot.enhanced {
            let _ = writeln!(out, "enh {} {r} {c}", slot.band.name());
        }
    }
    out.push_str("end\n");
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn bad(line: usize, detail: impl std::fmt::Display) -> Error {
        Error::format("sidecar", format!("line {}: {detail}", line + 1))
    }

    /// Next line, split into words, which must start with `keyword`.
    fn expect(&mut self, keyword: &str) -> Result<(usize, Vec<&'a str>)> {
        let (n, line) = self
            .inner
            .next()
            .ok_or_else(|| Error::format("sidecar", format!("unexpected end, wanted `{keyword}`")))?;
        let words: Vec<&str> = line.split(' ').collect();
        if words[0] != keyword {
            return Err(Self::bad(n, format!("expected `{keyword}`, found `{}`", words[0])));
        }
        Ok((n, words[1..].to_vec()))
    }

    fn peek_keyword(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|(_, l)| l.split(' ').next().unwrap_or(""))
    }
}

fn num<T: std::str::FromStr>(line: usize, words: &[&str], i: usize) -> Result<T> {
    words
        .get(i)
        .and_then(|w| w.parse().ok())
        .ok_or_else(|| Lines::bad(line, format!("field {} missing or malformed", i + 1)))
}

fn arity(line: usize, words: &[&str], n: usize) -> Result<()> {
    if words.len() != n {
        return Err(Lines::bad(line, format!("expected {n} fields, found {}", words.len())));
    }
    Ok(())
}

pub fn parse_sidecar(text: &str) -> Result<StegoSidecar> {
    let mut lines = Lines {
        inner: text.lines().enumerate().peekable(),
    };
    let (n, w) = lines.expect(SIDECAR_MAGIC)?;
    arity(n, &w, 1)?;
    let version: u32 = num(n, &w, 0)?;
    if version != SIDECAR_VERSION {
        return Err(Lines::bad(n, format!("unsupported version {version}")));
    }
    let (n, w) = lines.expect("transform")?;
    arity(n, &w, 1)?;
    let transform = TransformKind::parse(w[0]).ok_or_else(|| Lines::bad(n, "unknown transform"))?;
    let (n, w) = lines.expect("mode")?;
    arity(n, &w, 1)?;
    let mode = Modulation::parse(w[0]).ok_or_else(|| Lines::bad(n, "unknown mode"))?;
    let (n, w) = lines.expect("alpha")?;
    arity(n, &w, 1)?;
    let alpha: f64 = num(n, &w, 0)?;
    let (n, w) = lines.expect("gain")?;
    arity(n, &w, 1)?;
    let gain: f64 = num(n, &w, 0)?;
    let (n, w) = lines.expect("enhance")?;
    arity(n, &w, 1)?;
    let enhance = parse_enhance(w[0]).ok_or_else(|| Lines::bad(n, "unknown enhancement rule"))?;
    let (n, w) = lines.expect("cover")?;
    arity(n, &w, 2)?;
    let (cover_width, cover_height) = (num(n, &w, 0)?, num(n, &w, 1)?);

    let (n, w) = lines.expect("meta")?;
    arity(n, &w, 2)?;
    if w[0] != "text" {
        return Err(Lines::bad(n, "expected text meta"));
    }
    let text_meta = PayloadMeta::Text { chars: num(n, &w, 1)? };
    let (n, w) = lines.expect("meta")?;
    arity(n, &w, 3)?;
    if w[0] != "image" {
        return Err(Lines::bad(n, "expected image meta"));
    }
    let image_meta = PayloadMeta::Image {
        width: num(n, &w, 1)?,
        height: num(n, &w, 2)?,
    };
    let (n, w) = lines.expect("meta")?;
    arity(n, &w, 4)?;
    if w[0] != "audio" {
        return Err(Lines::bad(n, "expected audio meta"));
    }
    let audio_meta = PayloadMeta::Audio {
        samples: num(n, &w, 1)?,
        sample_rate: num(n, &w, 2)?,
        bias: num(n, &w, 3)?,
    };

    let mut slots = Vec::new();
    while lines.peek_keyword() == Some("slot") {
        let (n, w) = lines.expect("slot")?;
        arity(n, &w, 4)?;
        let layer = Layer::parse(w[0]).ok_or_else(|| Lines::bad(n, "unknown layer"))?;
        let band = Band::parse(w[1]).ok_or_else(|| Lines::bad(n, "unknown band"))?;
        let kind = PayloadKind::parse(w[2]).ok_or_else(|| Lines::bad(n, "unknown payload kind"))?;
        let key_id = w[3].to_string();
        let (n, w) = lines.expect("canvas")?;
        arity(n, &w, 4)?;
        let (canvas_width, canvas_height, padded_width, padded_height) =
            (num(n, &w, 0)?, num(n, &w, 1)?, num(n, &w, 2)?, num(n, &w, 3)?);
        if canvas_width == 0 || canvas_height == 0 || padded_width < canvas_width || padded_height < canvas_height {
            return Err(Lines::bad(n, "inconsistent canvas dimensions"));
        }
        let (n, w) = lines.expect("group")?;
        arity(n, &w, 1)?;
        let group_size = num(n, &w, 0)?;
        let mut blocks = |keyword: &str| -> Result<Vec<(usize, usize)>> {
            let mut out = Vec::new();
            while lines.peek_keyword() == Some(keyword) {
                let (n, w) = lines.expect(keyword)?;
                arity(n, &w, 3)?;
                if w[0] != band.name() {
                    return Err(Lines::bad(n, "block band differs from slot band"));
                }
                out.push((num(n, &w, 1)?, num(n, &w, 2)?));
            }
            Ok(out)
        };
        let selected = blocks("sel")?;
        let enhanced = blocks("enh")?;
        slots.push(SlotPlan {
            layer,
            band,
            kind,
            key_id,
            canvas_width,
            canvas_height,
            padded_width,
            padded_height,
            group_size,
            selected,
            enhanced,
        });
    }
    let (n, w) = lines.expect("end")?;
    arity(n, &w, 0)?;
    if let Some((n, _)) = lines.inner.next() {
        return Err(Lines::bad(n, "content after `end`"));
    }
    Ok(StegoSidecar {
        version,
        plan: EmbeddingPlan {
            transform,
            mode,
            alpha,
            gain,
            enhance,
            cover_width,
            cover_height,
            slots,
        },
        text_meta,
        image_meta,
        audio_meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> StegoSidecar {
        StegoSidecar {
            version: SIDECAR_VERSION,
            plan: EmbeddingPlan {
                transform: TransformKind::Dwt,
                mode: Modulation::NonAdaptive,
                alpha: 0.1,
                gain: 1.2,
                enhance: EnhanceRule::TiesWithSelected,
                cover_width: 256,
                cover_height: 256,
                slots: vec![SlotPlan {
                    layer: Layer::R,
                    band: Band::LL,
                    kind: PayloadKind::Text,
                    key_id: "R/LL".into(),
                    canvas_width: 64,
                    canvas_height: 32,
                    padded_width: 64,
                    padded_height: 32,
                    group_size: 64,
                    selected: vec![(3, 4), (0, 0)],
                    enhanced: vec![(9, 1)],
                }],
            },
            text_meta: PayloadMeta::Text { chars: 2 },
            image_meta: PayloadMeta::Image { width: 64, height: 64 },
            audio_meta: PayloadMeta::Audio {
                samples: 16000,
                sample_rate: 8000,
                bias: 128,
            },
        }
    }

    #[test]
    fn exact_text_layout() {
        let expected = "wavesteg-sidecar 1\n\
transform dwt\n\
mode nonadaptive\n\
alpha 0.1\n\
gain 1.2\n\
enhance ties\n\
cover 256 256\n\
meta text 2\n\
meta image 64 64\n\
meta audio 16000 8000 128\n\
slot R LL text R/LL\n\
canvas 64 32 64 32\n\
group 64\n\
sel LL 3 4\n\
sel LL 0 0\n\
enh LL 9 1\n\
end\n";
        assert_eq!(write_sidecar(&sample()), expected);
        assert_eq!(parse_sidecar(expected).unwrap(), sample());
    }

    #[test]
    fn rejects_damage() {
        let good = write_sidecar(&sample());
        assert!(parse_sidecar(&good.replace("wavesteg-sidecar 1", "wavesteg-sidecar 2")).is_err());
        assert!(parse_sidecar(&good.replace("sel LL 3 4", "sel HH 3 4")).is_err());
        assert!(parse_sidecar(&good.replace("alpha 0.1", "alpha x")).is_err());
        assert!(parse_sidecar(&good.replace("end\n", "")).is_err());
        assert!(parse_sidecar(&format!("{good}extra\n")).is_err());
        assert!(parse_sidecar("").is_err());
    }

    #[test]
    fn enhance_tokens_round_trip() {
        for rule in [EnhanceRule::TiesWithSelected, EnhanceRule::Count(7), EnhanceRule::Fraction(0.25)] {
            assert_eq!(parse_enhance(&enhance_token(rule)), Some(rule));
        }
    }
}
