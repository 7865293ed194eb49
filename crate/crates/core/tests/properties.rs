//! Property tests for the module invariants.

use proptest::prelude::*;
use wavesteg::attacks::{apply_attack, AttackSpec};
use wavesteg::blockengine::{
    enhance_block, mean_variance, merge_blocks, partition_blocks, rank_homogeneous, select_blocks, EnhanceRule,
};
use wavesteg::imagecore::{decode_netpbm, decode_wav, encode_pgm, encode_ppm, encode_wav, gray_to_rgb, Layer, Netpbm};
use wavesteg::metrics::{entropy, epsilon_security, mutual_information, psnr, ssim};
use wavesteg::payload::{
    audio_to_canvas, canvas_to_audio, canvas_to_image, canvas_to_text, im2noise, image_to_canvas, noise2im,
    text_to_canvas, StegoKey,
};
use wavesteg::stego::{fuse_copies, parse_sidecar, write_sidecar};
use wavesteg::transforms::{
    dct2_block, dft2, dwt2_forward, dwt2_inverse, idct2_block, idft2, iwht2_block, wht2_block, CoeffPlane, SubbandSet,
};
use wavesteg::{PcmAudio, RasterImage, RgbImage};

fn image(max_w: usize, max_h: usize) -> impl Strategy<Value = RasterImage> {
    (1..=max_w, 1..=max_h).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<u8>(), w * h).prop_map(move |s| RasterImage::new(w, h, s).unwrap())
    })
}

fn image_sized(w: usize, h: usize) -> impl Strategy<Value = RasterImage> {
    prop::collection::vec(any::<u8>(), w * h).prop_map(move |s| RasterImage::new(w, h, s).unwrap())
}

fn image_pair(min: usize, max: usize) -> impl Strategy<Value = (RasterImage, RasterImage)> {
    (min..=max, min..=max).prop_flat_map(|(w, h)| (image_sized(w, h), image_sized(w, h)))
}

/// Plane with dimensions that are multiples of `step`.
fn plane(step: usize, max_blocks: usize) -> impl Strategy<Value = CoeffPlane> {
    (1..=max_blocks, 1..=max_blocks).prop_flat_map(move |(bw, bh)| {
        let (w, h) = (bw * step, bh * step);
        prop::collection::vec(-300.0f64..300.0, w * h).prop_map(move |v| CoeffPlane::new(w, h, v).unwrap())
    })
}

fn plane_pair(step: usize, max_blocks: usize) -> impl Strategy<Value = (CoeffPlane, CoeffPlane)> {
    (1..=max_blocks, 1..=max_blocks).prop_flat_map(move |(bw, bh)| {
        let (w, h) = (bw * step, bh * step);
        let one = move || prop::collection::vec(-300.0f64..300.0, w * h).prop_map(move |v| CoeffPlane::new(w, h, v).unwrap());
        (one(), one())
    })
}

fn combine(a: &CoeffPlane, b: &CoeffPlane, s: f64, t: f64) -> CoeffPlane {
    let v = a.values().iter().zip(b.values()).map(|(x, y)| s * x + t * y).collect();
    CoeffPlane::new(a.width(), a.height(), v).unwrap()
}

type BlockFn = fn(&CoeffPlane, usize) -> wavesteg::Result<CoeffPlane>;

fn block_transforms() -> [(BlockFn, BlockFn); 2] {
    [(dct2_block, idct2_block), (wht2_block, iwht2_block)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pgm_round_trip(img in image(40, 40)) {
        match decode_netpbm(&encode_pgm(&img)).unwrap() {
            Netpbm::Gray(back) => prop_assert_eq!(back, img),
            Netpbm::Rgb(_) => prop_assert!(false, "decoded as colour"),
        }
    }

    #[test]
    fn ppm_round_trip((w, h) in (1usize..32, 1usize..32), seed in any::<u64>()) {
        let mut state = seed;
        let mut next = || { state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (state >> 56) as u8 };
        let layers = [0, 1, 2].map(|_| RasterImage::from_fn(w, h, |_, _| next()).unwrap());
        let rgb = RgbImage::from_layers(layers).unwrap();
        match decode_netpbm(&encode_ppm(&rgb)).unwrap() {
            Netpbm::Rgb(back) => prop_assert_eq!(back, rgb),
            Netpbm::Gray(_) => prop_assert!(false, "decoded as gray"),
        }
    }

    #[test]
    fn wav_round_trip(samples in prop::collection::vec(any::<i8>(), 0..2000), rate in 1u32..96000) {
        let audio = PcmAudio::new(rate, samples);
        prop_assert_eq!(decode_wav(&encode_wav(&audio)).unwrap(), audio);
    }

    #[test]
    fn text_canvas_round_trip(text in prop::collection::vec(any::<u8>(), 0..=256)) {
        prop_assert_eq!(canvas_to_text(&text_to_canvas(&text).unwrap()).unwrap(), text);
    }

    #[test]
    fn scramble_round_trip_and_histogram(img in image(48, 48), seed in any::<u64>()) {
        let key = StegoKey::new("k", seed);
        let noise = im2noise(&img, &key);
        prop_assert_eq!(&noise2im(&noise, &key), &img);
        let mut a = img.samples().to_vec();
        let mut b = noise.samples().to_vec();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        prop_assert_eq!(im2noise(&img, &key), noise);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gray_to_rgb_replicates(img in image(32, 32)) {
        let rgb = gray_to_rgb(&img);
        for layer in Layer::ALL {
            prop_assert_eq!(rgb.layer(layer), &img);
        }
    }

    #[test]
    fn audio_canvas_round_trip(samples in prop::collection::vec(any::<i8>(), 1..5000), rate in 1u32..48000) {
        let audio = PcmAudio::new(rate, samples);
        prop_assert_eq!(canvas_to_audio(&audio_to_canvas(&audio)).unwrap(), audio);
    }

    #[test]
    fn image_canvas_round_trip(img in image(64, 64)) {
        prop_assert_eq!(canvas_to_image(&image_to_canvas(&img, 256, 256).unwrap()).unwrap(), img);
    }

    #[test]
    fn dwt_reconstructs(p in plane(2, 24)) {
        let back = dwt2_inverse(&dwt2_forward(&p).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&p) < 1e-6);
    }

    #[test]
    fn dwt_inverts_random_subbands(
        (ll, lh, hl, hh) in (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            let one = move || prop::collection::vec(-500.0f64..500.0, w * h).prop_map(move |v| CoeffPlane::new(w, h, v).unwrap());
            (one(), one(), one(), one())
        })
    ) {
        let bands = SubbandSet { ll, lh, hl, hh };
        let again = dwt2_forward(&dwt2_inverse(&bands).unwrap()).unwrap();
        prop_assert!(again.ll.max_abs_diff(&bands.ll) < 1e-6);
        prop_assert!(again.lh.max_abs_diff(&bands.lh) < 1e-6);
        prop_assert!(again.hl.max_abs_diff(&bands.hl) < 1e-6);
        prop_assert!(again.hh.max_abs_diff(&bands.hh) < 1e-6);
    }

    #[test]
    fn block_transforms_reconstruct(p in plane(8, 6)) {
        for (fwd, inv) in block_transforms() {
            let c = fwd(&p, 8).unwrap();
            prop_assert!(inv(&c, 8).unwrap().max_abs_diff(&p) < 1e-6);
            prop_assert!((c.energy() - p.energy()).abs() <= 1e-3 * p.energy().max(1e-12));
        }
    }

    #[test]
    fn dft_reconstructs_any_size(p in plane(1, 40)) {
        let s = dft2(&p).unwrap();
        prop_assert!(idft2(&s).unwrap().max_abs_diff(&p) < 1e-6);
        prop_assert!((s.energy() - p.energy()).abs() <= 1e-3 * p.energy().max(1e-12));
    }

    #[test]
    fn transforms_are_linear((a, b) in plane_pair(8, 4), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let mix = combine(&a, &b, s, t);
        let (da, db, dm) = (dwt2_forward(&a).unwrap(), dwt2_forward(&b).unwrap(), dwt2_forward(&mix).unwrap());
        prop_assert!(dm.hh.max_abs_diff(&combine(&da.hh, &db.hh, s, t)) < 1e-6);
        prop_assert!(dm.ll.max_abs_diff(&combine(&da.ll, &db.ll, s, t)) < 1e-6);
        for (fwd, _) in block_transforms() {
            let lhs = fwd(&mix, 8).unwrap();
            let rhs = combine(&fwd(&a, 8).unwrap(), &fwd(&b, 8).unwrap(), s, t);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-6);
        }
        let (fa, fb, fm) = (dft2(&a).unwrap(), dft2(&b).unwrap(), dft2(&mix).unwrap());
        for i in 0..fm.values.len() {
            prop_assert!((fm.values[i] - (fa.values[i] * s + fb.values[i] * t)).norm() < 1e-6);
        }
    }

    #[test]
    fn partition_merge_identity(p in plane(8, 6)) {
        let blocks = partition_blocks(&p, 8).unwrap();
        prop_assert_eq!(blocks.len(), p.width() * p.height() / 64);
        prop_assert_eq!(merge_blocks(&blocks, p.width(), p.height(), 8).unwrap(), p);
    }

    #[test]
    fn ranking_is_sorted_permutation(p in plane(8, 8)) {
        let blocks: Vec<Vec<f64>> = partition_blocks(&p, 8).unwrap().into_iter().map(|b| b.values).collect();
        let ranking = rank_homogeneous(&blocks);
        let mut positions: Vec<usize> = ranking.iter().map(|s| s.position).collect();
        prop_assert!(ranking.windows(2).all(|w| w[0].variance <= w[1].variance));
        positions.sort_unstable();
        prop_assert_eq!(positions, (0..blocks.len()).collect::<Vec<_>>());
    }

    #[test]
    fn selection_is_disjoint(n in 1usize..200, k_frac in 0.0f64..=1.0, e in 0usize..50) {
        let blocks: Vec<Vec<f64>> = (0..n).map(|i| vec![(i % 7) as f64, 0.0]).collect();
        let ranking = rank_homogeneous(&blocks);
        let k = ((n as f64) * k_frac) as usize;
        for rule in [EnhanceRule::TiesWithSelected, EnhanceRule::Count(e), EnhanceRule::Fraction(k_frac)] {
            let sel = select_blocks(&ranking, k, rule).unwrap();
            prop_assert_eq!(sel.selected.len(), k);
            prop_assert!(sel.enhanced.iter().all(|b| !sel.selected.contains(b)));
        }
        prop_assert!(select_blocks(&ranking, n + 1, EnhanceRule::default()).is_err());
    }

    #[test]
    fn enhancement_keeps_mean_and_scales_variance(
        block in prop::collection::vec(-1000.0f64..1000.0, 64),
        g in 1.0f64..4.0,
    ) {
        let mut out = block.clone();
        enhance_block(&mut out, g).unwrap();
        let (m0, v0) = mean_variance(&block);
        let (m1, v1) = mean_variance(&out);
        prop_assert!((m1 - m0).abs() < 1e-9);
        prop_assert!((v1 - g * g * v0).abs() <= 1e-6 * v1.max(1e-12));
    }

    #[test]
    fn metric_invariants((a, b) in image_pair(8, 24)) {
        prop_assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
        prop_assert!(psnr(&a, &a).unwrap().is_infinite());
        prop_assert_eq!(ssim(&a, &a).unwrap(), 1.0);
        let s = ssim(&a, &b).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s));
        prop_assert!((s - ssim(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(epsilon_security(&a, &b) >= 0.0);
        prop_assert_eq!(epsilon_security(&a, &a), 0.0);
        prop_assert!(mutual_information(&a, &b).unwrap() >= 0.0);
        prop_assert!((mutual_information(&a, &a).unwrap() - entropy(&a)).abs() < 1e-9);
    }

    #[test]
    fn fusion_of_identical_copies_is_identity(img in image(32, 32)) {
        prop_assert_eq!(fuse_copies(&img, &img).unwrap(), img);
    }

    #[test]
    fn fusion_is_symmetric((a, b) in image_pair(1, 16)) {
        prop_assert_eq!(fuse_copies(&a, &b).unwrap(), fuse_copies(&b, &a).unwrap());
    }

    #[test]
    fn attacks_are_deterministic(img in image(24, 24), seed in any::<u64>(), which in 0usize..8) {
        let spec = [
            AttackSpec::Identity,
            AttackSpec::GaussianNoise { sigma: 3.0 },
            AttackSpec::SaltPepper { density: 0.05 },
            AttackSpec::MeanFilter { k: 3 },
            AttackSpec::MedianFilter { k: 3 },
            AttackSpec::JpegQuantize { quality: 50 },
            AttackSpec::HistogramEqualize,
            AttackSpec::Rescale { factor: 0.5 },
        ][which];
        let rgb = gray_to_rgb(&img);
        prop_assert_eq!(apply_attack(&rgb, &spec, seed).unwrap(), apply_attack(&rgb, &spec, seed).unwrap());
    }
}

#[test]
fn sidecar_text_round_trips_for_every_transform() {
    use wavesteg::stego::{embed, EmbedParams, Payloads, SlotKeys};
    use wavesteg::synthetic;
    use wavesteg::transforms::TransformKind;
    let cover = synthetic::cover(128, 128, 4);
    let payloads = Payloads::new(b"sidecar", &synthetic::logo(32, 4), &synthetic::voice(3000, 8000, 4), 128, 128).unwrap();
    for transform in TransformKind::ALL {
        for enhance in [EnhanceRule::TiesWithSelected, EnhanceRule::Count(5), EnhanceRule::Fraction(0.75)] {
            let params = EmbedParams { transform, enhance, ..EmbedParams::default() };
            let out = embed(&cover, &payloads, &SlotKeys::from_master(9), &params).unwrap();
            let text = write_sidecar(&out.sidecar);
            assert_eq!(parse_sidecar(&text).unwrap(), out.sidecar);
        }
    }
}
