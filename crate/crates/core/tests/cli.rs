//! Command-line behaviour: exit codes, outputs and determinism.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use wavesteg::imagecore::{gray_to_rgb, load_gray, load_rgb};

fn wavesteg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavesteg")).args(args).output().unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn embed(dir: &Path, key: &str, extra: &[&str]) -> Output {
    let mut args = vec![
        "embed".to_string(),
        "--cover".into(),
        p(dir, "cover.pgm"),
        "--text".into(),
        p(dir, "text.txt"),
        "--logo".into(),
        p(dir, "logo.pgm"),
        "--audio".into(),
        p(dir, "audio.wav"),
        "--master-key".into(),
        key.into(),
        "--out-stego".into(),
        p(dir, "stego.ppm"),
        "--out-sidecar".into(),
        p(dir, "stego.sidecar"),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    wavesteg(&refs)
}

fn extract(dir: &Path, key: &str, out: &str) -> Output {
    wavesteg(&[
        "extract", "--stego", &p(dir, "stego.ppm"), "--cover", &p(dir, "cover.pgm"), "--sidecar",
        &p(dir, "stego.sidecar"), "--master-key", key, "--out-dir", &p(dir, out), "--reference-text",
        &p(dir, "text.txt"), "--reference-logo", &p(dir, "logo.pgm"), "--reference-audio", &p(dir, "audio.wav"),
    ])
}

fn csv_value(csv: &str, prefix: &str) -> f64 {
    let line = csv.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no row {prefix}"));
    let v = line.rsplit(',').next().unwrap();
    if v == "inf" {
        f64::INFINITY
    } else {
        v.parse().unwrap()
    }
}

#[test]
fn missing_cover_is_a_usage_error() {
    let out = wavesteg(&["embed", "--text", "t", "--logo", "l", "--audio", "a", "--master-key", "1", "--out-stego", "s"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_arguments_are_usage_errors() {
    for args in [
        vec!["attack", "--stego", "x.ppm", "--spec", "blur:3", "--out", "y.ppm"],
        vec!["extract", "--stego", "s", "--cover", "c", "--sidecar", "x", "--master-key", "zz", "--out-dir", "d"],
        vec!["bogus"],
    ] {
        assert_eq!(wavesteg(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(wavesteg(&["--help"]).status.code(), Some(0));
}

#[test]
fn embed_writes_stego_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    common::write_standard(dir.path(), 1);
    let out = embed(dir.path(), "0xabc", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("stego.ppm").is_file());
    assert!(dir.path().join("stego.sidecar").is_file());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("PSNR"), "{stdout}");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 6);
}

#[test]
fn degenerate_parameters_reproduce_the_cover() {
    let dir = tempfile::tempdir().unwrap();
    common::write_standard(dir.path(), 1);
    let out = embed(dir.path(), "1", &["--alpha", "0", "--gain", "1"]);
    assert!(out.status.success());
    let cover = load_gray(dir.path().join("cover.pgm")).unwrap();
    assert_eq!(load_rgb(dir.path().join("stego.ppm")).unwrap(), gray_to_rgb(&cover));
}

#[test]
fn embed_then_extract_recovers_the_text() {
    let dir = tempfile::tempdir().unwrap();
    common::write_standard(dir.path(), 2);
    assert!(embed(dir.path(), "0x5eed", &[]).status.success());
    let out = extract(dir.path(), "0x5eed", "rec");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rec = dir.path().join("rec");
    assert_eq!(std::fs::read(rec.join("text.txt")).unwrap(), std::fs::read(dir.path().join("text.txt")).unwrap());
    for name in ["text_ll.txt", "text_hh.txt", "logo.pgm", "logo_ll.pgm", "logo_hh.pgm", "audio.wav", "audio_ll.wav", "audio_hh.wav"] {
        assert!(rec.join(name).is_file(), "{name}");
    }
    let report = std::fs::read_to_string(rec.join("report.csv")).unwrap();
    assert!(csv_value(&report, "logo,image,fused,ssim,") > 0.97);
}

#[test]
fn wrong_master_key_yields_garbage_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    common::write_standard(dir.path(), 2);
    assert!(embed(dir.path(), "0x5eed", &[]).status.success());
    let out = extract(dir.path(), "0x5eee", "rec");
    assert_eq!(out.status.code(), Some(0));
    let report = std::fs::read_to_string(dir.path().join("rec/report.csv")).unwrap();
    for kind in ["text", "image", "audio"] {
        let v = csv_value(&report, &format!("logo,{kind},fused,ssim,"));
        assert!(v < 0.2, "{kind}: {v}");
    }
}

#[test]
fn extract_without_references_reports_copy_agreement() {
    let dir = tempfile::tempdir().unwrap();
    common::write_standard(dir.path(), 2);
    assert!(embed(dir.path(), "42", &[]).status.success());
    let out = wavesteg(&[
        "extract", "--stego", &p(dir.path(), "stego.ppm"), "--cover", &p(dir.path(), "cover.pgm"), "--sidecar",
        &p(dir.path(), "stego.sidecar"), "--master-key", "42", "--out-dir", &p(dir.path(), "rec"),
    ]);
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.path().join("rec/report.csv")).unwrap();
    assert_eq!(csv_value(&report, "agreement,text,LL-HH,ber,"), 0.0);
}

#[test]
fn evaluate_cover_against_itself() {
    let dir = tempfile::tempdir().unwrap();
    common::write_standard(dir.path(), 3);
    let out = wavesteg(&["evaluate", "--cover", &p(dir.path(), "cover.pgm"), "--stego", &p(dir.path(), "cover.pgm")]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("scope,name,band,metric,value"));
    for layer in ["R", "G", "B"] {
        assert!(csv.contains(&format!("layer,{layer},-,psnr,inf")));
        assert!(csv.contains(&format!("layer,{layer},-,ssim,1.000000")));
        assert!(csv.contains(&format!("layer,{layer},-,epsilon,0.000000")));
    }
}

#[test]
fn capacity_and_io_failures_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    wavesteg::imagecore::save_gray(&wavesteg::synthetic::cover(64, 64, 1), d.join("cover.pgm")).unwrap();
    wavesteg::imagecore::save_gray(&wavesteg::synthetic::logo(16, 1), d.join("logo.pgm")).unwrap();
    wavesteg::imagecore::save_wav(&wavesteg::synthetic::voice(100, 8000, 1), d.join("audio.wav")).unwrap();
    std::fs::write(d.join("text.txt"), "hello").unwrap();
    assert_eq!(embed(d, "1", &[]).status.code(), Some(3));
    std::fs::remove_file(d.join("logo.pgm")).unwrap();
    assert_eq!(embed(d, "1", &[]).status.code(), Some(1));
}

#[test]
fn attack_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    common::write_standard(dir.path(), 4);
    let run = |seed: &str, out: &str| {
        let o = wavesteg(&["attack", "--stego", &p(dir.path(), "cover.pgm"), "--spec", "saltpepper:0.1", "--seed", seed, "--out", &p(dir.path(), out)]);
        assert!(o.status.success());
        std::fs::read(dir.path().join(out)).unwrap()
    };
    assert_eq!(run("3", "a.ppm"), run("3", "b.ppm"));
    assert_ne!(run("3", "a.ppm"), run("4", "c.ppm"));
}

#[test]
fn compare_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.conf"),
        "cover = synthetic:1\ntext = synthetic:64\nlogo = synthetic:1\naudio = synthetic:1\ntransforms = dwt,dct,wht,dft\nattack = none\n",
    )
    .unwrap();
    let out = wavesteg(&["compare", "--config", &p(dir.path(), "run.conf")]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    // per transform: stego psnr, 3 logos x 4 metrics, mean ber
    assert_eq!(csv.lines().count(), 1 + 4 * 14);
    assert!(csv.lines().nth(1).unwrap().contains(",dwt,none,-,stego,psnr,"));
}
