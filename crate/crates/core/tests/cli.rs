use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use noisebench::{read_pgm, synthetic_image, write_pgm, ImageGrid};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_noisebench"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_image(dir: &Path, name: &str, img: &ImageGrid) -> String {
    let p = dir.join(name);
    fs::write(&p, write_pgm(img)).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn noise_filter_psnr_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let clean = write_image(dir.path(), "clean.pgm", &synthetic_image(64, 64));
    let noisy = dir.path().join("noisy.pgm");
    let out = run(&[
        "noise",
        "--in",
        &clean,
        "--out",
        path(&noisy),
        "--kind",
        "salt_pepper",
        "--density",
        "0.1",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let filtered = dir.path().join("median.pgm");
    let out = run(&[
        "filter",
        "--in",
        path(&noisy),
        "--out",
        path(&filtered),
        "--kind",
        "median",
        "--window",
        "3",
    ]);
    assert!(out.status.success());

    let before = run(&["psnr", "--ref", &clean, "--in", path(&noisy)]);
    let after = run(&["psnr", "--ref", &clean, "--in", path(&filtered)]);
    let db = |o: &Output| {
        String::from_utf8(o.stdout.clone())
            .unwrap()
            .trim()
            .parse::<f64>()
            .unwrap()
    };
    assert!(db(&after) > db(&before) + 5.0);

    let same = run(&["psnr", "--ref", &clean, "--in", &clean]);
    assert_eq!(String::from_utf8(same.stdout).unwrap().trim(), "inf");
}

#[test]
fn hist_csv() {
    let dir = tempfile::tempdir().unwrap();
    let img = write_image(dir.path(), "z.pgm", &ImageGrid::filled(2, 2, 0.0).unwrap());
    let out = run(&["hist", "--in", &img]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 256);
    assert_eq!(text.lines().next(), Some("0,4"));
}

#[test]
fn synth_writes_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.pgm");
    assert!(run(&[
        "synth",
        "--out",
        path(&p),
        "--width",
        "40",
        "--height",
        "30"
    ])
    .status
    .success());
    let img = read_pgm(&fs::read(&p).unwrap()).unwrap();
    assert_eq!((img.width(), img.height()), (40, 30));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let clean = write_image(dir.path(), "c.pgm", &synthetic_image(16, 16));
    let o = dir.path().join("o.pgm");

    let even = run(&[
        "filter",
        "--in",
        &clean,
        "--out",
        path(&o),
        "--kind",
        "mean",
        "--window",
        "4",
    ]);
    assert_eq!(even.status.code(), Some(2));
    let bad = run(&[
        "noise",
        "--in",
        &clean,
        "--out",
        path(&o),
        "--kind",
        "gaussian",
        "--noise-sigma=-1",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    let unknown = run(&["noise", "--in", &clean, "--out", path(&o), "--kind", "pink"]);
    assert_eq!(unknown.status.code(), Some(2));

    let missing = run(&["hist", "--in", path(&dir.path().join("nope.pgm"))]);
    assert_eq!(missing.status.code(), Some(3));
    let p2 = dir.path().join("p2.pgm");
    fs::write(&p2, b"P2 1 1 255\n7\n").unwrap();
    let ascii = run(&["hist", "--in", path(&p2)]);
    assert_eq!(ascii.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&ascii.stderr).contains("unsupported magic"));

    let threads = bin()
        .env("NOISEBENCH_THREADS", "zero")
        .args(["hist", "--in", &clean])
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn bench_writes_csv_markdown_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let clean = write_image(dir.path(), "c.pgm", &synthetic_image(48, 40));
    let csv = dir.path().join("r.csv");
    let md = dir.path().join("r.md");
    let dump = dir.path().join("dump");
    let out = bin()
        .env("NOISEBENCH_THREADS", "2")
        .args([
            "bench",
            "--in",
            &clean,
            "--out",
            path(&csv),
            "--markdown",
            path(&md),
            "--dump-dir",
            path(&dump),
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(fs::read_to_string(&md).unwrap().contains("| noise |"));
    assert_eq!(fs::read_dir(&dump).unwrap().count(), 73);
}
