use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn playprof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_playprof")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn repeated_compare_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let gen = tmp.path().join("gen");
    let out = playprof(&["generate", "--seed", "4", "--out", path(&gen)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let telemetry = gen.join("telemetry.csv");
    let schedule = gen.join("schedule.csv");

    let mut runs = Vec::new();
    for name in ["a", "b"] {
        let dir = tmp.path().join(name);
        let out = playprof(&[
            "compare",
            "--input",
            path(&telemetry),
            "--schedule",
            path(&schedule),
            "--k",
            "6",
            "--seed",
            "3",
            "--out",
            path(&dir),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        runs.push(dir_bytes(&dir));
    }
    assert!(runs[0].len() >= 5);
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn synthetic_compare_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for dir in &dirs {
        let out = playprof(&[
            "compare",
            "--synthetic",
            &data("synthetic_default.toml"),
            "--methods",
            "kmeans,archetypal",
            "--out",
            path(dir),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(dir_bytes(&dirs[0]), dir_bytes(&dirs[1]));
}

#[test]
fn toy_pairs_cluster_exactly() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("toy");
    let out = playprof(&[
        "compare",
        "--input",
        &data("toy_pairs.csv"),
        "--schedule",
        &data("schedule_toy.csv"),
        "--k",
        "2",
        "--methods",
        "kmeans",
        "--out",
        path(&dir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    let method = &report["methods"][0];
    assert_eq!(method["method"], "kmeans");
    assert_eq!(method["reconstruction_error"], 0.0);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let toy = data("toy_pairs.csv");
    let schedule = data("schedule_toy.csv");
    let compare = |extra: &[&str]| {
        let mut args = vec!["compare", "--input", &toy, "--schedule", &schedule, "--out", path(&out_dir)];
        args.extend_from_slice(extra);
        playprof(&args).status.code()
    };
    assert_eq!(compare(&["--k", "2", "--methods", "kmeans"]), Some(0));
    assert_eq!(compare(&["--k", "9"]), Some(2));
    assert_eq!(compare(&["--methods", "spectral"]), Some(2));
    assert_eq!(playprof(&["compare", "--bogus"]).status.code(), Some(2));

    let bad = tmp.path().join("bad.csv");
    std::fs::write(&bad, "player_id,day_index,level\na,0,3\na,x,4\n").unwrap();
    let out = playprof(&["compare", "--input", path(&bad), "--schedule", &schedule, "--out", path(&out_dir)]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bad.csv") && stderr.contains('3'), "{stderr}");
}

#[test]
fn generate_then_validate() {
    let tmp = tempfile::tempdir().unwrap();
    let gen = tmp.path().join("gen");
    let spec = tmp.path().join("small.toml");
    std::fs::write(
        &spec,
        std::fs::read_to_string(data("synthetic_default.toml"))
            .unwrap()
            .replace("n_players = 2000", "n_players = 300"),
    )
    .unwrap();
    let out = playprof(&["generate", "--spec", path(&spec), "--out", path(&gen)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["telemetry.csv", "schedule.csv", "spec.toml", "planted.csv"] {
        assert!(gen.join(f).exists(), "{f}");
    }
    let planted = std::fs::read_to_string(gen.join("planted.csv")).unwrap();
    assert_eq!(planted.lines().count(), 9);

    let out = playprof(&[
        "validate",
        "--input",
        path(&gen.join("telemetry.csv")),
        "--schedule",
        path(&gen.join("schedule.csv")),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("players: 300"), "{stdout}");
    assert!(stdout.contains("aggregate_legality: 1"), "{stdout}");
}
