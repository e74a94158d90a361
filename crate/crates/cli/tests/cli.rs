//! End-to-end tests against the built binary.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const TOY: &str = "\
a b 1
a b 20
b c 3
b c 8
a c 1
a c 22
c d 6
c d 20
a d 4
a d 10
b d 6
b d 23
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tempeel"))
}

fn write_toy(dir: &Path) -> PathBuf {
    let path = dir.join("toy.txt");
    std::fs::write(&path, TOY).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn core_values_match_published_toy_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let out = run(&["core", "--delta", "2", input.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let values: Vec<(String, String, i64, u64)> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (
                f[1].to_string(),
                f[2].to_string(),
                f[3].parse().unwrap(),
                f[4].parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(values.len(), 12);
    let inner = [
        ("a", "b", 1),
        ("b", "c", 3),
        ("b", "c", 8),
        ("a", "c", 1),
        ("c", "d", 6),
        ("b", "d", 6),
    ];
    for (u, v, t, value) in &values {
        let expect = if inner.contains(&(u.as_str(), v.as_str(), *t)) {
            2
        } else {
            1
        };
        assert_eq!(*value, expect, "edge ({u},{v},{t})");
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    for args in [
        vec!["core", "--delta", "p50"],
        vec!["truss", "--delta", "5"],
        vec!["components", "--delta", "2", "--within-core", "2"],
        vec!["stats"],
    ] {
        let mut full = args.clone();
        let input = input.to_str().unwrap();
        full.push(input);
        let a = run(&full);
        let b = run(&full);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn components_within_core_match_published_split() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let out = run(&[
        "components",
        "--delta",
        "2",
        "--within-core",
        "2",
        input.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let rows: Vec<(u32, i64)> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].parse().unwrap(), f[4].parse().unwrap())
        })
        .collect();
    let mut first: Vec<i64> = rows.iter().filter(|(c, _)| *c == 0).map(|&(_, t)| t).collect();
    let mut second: Vec<i64> = rows.iter().filter(|(c, _)| *c == 1).map(|&(_, t)| t).collect();
    first.sort_unstable();
    second.sort_unstable();
    assert_eq!(first, vec![1, 1, 3]);
    assert_eq!(second, vec![6, 6, 8]);
    assert!(text.contains("# components=2"));
}

#[test]
fn shells_extract_levels() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let input = input.to_str().unwrap();

    let out = run(&[
        "shells", "--kind", "core", "--delta", "5", "--k", "2", "--mode", "exactly", input,
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let rows: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect();
    let mut times: Vec<i64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    times.sort_unstable();
    assert_eq!(times, vec![20, 20, 22, 23]);
    assert!(rows.iter().all(|r| r[4] == "2"));

    let out = run(&[
        "shells", "--kind", "core", "--delta", "5", "--k", "2", "--mode", "at-least", input,
    ]);
    let kept = stdout_str(&out)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count();
    assert_eq!(kept, 11); // everything but the one level-1 edge
}

#[test]
fn components_within_truss() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let out = run(&[
        "components",
        "--delta",
        "5",
        "--within-truss",
        "2",
        input.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    // the six early edges are pairwise within Δ=5 of a shared endpoint
    assert!(text.contains("# components=1"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 6);
}

#[test]
fn verify_passes_on_toy_graph() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let out = run(&[
        "verify",
        "--kind",
        "truss",
        "--delta",
        "5",
        input.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout_str(&out).trim_end().ends_with("PASS"));

    let out = run(&["verify", "--delta", "p50", input.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("kind=core"));
    assert!(text.contains("kind=truss"));
    assert!(text.contains("kind=components"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let input = input.to_str().unwrap();

    // usage errors -> 2
    let out = run(&["core", "--delta", "nope", input]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["core", input]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["shells", "--delta", "2", input]);
    assert_eq!(out.status.code(), Some(2)); // missing --k
    let out = run(&[
        "components",
        "--delta",
        "2",
        "--within-core",
        "1",
        "--within-truss",
        "1",
        input,
    ]);
    assert_eq!(out.status.code(), Some(2));

    // domain errors -> 1
    let out = run(&[
        "components",
        "--delta",
        "2",
        "--label-report",
        input, // unlabeled input
    ]);
    assert_eq!(out.status.code(), Some(1));

    let missing = run(&["core", "--delta", "2", "/nonexistent/path.txt"]);
    assert_eq!(missing.status.code(), Some(1));

    let malformed = dir.path().join("bad.txt");
    std::fs::write(&malformed, "a b 1\na b\n").unwrap();
    let out = run(&["core", "--delta", "2", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn interval_and_gzip_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let out = bin()
        .args([
            "core",
            "--delta",
            "2",
            "--interval",
            "1:8",
            input.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows = stdout_str(&out)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count();
    assert_eq!(rows, 7);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("outside_interval=5"), "stderr: {err}");

    // same bytes, gzip-compressed
    let gz_path = dir.path().join("toy.txt.gz");
    let mut enc = flate2::write::GzEncoder::new(
        std::fs::File::create(&gz_path).unwrap(),
        flate2::Compression::default(),
    );
    enc.write_all(TOY.as_bytes()).unwrap();
    enc.finish().unwrap();
    let gz_out = run(&["core", "--delta", "2", gz_path.to_str().unwrap()]);
    assert!(gz_out.status.success());
    let plain_out = run(&["core", "--delta", "2", input.to_str().unwrap()]);
    assert_eq!(gz_out.stdout, plain_out.stdout);
}

#[test]
fn stats_constant_iets_pin_all_percentiles() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("even.txt");
    std::fs::write(&path, "a b 0\na c 5\na d 10\n").unwrap();
    let out = run(&["stats", "--percentiles", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    for p in ["0.1", "0.25", "0.5", "0.75"] {
        assert!(
            text.contains(&format!("percentile\t{p}\t5")),
            "missing percentile {p} in:\n{text}"
        );
    }
}

#[test]
fn stats_csv_switches_delimiter() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let out = run(&["stats", "--csv", input.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("percentile,0.5,3"));
    assert!(!text.lines().any(|l| l.starts_with("percentile\t")));
}

#[test]
fn output_file_and_tmpdir_override() {
    let dir = tempfile::tempdir().unwrap();
    let staging = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let out_path = dir.path().join("result.tsv");
    let out = bin()
        .args([
            "core",
            "--delta",
            "2",
            "-o",
            out_path.to_str().unwrap(),
            input.to_str().unwrap(),
        ])
        .env("TEMPEEL_TMPDIR", staging.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with("# kind=core delta=2\n"));
    // no staging leftovers
    assert_eq!(std::fs::read_dir(staging.path()).unwrap().count(), 0);
}

#[test]
fn generate_is_seed_deterministic() {
    let a = run(&["generate", "--nodes", "10", "--edges", "30", "--span", "99", "--seed", "7"]);
    let b = run(&["generate", "--nodes", "10", "--edges", "30", "--span", "99", "--seed", "7"]);
    let c = run(&["generate", "--nodes", "10", "--edges", "30", "--span", "99", "--seed", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);

    // generated output loads back through the pipeline
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.txt");
    std::fs::write(&path, &a.stdout).unwrap();
    let out = run(&["verify", "--delta", "p50", path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn labeled_pipeline_over_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("labeled.txt");
    std::fs::write(
        &path,
        "a1 a2 0 0\na2 a3 3 0\na1 a2 1000 1\na2 a3 1004 1\nd1 d2 2000 0\nd2 d3 2006 1\n",
    )
    .unwrap();
    let out = run(&[
        "components",
        "--delta",
        "10",
        "--labeled",
        "--label-report",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("# label_totals claims_only=1 facts_only=1 mixed=1"));
    assert!(text.contains("claims_only"));
    assert!(text.contains("mixed"));
}
