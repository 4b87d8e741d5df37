use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn satclass(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satclass"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = satclass(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn stderr_line(out: &Output) -> String {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("error ")).collect();
    assert_eq!(lines.len(), 1, "stderr: {text}");
    lines[0].to_string()
}

/// Small survey so each test finishes quickly.
const SMALL: &[&str] = &["--n-inlines", "3", "--n-crosslines", "3", "--trace-samples", "401"];

fn synth_and_prep(dir: &Path) {
    let mut args = vec!["synth", "--out", "data"];
    args.extend_from_slice(SMALL);
    ok(dir, &args);
    ok(dir, &["prep", "--wells", "data/wells.csv", "--traces", "data/traces.csv", "--out", "prep"]);
}

fn files(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (PathBuf::from(p.file_name().unwrap()), fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn default_pipeline_reaches_target_g() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["synth", "--out", "data"]);
    ok(d, &["prep", "--wells", "data/wells.csv", "--traces", "data/traces.csv", "--out", "prep"]);
    ok(d, &["relief", "--data", "prep", "--out", "relief"]);
    ok(d, &["train", "--data", "prep", "--selected", "relief/selected_features.txt", "--out", "model"]);
    ok(d, &["evaluate", "--data", "prep", "--selected", "relief/selected_features.txt", "--out", "eval"]);

    let reports = fs::read_to_string(d.join("eval/reports.csv")).unwrap();
    let svdd: Vec<f64> = reports
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|f| f[1] == "SVDD")
        .map(|f| f[2].parse().unwrap())
        .collect();
    assert_eq!(svdd.len(), 4);
    assert!(svdd.iter().all(|&g| g >= 0.9), "{svdd:?}");
    for sub in ["data", "prep", "relief", "model", "eval"] {
        let header = fs::read_to_string(d.join(sub).join("run_header.txt")).unwrap();
        assert!(header.starts_with("satclass "));
        assert!(header.contains("seed = 7\n"));
        assert!(header.contains("config_hash = "));
    }
}

#[test]
fn subcommands_are_idempotent() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    for out in ["a", "b"] {
        let mut args = vec!["synth", "--out", out];
        args.extend_from_slice(SMALL);
        ok(d, &args);
    }
    assert_eq!(files(&d.join("a")), files(&d.join("b")));

    synth_and_prep(d);
    let runs: [&[&str]; 4] = [
        &["prep", "--wells", "data/wells.csv", "--traces", "data/traces.csv"],
        &["relief", "--data", "prep"],
        &["train", "--data", "prep", "--c", "0.05"],
        &["evaluate", "--data", "prep", "--c", "0.05"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let outs = [format!("r{i}a"), format!("r{i}b")];
        for out in &outs {
            let mut a = args.to_vec();
            a.extend_from_slice(&["--out", out]);
            ok(d, &a);
        }
        // Timings are the only fields allowed to differ.
        let strip = |v: Vec<(PathBuf, Vec<u8>)>| {
            v.into_iter()
                .filter(|(p, _)| {
                    let name = p.to_string_lossy();
                    name != "reports.csv" && !name.starts_with("table_seconds")
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(files(&d.join(&outs[0]))), strip(files(&d.join(&outs[1]))), "{args:?}");
    }
}

#[test]
fn saved_model_predicts_like_in_process_run() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    synth_and_prep(d);
    ok(d, &["train", "--data", "prep", "--held-out", "B", "--out", "model"]);
    ok(d, &["evaluate", "--data", "prep", "--held-out", "B", "--model", "model/model.txt", "--out", "saved"]);
    ok(d, &["evaluate", "--data", "prep", "--held-out", "B", "--out", "inproc"]);
    let saved = fs::read(d.join("saved/predictions_B.csv")).unwrap();
    let inproc = fs::read(d.join("inproc/predictions_B.csv")).unwrap();
    assert!(saved.len() > 100);
    assert_eq!(saved, inproc);
}

#[test]
fn volume_sections_are_written() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    synth_and_prep(d);
    ok(d, &["train", "--data", "prep", "--out", "model"]);
    ok(d, &[
        "classify-volume", "--model", "model/model.txt", "--traces", "data/traces.csv",
        "--inlines", "156", "--section-format", "pgm", "--workers", "2", "--out", "vol",
    ]);
    let pgm = fs::read(d.join("vol/section_inline156.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n3 "));
    assert!(!d.join("vol/section_inline156.csv").exists());

    let out = satclass(d, &[
        "classify-volume", "--model", "model/model.txt", "--traces", "data/traces.csv",
        "--inlines", "999", "--out", "vol2",
    ]);
    assert!(stderr_line(&out).starts_with("error kind=NoSuchInline "));
}

#[test]
fn missing_input_names_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    let out = satclass(tmp.path(), &["prep", "--wells", "nowhere/wells.csv", "--traces", "t.csv"]);
    assert!(!out.status.success());
    let line = stderr_line(&out);
    assert!(line.starts_with("error kind=IoError "), "{line}");
    assert!(line.contains("nowhere/wells.csv"), "{line}");
}

#[test]
fn infeasible_c_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    synth_and_prep(d);
    let out = satclass(d, &["train", "--data", "prep", "--c", "0.0001", "--out", "m"]);
    assert!(!out.status.success());
    assert!(stderr_line(&out).starts_with("error kind=InfeasibleC "));
}

#[test]
fn config_file_and_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    fs::write(d.join("run.cfg"), "# tiny survey\nn_inlines = 2\nn_crosslines = 2\ntrace_samples = 201\nseed = 3\n").unwrap();
    ok(d, &["synth", "--config", "run.cfg", "--seed", "4", "--out", "s"]);
    let header = fs::read_to_string(d.join("s/run_header.txt")).unwrap();
    assert!(header.contains("seed = 4\n"), "{header}");
    assert_eq!(fs::read_to_string(d.join("s/traces.csv")).unwrap().lines().count(), 1 + 4 * 5);

    fs::write(d.join("bad.cfg"), "colour = red\n").unwrap();
    let out = satclass(d, &["synth", "--config", "bad.cfg"]);
    assert!(stderr_line(&out).starts_with("error kind=ConfigError "));

    let out = satclass(d, &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).starts_with("error kind=UsageError "));

    let out = satclass(d, &["train", "--out", "t"]);
    assert!(stderr_line(&out).starts_with("error kind=ConfigError "));
}
