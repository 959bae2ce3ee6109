use std::path::Path;
use std::process::{Command, Output};

fn shadowclass(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadowclass"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = shadowclass(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn full_run(dir: &Path) {
    for cmd in ["generate", "preprocess", "train", "evaluate", "report"] {
        ok(dir, &[cmd, "--out", "o"]);
    }
}

#[test]
fn pipeline_is_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    full_run(a.path());
    full_run(b.path());
    let mut names: Vec<_> = std::fs::read_dir(a.path().join("o"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 10, "{names:?}");
    for name in names {
        let x = std::fs::read(a.path().join("o").join(&name)).unwrap();
        let y = std::fs::read(b.path().join("o").join(&name)).unwrap();
        assert!(x == y, "{name:?} differs");
    }
}

#[test]
fn generate_and_train_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(dir.path(), &["generate", "--out", "o"]);
    assert!(stdout.contains("20 samples"));
    assert!(stdout.contains("500 shots x 51 qubits"));
    let text = std::fs::read_to_string(dir.path().join("o/dataset.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 20);

    let stdout = ok(dir.path(), &["preprocess", "--out", "o"]);
    assert!(stdout.contains("explained variance"));
    let features = std::fs::read_to_string(dir.path().join("o/features.csv")).unwrap();
    assert_eq!(features.lines().next(), Some("sample_id,label,f0,f1,f2,f3"));
    assert_eq!(features.lines().count(), 21);

    let stdout = ok(dir.path(), &["train", "--out", "o"]);
    assert!(stdout.contains("test  accuracy 100.00% (3/3)"), "{stdout}");
    let report = std::fs::read_to_string(dir.path().join("o/report.json")).unwrap();
    assert!(report.contains("\"accuracy\""));

    let epochs = std::fs::read_to_string(dir.path().join("o/epochs.csv")).unwrap();
    let mut lines = epochs.lines();
    assert_eq!(
        lines.next(),
        Some("epoch,train_loss,val_loss,train_acc,precision,f1")
    );
    assert_eq!(lines.count(), 7);
}

#[test]
fn missing_dataset_is_a_clean_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = shadowclass(dir.path(), &["preprocess", "--dataset", "absent.jsonl"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("absent.jsonl"), "{err}");
}

#[test]
fn evaluate_rejects_mismatched_widths() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["generate", "--out", "a"]);
    ok(dir.path(), &["train", "--out", "a"]);
    std::fs::write(
        dir.path().join("small.toml"),
        "n_qubits = 9\nn_shots = 50\n",
    )
    .unwrap();
    ok(
        dir.path(),
        &["generate", "--config", "small.toml", "--out", "b"],
    );
    let out = shadowclass(
        dir.path(),
        &[
            "evaluate",
            "--dataset",
            "b/dataset.jsonl",
            "--model",
            "a/pipeline_model.json",
            "--report",
            "a/report.json",
            "--out",
            "b",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("qubits"));
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        shadowclass(dir.path(), &["train", "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(
        shadowclass(dir.path(), &["generate", "--mode", "wrong"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(shadowclass(dir.path(), &[]).status.code(), Some(1));
    std::fs::write(dir.path().join("bad.toml"), "n_qbits = 3\n").unwrap();
    assert_eq!(
        shadowclass(dir.path(), &["generate", "--config", "bad.toml"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(shadowclass(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "seed = 3\nn_qubits = 12\nn_shots = 40\n",
    )
    .unwrap();
    ok(
        dir.path(),
        &["generate", "--config", "run.toml", "--out", "file"],
    );
    ok(
        dir.path(),
        &[
            "generate", "--config", "run.toml", "--seed", "4", "--out", "flag",
        ],
    );
    std::fs::write(
        dir.path().join("four.toml"),
        "seed = 4\nn_qubits = 12\nn_shots = 40\n",
    )
    .unwrap();
    ok(
        dir.path(),
        &["generate", "--config", "four.toml", "--out", "four"],
    );
    let read = |d: &str| std::fs::read(dir.path().join(d).join("dataset.jsonl")).unwrap();
    assert_ne!(read("file"), read("flag"));
    assert_eq!(read("flag"), read("four"));
}
