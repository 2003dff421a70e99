//! End-to-end drives of the workbench binary: exit-code contract, formats,
//! corpus errors, seed override, determinism.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weightlab"))
}

#[test]
fn census_single_group_passes() {
    let dir = std::env::temp_dir().join("weightlab_test_census");
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("one.txt");
    std::fs::write(&corpus, "S3 ; 3 ; (1 2 3), (1 2)\n").unwrap();
    let out = bin()
        .args(["census", "--p", "3", "--corpus"])
        .arg(&corpus)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"alperin\""));
    assert!(text.contains("\"fail\":0"));
    assert!(text.lines().next().unwrap().contains("\"schema\":1"));
}

#[test]
fn empty_corpus_is_ok() {
    let dir = std::env::temp_dir().join("weightlab_test_empty");
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("empty.txt");
    std::fs::write(&corpus, "# nothing here\n").unwrap();
    let out = bin().args(["census", "--corpus"]).arg(&corpus).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn parse_error_exit_code_2() {
    let dir = std::env::temp_dir().join("weightlab_test_bad");
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("bad.txt");
    std::fs::write(&corpus, "Broken ; x ; (1 2)\n").unwrap();
    let out = bin().args(["census", "--corpus"]).arg(&corpus).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1"), "stderr: {err}");
}

#[test]
fn navarro_refuses_even_order() {
    let dir = std::env::temp_dir().join("weightlab_test_navarro");
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("s3.txt");
    std::fs::write(&corpus, "S3 ; 3 ; (1 2 3), (1 2)\n").unwrap();
    let out = bin()
        .args(["navarro", "--p", "3", "--corpus"])
        .arg(&corpus)
        .output()
        .unwrap();
    // refusal is not a failure
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("refused"));
    assert!(text.contains("\"n/a\""));
}

#[test]
fn tsv_format() {
    let dir = std::env::temp_dir().join("weightlab_test_tsv");
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("c3.txt");
    std::fs::write(&corpus, "C3 ; 3 ; (1 2 3)\n").unwrap();
    let out = bin()
        .args(["weights", "--p", "3", "--format", "tsv", "--corpus"])
        .arg(&corpus)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("kind\tgroup\tp"));
}

#[test]
fn seed_env_override_and_determinism() {
    let dir = std::env::temp_dir().join("weightlab_test_seed");
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("f21.txt");
    std::fs::write(&corpus, "F21 ; 7 ; (1 2 3 4 5 6 7), (2 3 5)(4 7 6)\n").unwrap();
    let run = |seed: &str| -> String {
        let out = bin()
            .args(["census", "--p", "3", "--checks", "alperin", "--corpus"])
            .arg(&corpus)
            .env("WEIGHTLAB_SEED", seed)
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|l| !l.contains("timestamp"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = run("0xfeed");
    let b = run("0xfeed");
    assert_eq!(a, b, "same seed must give byte-identical reports");
    // seed echoed in header is the env value
    let out = bin()
        .args(["selftest"])
        .env("WEIGHTLAB_SEED", "0xbeef")
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0xbeef"));
}

#[test]
fn selftest_passes() {
    let out = bin().args(["selftest"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"fail\":0"));
}
