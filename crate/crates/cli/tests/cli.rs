use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const APA: &str = "[H [A John] [P kicked] [A [F the] [C ball]]] .\n";
const AMBIGUOUS: &str =
    "[H [A the dog] [P barked]] [L and] [H [A the dog] [P ran]] [H [P slept] (the dog A)]\n";

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/corpus")
}

fn ucca(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ucca"))
        .args(args)
        .current_dir(dir)
        .env_remove("UCCA_CONFIG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// A temp dir holding the whole fixture corpus.
fn corpus_copy() -> (TempDir, Vec<String>) {
    let dir = TempDir::new().unwrap();
    let mut names = Vec::new();
    for entry in fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        fs::copy(&path, dir.path().join(&name)).unwrap();
        names.push(name);
    }
    names.sort();
    (dir, names)
}

fn with_file(name: &str, text: &str) -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join(name), text).unwrap();
    dir
}

#[test]
fn parse_corpus_writes_one_json_per_input() {
    let (dir, names) = corpus_copy();
    let out = dir.path().join("out");
    let mut args = vec!["parse", "--out-dir", "out"];
    args.extend(names.iter().map(String::as_str));
    let o = ucca(&args, dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), names.len());
    for name in &names {
        let json = out.join(name.replace(".txt", ".ucca.json"));
        let v: Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
        assert_eq!(v["format_version"], "1");
    }
}

#[test]
fn parse_unbalanced_reports_offset() {
    let dir = with_file("bad.txt", "[H [A John] [P kicked [A the ball]]");
    let o = ucca(&["parse", "bad.txt"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).is_empty());
    assert!(
        stderr(&o).contains("unbalanced brackets at byte "),
        "{}",
        stderr(&o)
    );
    assert!(!dir.path().join("bad.ucca.json").exists());
}

#[test]
fn parse_keep_going_writes_the_good_files() {
    let dir = with_file("bad.txt", "[H [A John]");
    fs::write(dir.path().join("good.txt"), APA).unwrap();
    let o = ucca(&["parse", "bad.txt", "good.txt"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(!dir.path().join("good.ucca.json").exists());

    let o = ucca(
        &["parse", "--keep-going", "bad.txt", "good.txt"],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).is_empty());
    assert!(dir.path().join("good.ucca.json").exists());
    assert!(stderr(&o).contains("bad.txt"));
}

#[test]
fn lenient_remotes_warn() {
    let dir = with_file("amb.txt", AMBIGUOUS);
    let o = ucca(&["parse", "amb.txt"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("ambiguous remote"));

    let o = ucca(&["parse", "--lenient-remotes", "amb.txt"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    assert!(dir.path().join("amb.ucca.json").exists());
}

#[test]
fn multi_passage_files_get_numbered_outputs() {
    let dir = with_file("two.txt", &format!("{APA}\n[H [P Thank you UNA]]\n"));
    let o = ucca(&["parse", "two.txt"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let first = fs::read_to_string(dir.path().join("two.1.ucca.json")).unwrap();
    assert!(first.contains("\"id\": \"two#1\""));
    assert!(dir.path().join("two.2.ucca.json").exists());
}

#[test]
fn validate_conforming_corpus() {
    let (dir, names) = corpus_copy();
    let mut args = vec!["validate", "--format", "json"];
    args.extend(names.iter().map(String::as_str));
    let o = ucca(&args, dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["severity"] != "error"));
}

#[test]
fn validate_r1_mutant() {
    let dir = with_file("r1.txt", "[A [A John] [P kicked] [A [F the] [C ball]]] .\n");
    let o = ucca(&["validate", "r1.txt"], dir.path());
    assert_eq!(code(&o), 1);
    let lines: Vec<_> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 1, "{lines:?}");
    assert!(lines[0].contains("R1"));

    let o = ucca(&["validate", "--format", "json", "r1.txt"], dir.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let diags = v.as_array().unwrap();
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0]["rule"], "R1");
    assert_eq!(diags[0]["file"], "r1.txt");
}

#[test]
fn validate_config_from_flag_and_env() {
    let dir = with_file("r1.txt", "[A [A John] [P kicked] [A [F the] [C ball]]] .\n");
    fs::write(dir.path().join("quiet.conf"), "# relax\nR1 = warning\n").unwrap();
    let o = ucca(
        &["validate", "--config", "quiet.conf", "r1.txt"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("warning R1"));

    let o = Command::new(env!("CARGO_BIN_EXE_ucca"))
        .args(["validate", "r1.txt"])
        .current_dir(dir.path())
        .env("UCCA_CONFIG", "quiet.conf")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);

    fs::write(dir.path().join("broken.conf"), "R99 = error\n").unwrap();
    let o = ucca(
        &["validate", "--config", "broken.conf", "r1.txt"],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).is_empty());
}

#[test]
fn validate_unparseable_input() {
    let dir = with_file("bad.txt", "[H [Q+Z x]]");
    let o = ucca(&["validate", "bad.txt"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).is_empty());
}

#[test]
fn convert_round_trips_corpus() {
    let (dir, names) = corpus_copy();
    for name in &names {
        let stem = name.trim_end_matches(".txt");
        let o = ucca(&["convert", name], dir.path());
        assert_eq!(code(&o), 0, "{name}: {}", stderr(&o));
        let json = stdout(&o);
        let json_path = format!("{stem}.ucca.json");
        fs::write(dir.path().join(&json_path), &json).unwrap();
        for side in ["left", "right"] {
            let o = ucca(&["convert", &json_path, "--label-side", side], dir.path());
            assert_eq!(code(&o), 0);
            let text_path = format!("{stem}.{side}");
            fs::write(dir.path().join(&text_path), stdout(&o)).unwrap();
            let back = ucca(
                &["convert", &text_path, "--from", "text", "--to", "json"],
                dir.path(),
            );
            assert_eq!(code(&back), 0);
            let again =
                stdout(&back).replace(&format!("\"{stem}.{side}\""), &format!("\"{stem}\""));
            assert_eq!(again, json, "{name} {side}");
        }
    }
}

#[test]
fn convert_right_labels() {
    let dir = with_file("apa.txt", APA);
    let o = ucca(
        &[
            "convert",
            "apa.txt",
            "--to",
            "text",
            "--label-side",
            "right",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "[[John A] [kicked P] [[the F] [ball C] A] H] .\n"
    );

    let dir = with_file(
        "took.txt",
        "[H [A John] [P- took] [A [E the] [C book]] [-P up on]]",
    );
    let o = ucca(
        &[
            "convert",
            "took.txt",
            "--to",
            "text",
            "--label-side",
            "right",
        ],
        dir.path(),
    );
    assert_eq!(
        stdout(&o),
        "[[John A] [took P-] [[the E] [book C] A] [up on -P] H]\n"
    );
}

#[test]
fn usage_errors() {
    let dir = with_file("apa.txt", APA);
    for args in [
        &["convert", "apa.txt", "--to", "yaml"][..],
        &["score", "apa.txt"][..],
        &["frobnicate"][..],
        &["parse"][..],
    ] {
        let o = ucca(args, dir.path());
        assert_eq!(code(&o), 3, "{args:?}");
        assert!(stdout(&o).is_empty());
    }
    let o = ucca(&["--help"], dir.path());
    assert_eq!(code(&o), 0);
    for sub in ["parse", "validate", "convert", "score", "stats"] {
        assert!(stdout(&o).contains(sub));
    }
}

#[test]
fn score_self_and_mutated() {
    let dir = with_file("gold.txt", APA);
    let o = ucca(
        &["score", "gold.txt", "gold.txt", "--format", "json"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["labeled"]["primary"]["f1"], 1.0);

    fs::write(
        dir.path().join("pred.txt"),
        "[H [A John] [P kicked] [D [F the] [C ball]]] .\n",
    )
    .unwrap();
    let o = ucca(
        &["score", "gold.txt", "pred.txt", "--format", "json"],
        dir.path(),
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let f1 = v["labeled"]["primary"]["f1"].as_f64().unwrap();
    assert!(f1 > 0.0 && f1 < 1.0, "{f1}");
    assert_eq!(v["unlabeled"]["primary"]["f1"], 1.0);

    let o = ucca(
        &["score", "gold.txt", "pred.txt", "--mode", "unlabeled"],
        dir.path(),
    );
    assert!(stdout(&o).lines().nth(3).unwrap().contains("1.0000"));
}

#[test]
fn score_token_mismatch() {
    let dir = with_file("gold.txt", APA);
    fs::write(
        dir.path().join("pred.txt"),
        "[H [A Mary] [P kicked] [A [F the] [C ball]]] .\n",
    )
    .unwrap();
    let o = ucca(&["score", "gold.txt", "pred.txt"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).is_empty());
}

#[test]
fn stats_empty_single_and_additive() {
    let dir = with_file("apa.txt", APA);
    let o = ucca(&["stats"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().all(|l| l.ends_with(" 0")));

    let o = ucca(&["stats", "apa.txt", "--format", "json"], dir.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["by_category"]["P"], 1);
    assert_eq!(v["by_category"]["A"], 2);

    let (dir, names) = corpus_copy();
    let edges = |names: &[String]| {
        let mut args = vec!["stats", "--format", "json"];
        args.extend(names.iter().map(String::as_str));
        let v: Value = serde_json::from_str(&stdout(&ucca(&args, dir.path()))).unwrap();
        v["edges"].as_u64().unwrap()
    };
    let per_file: u64 = names.iter().map(|n| edges(std::slice::from_ref(n))).sum();
    assert_eq!(edges(&names), per_file);
}
