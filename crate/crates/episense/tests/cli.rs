use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_episense");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env("EPISENSE_NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn synth(dir: &Path) {
    let o = run(dir, &["synth", "--out-dir", "d"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn missing_file_is_a_data_error_naming_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["diverge", "--a", "nowhere.csv", "--b", "other.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nowhere.csv"), "{}", stderr(&o));
}

#[test]
fn zero_threshold_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    synth(tmp.path());
    let o = run(
        tmp.path(),
        &["diverge", "--a", "d/pair_a.csv", "--b", "d/pair_b.csv", "--threshold", "0"],
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn unknown_flags_are_config_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["fit", "--horizen", "5"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(tmp.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn help_lists_every_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("diverge", &["--a", "--b", "--scale-a", "--scale-b", "--window", "--threshold", "--persistence", "--svg", "--config"][..]),
        ("concepts", &["--tweets", "--embeddings", "--concepts", "--threshold", "--max-ngram", "--workers", "--cloud"][..]),
        ("sentiment", &["--matches", "--lexicon", "--scores", "--negation-window", "--per-tweet", "--carry-forward"][..]),
        ("fit", &["--cases", "--sentiment", "--train-from", "--train-to", "--horizon", "--alpha", "--without-sentiment"][..]),
        ("report", &["--horizons", "--table"][..]),
        ("explain", &["--matches", "--scores", "--fit", "--graph", "--k", "--max-depth", "--dot"][..]),
        ("synth", &["--out-dir", "--seed", "--days", "--beta-sentiment", "--noise-sd", "--process", "--lag"][..]),
    ];
    for (cmd, flags) in cases {
        let o = run(tmp.path(), &[cmd, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        let text = String::from_utf8_lossy(&o.stdout);
        for f in flags {
            assert!(text.contains(f), "{cmd} --help lacks {f}");
        }
    }
}

#[test]
fn diverge_on_the_toy_pair_reports_a_date() {
    let tmp = tempfile::tempdir().unwrap();
    synth(tmp.path());
    let o = run(
        tmp.path(),
        &["diverge", "--a", "d/pair_a.csv", "--b", "d/pair_b.csv", "--scale-a", "100", "--out", "div.json", "--svg", "div.svg"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("div.json")).unwrap()).unwrap();
    // Split day 30 from 2020-03-15, detected within one window.
    let date = report["divergence_date"].as_str().unwrap();
    assert!(("2020-04-14"..="2020-04-21").contains(&date), "{date}");
    assert!(fs::read_to_string(tmp.path().join("div.svg")).unwrap().starts_with("<svg"));
    assert!(tmp.path().join("div.json.manifest.json").exists());
}

#[test]
fn diverge_prints_to_stdout_without_out() {
    let tmp = tempfile::tempdir().unwrap();
    synth(tmp.path());
    let o = run(tmp.path(), &["diverge", "--a", "d/pair_a.csv", "--b", "d/pair_a.csv"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report["divergence_date"].is_null());
}

fn toy_sentiment(dir: &Path) {
    synth(dir);
    for args in [
        &["concepts", "--tweets", "d/tweets.jsonl", "--embeddings", "d/embeddings.txt", "--concepts", "d/concepts.tsv", "--out", "m.csv"][..],
        &["sentiment", "--matches", "m.csv", "--tweets", "d/tweets.jsonl", "--lexicon", "d/lexicon.tsv", "--out", "daily.csv", "--scores-out", "scores.csv"][..],
    ] {
        let o = run(dir, args);
        assert!(o.status.success(), "{}", stderr(&o));
    }
}

#[test]
fn non_reference_horizon_is_accepted_with_a_note() {
    let tmp = tempfile::tempdir().unwrap();
    toy_sentiment(tmp.path());
    let o = run(
        tmp.path(),
        &["fit", "--cases", "d/cases.csv", "--sentiment", "daily.csv", "--horizon", "5", "--out", "fit.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("fit.json")).unwrap()).unwrap();
    let notes = doc["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("non-standard horizon 5")));
    assert_eq!(doc["config"]["horizon_days"], 5);
}

#[test]
fn report_rows_run_from_longest_horizon() {
    let tmp = tempfile::tempdir().unwrap();
    toy_sentiment(tmp.path());
    let o = run(
        tmp.path(),
        &["report", "--cases", "d/cases.csv", "--sentiment", "daily.csv", "--horizons", "3,14,7", "--out", "r.csv"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(tmp.path().join("r.csv")).unwrap();
    let horizons: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(horizons, ["14", "14", "7", "7", "3", "3"]);
    let table = String::from_utf8_lossy(&o.stdout).into_owned();
    let rows: Vec<&str> = table.lines().filter(|l| l.contains(" Days")).collect();
    assert!(rows[0].starts_with("14 Days") && rows[1].starts_with("7 Days") && rows[2].starts_with("3 Days"));
    assert!(!table.contains('\u{1b}'));
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    toy_sentiment(tmp.path());
    fs::write(tmp.path().join("fit.conf"), "# fit settings\nhorizon = 7\nalpha = 0.05\n").unwrap();
    let o = run(
        tmp.path(),
        &["fit", "--config", "fit.conf", "--cases", "d/cases.csv", "--sentiment", "daily.csv", "--alpha", "0.2", "--out", "fit.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("fit.json")).unwrap()).unwrap();
    assert_eq!(doc["config"]["horizon_days"], 7);
    assert_eq!(doc["config"]["alpha"], 0.2);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("fit.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config_sources"]["horizon"], "config");
    assert_eq!(manifest["config_sources"]["alpha"], "flag");
    assert_eq!(manifest["config_sources"]["train-from"], "default");
    assert_eq!(manifest["config"]["alpha"], "0.2");
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("bad.conf"), "horizen = 7\n").unwrap();
    let o = run(tmp.path(), &["fit", "--config", "bad.conf", "--cases", "a", "--sentiment", "b", "--out", "c"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = run(tmp.path(), &["fit", "--config", "missing.conf", "--cases", "a", "--sentiment", "b", "--out", "c"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn explain_without_sentiment_coefficient_is_a_data_error() {
    let tmp = tempfile::tempdir().unwrap();
    toy_sentiment(tmp.path());
    let o = run(
        tmp.path(),
        &["fit", "--cases", "d/cases.csv", "--sentiment", "daily.csv", "--without-sentiment", "--out", "fit.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(
        tmp.path(),
        &["explain", "--matches", "m.csv", "--scores", "scores.csv", "--fit", "fit.json", "--out", "ex.json"],
    );
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}
