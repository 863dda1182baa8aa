use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spikeinfo"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn report(dir: &Path, args: &[&str]) -> (String, Value) {
    let out = run_in(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap();
    (text, value)
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

/// Writes the fixtures every other test reads and returns their reports.
fn fixtures(dir: &Path) -> Vec<(String, Value)> {
    std::fs::write(dir.join("bsc.json"), "[[0.89, 0.11], [0.11, 0.89]]").unwrap();
    vec![
        report(dir, &["simulate", "uniform", "--alphabet", "256", "--length", "1000", "--seed", "11", "--out", "uniform256.csv"]),
        report(dir, &["simulate", "coupled", "--coupling", "1", "--length", "5000", "--seed", "7", "--out-x", "x.csv", "--out-y", "y.csv"]),
        report(dir, &["simulate", "poisson", "--rate", "20", "--duration", "20", "--seed", "5", "--out", "spikes.csv"]),
        report(dir, &["simulate", "poisson", "--segments", "0:5,2:30", "--duration", "4", "--seed", "5", "--out", "inhom.csv"]),
    ]
}

fn analyses(dir: &Path) -> Vec<(String, Value)> {
    vec![
        report(dir, &["entropy", "--input", "uniform256.csv", "--bins", "256", "--method", "mm"]),
        report(dir, &["entropy", "--input", "spikes.csv", "--bins", "10", "--lo", "0", "--hi", "20"]),
        report(dir, &["mi", "--x", "x.csv", "--y", "y.csv"]),
        report(dir, &["te", "--source", "x.csv", "--target", "y.csv", "--k", "1", "--l", "1", "--surrogates", "39", "--seed", "7"]),
        report(dir, &["te", "--source", "x.csv", "--target", "y.csv", "--surrogates", "19", "--seed", "3", "--scheme", "block", "--block-length", "50", "--shuffle-target"]),
        report(dir, &["capacity", "--channel", "bsc.json", "--tol", "1e-6"]),
        report(dir, &["spike-entropy", "--input", "spikes.csv", "--duration", "20", "--dt", "0.001", "--word-length", "8", "--method", "jk", "--saturate"]),
    ]
}

#[test]
fn reports_validate_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let validator = schema();
    let mut all = fixtures(dir.path());
    all.extend(analyses(dir.path()));
    for (text, value) in &all {
        let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{errors:?}\n{text}");
        let mut again = serde_json::to_string_pretty(value).unwrap();
        again.push('\n');
        assert_eq!(&again, text);
    }
}

#[test]
fn uniform_fixture_entropy() {
    let dir = TempDir::new().unwrap();
    fixtures(dir.path());
    let (_, v) = report(dir.path(), &["entropy", "--input", "uniform256.csv", "--bins", "256", "--method", "mm"]);
    assert_eq!(v["result"]["method"], "MillerMadow");
    assert!(v["result"]["value"].as_f64().unwrap() < 8.2);
    assert_eq!(v["config"]["method"], "mm");
}

#[test]
fn bsc_capacity() {
    let dir = TempDir::new().unwrap();
    fixtures(dir.path());
    let (_, v) = report(dir.path(), &["capacity", "--channel", "bsc.json", "--tol", "1e-6"]);
    let p: f64 = 0.11;
    let expected = 1.0 + p * p.log2() + (1.0 - p) * (1.0 - p).log2();
    assert!((v["result"]["capacity"].as_f64().unwrap() - expected).abs() < 1e-6);
}

#[test]
fn te_report_is_reproducible_to_the_byte() {
    let dir = TempDir::new().unwrap();
    fixtures(dir.path());
    let args = ["te", "--source", "x.csv", "--target", "y.csv", "--k", "1", "--l", "1", "--surrogates", "199", "--seed", "7"];
    let (a, v) = report(dir.path(), &args);
    let (b, _) = report(dir.path(), &args);
    assert_eq!(a, b);
    assert!(v["result"]["test"]["p_value"].as_f64().unwrap() <= 0.01);
    assert_eq!(v["result"]["test"]["null_values"].as_array().unwrap().len(), 199);
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    fixtures(dir.path());
    let (stdout_text, _) = report(dir.path(), &["mi", "--x", "x.csv", "--y", "y.csv"]);
    let out = run_in(dir.path(), &["mi", "--x", "x.csv", "--y", "y.csv", "--output", "mi.json"]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(dir.path().join("mi.json")).unwrap(), stdout_text);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    fixtures(dir.path());
    std::fs::write(dir.path().join("bad.csv"), "s\n1\nfoo\n").unwrap();
    std::fs::write(dir.path().join("wrong_header.csv"), "q\n1\n").unwrap();
    std::fs::write(dir.path().join("leaky.json"), "[[0.5, 0.6]]").unwrap();
    let cases: &[(&[&str], i32)] = &[
        (&["entropy", "--input", "missing.csv", "--bins", "2"], 1),
        (&["entropy", "--input", "bad.csv", "--bins", "2"], 2),
        (&["entropy", "--input", "wrong_header.csv", "--bins", "2"], 2),
        (&["entropy", "--input", "uniform256.csv", "--bins", "0"], 2),
        (&["entropy", "--input", "uniform256.csv", "--bins", "10"], 2),
        (&["te", "--source", "x.csv", "--target", "y.csv"], 2),
        (&["te", "--source", "x.csv", "--target", "y.csv", "--seed", "1", "--surrogates", "5"], 2),
        (&["capacity", "--channel", "leaky.json"], 2),
        (&["spike-entropy", "--input", "spikes.csv", "--duration", "20", "--dt", "0.5", "--word-length", "4"], 2),
        (&["simulate", "poisson", "--rate", "-1", "--duration", "1", "--seed", "1", "--out", "n.csv"], 2),
        (&["frobnicate"], 2),
    ];
    for (args, code) in cases {
        let out = run_in(dir.path(), args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    let out = run_in(dir.path(), &["te", "--source", "x.csv", "--target", "y.csv", "--seed", "1", "--surrogates", "5"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("TooFewSurrogates"));
}
