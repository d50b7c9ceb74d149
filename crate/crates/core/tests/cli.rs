use std::fs;

use freegroup::expcli::cli::run;
use freegroup::StallingsGraph;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("freegroup").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn reduce_to_the_empty_word() {
    let (code, out, _) = call(&["reduce", "abBA"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1\n");
    let (_, out, _) = call(&["reduce", "--cyclic", "baAbaB"]);
    assert_eq!(out, "ab\n");
}

#[test]
fn minimize_prints_the_orbit_minimum() {
    let (code, out, _) = call(&["minimize", "abAB"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["length"], 4);
    let (_, out, _) = call(&["minimize", "ab"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["length"], 1);
}

#[test]
fn certify_reads_a_generator_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, "# two generators\naab\n\nabbb\n").unwrap();
    let (code, out, _) = call(&["certify", "--k", "2", "--gens-file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["verdict"], "inconclusive");
    assert_eq!(doc["checks"].as_array().unwrap().len(), 8);
    let (code, _, _) = call(&["certify", "--strict", "--gens", "aab,abbb"]);
    assert_eq!(code, 1);
}

#[test]
fn fold_and_intersect_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let left = dir.path().join("left.json");
    let right = dir.path().join("right.json");
    assert_eq!(call(&["fold", "--gens", "a,bab", "--output", left.to_str().unwrap()]).0, 0);
    assert_eq!(call(&["fold", "--gens", "aa,b"]).0, 0);
    let (_, out, _) = call(&["fold", "--gens", "aa,b"]);
    fs::write(&right, out).unwrap();
    let (code, out, _) = call(&["intersect", left.to_str().unwrap(), right.to_str().unwrap()]);
    assert_eq!(code, 0);
    let g = StallingsGraph::from_json(&out).unwrap();
    let f2 = freegroup::Alphabet::new(2).unwrap();
    assert!(g.contains(&freegroup::ReducedWord::parse(f2, "aa").unwrap()));
    assert!(!g.contains(&freegroup::ReducedWord::parse(f2, "a").unwrap()));
}

#[test]
fn malnormal_verdicts() {
    let (code, out, _) = call(&["malnormal", "--gens", "a"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"malnormal\": true"));
    let (code, out, _) = call(&["malnormal", "--strict", "--gens", "aa"]);
    assert_eq!(code, 1);
    assert!(out.contains("\"malnormal\": false"));
}

#[test]
fn stats_is_reproducible() {
    let args = [
        "stats", "--event", "coverage", "--L", "3", "--model", "walk", "--k", "2", "--n", "100,200,400",
        "--trials", "100", "--seed", "7",
    ];
    let (code, first, _) = call(&args);
    assert_eq!(code, 0);
    let (_, second, _) = call(&args);
    assert_eq!(first, second);
    assert!(first.starts_with("n,trials,successes,p_hat,stderr,wall_ms\n"));
    let mut with_workers = args.to_vec();
    with_workers.extend(["--workers", "4"]);
    assert_eq!(call(&with_workers).1, first);
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(&path, "event = \"free-basis\"\nn = [50, 100]\ntrials = 20\nseed = 3\np = 2\n").unwrap();
    let cfg = path.to_str().unwrap();
    let (code, out, err) = call(&["stats", "--config", cfg]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 3);
    let (_, out2, _) = call(&["stats", "--config", cfg, "--n", "50"]);
    assert_eq!(out2.lines().nth(1), out.lines().nth(1));
    assert_eq!(out2.lines().filter(|l| !l.starts_with('#')).count(), 2);
    fs::write(&path, "colour = 3\n").unwrap();
    let (code, _, err) = call(&["stats", "--config", cfg]);
    assert_eq!(code, 2);
    assert!(err.contains("colour"));
}

#[test]
fn sampling_and_coverage() {
    let (code, out, _) = call(&["sample", "--n", "30", "--p", "3", "--seed", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    assert_eq!(call(&["sample", "--n", "30", "--p", "3", "--seed", "5"]).1, out);
    let (code, out, _) = call(&["coverage", "aabbABAB", "--L", "1", "--strict"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"covered\": true"));
    let (code, _, _) = call(&["coverage", "ab", "--L", "2", "--strict"]);
    assert_eq!(code, 1);
}

#[test]
fn sharpness_reports() {
    let (code, out, _) = call(&["sharpness", "--k", "2", "--i", "2", "--strict"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["rank_c"], 3);
    assert_eq!(doc["equality"], true);
    let (code, _, _) = call(&["sharpness", "--k", "3", "--i", "2", "--strict"]);
    assert_eq!(code, 1);
    let (code, out, _) = call(&["sharpness", "--i", "3", "--tower"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"levels\""));
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = call(&["reduce", "ab?"]);
    assert_eq!(code, 2);
    assert!(err.contains("?"));
    assert_eq!(call(&["stats", "--event", "lottery", "--n", "10"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}
