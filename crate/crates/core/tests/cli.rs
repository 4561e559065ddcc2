use catalan_frobenius::cli::{resolve, run, Cli, Report, RunConfig, Status};
use clap::Parser;
use std::path::PathBuf;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("catfrob-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_to(args: &[&str], out: &PathBuf) -> i32 {
    let mut argv = vec!["catfrob"];
    argv.extend_from_slice(args);
    let o = out.to_str().unwrap().to_string();
    argv.push("--out");
    argv.push(&o);
    run(argv)
}

fn report(args: &[&str], dir: &PathBuf, name: &str) -> (i32, Report) {
    let out = dir.join(name);
    let code = run_to(args, &out);
    let text = std::fs::read_to_string(&out).unwrap();
    (code, serde_json::from_str(&text).unwrap())
}

#[test]
fn catalan_hexagon_count() {
    let dir = scratch("catalan");
    let out = dir.join("c.txt");
    assert_eq!(run_to(&["catalan", "--genus", "0", "--profile", "6"], &out), 0);
    assert_eq!(std::fs::read_to_string(out).unwrap(), "5\n");
}

#[test]
fn theorem_and_hirota_acceptance_runs() {
    let dir = scratch("verify");
    let (code, r) = report(&["verify-theorem", "--genus-max", "1", "--n-max", "2", "--k-max", "4"], &dir, "t.json");
    assert_eq!(code, 0);
    assert_eq!(r.status, Status::Pass);
    assert!(r.checks[0].compared > 0);
    let (code, r) = report(&["verify-hirota", "--n-max", "2", "--k", "-1,0,1", "--degree-max", "3", "--mutations", "3"], &dir, "h.json");
    assert_eq!(code, 0);
    assert_eq!(r.checks.len(), 10);
}

#[test]
fn every_subcommand_runs() {
    let dir = scratch("all");
    let cases: Vec<Vec<&str>> = vec![
        vec!["frobenius", "--point", "1/3,4"],
        vec!["s-matrix", "--order", "5", "--psi", "symbolic"],
        vec!["r-matrix", "--order", "5", "--point", "0,16"],
        vec!["periods", "--level", "-2", "--rep", "infty"],
        vec!["periods", "--level", "1", "--rep", "u2", "--label", "e2"],
        vec!["intersections", "--genus-max", "1", "--n-max", "3", "--format", "json"],
        vec!["catalan", "--genus", "1", "--profile", "2,2", "--format", "json"],
        vec!["descendent", "--genus-max", "1", "--n-max", "2", "--index-max", "1"],
        vec!["verify-theorem", "--genus-max", "0", "--n-max", "2", "--k-max", "3"],
        vec!["verify-hirota", "--n-max", "1", "--k", "0", "--degree-max", "2"],
        vec!["verify-lax", "--weight", "3", "--psi", "symbolic"],
        vec!["verify-nls", "--weight", "3", "--flows", "1:0,2:0"],
        vec!["lax-data", "--weight", "2"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let (code, r) = report(args, &dir, &format!("{i}.json"));
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(r.schema, "catfrob-report/1");
        assert_eq!(r.status, Status::Pass, "{args:?}");
        assert!(r.checks.iter().all(|c| c.pass));
    }
}

#[test]
fn csv_tables() {
    let dir = scratch("csv");
    let out = dir.join("i.csv");
    assert_eq!(run_to(&["intersections", "--genus-max", "1", "--n-max", "3"], &out), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("genus,partition,value\n"));
    assert!(text.contains("0,0 0 0,1\n"));
    assert!(text.contains("1,1,1/24\n"));
    let out = dir.join("d.csv");
    assert_eq!(run_to(&["descendent", "--genus-max", "0", "--n-max", "3", "--index-max", "1", "--format", "csv"], &out), 0);
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("genus,monomial,value\n"));
}

#[test]
fn reports_are_deterministic_and_exact() {
    let dir = scratch("det");
    let args = ["verify-hirota", "--n-max", "1", "--k", "0,1", "--degree-max", "2", "--mutations", "4", "--seed", "5"];
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    assert_eq!(run_to(&args, &a), 0);
    assert_eq!(run_to(&args, &b), 0);
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let (_, r) = report(&["s-matrix", "--order", "4", "--psi", "1/3"], &dir, "s.json");
    let text = serde_json::to_string(&r.result).unwrap();
    assert!(!text.contains('.') || !text.chars().any(|c| c == 'e'), "float-like output: {text}");
    assert!(text.contains("\"1/2\""));
}

#[test]
fn config_round_trip_and_override() {
    for argv in [
        vec!["catfrob", "periods", "--level", "-3", "--rep", "u1"],
        vec!["catfrob", "verify-lax", "--flows", "1:0", "--weight", "2", "--seed", "9"],
        vec!["catfrob", "verify-hirota", "--k", "-2,2", "--format", "json"],
        vec!["catfrob", "catalan", "--genus", "0", "--profile", "2,4", "--threads", "2"],
    ] {
        let cfg = resolve(&Cli::try_parse_from(&argv).unwrap()).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }
    let dir = scratch("config");
    let file = dir.join("run.json");
    std::fs::write(&file, r#"{"command":{"subcommand":"r-matrix","point":"0,1","order":3},"format":"json","seed":4,"threads":null}"#).unwrap();
    let f = file.to_str().unwrap();
    let (code, r) = report(&["--config", f], &dir, "r.json");
    assert_eq!(code, 0);
    assert_eq!(r.config.seed, 4);
    assert_eq!(r.result["table"].as_array().unwrap().len(), 4);
    let (_, r) = report(&["--config", f, "--seed", "6", "r-matrix", "--order", "1"], &dir, "r2.json");
    assert_eq!(r.config.seed, 6);
    assert_eq!(r.result["table"].as_array().unwrap().len(), 2);
}

#[test]
fn cache_directory_reuses_bodies() {
    let dir = scratch("cache");
    let cache = dir.join("cache");
    let c = cache.to_str().unwrap();
    let args = ["verify-theorem", "--genus-max", "0", "--n-max", "2", "--k-max", "2", "--cache-dir", c];
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    assert_eq!(run_to(&args, &a), 0);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    assert_eq!(run_to(&args, &b), 0);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(run(["catfrob", "no-such-command"]), 2);
    assert_eq!(run(["catfrob"]), 2);
    assert_eq!(run(["catfrob", "frobenius", "--point", "0,3"]), 2);
    assert_eq!(run(["catfrob", "frobenius", "--point", "1,1/4"]), 2);
    assert_eq!(run(["catfrob", "verify-lax", "--flows", "3:0"]), 2);
    assert_eq!(run(["catfrob", "verify-lax", "--weight", "9"]), 2);
    assert_eq!(run(["catfrob", "s-matrix", "--format", "csv"]), 2);
    assert_eq!(run(["catfrob", "s-matrix", "--psi", "x"]), 2);
    assert_eq!(run(["catfrob", "verify-lax", "--weight", "6", "--timeout-secs", "0"]), 1);
    assert_eq!(run(["catfrob", "--help"]), 0);
}

#[test]
fn lax_data_writes_golden_files() {
    let dir = scratch("laxdata");
    let gold = dir.join("gold");
    let (code, _) = report(&["lax-data", "--weight", "3", "--out-dir", gold.to_str().unwrap()], &dir, "l.json");
    assert_eq!(code, 0);
    for name in ["v", "u", "phi", "rho"] {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(gold.join(format!("{name}.json"))).unwrap()).unwrap();
        assert!(!v["terms"].as_array().unwrap().is_empty());
    }
}
