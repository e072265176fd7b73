use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fdl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdl"))
        .args(args)
        .env_remove("FDL_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fdl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Significant digits of every non-integer number literal in `text`.
fn float_literal_digits(text: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let mut token = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_digit() || matches!(ch, '.' | 'e' | 'E' | '-' | '+') {
            token.push(ch);
            continue;
        }
        if token.contains('.') && token.chars().any(|c| c.is_ascii_digit()) {
            let mantissa = token.split(['e', 'E']).next().unwrap();
            let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
            out.push(digits.trim_start_matches('0').trim_end_matches('0').len().max(1));
        }
        token.clear();
    }
    out
}

#[test]
fn construct_pj_writes_certificate() {
    let path = scratch("pj.json");
    let out = fdl(&["construct", "pj", "--j", "10", "--alpha", "2", "--p", "1", "--grid", "16384", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["norm", "min_on_target_set", "bound_required", "margin"] {
        assert!(v["certificates"][key].is_number(), "{key}");
    }
    assert!(v["certificates"]["norm"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert_eq!(v["config"]["j"], 10);
    assert_eq!(v["config"]["grid"], 16384);
    let freqs: Vec<i64> = v["poly"]["coeffs"].as_array().unwrap().iter().map(|c| c[0].as_i64().unwrap()).collect();
    assert!(freqs.iter().all(|&k| k > 0 && k <= 2047));

    // the written polynomial feeds the analysis commands
    let idx = fdl(&["analyze", "index", "--source", "file", "--input", path.to_str().unwrap(), "--x", "0,0.5"]);
    assert_eq!(idx.status.code(), Some(0), "{}", String::from_utf8_lossy(&idx.stderr));
    assert_eq!(json(&idx)["points"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_maximal_csv_rows_and_determinism() {
    let path = scratch("maximal.csv");
    let run = |threads: &str| {
        let out = fdl(&["verify", "maximal", "--N", "256", "--alpha", "0.5", "--trials", "5", "--seed", "7", "--csv", path.to_str().unwrap(), "--threads", threads]);
        (out, std::fs::read_to_string(&path).unwrap())
    };
    let (first, csv) = run("1");
    let (second, again) = run("2");
    assert_eq!(first.status.code(), Some(0));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "trial,seed,scale,ratio");
    assert_eq!(lines.len(), 1 + 5 * 6);
    assert!(!csv.contains('\r'));
    assert_eq!(csv, again);
    // the threads flag is not part of the record, so the JSON is identical too
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(json(&first)["config"]["seed"], 7);
}

#[test]
fn probe_reports_fraction_and_config() {
    let out = fdl(&["probe", "prevalence", "--s", "9", "--alpha", "2", "--p", "2", "--R", "1", "--trials", "40", "--seed", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let f = v["fraction"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&f));
    assert!(v["failures"].is_array());
    assert_eq!(v["trials"], 40);
    assert_eq!(v["config"]["R"], 1);
    assert_eq!(v["config"]["s"], 9);
    assert_eq!(v["config"]["command"], "probe");
    assert_eq!(v["config"]["M_thresh"], Value::Null);
}

#[test]
fn config_file_seed_and_env() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# small sweep\nN = 64\ntrials = 2\nseed = 11\nj = 9\n").unwrap();
    let base = ["verify", "nikolsky", "--config", cfg.to_str().unwrap()];
    let out = fdl(&base);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["config"]["N"], 64);
    assert_eq!(v["config"]["seed"], 11);
    // keys meant for other commands are ignored, not recorded
    assert!(v["config"].get("j").is_none());

    let mut args = base.to_vec();
    args.extend(["--N", "32"]);
    assert_eq!(json(&fdl(&args))["config"]["N"], 32);

    let env = Command::new(env!("CARGO_BIN_EXE_fdl"))
        .args(["verify", "nikolsky", "--N", "32", "--trials", "2"])
        .env("FDL_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json(&env)["config"]["seed"], 99);
}

#[test]
fn exit_codes() {
    assert_eq!(fdl(&["verify", "maximal", "--j", "3"]).status.code(), Some(1));
    assert_eq!(fdl(&["verify", "maximal", "--N", "many"]).status.code(), Some(1));
    assert_eq!(fdl(&["verify", "bogus"]).status.code(), Some(1));
    assert_eq!(fdl(&["construct", "pj", "--j", "3"]).status.code(), Some(1));
    assert_eq!(fdl(&["verify", "nikolsky", "--N", "16", "--trials", "1", "--out", "/nonexistent/dir/x.json"]).status.code(), Some(1));
    let fail = fdl(&["verify", "localization", "--trials", "2", "--delta", "1000000"]);
    assert_eq!(fail.status.code(), Some(2));
    assert_eq!(json(&fail)["passed"], false);
    assert_eq!(fdl(&["--help"]).status.code(), Some(0));
}

#[test]
fn every_subcommand_runs() {
    let cases: &[&[&str]] = &[
        &["construct", "family", "--s", "2", "--grid", "16384"],
        &["construct", "holo", "--k", "8", "--grid", "1024", "--interior", "20"],
        &["construct", "logsat", "--n", "1024"],
        &["construct", "witness", "--j", "512", "--degree", "16"],
        &["verify", "dirichlet", "--N", "64", "--trials", "2"],
        &["verify", "derivative", "--N", "4096", "--trials", "2"],
        &["verify", "localization", "--p", "2", "--trials", "2"],
        &["verify", "holo", "--N", "16", "--grid", "1024", "--interior", "20"],
        &["analyze", "levelset", "--source", "decaying", "--degree", "128", "--grid", "4096", "--beta", "0", "--box_lo", "4", "--box_hi", "10"],
        &["analyze", "spectrum", "--s", "2", "--jmax", "8", "--grid", "16384", "--box_hi", "8", "--betas", "0,0.25"],
    ];
    for args in cases {
        let out = fdl(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["config"]["subcommand"], args[1]);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(float_literal_digits(&text).iter().all(|&d| d <= 12), "{args:?}");
    }
}

#[test]
fn spectrum_csv_layout() {
    let path = scratch("spectrum.csv");
    let out = fdl(&["analyze", "spectrum", "--s", "2", "--jmax", "8", "--grid", "16384", "--box_hi", "8", "--betas", "0,0.25,0.6", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("beta,dimension,r2,theory"));
    assert_eq!(lines.count(), 3);
    assert!(csv.contains("0.25,") && csv.ends_with('\n'));
}
