//! End-to-end checks of the `psg` binary: exit codes, formats, and
//! report determinism.

use std::process::{Command, Output};

fn data(file: &str) -> String {
    format!("{}/data/{}", env!("CARGO_MANIFEST_DIR"), file)
}

fn psg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psg"))
        .args(args)
        .output()
        .expect("psg binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn growth_csv_and_exit_codes() {
    let g = data("free2.g");
    let s = data("gens.set");
    // Safin parameters: all verdicts true, exit 0.
    let out = psg(&[
        "growth", "--graph", &g, "--set", &s, "--nmax", "3", "--alpha", "1/372", "--beta", "1",
        "--mode", "halffloor",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("n,size,ball_size,rhs,verdict"));
    assert!(text.contains("3,40,,"), "sizes 4, 13, 40:\n{text}");
    assert!(text.contains("sha256="));

    // α = 1, β = 1 linear fails at n = 2 (13 < 16): checker exits 1.
    let out = psg(&[
        "growth", "--graph", &g, "--set", &s, "--nmax", "2", "--alpha", "1", "--beta", "1",
        "--mode", "linear",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // Tiny element cap: exit 3.
    let out = psg(&[
        "growth", "--graph", &g, "--set", &s, "--nmax", "3", "--alpha", "1", "--beta", "1",
        "--mode", "linear", "--max-elements", "5",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // Usage error: exit 2.
    let out = psg(&["growth", "--graph", &g]);
    assert_eq!(out.status.code(), Some(2));
    let out = psg(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn loxo_reports_verdicts() {
    let g = data("p4.g");
    let out = psg(&["loxo", "--graph", &g, "--word", "a d"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("loxodromic"));
    let out = psg(&["loxo", "--graph", &g, "--word", "a c"]);
    assert!(stdout(&out).contains("elliptic"));
}

#[test]
fn shortlox_modes() {
    let out = psg(&[
        "shortlox",
        "--graph",
        &data("p4.g"),
        "--set",
        &data("p4gens.set"),
        "--ncap",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("loxodromic at n = 2: a d"));

    let out = psg(&[
        "shortlox",
        "--graph",
        &data("p3.g"),
        "--set",
        &data("p3gens.set"),
        "--ncap",
        "4",
    ]);
    assert!(stdout(&out).contains("not_applicable"));
}

#[test]
fn json_reports_carry_schema_and_hashes() {
    let out = psg(&[
        "project",
        "--graph",
        &data("c4.g"),
        "--set",
        &data("p4gens.set"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["inputs"][0]["role"], "graph");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["result"]["holds"], true);
    assert!(v["flags"]["set"].is_string());
}

#[test]
fn bounds_kchoice_exact() {
    let out = psg(&[
        "bounds", "kchoice", "--delta", "1", "--kappa0", "1", "--n0", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains(&format!("alpha = 1/1{}", "0".repeat(52))));
    assert!(text.contains("K = 100000000000000"));
}

#[test]
fn treeaction_reports_energy_and_partition() {
    let out = psg(&[
        "treeaction",
        "--set",
        &data("tree.set"),
        "--r",
        "4",
        "--kdisp",
        "40",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["result"]["energy"]["basepoint"], "e");
    assert_eq!(v["result"]["partition_status"], "found");
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["classify", "--graph", &data("p4.g"), "--set", &data("p4gens.set"), "--ncap", "3"],
        vec!["counterexample", "--alpha", "1", "--beta", "1", "--kmax", "3", "--nmax", "2"],
        vec!["graph", "--graph", &data("c4.g"), "--format", "json"],
    ] {
        let args: Vec<&str> = args.iter().map(|s| s.as_ref()).collect();
        let a = psg(&args);
        let b = psg(&args);
        assert_eq!(a.stdout, b.stdout, "args: {args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
