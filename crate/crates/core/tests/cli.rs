mod common;

use std::process::{Command, Output};

use common::data;
use netfunc::cli::{parse_agent, parse_graph, run, AnalysisReport, ForestsReport, EXIT_INVALID};
use netfunc::netfunc::SteadyStateGain;
use netfunc::verify::VerifyReport;

fn netfunc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netfunc"))
        .args(args)
        .output()
        .unwrap()
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

fn in_process(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["netfunc"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn analyze_worked_example() {
    let (g, a) = (path("five_node.json"), path("pi_agent.json"));
    let (code, out, _) = in_process(&[
        "analyze", "--graph", &g, "--agent", &a, "--from", "1", "--to", "3",
    ]);
    assert_eq!(code, 0);
    let report: AnalysisReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.theta, 0.3);
    assert_eq!(report.distance, 2);
    assert_eq!(report.relative_degree, 3);
    assert_eq!(report.gamma.len(), 2);
    assert!((report.gamma[0][0] - 0.5).abs() < 1e-9 && (report.gamma[1][0] - 3.0).abs() < 1e-9);
    assert_eq!(report.steady_state_gain, Some(SteadyStateGain::Infinite));
    assert_eq!(
        (
            report.controllability.bound,
            report.controllability.actual_rank
        ),
        (5, 5)
    );
    assert!(report.verification.pass);
    // lossless round trip
    let again = serde_json::to_string(&report).unwrap();
    assert_eq!(again.trim(), out.trim());
    assert_eq!(
        serde_json::from_str::<AnalysisReport>(&again).unwrap(),
        report
    );
}

#[test]
fn exit_codes() {
    let (six, five, a) = (
        path("six_node.json"),
        path("five_node.json"),
        path("pi_agent.json"),
    );
    let (code, _, err) = in_process(&[
        "analyze", "--graph", &six, "--agent", &a, "--from", "6", "--to", "1",
    ]);
    assert_eq!(code, 3);
    assert!(err.contains("no path"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2, \"arcs\": [").unwrap();
    let bad = bad.to_str().unwrap();
    let (code, _, _) = in_process(&[
        "analyze", "--graph", bad, "--agent", &a, "--from", "1", "--to", "2",
    ]);
    assert_eq!(code, EXIT_INVALID);

    let neg = dir.path().join("neg.json");
    std::fs::write(
        &neg,
        r#"{"n": 2, "arcs": [{"from": 1, "to": 2, "weight": -1}]}"#,
    )
    .unwrap();
    let (code, _, err) = in_process(&[
        "analyze",
        "--graph",
        neg.to_str().unwrap(),
        "--agent",
        &a,
        "--from",
        "1",
        "--to",
        "2",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("non-positive weight"));

    let (code, _, _) = in_process(&[
        "analyze", "--graph", &five, "--agent", &a, "--from", "9", "--to", "1",
    ]);
    assert_eq!(code, 2);
    let (code, _, _) = in_process(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, out, _) = in_process(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("analyze"));
}

#[test]
fn forests_command() {
    let six = path("six_node.json");
    let (code, out, _) = in_process(&[
        "forests",
        "--graph",
        &six,
        "--k",
        "3",
        "--root",
        "1",
        "--contains",
        "3",
    ]);
    assert_eq!(code, 0);
    let r: ForestsReport = serde_json::from_str(&out).unwrap();
    let weights: Vec<f64> = r.forests.iter().map(|f| f.weight).collect();
    assert_eq!(weights.len(), 2);
    assert!((r.total_weight - 0.552).abs() < 1e-12);
    assert!(weights.iter().any(|w| (w - 0.36).abs() < 1e-12));
    assert!(weights.iter().any(|w| (w - 0.192).abs() < 1e-12));

    let (_, out, _) = in_process(&["forests", "--graph", &six, "--k", "0"]);
    let r: ForestsReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.forests.len(), 1);
    assert_eq!(r.total_weight, 1.0);
    let (_, out, _) = in_process(&["forests", "--graph", &six, "--k", "6"]);
    let r: ForestsReport = serde_json::from_str(&out).unwrap();
    assert!(r.forests.is_empty());

    let (code, _, _) = in_process(&["forests", "--graph", &six, "--k", "3", "--cap", "5"]);
    assert_eq!(code, 4);
}

#[test]
fn cap_from_environment() {
    let six = path("six_node.json");
    let out = Command::new(env!("CARGO_BIN_EXE_netfunc"))
        .args(["forests", "--graph", &six, "--k", "2"])
        .env("NETFUNC_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = Command::new(env!("CARGO_BIN_EXE_netfunc"))
        .args(["forests", "--graph", &six, "--k", "2", "--cap", "6"])
        .env("NETFUNC_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn freqresp_single_integrator() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    std::fs::write(&g, r#"{"n": 1, "arcs": []}"#).unwrap();
    let a = dir.path().join("a.json");
    std::fs::write(
        &a,
        r#"{"plant": {"num": [1], "den": [0, 1]}, "controller": {"num": [1], "den": [1]}}"#,
    )
    .unwrap();
    let (code, out, _) = in_process(&[
        "freqresp",
        "--graph",
        g.to_str().unwrap(),
        "--agent",
        a.to_str().unwrap(),
        "--from",
        "1",
        "--to",
        "1",
        "--wmin",
        "0.1",
        "--wmax",
        "10",
        "--points",
        "21",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("omega,mag_db,phase_deg\n"));
    assert!(!out.contains('\r'));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 21);
    for r in rows {
        let w: f64 = r[0].parse().unwrap();
        let mag: f64 = r[1].parse().unwrap();
        let phase: f64 = r[2].parse().unwrap();
        assert!((mag + 20.0 * w.log10()).abs() < 1e-10);
        assert!((phase + 90.0).abs() < 1e-10);
    }
}

#[test]
fn freqresp_biproper_flattens() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    std::fs::write(
        &a,
        r#"{"plant": {"num": [1, 2], "den": [0, 1]}, "controller": {"num": [1], "den": [1]}}"#,
    )
    .unwrap();
    let g = path("five_node.json");
    let (code, out, _) = in_process(&[
        "freqresp",
        "--graph",
        &g,
        "--agent",
        a.to_str().unwrap(),
        "--from",
        "3",
        "--to",
        "3",
        "--wmin",
        "1e3",
        "--wmax",
        "1e6",
        "--points",
        "4",
    ]);
    assert_eq!(code, 0);
    let mags: Vec<f64> = csv_rows(&out)
        .iter()
        .map(|r| r[1].parse().unwrap())
        .collect();
    assert!((mags[3] - mags[2]).abs() < 1e-3, "{mags:?}");
}

#[test]
fn freqresp_rejects_bad_grid() {
    let (g, a) = (path("five_node.json"), path("pi_agent.json"));
    let (code, _, _) = in_process(&[
        "freqresp", "--graph", &g, "--agent", &a, "--from", "1", "--to", "3", "--wmin", "2",
        "--wmax", "1",
    ]);
    assert_eq!(code, 2);
    let (code, _, _) = in_process(&[
        "freqresp", "--graph", &g, "--agent", &a, "--from", "1", "--to", "3", "--points", "1",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn rootlocus_rows() {
    let a = path("pi_agent.json");
    let (code, out, _) = in_process(&[
        "rootlocus",
        "--agent",
        &a,
        "--kmin",
        "0",
        "--kmax",
        "2",
        "--points",
        "3",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("k,root_index,re,im\n"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 6);
    let at = |k: f64| -> Vec<(f64, f64)> {
        rows.iter()
            .filter(|r| r[0].parse::<f64>().unwrap() == k)
            .map(|r| (r[2].parse().unwrap(), r[3].parse().unwrap()))
            .collect()
    };
    // k = 0: open-loop poles, k = 2: s^2 + 2s + 2
    assert!(at(0.0).iter().all(|&(re, im)| re == 0.0 && im == 0.0));
    let two = at(2.0);
    assert!((two[0].0 + 1.0).abs() < 1e-12 && (two[0].1 + 1.0).abs() < 1e-12);
    assert!((two[1].0 + 1.0).abs() < 1e-12 && (two[1].1 - 1.0).abs() < 1e-12);

    // large gain: one root tends to the open-loop zero at -1
    let (_, out, _) = in_process(&[
        "rootlocus",
        "--agent",
        &a,
        "--kmin",
        "0",
        "--kmax",
        "1e6",
        "--points",
        "2",
    ]);
    let big: Vec<f64> = csv_rows(&out)
        .iter()
        .skip(2)
        .map(|r| r[2].parse().unwrap())
        .collect();
    assert!(big.iter().any(|re| (re + 1.0).abs() < 1e-5), "{big:?}");

    let g = path("five_node.json");
    let (_, out, _) = in_process(&[
        "rootlocus",
        "--agent",
        &a,
        "--graph",
        &g,
        "--from",
        "1",
        "--to",
        "3",
        "--points",
        "2",
    ]);
    assert!(out.starts_with("k,root_index,re,im,marker\n"));
    assert_eq!(out.lines().filter(|l| l.ends_with(",lambda")).count(), 10);
    assert_eq!(out.lines().filter(|l| l.ends_with(",gamma")).count(), 4);
}

#[test]
fn verify_command() {
    let (g, a) = (path("five_node.json"), path("pi_agent.json"));
    let ok = netfunc(&["verify", "--graph", &g, "--agent", &a, "--seed", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let report: VerifyReport = serde_json::from_slice(&ok.stdout).unwrap();
    assert!(report.pass);
    assert_eq!(report.pairs.len(), 25);
    assert_eq!(report.seed, 3);

    let bad = netfunc(&[
        "verify",
        "--graph",
        &g,
        "--agent",
        &a,
        "--debug-corrupt-laplacian",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("FAIL graph char_poly_forests"));

    let single = netfunc(&[
        "verify", "--graph", &g, "--agent", &a, "--from", "1", "--to", "3",
    ]);
    let report: VerifyReport = serde_json::from_slice(&single.stdout).unwrap();
    assert_eq!(report.pairs.len(), 1);
}

#[test]
fn commands_are_deterministic() {
    let (g, a) = (path("five_node.json"), path("pi_agent.json"));
    for args in [
        vec![
            "analyze", "--graph", &g, "--agent", &a, "--from", "2", "--to", "4",
        ],
        vec![
            "freqresp", "--graph", &g, "--agent", &a, "--from", "1", "--to", "3",
        ],
        vec!["rootlocus", "--agent", &a, "--graph", &g],
    ] {
        assert_eq!(netfunc(&args).stdout, netfunc(&args).stdout);
    }
}

#[test]
fn file_parsers() {
    let g = parse_graph(
        r#"{"n": 3, "arcs": [{"from": 1, "to": 2}, {"from": 2, "to": 3, "weight": 0.5}]}"#,
    )
    .unwrap();
    assert_eq!(g.arc_weight(1, 2), Some(1.0));
    assert_eq!(g.arc_weight(2, 3), Some(0.5));
    assert_eq!(parse_graph(r#"{"n": 0, "arcs": []}"#).unwrap_err().code, 2);
    assert_eq!(
        parse_graph(r#"{"n": 2, "arcs": [{"from": 1, "to": 1}]}"#)
            .unwrap_err()
            .code,
        2
    );
    assert_eq!(
        parse_graph(r#"{"n": 2, "arcs": [], "extra": 1}"#)
            .unwrap_err()
            .code,
        2
    );
    assert!(parse_agent(
        r#"{"plant": {"num": [1], "den": [0]}, "controller": {"num": [1], "den": [1]}}"#
    )
    .is_err());
    assert!(parse_agent(
        r#"{"plant": {"num": [1, 1, 1], "den": [1]}, "controller": {"num": [1], "den": [1]}}"#
    )
    .is_err());
}
