mod common;

use std::process::Command;

use common::fixture;

fn qonc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qonc"))
        .args(args)
        .env_remove("QONC_TOLERANCE")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_owned()
}

fn matrix(v: &serde_json::Value) -> Vec<Vec<(f64, f64)>> {
    v["data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
                .collect()
        })
        .collect()
}

#[test]
fn compile_fourport_qsde_json() {
    let (code, out, _) = qonc(&["compile", &path("fourport.qon"), "--model", "qsde"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["qsde"]["mode"], "passive-annihilation");
    assert!(v.get("slh").is_none());
    let f = matrix(&v["qsde"]["F"]);
    let want = [[-1.0, 0.0, -1.0], [0.0, -0.5, 0.0], [0.0, 1.0, -1.5]];
    for (row, wrow) in f.iter().zip(want) {
        for (&(re, im), w) in row.iter().zip(wrow) {
            assert!((re - w).abs() < 1e-15 && im.abs() < 1e-15);
        }
    }
    assert_eq!(v["qsde"]["K"]["rows"], 4);
    assert_eq!(v["node_table"].as_array().unwrap().len(), 16);
    assert_eq!(v["meta"]["input_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["report"]["assumption"], 1);
}

#[test]
fn compile_fourport_slh_hermitian() {
    let (code, out, _) = qonc(&["compile", &path("fourport.qon"), "--model", "slh"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let m = matrix(&v["slh"]["M"]);
    for (i, row) in m.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            assert!((z.0 - m[j][i].0).abs() < 1e-12);
            assert!((z.1 + m[j][i].1).abs() < 1e-12);
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = qonc(&["compile", &path("fourport.qon")]);
    let b = qonc(&["compile", &path("fourport.qon")]);
    assert_eq!(a, b);
}

#[test]
fn check_fourport_passes() {
    let (code, out, _) = qonc(&["check", &path("fourport.qon")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("result: pass"));
    assert!(out.contains("F+F^dag+H^dag H"));
}

#[test]
fn graph_dot_has_sixteen_nodes() {
    let (code, out, _) = qonc(&["graph", &path("fourport.qon"), "--dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.lines().filter(|l| l.contains("[label=")).count(), 16);
    assert_eq!(out.lines().filter(|l| l.contains("->")).count(), 12);
}

#[test]
fn tf_cavity_is_all_pass() {
    let (code, out, _) = qonc(&["tf", &path("cavity.qon"), "--omega", "-10:10:101", "--csv"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 101);
    for row in rows {
        let x: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((x[1].hypot(x[2]) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn tf_log_grid_json() {
    let (code, out, _) = qonc(&["tf", &path("cavity.qon"), "--omega", "0.01:100:5", "--log"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["frequencies"].as_array().unwrap().len(), 5);
    assert!((v["frequencies"][2].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(qonc(&["compile", &path("loop.qon")]).0, 3);
    assert_eq!(qonc(&["compile", &path("invalid/xi-range.qon")]).0, 2);
    assert_eq!(qonc(&["compile", &path("squeezer.qon")]).0, 2);
    assert_eq!(
        qonc(&[
            "compile",
            &path("squeezer.qon"),
            "--active",
            "--model",
            "qsde"
        ])
        .0,
        0
    );
    assert_eq!(qonc(&["check", &path("squeezer.qon")]).0, 4);
    assert_eq!(qonc(&["compile"]).0, 1);
    assert_eq!(
        qonc(&["tf", &path("cavity.qon"), "--omega", "1:10:3", "--log"]).0,
        0
    );
    assert_eq!(
        qonc(&["tf", &path("cavity.qon"), "--omega", "-1:10:3", "--log"]).0,
        2
    );
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qonc"))
        .args(["check", &path("cavity.qon")])
        .env("QONC_TOLERANCE", "1e-4")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("tolerance: 1e-4"));
}

#[test]
fn diagnostics_carry_location() {
    let (_, _, err) = qonc(&["compile", &path("invalid/lexical.qon")]);
    assert!(err.starts_with("ERROR "));
    assert!(err.contains("lexical.qon:3:37 lexical:"));
}
