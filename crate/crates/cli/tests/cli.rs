//! End-to-end tests of the `entprod` binary.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use entprod::{
    evolve_operator, ising2_hamiltonian, kron, random_operator, Ising2Params, OperatorOnSpace,
    RandomKind, SpaceStructure,
};
use entprod_cli::operator_file::format_operator;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entprod"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().to_owned())
        .collect()
}

fn numbers(cells: &[String]) -> Vec<f64> {
    cells.iter().map(|c| c.parse().unwrap()).collect()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

fn u_pi4_operator() -> OperatorOnSpace {
    let h = ising2_hamiltonian(Ising2Params::new(1.0, 1.0).unwrap());
    h.with_matrix(evolve_operator(h.matrix(), FRAC_PI_4).unwrap())
        .unwrap()
}

#[test]
fn committed_u_pi4_file_matches_generator() {
    let path = data("ising2_u_pi4.toml");
    let text = format_operator(&u_pi4_operator());
    if std::env::var_os("ENTPROD_BLESS").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn evolve_quarter_period_grid() {
    let out = stdout_ok(&[
        "evolve", "--h", "1", "--j", "1", "--stop", "pi", "--points", "5",
    ]);
    assert!(out.starts_with("t,epsilon,norm_num,norm_den,closed_form,abs_diff,flag\n"));
    assert!(!out.contains('\r'));
    let eps = numbers(&column(&out, "epsilon"));
    let expected = [0.0, 0.0526803, 0.0, 0.0526803, 0.0];
    for (e, x) in eps.iter().zip(expected) {
        assert!((e - x).abs() < 1e-7, "{eps:?}");
    }
    let t = numbers(&column(&out, "t"));
    assert_eq!(t[4], std::f64::consts::PI);
    for d in numbers(&column(&out, "abs_diff")) {
        assert!(d < 1e-10);
    }
}

#[test]
fn evolve_flags_trace_degenerate_points() {
    // h/J = 8: Tr U(π) = 0
    let out = stdout_ok(&[
        "evolve", "--h", "8", "--j", "1", "--stop", "2pi", "--points", "5",
    ]);
    let eps = column(&out, "epsilon");
    let flags = column(&out, "flag");
    assert_eq!(eps[2], "NA");
    assert_eq!(flags[2], "1");
    assert_eq!(flags.iter().filter(|f| *f == "1").count(), 1);
}

#[test]
fn evolve_without_coupling_is_zero() {
    let out = stdout_ok(&[
        "evolve", "--h", "1.3", "--j", "0", "--units", "absolute", "--stop", "10", "--points", "50",
    ]);
    for e in numbers(&column(&out, "epsilon")) {
        assert!(e.abs() < 1e-10);
    }
    let err = run(&[
        "evolve", "--h", "1.3", "--j", "0", "--stop", "10", "--points", "50",
    ]);
    assert_eq!(err.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&err.stderr).contains("--units absolute"));
}

#[test]
fn evolve_single_point_at_zero() {
    let out = stdout_ok(&["evolve", "--stop", "0", "--points", "1"]);
    assert_eq!(column(&out, "epsilon"), vec!["0"]);
}

#[test]
fn evolve_other_models_leave_closed_form_empty() {
    let out = stdout_ok(&[
        "evolve",
        "--model",
        "ising-chain",
        "--n",
        "3",
        "--h",
        "0.5",
        "--j",
        "1",
        "--stop",
        "1",
        "--points",
        "3",
    ]);
    assert!(column(&out, "closed_form").iter().all(String::is_empty));
    let out = stdout_ok(&["evolve", "--p", "inf", "--stop", "1", "--points", "3"]);
    assert!(column(&out, "closed_form").iter().all(String::is_empty));
}

#[test]
fn evolve_json_matches_csv() {
    let csv = stdout_ok(&["evolve", "--h", "5/7", "--stop", "pi", "--points", "7"]);
    let js = json(&stdout_ok(&[
        "evolve", "--h", "5/7", "--stop", "pi", "--points", "7", "--format", "json",
    ]));
    let eps = numbers(&column(&csv, "epsilon"));
    let rows = js.as_array().unwrap();
    assert_eq!(rows.len(), eps.len());
    for (row, e) in rows.iter().zip(eps) {
        assert_eq!(row["epsilon"].as_f64().unwrap(), e);
    }
}

#[test]
fn evolve_log_base_two() {
    let nat = numbers(&column(
        &stdout_ok(&["evolve", "--stop", "1", "--points", "4"]),
        "epsilon",
    ));
    let bits = numbers(&column(
        &stdout_ok(&["evolve", "--log-base", "2", "--stop", "1", "--points", "4"]),
        "epsilon",
    ));
    for (n, b) in nat.iter().zip(bits) {
        assert!((n / std::f64::consts::LN_2 - b).abs() < 1e-14);
    }
}

#[test]
fn thermal_rows() {
    let out = stdout_ok(&[
        "thermal", "--h", "0", "--j", "1", "--stop", "2", "--points", "5",
    ]);
    assert!(out.starts_with("beta,epsilon_direct,epsilon_partition,Z,abs_diff\n"));
    let z = numbers(&column(&out, "Z"));
    assert_eq!(z[0], 4.0);
    assert_eq!(column(&out, "epsilon_direct")[0], "0");
    assert_eq!(column(&out, "epsilon_partition")[0], "0");
    for d in numbers(&column(&out, "abs_diff")) {
        assert!(d < 1e-10);
    }
    // β = 1
    assert!((z[2] - 4.510504).abs() < 1e-6);

    let out = stdout_ok(&[
        "thermal", "--h", "0.8", "--j", "0", "--stop", "3", "--points", "4",
    ]);
    for e in numbers(&column(&out, "epsilon_direct")) {
        assert!(e.abs() < 1e-10);
    }
}

#[test]
fn thermal_rejects_bad_grids() {
    assert_eq!(
        run(&["thermal", "--start", "-1", "--stop", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["thermal", "--stop", "1", "--p", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn period_reports() {
    let r = json(&stdout_ok(&["period", "--h", "5", "--j", "7"]));
    assert_eq!(r["kind"], "periodic");
    assert_eq!(r["period_over_pi"], 7);
    assert_eq!((r["p"].as_i64(), r["q"].as_u64()), (Some(5), Some(7)));
    assert_eq!(r["verified"], true);
    assert!((r["period"].as_f64().unwrap() - 7.0 * std::f64::consts::PI).abs() < 1e-12);

    let r = json(&stdout_ok(&["period", "--h", "sqrt(2)", "--j", "1"]));
    assert_eq!(r["kind"], "quasi_periodic");

    let r = json(&stdout_ok(&["period", "--h", "1", "--j", "1"]));
    assert_eq!(r["period_over_pi"], 1);
    assert_eq!(r["verified"], true);

    let r = json(&stdout_ok(&["period", "--h", "1", "--j", "0"]));
    assert_eq!(r["kind"], "degenerate");
}

#[test]
fn measure_identity() {
    let r = json(&stdout_ok(&[
        "measure",
        data("identity_2x2.toml").to_str().unwrap(),
    ]));
    assert_eq!(r["epsilon"].as_f64(), Some(0.0));
    assert_eq!(r["trace_re"].as_f64(), Some(4.0));
    assert_eq!(r["p"].as_f64(), Some(2.0));
}

#[test]
fn measure_seeded_product_is_zero() {
    let s2 = SpaceStructure::new(vec![2]).unwrap();
    let a1 = random_operator(&s2, RandomKind::Generic, 17).into_matrix();
    let a2 = random_operator(&s2, RandomKind::Generic, 18).into_matrix();
    let op =
        OperatorOnSpace::new(kron(&a1, &a2), SpaceStructure::new(vec![2, 2]).unwrap()).unwrap();
    let path = scratch("product.toml");
    std::fs::write(&path, format_operator(&op)).unwrap();
    for p in ["2", "1", "inf"] {
        let r = json(&stdout_ok(&["measure", "--p", p, path.to_str().unwrap()]));
        assert!(r["epsilon"].as_f64().unwrap().abs() < 1e-10, "p = {p}: {r}");
    }
}

#[test]
fn measure_ising_evolution_operator() {
    let r = json(&stdout_ok(&[
        "measure",
        data("ising2_u_pi4.toml").to_str().unwrap(),
    ]));
    assert!((r["epsilon"].as_f64().unwrap() - 0.0526803).abs() < 1e-7);
}

#[test]
fn exit_codes() {
    let traceless = run(&["measure", data("traceless_zz.toml").to_str().unwrap()]);
    assert_eq!(traceless.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&traceless.stderr).contains("traceless"));

    let malformed = run(&["measure", data("malformed.toml").to_str().unwrap()]);
    assert_eq!(malformed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("line 3"));

    assert_eq!(
        run(&["measure", "/nonexistent/op.toml"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["evolve", "--stop", "1", "--start", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["evolve", "--stop", "1", "--points", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["evolve", "--stop", "abc"]).status.code(), Some(2));
    assert_eq!(
        run(&["evolve", "--stop", "1", "--p", "0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("sweep.csv");
    let status = bin()
        .args([
            "evolve",
            "--stop",
            "1",
            "--points",
            "3",
            "--out",
            path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        written,
        stdout_ok(&["evolve", "--stop", "1", "--points", "3"])
    );
}

#[test]
fn random_model_is_seeded() {
    let args = [
        "evolve", "--model", "random", "--dims", "2,3", "--stop", "1", "--points", "4",
    ];
    let a = stdout_ok(&[&args[..], &["--seed", "5"]].concat());
    let b = stdout_ok(&[&args[..], &["--seed", "5"]].concat());
    let c = stdout_ok(&[&args[..], &["--seed", "6"]].concat());
    assert_eq!(a, b);
    assert_ne!(a, c);
}
