use std::path::Path;
use std::process::{Command, Output};

use heisenberg_xray::{
    forward_spectral, Complex64, ModeIndex, PlanarAtom, RationalMomentum, SignalDecomposition,
};
use heisenberg_xray_cli::{parse_signal, serialize_signal};
use proptest::prelude::*;
use serde_json::Value;

fn hxray(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hxray"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const UNIT_N1: &str = r#"{"planar":[],"modes":[{"n":1,"j":0,"k":0,"amp":[1.0,0.0]}]}"#;

#[test]
fn svd_row() {
    let out = hxray(&["svd", "--r", "1", "--n-max", "1", "--j-max", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(
        &headers,
        vec!["n", "j", "r", "s", "phase_re", "phase_im", "target_j"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    let row = rows.iter().find(|r| &r[0] == "1").unwrap();
    assert_eq!(&row[1], "0");
    let s: f64 = row[3].parse().unwrap();
    assert!((s - 2.0 * std::f64::consts::PI * (-0.5f64).exp()).abs() < 1e-12);
    assert!((s - 3.810945).abs() < 1e-6);
    assert_eq!(&row[6], "1");
}

#[test]
fn quadrature_misses_odd_frequency_at_half() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.json", UNIT_N1);
    let out = hxray(&[
        "xray",
        "--r",
        "1/2",
        "--method",
        "quadrature",
        "-i",
        &input,
        "--at",
        "0,0,0",
        "--at",
        "0.4,-1.1,2.0",
        "--at",
        "-1.5,0.2,0.3",
    ]);
    let v = stdout_json(&out);
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 3);
    for val in values {
        let re = val["value"][0].as_f64().unwrap();
        let im = val["value"][1].as_f64().unwrap();
        assert!(re.hypot(im) < 1e-10);
    }

    let out = hxray(&["xray", "--r", "1/2", "-i", &input]);
    let x = parse_signal(std::str::from_utf8(&out.stdout).unwrap(), false).unwrap();
    assert!(x.is_empty());
}

#[test]
fn spectral_and_quadrature_agree_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "s.json",
        r#"{"planar":[{"xi":[0.7,-0.3],"amp":[0.5,0.25]}],"modes":[{"n":2,"j":1,"k":0,"amp":[1.0,-0.5]},{"n":-1,"j":0,"k":2,"amp":[0.0,1.0]}]}"#,
    );
    let at = ["--at", "0.3,0.1,0.7", "--at", "-0.9,1.2,2.9"];
    let mut spec_args = vec!["xray", "--r", "1", "-i", &input];
    spec_args.extend(at);
    let mut quad_args = spec_args.clone();
    quad_args.extend(["--method", "quadrature", "--quad-points", "4096"]);
    let s = stdout_json(&hxray(&spec_args));
    let q = stdout_json(&hxray(&quad_args));
    for (a, b) in s["values"]
        .as_array()
        .unwrap()
        .iter()
        .zip(q["values"].as_array().unwrap())
    {
        let d = (a["value"][0].as_f64().unwrap() - b["value"][0].as_f64().unwrap())
            .hypot(a["value"][1].as_f64().unwrap() - b["value"][1].as_f64().unwrap());
        assert!(d < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn scan_zeros_l2() {
    let v = stdout_json(&hxray(&[
        "scan-zeros",
        "--kind",
        "lj",
        "--j",
        "2",
        "--window",
        "10",
        "--step",
        "0.01",
    ]));
    let zeros = v["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 1);
    assert!((zeros[0]["witness"].as_f64().unwrap() - 2.0).abs() <= 1e-10);

    let v = stdout_json(&hxray(&["scan-zeros", "--kind", "j0", "--window", "0,10"]));
    let zeros: Vec<f64> = v["zeros"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| z["witness"].as_f64().unwrap())
        .collect();
    assert_eq!(zeros.len(), 3);
    assert!((zeros[0] - 2.404825557695773).abs() < 1e-9);
}

#[test]
fn adjoint_and_normal_commands() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.json", UNIT_N1);
    let out = hxray(&["normal", "--r", "1", "-i", &input]);
    let x = parse_signal(std::str::from_utf8(&out.stdout).unwrap(), false).unwrap();
    let v = x.mode(&ModeIndex::new(1, 0, 0).unwrap());
    let c = 2.0 * std::f64::consts::PI * (-0.5f64).exp();
    assert!((v.re - c * c).abs() < 1e-12 && v.im == 0.0);

    let out = hxray(&["adjoint", "--r", "1", "-i", &input]);
    let x = parse_signal(std::str::from_utf8(&out.stdout).unwrap(), false).unwrap();
    assert!(x.is_empty(), "j = 0 < r|n| has no preimage index");
}

#[test]
fn two_radius_report() {
    let v = stdout_json(&hxray(&[
        "two-radius",
        "--r1",
        "1/2",
        "--r2",
        "1/3",
        "--j-max",
        "6",
        "--n-max",
        "30",
        "--zero-window",
        "20",
    ]));
    assert_eq!(v["gap_modulus"], 6);
    assert_eq!(v["delta_z_gap"], serde_json::json!([1, 5]));
    assert_eq!(v["verdict"], "obstructed");

    let out = hxray(&["two-radius", "--r1", "1", "--r2", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reconstruct_round_trip_and_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let mut x = SignalDecomposition::new();
    x.add_mode(ModeIndex::new(2, 0, 0).unwrap(), Complex64::new(1.0, 0.5));
    x.add_mode(ModeIndex::new(2, 2, 1).unwrap(), Complex64::new(-0.25, 2.0));
    x.add_mode(ModeIndex::new(-1, 1, 0).unwrap(), Complex64::new(0.0, -1.0));
    x.add_planar(PlanarAtom::new([0.5, 0.25], Complex64::new(2.0, 0.0)));
    let one = RationalMomentum::ONE;
    let half = RationalMomentum::new(1, 2).unwrap();
    let g1 = write(
        dir.path(),
        "g1.json",
        &serialize_signal(&forward_spectral(&x, one)),
    );
    let g2 = write(
        dir.path(),
        "g2.json",
        &serialize_signal(&forward_spectral(&x, half)),
    );

    let v = stdout_json(&hxray(&[
        "reconstruct",
        "--g1",
        &g1,
        "--r1",
        "1",
        "--g2",
        &g2,
        "--r2",
        "1/2",
        "--n-max",
        "2",
        "--j-max",
        "2",
        "--k-max",
        "1",
    ]));
    let y = parse_signal(&v["signal"].to_string(), false).unwrap();
    assert!(x.max_abs_diff(&y) < 1e-12);
    assert!(v["unresolved"].as_array().unwrap().is_empty());

    let v = stdout_json(&hxray(&[
        "reconstruct",
        "--g1",
        &g1,
        "--r1",
        "1",
        "--n-max",
        "2",
        "--j-max",
        "2",
        "--k-max",
        "1",
    ]));
    let unresolved = v["unresolved"].as_array().unwrap();
    assert!(unresolved.contains(&serde_json::json!({"n": 2, "j": 2, "k": 1})));

    let out = hxray(&["reconstruct", "--g1", &g1, "--r1", "1", "--g2", &g2]);
    assert_eq!(out.status.code(), Some(1), "--g2 needs --r2");
}

#[test]
fn fan_outputs() {
    let out = hxray(&["fan", "--n-max", "2", "--j-max", "2", "--r", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "n,j_src,j_dst,r\n-2,0,2,1\n-1,0,1,1\n-1,1,2,1\n1,0,1,1\n1,1,2,1\n2,0,2,1\n"
    );
    let out = hxray(&["fan", "--table", "points", "--n-max", "1", "--j-max", "1"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "n,j,eig_T,eig_L,ray\n-1,0,-2.0,2.0,1\n-1,1,-2.0,6.0,2\n1,0,2.0,2.0,1\n1,1,2.0,6.0,2\n"
    );
    let v = stdout_json(&hxray(&["fan", "--format", "json", "--r", "1/2"]));
    assert_eq!(v["arrows"].as_array().unwrap().len(), 4);
    assert_eq!(v["points"].as_array().unwrap().len(), 12);
    assert_eq!(v["points"][0]["eig_L"], 4.0);
}

#[test]
fn audit_json_has_notes_and_rows() {
    let v = stdout_json(&hxray(&[
        "audit", "--m-max", "2", "--j-max", "2", "--format", "json",
    ]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["notes"].as_array().unwrap().len(), 3);
    let kernel = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["m"] == 2 && r["j"] == 2)
        .unwrap();
    assert!(kernel["ratio"].is_null());
    let text = hxray(&["audit", "--m-max", "1", "--j-max", "0"]);
    assert!(String::from_utf8(text.stdout).unwrap().lines().count() >= 5);
}

#[test]
fn verify_exit_codes() {
    let out = hxray(&[
        "verify", "--n-max", "1", "--j-max", "1", "--k-max", "1", "--points", "3", "--r", "1", "--r", "1/2",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checked"], 2 * 8 * 3);

    let out = hxray(&[
        "verify",
        "--n-max",
        "1",
        "--j-max",
        "1",
        "--k-max",
        "0",
        "--points",
        "2",
        "--r",
        "1",
        "--quad-points",
        "16",
        "--rel-tol",
        "1e-15",
        "--abs-tol",
        "1e-15",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    for bad in ["0/1", "1/0", "-1/2", "0.5", "1/2/3", "x"] {
        assert_eq!(hxray(&["svd", "--r", bad]).status.code(), Some(1), "{bad}");
    }
    let dup = write(
        dir.path(),
        "dup.json",
        r#"{"planar":[],"modes":[{"n":1,"j":0,"k":0,"amp":[1,0]},{"n":1,"j":0,"k":0,"amp":[1,0]}]}"#,
    );
    let out = hxray(&["xray", "-i", &dup]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("modes[1]"));
    assert!(hxray(&["xray", "-i", &dup, "--merge"]).status.success());

    let broken = write(
        dir.path(),
        "broken.json",
        "{\"planar\": [],\n \"modes\": [ {\"n\": 1 ]}",
    );
    let out = hxray(&["xray", "-i", &broken]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    assert_eq!(
        hxray(&["xray", "-i", "/nonexistent/signal.json"]).status.code(),
        Some(1)
    );
    assert_eq!(
        hxray(&["scan-zeros", "--kind", "lj", "--window", "5,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(hxray(&["svd", "--n-max", "0"]).status.code(), Some(1));
    assert_eq!(hxray(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hxray(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fan.csv");
    let out = hxray(&["fan", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("n,j_src,j_dst,r\n"));
}

fn arb_complex() -> impl Strategy<Value = Complex64> {
    (-1e3..1e3f64, -1e3..1e3f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn arb_signal() -> impl Strategy<Value = SignalDecomposition> {
    let modes = prop::collection::vec(
        ((1i64..8, any::<bool>()), 0u64..20, 0u64..20, arb_complex()),
        0..12,
    );
    let planar = prop::collection::vec(((-5.0..5.0f64, -5.0..5.0f64), arb_complex()), 0..4);
    (modes, planar).prop_map(|(modes, planar)| {
        let mut x = SignalDecomposition::new();
        for ((n, neg), j, k, a) in modes {
            x.add_mode(ModeIndex::new(if neg { -n } else { n }, j, k).unwrap(), a);
        }
        for ((u, v), a) in planar {
            x.add_planar(PlanarAtom::new([u, v], a));
        }
        x
    })
}

proptest! {
    #[test]
    fn parse_inverts_serialize(x in arb_signal()) {
        let text = serialize_signal(&x);
        let y = parse_signal(&text, false).unwrap();
        prop_assert_eq!(&x, &y);
        prop_assert_eq!(serialize_signal(&y), text);
    }
}
