use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylcone"))
        .args(args)
        .env_remove("WEYLCONE_SEED")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    std::fs::create_dir_all(&d).unwrap();
    d
}

const DECOMPOSE: &[&str] = &[
    "regions",
    "decompose",
    "--type",
    "A",
    "--rank",
    "2",
    "--rep",
    "adjoint",
    "--Q",
    "a1",
    "--eps",
    "1/4",
    "--T",
    "roots:20,23",
    "--S",
    "roots:1/2,1/3",
];

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"], &["regions", "decompose", "--help"]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0));
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn argument_errors_exit_two_with_json() {
    for args in [
        &["gamma", "--type", "A", "--rank", "2", "--X", "1/0", "--T", "1,1"][..],
        &["gamma", "--type", "A", "--rank", "2", "--X", "1,1,1", "--T", "1,1"],
        &["frobnicate"],
        &["asymptote", "toy", "--branch", "sideways"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(err["error"]["kind"].is_string() && err["error"]["message"].is_string());
    }
}

#[test]
fn domain_errors_exit_one() {
    // S far outside C_ε
    let out = run(&[
        "regions",
        "decompose",
        "--type",
        "A",
        "--rank",
        "2",
        "--rep",
        "adjoint",
        "--eps",
        "1/4",
        "--T",
        "roots:20,23",
        "--S",
        "roots:9,-9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "not_well_situated");
}

#[test]
fn gamma_values() {
    let inside = json_of(&run(&[
        "gamma", "--type", "A", "--rank", "2", "--Q", "a1,a2", "--X", "1,1", "--T", "3,3", "--oracle",
    ]));
    assert_eq!(inside["value"], 1);
    assert_eq!(inside["lp_membership"], true);
    assert_eq!(inside["provenance"]["numeric"], "exact");
    let outside = json_of(&run(&[
        "gamma", "--type", "A1xA1", "--Q", "a1,a2", "--X", "5,1", "--T", "3,3",
    ]));
    assert_eq!(outside["value"], 0);
}

#[test]
fn bv_matches_oracle_and_handles_limits() {
    let generic = json_of(&run(&[
        "bv",
        "--normals",
        "1,0;0,1;-1,-1",
        "--x",
        "0,0,1",
        "--mu",
        "1,2",
        "--oracle",
    ]));
    assert_eq!(generic["generic"], true);
    assert!(generic["oracle"]["relative_error"].as_f64().unwrap() < 1e-12);
    let limit = json_of(&run(&[
        "bv",
        "--normals",
        "1,0;0,1;-1,-1",
        "--x",
        "0,0,1",
        "--mu",
        "0,0",
    ]));
    assert_eq!(limit["generic"], false);
    assert!((limit["value"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn decompose_refine_slice_round_trip() {
    let dir = scratch("pipeline");
    let dec = run(&[DECOMPOSE, &["--check-points", "300"]].concat());
    let d = json_of(&dec);
    assert_eq!(d["partition"]["ok"], true);
    assert_eq!(d["regions"].as_array().unwrap().len(), 2);
    std::fs::write(dir.join("dec.json"), &dec.stdout).unwrap();

    let rf = run(&["regions", "refine", "--input", dir.join("dec.json").to_str().unwrap()]);
    let r = json_of(&rf);
    assert_eq!(r["delta_prime"], "1/2");
    assert!(!r["cells"].as_array().unwrap().is_empty());
    std::fs::write(dir.join("ref.json"), &rf.stdout).unwrap();

    let sl = json_of(&run(&[
        "regions",
        "slice",
        "--input",
        dir.join("ref.json").to_str().unwrap(),
        "--mu",
        "1/7,1/11",
        "--fit",
        "--grid",
        "3",
    ]));
    assert!(sl["integral"].as_f64().unwrap() > 0.0);
    assert!(sl["fit"]["max_residual"].as_f64().unwrap() <= 1e-6);
    assert_eq!(sl["fit"]["samples"], 27);
}

#[test]
fn output_is_independent_of_jobs() {
    let base = [DECOMPOSE, &["--check-points", "200"]].concat();
    let one = run(&[&["--jobs", "1"][..], &base].concat());
    let four = run(&[&["--jobs", "4"][..], &base].concat());
    assert_eq!(one.stdout, four.stdout);
    let toy1 = run(&["--jobs", "1", "asymptote", "toy", "--format", "json"]);
    let toy3 = run(&["--jobs", "3", "asymptote", "toy", "--format", "json"]);
    assert_eq!(toy1.stdout, toy3.stdout);
}

#[test]
fn seed_flag_and_environment() {
    let dir = scratch("seed");
    let poly = dir.join("tri.json");
    std::fs::write(&poly, r#"{"H":[{"normal":["1","0"],"offset":"0"},{"normal":["0","1"],"offset":"0"},{"normal":["-1","-1"],"offset":"1"}]}"#).unwrap();
    let p = poly.to_str().unwrap();
    let args = |seed: &str| {
        vec![
            "--seed",
            seed,
            "oracle",
            "integrate",
            "--input",
            p,
            "--mu",
            "1,1",
            "--monte-carlo",
            "500",
        ]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()
    };
    let a = run(&args("3").iter().map(String::as_str).collect::<Vec<_>>());
    let b = run(&args("3").iter().map(String::as_str).collect::<Vec<_>>());
    let c = run(&args("4").iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_weylcone"))
        .args([
            "oracle",
            "integrate",
            "--input",
            p,
            "--mu",
            "1,1",
            "--monte-carlo",
            "500",
        ])
        .env("WEYLCONE_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    let v = json_of(&a);
    let err = (v["monte_carlo"]["mean"].as_f64().unwrap() - v["value"].as_f64().unwrap()).abs();
    assert!(err < 5.0 * v["monte_carlo"]["standard_error"].as_f64().unwrap());
}

#[test]
fn vertices_as_off() {
    let dir = scratch("off");
    let cube = dir.join("cube.json");
    let mut rows = Vec::new();
    for k in 0..3 {
        let mut e = vec!["0"; 3];
        e[k] = "1";
        rows.push(format!(r#"{{"normal":{:?},"offset":"0"}}"#, e));
        e[k] = "-1";
        rows.push(format!(r#"{{"normal":{:?},"offset":"2"}}"#, e));
    }
    std::fs::write(&cube, format!(r#"{{"H":[{}]}}"#, rows.join(","))).unwrap();
    let out = run(&[
        "oracle",
        "vertices",
        "--input",
        cube.to_str().unwrap(),
        "--format",
        "off",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("OFF\n8 6 12\n"));
    let j = json_of(&run(&["oracle", "vertices", "--input", cube.to_str().unwrap()]));
    assert_eq!(j["volume"], "8");
}
