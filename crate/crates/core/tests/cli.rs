use std::process::Command;

use rapprox::cli::{run, Format, Params};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rapprox"))
}

#[test]
fn reports_are_byte_stable() {
    let scenarios = [
        r#"{"task": "lattice", "preset": "case1:2", "divisor": ["F+D0"]}"#,
        r#"{"task": "cones", "preset": "blowup_p2:4", "op": "nef"}"#,
        r#"{"task": "predict", "preset": "case2:3", "candidates": "S=S,F1=F1", "over_cone": true}"#,
        r#"{"task": "enumerate", "space": "p2", "max_height": 40, "near": "0:0:1", "threshold": "2"}"#,
        r#"{"task": "alpha", "preset": "cusp", "max_height": 120}"#,
        r#"{"task": "verify", "suite": "tables"}"#,
    ];
    for s in scenarios {
        let p = Params::from_scenario(s).unwrap();
        let a = run(&p).unwrap();
        let b = run(&p).unwrap();
        assert_eq!(a.render(Format::Json).unwrap(), b.render(Format::Json).unwrap(), "{s}");
        assert_eq!(a.csv, b.csv);
    }
}

#[test]
fn cones_dual_prints_ten_rays() {
    let out = bin().args(["cones", "dual", "--preset", "blowup_p2:4"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], 10);
    assert_eq!(v["rays"].as_array().unwrap().len(), 10);
}

#[test]
fn verify_fixture_suite_exits_zero() {
    let out = bin().args(["verify", "--suite", "paper-fixtures"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failed"], 0);
    let groups: std::collections::BTreeSet<&str> =
        v["checks"].as_array().unwrap().iter().map(|c| c["group"].as_str().unwrap()).collect();
    for g in ["duality", "tables", "pairing", "trees", "predictor", "coverage"] {
        assert!(groups.iter().any(|x| x.starts_with(g)), "missing {g} in {groups:?}");
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["predict", "--preset", "nosuch:1"],
        vec!["alpha", "--preset", "cusp", "--max-height", "0"],
        vec!["cones", "contains", "--preset", "case2:2"],
        vec!["frobnicate"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn scenario_file_and_out_path() {
    let dir = std::env::temp_dir().join(format!("rapprox-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let scen = dir.join("s.json");
    std::fs::write(
        &scen,
        r#"{"task": "predict", "preset": "blowup_p2:2", "candidates": "E1=E1,S=L-E1-E2", "divisor": ["4L-2E1-E2"]}"#,
    )
    .unwrap();
    let out_path = dir.join("r.csv");
    let out = bin()
        .args(["--scenario", scen.to_str().unwrap(), "--format", "csv", "--out", out_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(text, "divisor,alpha,winners\n4L-2E1-E2,1,S\n");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"task": "alpha", "maxheight": 3}"#).unwrap();
    let out = bin().args(["--scenario", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("maxheight"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_count_does_not_change_output() {
    let run_with = |n: &str| {
        bin()
            .env("RAPPROX_THREADS", n)
            .args(["alpha", "--preset", "twisted_cubic", "--max-height", "80"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run_with("1"), run_with("3"));
}
