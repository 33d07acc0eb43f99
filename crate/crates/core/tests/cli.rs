use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hopf_cw::fixtures::{fixture, FIXTURE_NAMES};
use hopf_cw::io::{export, load_spec, parse_spec, to_canonical_string};
use hopf_cw::scalar::Rational;

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopf-cw"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bundled_files_match_the_builders_byte_for_byte() {
    for name in FIXTURE_NAMES {
        let path = bundled(name);
        let text = std::fs::read_to_string(&path).unwrap();
        let spec = load_spec(&path).unwrap();
        assert_eq!(
            to_canonical_string(&spec).unwrap(),
            text,
            "{name}: save(load) differs"
        );
        let built = export(&fixture::<Rational>(name).unwrap()).unwrap();
        assert_eq!(built, spec, "{name}: file and builder differ");
    }
}

#[test]
fn verify_writes_deterministic_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let f1 = bundled("f1");
    for out in [&a, &b] {
        let o = cli(&[
            "verify",
            f1.to_str().unwrap(),
            "--suite",
            "all",
            "--report",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("elapsed"));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ra, rb);
    let text = String::from_utf8(ra).unwrap();
    assert!(!text.contains("elapsed"));
    assert!(text.contains("\"status\": \"pass\""));
}

#[test]
fn compute_chw_outputs_components_and_flags() {
    let o = cli(&[
        "compute",
        "chw",
        bundled("f1").to_str().unwrap(),
        "--cotrace",
        "g",
        "--degree",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["x"].as_array().unwrap().len(), 3);
    assert_eq!(v["flags"]["D(chw) = 0"], serde_json::Value::Bool(true));
}

#[test]
fn compute_chw_rejections() {
    let f3 = bundled("f3");
    let o = cli(&[
        "compute",
        "chw",
        f3.to_str().unwrap(),
        "--cotrace",
        "x",
        "--degree",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cotraces"));
    let o = cli(&[
        "compute",
        "chw",
        bundled("f1").to_str().unwrap(),
        "--cotrace",
        "g",
        "--degree",
        "40",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("guardrail"));
}

#[test]
fn homology_of_the_ground_field() {
    for (deg, dim) in [(0, 1), (1, 0), (2, 1)] {
        for mode in ["connes", "bicomplex"] {
            let d = deg.to_string();
            let o = cli(&[
                "homology",
                bundled("f1").to_str().unwrap(),
                "--degree",
                &d,
                "--mode",
                mode,
            ]);
            assert_eq!(o.status.code(), Some(0));
            let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
            assert_eq!(v["dim"], dim, "HC_{deg} in {mode} mode");
        }
    }
}

#[test]
fn deform_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f2g.json");
    let o = cli(&[
        "deform",
        bundled("f2").to_str().unwrap(),
        "--cocycle",
        "gamma",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = cli(&["verify", out.to_str().unwrap(), "--suite", "fixture"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn input_errors_and_check_failures() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(bundled("f4")).unwrap();
    let bad_field = dir.path().join("field.json");
    std::fs::write(&bad_field, text.replace("\"field\": \"Q\"", "\"field\": \"R\"")).unwrap();
    let o = cli(&["verify", bad_field.to_str().unwrap(), "--suite", "galois"]);
    assert_eq!(o.status.code(), Some(2));

    let mut spec = parse_spec(&text).unwrap();
    spec.morphism.as_mut().unwrap().map[0].2 = "3".into();
    let corrupted = dir.path().join("morphism.json");
    std::fs::write(&corrupted, to_canonical_string(&spec).unwrap()).unwrap();
    let o = cli(&[
        "verify",
        corrupted.to_str().unwrap(),
        "--suite",
        "prop-pushforward",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));

    let o = cli(&["verify", bundled("f1").to_str().unwrap(), "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}
