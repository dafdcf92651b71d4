use std::path::{Path, PathBuf};

use qsheaf_cli::run;

fn models() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn model(name: &str) -> String {
    models().join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("qsheaf").chain(args.iter().copied()).collect();
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_model(dir: &Path, body: &str) -> String {
    let p = dir.join("m.json");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn polymology_of_projective_plane() {
    let (code, out, _) = exec(&["polymology", &model("p2"), "--no-cache"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("dims 1,1,1\n"), "{out}");
}

#[test]
fn projective_line_series() {
    let (code, out, _) = exec(&["correlator", &model("p1"), "--poly", "D1^3", "--no-cache"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("series q1\n"), "{out}");
    let (_, out, _) = exec(&["correlator", &model("p1"), "--poly", "D1^3 + D2^5", "--max-degree", "4", "--no-cache"]);
    assert!(out.ends_with("series q1 + q1^2\n"), "{out}");
}

#[test]
fn explicit_sectors_for_non_fano() {
    let (code, _, err) = exec(&["correlator", &model("f2"), "--poly", "D1*D2", "--no-cache"]);
    assert_eq!(code, 1);
    assert!(err.contains("list the sectors explicitly"), "{err}");
    let (code, out, _) = exec(&["correlator", &model("f2"), "--poly", "D2^4", "--beta", "1,0", "--no-cache"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("[1,0]"), "{out}");
}

#[test]
fn verify_hirzebruch_grid() {
    let (code, out, _) = exec(&["verify", &model("f1"), "--all", "--grid", "6", "--no-cache"]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with(", 0 failed"), "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn sector_report() {
    let (code, out, _) = exec(&["sector", &model("f2"), "--beta", "1,0", "--no-cache"]);
    assert_eq!(code, 0);
    assert!(out.contains("enhanced edges (5)"), "{out}");
    assert!(out.contains("degenerate edges: (rho4,0)"), "{out}");
    assert!(out.contains("n_beta 3"), "{out}");
}

#[test]
fn qsr_report_for_deformed_quadric() {
    let (code, out, _) = exec(&["qsr", &model("p1xp1_deformed")]);
    assert_eq!(code, 0);
    assert_eq!(out, "{rho1,rho2}: psi1^2 + 1/21*psi2^2 - q1\n{rho3,rho4}: -1/21*psi1^2 + psi2^2 - q2\n");
}

#[test]
fn json_reports_are_versioned() {
    let (code, out, _) = exec(&["qsr", &model("p2"), "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "qsheaf-report/1");
    assert_eq!(v["relations"][0]["relation"], "psi1^3 - q1");
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["analyze", "f3"],
        vec!["verify", "f2", "--all", "--grid", "4"],
        vec!["correlator", "p1xp1", "--poly", "D1*D3 + D1^3*D3"],
    ] {
        let mut a: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        a[1] = model(args[1]);
        a.extend(["--no-cache".to_string(), "--format".to_string(), "json".to_string()]);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        let first = exec(&refs);
        let second = exec(&refs);
        assert_eq!(first, second);
    }
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    // the environment is process-wide; this is the only test touching it
    std::env::set_var("QSHEAF_CACHE", dir.path());
    let cases: Vec<Vec<String>> = vec![
        vec!["correlator".into(), model("p2"), "--poly".into(), "D1^2 + D1^5 + D1^8".into()],
        vec!["sector".into(), model("f1"), "--beta".into(), "2,1".into()],
        vec!["polymology".into(), model("p1xp1_deformed")],
    ];
    for c in &cases {
        let refs: Vec<&str> = c.iter().map(String::as_str).collect();
        let cold = exec(&refs);
        let warm = exec(&refs);
        let mut nc = refs.clone();
        nc.push("--no-cache");
        let bypass = exec(&nc);
        assert_eq!(cold, warm);
        assert_eq!(cold, bypass);
    }
    let stored = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(stored > 0);
    std::env::remove_var("QSHEAF_CACHE");
}

#[test]
fn missing_file_and_parse_errors() {
    let (code, _, err) = exec(&["analyze", "/nonexistent/model.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent/model.json"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let p = write_model(dir.path(), "{\n  \"version\": \"qsheaf-model/1\",\n  \"fan\": [\n}");
    let (code, _, err) = exec(&["analyze", &p]);
    assert_eq!(code, 1);
    assert!(err.contains("line 4"), "{err}");

    let p = write_model(dir.path(), r#"{"version": "qsheaf-model/9", "fan": {"rank": 1, "rays": [[1],[-1]], "max_cones": [[0],[1]]}}"#);
    let (code, _, err) = exec(&["analyze", &p]);
    assert_eq!(code, 1);
    assert!(err.contains("unsupported model version"), "{err}");

    let (code, _, _) = exec(&["frobnicate"]);
    assert_eq!(code, 1);
}

#[test]
fn validation_errors_name_their_module() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_model(
        dir.path(),
        r#"{"version": "qsheaf-model/1", "fan": {"rank": 2, "rays": [[1,0],[1,2],[-1,-1]], "max_cones": [[0,1],[1,2],[2,0]]}}"#,
    );
    let (code, _, err) = exec(&["analyze", &p]);
    assert_eq!(code, 1);
    assert!(err.contains("FanError"), "{err}");

    let p = write_model(
        dir.path(),
        r#"{"version": "qsheaf-model/1", "fan": {"rank": 1, "rays": ["1", "-1"], "max_cones": [[0],[1]]}}"#,
    );
    assert_eq!(exec(&["analyze", &p]).0, 1);

    let p = write_model(
        dir.path(),
        r#"{"version": "qsheaf-model/1", "fan": {"rank": 1, "rays": [["1"],["-1"]], "max_cones": [[0],[1]]},
            "deformation": {"entries": [{"rho": 0, "m": ["2"], "coeff": "D1"}]}}"#,
    );
    let (code, _, err) = exec(&["analyze", &p]);
    assert_eq!(code, 1);
    assert!(err.contains("DeformationError"), "{err}");

    let p = write_model(
        dir.path(),
        r#"{"version": "qsheaf-model/1", "fan": {"rank": 1, "rays": [["1"],["-1"]], "max_cones": [[0],[1]]},
            "deformation": {"entries": [{"rho": 0, "m": ["-1"], "coeff": "D1 +* 2"}]}}"#,
    );
    let (code, _, err) = exec(&["analyze", &p]);
    assert_eq!(code, 1);
    assert!(err.contains("column"), "{err}");
}

#[test]
fn rank_drop_is_a_verification_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_model(
        dir.path(),
        r#"{"version": "qsheaf-model/1", "fan": {"rank": 1, "rays": [["1"],["-1"]], "max_cones": [[0],[1]]},
            "deformation": {"tangent": false, "entries": [
              {"rho": 0, "m": ["0"], "coeff": "psi1"}, {"rho": 0, "m": ["-1"], "coeff": "psi1"},
              {"rho": 1, "m": ["0"], "coeff": "psi1"}, {"rho": 1, "m": ["1"], "coeff": "psi1"}]}}"#,
    );
    let (code, out, _) = exec(&["analyze", &p]);
    assert_eq!(code, 2);
    assert!(out.contains("local freeness: FAIL"), "{out}");
}
