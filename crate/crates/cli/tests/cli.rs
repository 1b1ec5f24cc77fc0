use std::process::Command;

use knotgeo_cli::{run, EXIT_DIFF, EXIT_OK, EXIT_REGISTRY, EXIT_USAGE};

fn knotgeo(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("knotgeo").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, body: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("knotgeo-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn invariants_first_line() {
    let (code, out, _) = knotgeo(&["invariants", "T(3,7)"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next(), Some("sigma: -8, upsilon1: -4, arf: 0, det: 1"));
}

#[test]
fn gamma4_family_member() {
    let (code, out, _) = knotgeo(&["gamma4", "2*T(5,9) # -3*T(5,13)"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next(), Some("gamma4: 2 ≤ γ₄ ≤ 7"));
}

#[test]
fn verify_counts_unknown_points() {
    let (code, out, _) = knotgeo(&["verify", "t2", "9"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "unknown points: 8"), "{out}");
    let (code, out, _) = knotgeo(&["verify", "t3", "8"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("unknown ray: (-14,3) direction (+2,+1)"), "{out}");
}

#[test]
fn verify_accepts_an_explicit_box() {
    let (code, out, _) = knotgeo(&["verify", "t3", "7", "--box", "-40,10,2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("box: e in [-40, 10], h <= 2"));
}

#[test]
fn mirrored_expression_is_accepted() {
    let (code, out, err) = knotgeo(&["invariants", "-T(2,3)"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("sigma: 2, upsilon1: 1"));
}

#[test]
fn classify_formats() {
    let (code, json, _) = knotgeo(&["classify", "T(2,3)", "--box", "-14,8,6"]);
    assert_eq!(code, EXIT_OK);
    assert!(json.starts_with("{\n  \"box\": {"));
    assert!(json.ends_with("}\n"));
    let (code, ascii, _) = knotgeo(&["classify", "T(2,3)", "--box", "-14,8,6", "--format", "ascii"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(ascii.lines().count(), 6 + 3);
    let (code, svg, _) = knotgeo(&["plot", "T(2,3)", "--box", "-14,8,6"]);
    assert_eq!(code, EXIT_OK);
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
}

#[test]
fn usage_errors() {
    for args in [
        &["frobnicate"][..],
        &["invariants", "T(2,"],
        &["invariants", "T(4,6)"],
        &["invariants", "9_9"],
        &["classify", "T(2,3)", "--box", "1,2"],
        &["classify", "T(2,3)", "--box", "5,1,3"],
        &["verify", "t2", "4"],
        &["verify", "t5", "7"],
        &["classify", "T(2,3)", "--box", "-100000,100000,1000"],
    ] {
        let (code, out, err) = knotgeo(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(err.starts_with("error:"), "{args:?}: {err}");
    }
}

#[test]
fn help_and_version_succeed() {
    let (code, out, _) = knotgeo(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("classify"));
    let (code, out, _) = knotgeo(&["--version"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(knotgeo::ENGINE_VERSION));
}

#[test]
fn registry_errors_exit_two() {
    let (code, _, err) = knotgeo(&["--registry", "/nonexistent/registry.json", "invariants", "U"]);
    assert_eq!(code, EXIT_REGISTRY);
    assert!(err.starts_with("error:"));
    let bad = temp_file("bad.json", "{ not json");
    let (code, _, _) = knotgeo(&["--registry", bad.to_str().unwrap(), "invariants", "U"]);
    assert_eq!(code, EXIT_REGISTRY);
}

#[test]
fn user_registry_overrides_with_warning() {
    let path = temp_file(
        "override.json",
        r#"{"delta": [{"p": 5, "q": 9, "delta": "6", "provenance": "test override"}]}"#,
    );
    let (code, out, err) = knotgeo(&["--registry", path.to_str().unwrap(), "invariants", "T(5,9)"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.starts_with("warning:"), "{err}");
    assert!(out.contains("delta: 6"), "{out}");
}

#[test]
fn verify_exits_three_on_a_diff() {
    // A delta value for T(3,7) puts a delta line through its unknown ray.
    let path = temp_file(
        "ray.json",
        r#"{"delta": [{"p": 3, "q": 7, "delta": "-2", "provenance": "test value"}]}"#,
    );
    let (code, out, _) = knotgeo(&["--registry", path.to_str().unwrap(), "verify", "t3", "7"]);
    assert_eq!(code, EXIT_DIFF, "{out}");
    assert!(out.contains("DIFF"));
}

#[test]
fn environment_registry_is_read() {
    let out = Command::new(env!("CARGO_BIN_EXE_knotgeo"))
        .args(["invariants", "U"])
        .env("KNOTGEO_REGISTRY", "/nonexistent/registry.json")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_REGISTRY));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn disabling_the_mirror_delta_line_changes_the_classification() {
    let args = ["classify", "-2*T(5,9) # 3*T(5,13)", "--box", "-130,-80,12"];
    let (_, with, _) = knotgeo(&args);
    let mut off = vec!["--no-mirror-delta"];
    off.extend(args);
    let (code, without, _) = knotgeo(&off);
    assert_eq!(code, EXIT_OK);
    assert!(with.contains("\"delta_line\": {"));
    assert!(without.contains("\"delta_line\": null"));
}
