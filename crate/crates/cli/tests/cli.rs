//! End-to-end checks of the binary: output contracts, JSON round trips, and
//! the exit-status convention (0 success, 1 domain refusal, 2 usage).

use std::process::{Command, Output};

fn rootspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootspace"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn aut_d4_reports_order_six() {
    let out = rootspace(&["aut", "--type", "D", "--rank", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("|Aut(DD)| = 6"));
}

#[test]
fn minusid_e6_is_nontrivial() {
    let out = rootspace(&["minusid", "--type", "E", "--rank", "6"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("opposition involution nontrivial"));

    let out = rootspace(&["minusid", "--type", "D", "--rank", "4"]);
    assert!(stdout(&out).contains("opposition involution trivial"));
}

#[test]
fn isocheck_su_vs_sp() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/catalogue.txt");
    let out = rootspace(&["isocheck", "su(2,3)", "sp(2,3)", "--catalogue", path]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("not isomorphic"));
    assert!(
        text.contains("m4"),
        "weight witness shows the sp multiplicities: {text}"
    );
}

#[test]
fn construct_json_roundtrips_through_decompose() {
    let out = rootspace(&["construct", "--json", "--sum", "A:2+G:2"]);
    assert!(out.status.success());
    let doc = stdout(&out);
    let dir = tempdir();
    let path = dir.join("sys.json");
    std::fs::write(&path, &doc).unwrap();
    let out = rootspace(&["decompose", "--json", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let comps = parsed["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    std::fs::remove_dir_all(dir).ok();
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("rootspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn corrupted_input_is_a_domain_refusal() {
    let dir = tempdir();
    let path = dir.join("bad.json");
    // A_2 with a deleted root fails validation.
    std::fs::write(&path, r#"{"dim":1,"roots":[[[1,1]]]}"#).unwrap();
    let out = rootspace(&["decompose", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn usage_errors_exit_2() {
    let out = rootspace(&["weyl", "--type", "X", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rootspace(&["construct"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rootspace(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_refusal_exits_1() {
    let out = rootspace(&["weyl", "--type", "A", "--rank", "5", "--cap", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn verify_lift_passes_for_sl3r() {
    let out = rootspace(&["verify-lift", "--algebra", "sl(3,R)", "--json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["verdict"], serde_json::json!(true));
    assert_eq!(parsed["omega_order"], serde_json::json!(12));
}

#[test]
fn symspace_orders_and_boundary() {
    let out = rootspace(&[
        "symspace",
        "--spec",
        "sl(3,R):1,sl(3,R):1",
        "--boundary",
        "0",
        "1",
        "--json",
        "--seed-catalogue",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["autw_sigma_m"], serde_json::json!(288));
    assert_eq!(parsed["autw_dd_m"], serde_json::json!(8));
    assert_eq!(parsed["almost_killing"], serde_json::json!(true));
}

#[test]
fn seed_catalogue_refuses_sp_weights() {
    let out = rootspace(&["isocheck", "su(2,3)", "sp(2,3)", "--seed-catalogue"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weights"));
}

#[test]
fn catalogue_lists_provenance() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/catalogue.txt");
    let out = rootspace(&["catalogue", "--catalogue", path]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("external-reference"));
    assert!(text.contains("paper-stated"));
    assert!(text.contains("e6(-26)"));
}
