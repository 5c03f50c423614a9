use std::path::PathBuf;

use qcldpc::sparse::import_alist;
use qcldpc::{ExponentMatrix, QcCode, SparseBinaryMatrix};
use qcldpc_cli::{run, CommandOutcome};
use serde_json::Value;

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/seed-3x6.json")
        .display()
        .to_string()
}

fn qcldpc(args: &[&str]) -> CommandOutcome {
    run(std::iter::once("qcldpc").chain(args.iter().copied()))
}

fn json(out: &CommandOutcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out))
}

#[test]
fn verify_fixture() {
    let out = qcldpc(&["verify", "--matrix", &fixture(), "--q", "393"]);
    assert_eq!(out.exit_code, 0, "{}", out.stderr);
    let v = json(&out);
    for key in ["cond1_girth12", "cond2_elementwise", "cond3_gap"] {
        assert_eq!(v[key], true);
    }
    assert_eq!(v["p2_max"], 224);
    assert_eq!(v["p2_second"], 170);
    assert_eq!(v["p1_max"], 26);
    assert_eq!(v["min_P"], 449);
}

#[test]
fn verify_failure_is_exit_one() {
    // Girth drops below 12 at Q = 300 while the other conditions still hold.
    let out = qcldpc(&["verify", "--matrix", &fixture(), "--q", "300"]);
    assert_eq!(out.exit_code, 1);
    assert_eq!(json(&out)["cond1_girth12"], false);
}

#[test]
fn girth_below_bound_has_witness() {
    let out = qcldpc(&["girth", "--matrix", &fixture(), "--p", "448"]);
    assert_eq!(out.exit_code, 0);
    let v = json(&out);
    assert_eq!(v["girth"], 8);
    assert_eq!(v["method"], "EXPONENT_CHECK");
    assert_eq!(v["witness"]["cols"], serde_json::json!([0, 5, 0, 5]));

    let oracle = json(&qcldpc(&["girth", "--matrix", &fixture(), "--p", "448", "--oracle"]));
    assert_eq!(oracle["girth"], 8);
    assert_eq!(oracle["method"], "GRAPH_BFS");
}

#[test]
fn extend_thirty_members() {
    let out = qcldpc(&[
        "extend",
        "--matrix",
        &fixture(),
        "--q",
        "393",
        "--from",
        "449",
        "--to",
        "478",
    ]);
    assert_eq!(out.exit_code, 0, "{}", out.stderr);
    let v = json(&out);
    let members = v["members"].as_array().unwrap();
    assert_eq!(members.len(), 30);
    assert_eq!(v["verified"], true);
    assert_eq!(v["min_P"], 449);
    for (i, m) in members.iter().enumerate() {
        assert_eq!(m["P"], 449 + i);
        assert_eq!(m["N"], 6 * (449 + i));
        assert_eq!(m["girth"], 12);
    }
    let seed = ExponentMatrix::from_json_str(&v["seed"].to_string()).unwrap();
    assert_eq!(seed, ExponentMatrix::read_json(fixture()).unwrap());

    let unverified = json(&qcldpc(&[
        "extend",
        "--matrix",
        &fixture(),
        "--q",
        "393",
        "--from",
        "449",
        "--to",
        "450",
        "--no-verify",
    ]));
    assert_eq!(unverified["verified"], false);
}

#[test]
fn extend_below_bound_is_input_error() {
    let out = qcldpc(&[
        "extend",
        "--matrix",
        &fixture(),
        "--q",
        "393",
        "--from",
        "448",
        "--to",
        "460",
    ]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("min_P = 449"));
}

#[test]
fn usage_errors() {
    for args in [
        vec!["frobnicate"],
        vec!["verify", "--q", "393"],
        vec!["girth", "--matrix", "x.json", "--p", "seven"],
        vec!["export", "--matrix", "x.json", "--p", "5", "--format", "png"],
    ] {
        let out = qcldpc(&args);
        assert_eq!(out.exit_code, 2, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(out.stderr.starts_with("error:"), "{args:?}: {}", out.stderr);
    }
    let missing = qcldpc(&["verify", "--matrix", "/nonexistent/seed.json", "--q", "393"]);
    assert_eq!(missing.exit_code, 2);
    assert!(missing.stderr.contains("cannot read"));
}

#[test]
fn help_goes_to_stdout() {
    let out = qcldpc(&["--help"]);
    assert_eq!(out.exit_code, 0);
    assert!(out.stdout.contains("simulate"));
}

#[test]
fn bad_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("neg.json");
    std::fs::write(&path, r#"{"rows": 1, "cols": 2, "entries": [[0, -1]]}"#).unwrap();
    let out = qcldpc(&["girth", "--matrix", path.to_str().unwrap(), "--p", "7"]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("negative"));

    std::fs::write(&path, "not json").unwrap();
    assert_eq!(
        qcldpc(&["girth", "--matrix", path.to_str().unwrap(), "--p", "7"]).exit_code,
        2
    );
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    let alist = dir.path().join("h.alist");
    let out = qcldpc(&[
        "export",
        "--matrix",
        &fixture(),
        "--p",
        "31",
        "--format",
        "alist",
        "--out",
        alist.to_str().unwrap(),
    ]);
    assert_eq!(out.exit_code, 0, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let expected = QcCode::new(ExponentMatrix::read_json(fixture()).unwrap(), 31)
        .unwrap()
        .expand();
    assert_eq!(
        import_alist(&std::fs::read_to_string(&alist).unwrap()).unwrap(),
        expected
    );

    let out = qcldpc(&["export", "--matrix", &fixture(), "--p", "31", "--format", "json"]);
    let h: SparseBinaryMatrix = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(h, expected);
}

#[test]
fn search_is_reproducible_and_writes_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("found.json");
    let args = [
        "search",
        "--cols",
        "4",
        "--q-cap",
        "200",
        "--seed",
        "11",
        "--steps",
        "1500",
        "--restarts",
        "2",
    ];
    let a = qcldpc(&args);
    assert_eq!(a.exit_code, 0, "{}", a.stderr);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap(), "--threads", "2"]);
    let b = qcldpc(&with_out);
    assert_eq!(a.stdout, b.stdout);

    let v = json(&a);
    let q = v["q"].as_u64().unwrap().to_string();
    assert_eq!(v["report"]["cond1_girth12"], true);
    let written = ExponentMatrix::read_json(&path).unwrap();
    assert_eq!(written.to_json_value(), v["seed"]);

    // The written seed verifies through the CLI at its certified Q.
    let verify = qcldpc(&["verify", "--matrix", path.to_str().unwrap(), "--q", &q]);
    assert_eq!(verify.exit_code, 0);
    assert_eq!(json(&verify), v["report"]);
}

#[test]
fn search_budget_exhaustion_is_exit_three() {
    let out = qcldpc(&[
        "search",
        "--cols",
        "6",
        "--q-cap",
        "20",
        "--seed",
        "1",
        "--steps",
        "100",
        "--restarts",
        "1",
    ]);
    assert_eq!(out.exit_code, 3);
    assert!(out.stderr.contains("budget"));
}

#[test]
fn simulate_csv() {
    let args = [
        "simulate",
        "--matrix",
        &fixture(),
        "--p",
        "31",
        "--ebn0",
        "-1,inf",
        "--max-iter",
        "20",
        "--min-error-frames",
        "5",
        "--frame-cap",
        "300",
        "--seed",
        "4",
    ];
    let out = qcldpc(&args);
    assert_eq!(out.exit_code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "ebn0_db,frames,bit_errors,frame_errors,ber,fer,cap_hit");
    assert_eq!(lines.len(), 3);
    let noisy: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(noisy[0], "-1");
    assert_eq!(noisy[3], "5");
    assert_eq!(noisy[6], "false");
    assert_eq!(lines[2], "inf,300,0,0,0,0,true");
    assert_eq!(qcldpc(&args).stdout, out.stdout);
}
