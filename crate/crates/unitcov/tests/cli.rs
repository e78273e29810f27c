use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use unitcov::facet_file::{parse_listing, sha256_hex};
use unitcov::json::{certificate_from_value, mixture_from_value, parse_matrix};
use unitcov_core::realisability::{reconstruct, verify_certificate};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn unitcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitcov"))
        .args(args)
        .env_remove("UNITCOV_LP_CAP")
        .env_remove("UNITCOV_VERTEX_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn three_point_fixture_is_separated() {
    let path = fixture("three_point.json");
    let o = unitcov(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let doc = json_out(&o);
    assert_eq!(doc["result"]["realisable"], false);
    let cert = certificate_from_value(&doc["result"]["certificate"]).unwrap();
    let rho = parse_matrix(&std::fs::read(&path).unwrap())
        .unwrap()
        .into_tri()
        .unwrap();
    assert!(verify_certificate(&rho, &cert));
    assert_eq!(
        doc["input_sha256"],
        sha256_hex(&std::fs::read(&path).unwrap())
    );
}

#[test]
fn three_point_fixture_violates_the_screen() {
    let o = unitcov(&[
        "screen",
        fixture("three_point.json").to_str().unwrap(),
        "--bound",
        "1",
    ]);
    assert_eq!(code(&o), 4);
    let r = &json_out(&o)["result"];
    assert_eq!(r["verdict"], "violation");
    assert_eq!(r["value"], "-3");
    assert_eq!(r["witness"], serde_json::json!(["1", "-1", "-1"]));
}

#[test]
fn decompose_reconstructs_the_input() {
    let path = fixture("minus_third.json");
    let o = unitcov(&["decompose", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let m = mixture_from_value(&json_out(&o)["result"]["mixture"]).unwrap();
    let rho = parse_matrix(&std::fs::read(&path).unwrap())
        .unwrap()
        .into_tri()
        .unwrap();
    assert_eq!(reconstruct(&m), rho);
    assert_eq!(m.len(), 3);
}

#[test]
fn facet_listings_have_the_known_counts() {
    for (n, count) in [(3, 4), (4, 16), (5, 56)] {
        let o = unitcov(&["facets", &n.to_string()]);
        assert_eq!(code(&o), 0);
        let text = String::from_utf8(o.stdout).unwrap();
        let (header_n, facets) = parse_listing(&text).unwrap();
        assert_eq!(header_n, Some(n));
        assert_eq!(facets.len(), count);
        let body: String = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        let digest = text
            .lines()
            .find_map(|l| l.strip_prefix("# body-sha256 "))
            .unwrap();
        assert_eq!(digest, sha256_hex(body.as_bytes()));
    }
}

#[test]
fn interrupted_facet_run_resumes_to_the_same_listing() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("five.ckpt");
    let ckpt = ckpt.to_str().unwrap();
    let first = unitcov(&["facets", "5", "--resume", ckpt, "--max-insertions", "3"]);
    assert_eq!(code(&first), 5);
    assert!(first.stdout.is_empty());
    // 16 points, 11 in the seed simplex
    let second = unitcov(&["facets", "5", "--resume", ckpt, "--max-insertions", "1"]);
    assert_eq!(code(&second), 5);
    let resumed = unitcov(&["facets", "5", "--resume", ckpt]);
    assert_eq!(code(&resumed), 0);
    let direct = unitcov(&["facets", "5"]);
    assert_eq!(resumed.stdout, direct.stdout);
}

#[test]
fn checkpoint_for_another_size_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("c");
    let ckpt = ckpt.to_str().unwrap();
    assert_eq!(
        code(&unitcov(&[
            "facets",
            "5",
            "--resume",
            ckpt,
            "--max-insertions",
            "1"
        ])),
        5
    );
    assert_eq!(code(&unitcov(&["facets", "4", "--resume", ckpt])), 2);
    std::fs::write(dir.path().join("c"), "garbage").unwrap();
    assert_eq!(code(&unitcov(&["facets", "5", "--resume", ckpt])), 2);
}

#[test]
fn matheron_annotations() {
    let o = unitcov(&["facets", "4", "--matheron"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let facets: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(facets.len(), 16);
    assert!(facets.iter().all(|l| l.contains("# e = ")));
    assert!(facets.contains(&"1 : -1 -1 0 -1 0 0  # e = 1 1 1 0"));
    assert!(facets.iter().all(|l| l.starts_with("1 : ")));
}

#[test]
fn tau_fixture_is_a_facet_but_not_a_product() {
    let o = unitcov(&[
        "verify-normal",
        fixture("tau.json").to_str().unwrap(),
        "--n",
        "7",
    ]);
    assert_eq!(code(&o), 0);
    let r = &json_out(&o)["result"];
    assert_eq!(r["facet"], true);
    assert_eq!(r["offset"], "6");
    assert_eq!(r["affine_rank"], 20);
    assert_eq!(r["tight_vertices"], 21);
    assert_eq!(r["product_form_outer"]["product"], false);
    assert_eq!(r["product_form_inner"]["product"], false);
}

#[test]
fn tau_read_as_an_outer_normal_is_not_a_facet() {
    let dir = tempfile::tempdir().unwrap();
    let doc: Value = serde_json::from_slice(&std::fs::read(fixture("tau.json")).unwrap()).unwrap();
    let body = serde_json::json!({ "n": 7, "normal": doc["normal"] }).to_string();
    let p = write_tmp(&dir, "tau_le.json", &body);
    let o = unitcov(&["verify-normal", p.to_str().unwrap(), "--n", "7"]);
    assert_eq!(code(&o), 3);
    let r = &json_out(&o)["result"];
    assert_eq!(r["vertex_max"], "30");
    assert_eq!(r["tight_vertices"], 1);
    assert_eq!(
        code(&unitcov(&[
            "verify-normal",
            p.to_str().unwrap(),
            "--n",
            "6"
        ])),
        2
    );
}

#[test]
fn product_form_of_a_facet_normal() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tmp(&dir, "e.json", r#"{"n":4,"entries":[2,2,-2,1,-1,-1]}"#);
    let o = unitcov(&["product-form", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = &json_out(&o)["result"];
    assert_eq!(r["product"], true);
    assert_eq!(
        r["integer_vector"],
        serde_json::json!(["2", "1", "1", "-1"])
    );
    assert_eq!(r["in_en"], true);
    let even = write_tmp(&dir, "even.json", r#"{"n":4,"entries":[1,1,-1,1,-1,-1]}"#);
    let o = unitcov(&["product-form", even.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_out(&o)["result"]["in_en"], false);
    let tau = unitcov(&[
        "product-form",
        write_tmp(&dir, "t.json", r#"{"n":3,"entries":[1,1,-1]}"#)
            .to_str()
            .unwrap(),
    ]);
    assert_eq!(code(&tau), 3);
    assert_eq!(json_out(&tau)["result"]["reason"], "sign_inconsistency");
}

#[test]
fn boundary_of_a_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tmp(&dir, "v.json", r#"{"n":3,"entries":["1","-1","-1"]}"#);
    let o = unitcov(&["boundary", p.to_str().unwrap(), "--epsilon", "1/4"]);
    assert_eq!(code(&o), 0);
    let r = &json_out(&o)["result"];
    assert_eq!(r["singular"], true);
    assert_eq!(r["ball_class"], "between_balls");
    assert_eq!(r["facet_class"]["class"], "boundary");
    assert_eq!(r["perturbation"]["negativity_value"], "-1/2");
    assert_eq!(
        r["perturbation"]["perturbed"]["entries"],
        serde_json::json!(["5/4", "-1", "-1"])
    );
}

#[test]
fn minus_third_lies_on_a_facet_without_being_singular() {
    let o = unitcov(&["boundary", fixture("minus_third.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = &json_out(&o)["result"];
    assert_eq!(r["singular"], false);
    assert_eq!(r["facet_class"]["class"], "boundary");
}

#[test]
fn full_matrix_and_covariogram_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let full = write_tmp(
        &dir,
        "m.json",
        r#"{"n":3,"matrix":[["1","-1/3","-1/3"],["-1/3","1","-1/3"],["-1/3","-1/3","1"]]}"#,
    );
    let o = unitcov(&["check", full.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_out(&o)["params"]["input_kind"], "matrix");
    // gamma = 1/3 maps to rho = 1 - 4/3
    let gamma = write_tmp(
        &dir,
        "g.json",
        r#"{"n":3,"covariogram":[[0,"1/3","1/3"],["1/3",0,"1/3"],["1/3","1/3",0]]}"#,
    );
    let o = unitcov(&["decompose", gamma.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_out(&o)["result"]["atoms"], 3);
}

#[test]
fn malformed_inputs_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"n":3,"entries":["1","0.3","1"]}"#, "entries[1]"),
        (r#"{"n":3,"entries":[1,0.5,1]}"#, "entries[1]"),
        (r#"{"n":3,"entries":["1","1/0","1"]}"#, "entries[1]"),
        (r#"{"n":3,"entries":["1","1"]}"#, "expected 3"),
        (r#"{"n":2,"matrix":[[1,"1/2"],["1/3",1]]}"#, "symmetric"),
        (r#"{"n":2,"matrix":[[2,0],[0,1]]}"#, "matrix[0][0]"),
        (
            r#"{"n":2,"covariogram":[[0,0],[0,1]]}"#,
            "covariogram[1][1]",
        ),
        ("not json", "invalid JSON"),
    ];
    for (k, (body, needle)) in cases.iter().enumerate() {
        let p = write_tmp(&dir, &format!("bad{k}.json"), body);
        let o = unitcov(&["check", p.to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{body}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains(needle), "{body}: {err}");
    }
    assert_eq!(code(&unitcov(&["check", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&unitcov(&["facets", "8"])), 2);
}

#[test]
fn caps_come_from_the_environment() {
    let p = fixture("three_point.json");
    let o = Command::new(env!("CARGO_BIN_EXE_unitcov"))
        .args(["check", p.to_str().unwrap()])
        .env("UNITCOV_LP_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 5);
    let o = Command::new(env!("CARGO_BIN_EXE_unitcov"))
        .args(["vertices", "4"])
        .env("UNITCOV_VERTEX_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 5);
}

#[test]
fn vertices_as_json_lines() {
    let o = unitcov(&["vertices", "4"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<Value> = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["count"], 8);
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[1]["coords"], serde_json::json!([1, 1, 1, 1, 1, 1]));
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let p = fixture("minus_third.json");
    let a = unitcov(&["decompose", p.to_str().unwrap(), "--seed", "7"]);
    let b = unitcov(&["decompose", p.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_out(&a)["seed"], 7);
    assert_eq!(json_out(&a)["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = unitcov(&[
        "check",
        fixture("minus_third.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["result"]["certificate"]["kind"], "realisable");
    let missing = dir.path().join("no/such/dir/x.json");
    assert_eq!(
        code(&unitcov(&[
            "check",
            fixture("minus_third.json").to_str().unwrap(),
            "--out",
            missing.to_str().unwrap()
        ])),
        2
    );
}
