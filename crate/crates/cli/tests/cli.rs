use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fbf-walls"))
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = bin().args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("fbf-walls-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn fp_validates_with_tied_index() {
    let (code, v) = run(&["--fixture", "fp", "validate"]);
    assert_eq!(code, 0);
    let r = &v["report"];
    assert_eq!(r["valid"], true);
    let x1 = r["tied"]["entries"].as_array().unwrap().iter().find(|e| e["edge"] == "x1").unwrap();
    assert_eq!(x1["i_set"], serde_json::json!([1]));
    assert_eq!(v["config"]["rho_h"], 6);
}

#[test]
fn f4_validates() {
    let (code, v) = run(&["--fixture", "f4", "validate"]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn broken_rep_fails_with_clauses() {
    let d = scratch("broken");
    let p = d.join("bad.toml");
    let text = fbf_fixture().replace("x3 = \"x3 x1\"", "x3 = \"x3 x1 X1 x9\"");
    std::fs::write(&p, text).unwrap();
    let (code, _) = run(&["--rep", p.to_str().unwrap(), "validate"]);
    assert_eq!(code, 1);
    let p2 = d.join("vertex.toml");
    std::fs::write(&p2, fbf_fixture().replace("from = \"v\", to = \"v\" },\n  { name = \"x2\"", "from = \"w\", to = \"v\" },\n  { name = \"x2\"")).unwrap();
    let (code, v) = run(&["--rep", p2.to_str().unwrap(), "validate"]);
    assert_eq!(code, 1);
    assert!(!v["clauses"].as_array().unwrap().is_empty(), "{v}");
}

fn fbf_fixture() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/fp3.toml")).unwrap()
}

#[test]
fn rep_path_matches_fixture() {
    let p = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/alpha.toml");
    let (c1, a) = run(&["--rep", p, "ball", "--rho-v", "1", "--rho-h", "2"]);
    let (c2, b) = run(&["--fixture", "alpha", "ball", "--rho-v", "1", "--rho-h", "2"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a["report"], b["report"]);
}

#[test]
fn x3_render_has_one_cut_per_tree() {
    for tree in ["e", "t1", "T2", "t1 t2"] {
        let (code, v) = run(&["--fixture", "fp", "render", "--label", "x3", "--tree", tree, "--rho-h", "4"]);
        assert_eq!(code, 0);
        assert_eq!(v["report"]["horizontal_cuts"], 1, "{tree}");
    }
}

#[test]
fn render_writes_dot() {
    let d = scratch("render");
    let (code, _) = run(&["--fixture", "fp", "render", "--label", "x1", "--rho-h", "3", "--out", d.to_str().unwrap()]);
    assert_eq!(code, 0);
    let dot = std::fs::read_to_string(d.join("wall_x1_.dot")).unwrap();
    assert!(dot.starts_with("graph wall_"));
    assert!(dot.contains("penwidth=4"));
    assert!(d.join("render.json").exists());
}

#[test]
fn fp_distance_to_x3_squared() {
    let (code, v) = run(&["--fixture", "fp", "distance", "e", "x3 x3"]);
    assert!(code == 0 || code == 2, "{code}");
    let d = &v["report"]["distance"];
    assert_eq!(d["vertical"], 0);
    assert!(d["diagonal"].as_u64().unwrap() >= 2);
    assert_eq!(d["diagonal"], d["diagonal_by_path"]);
}

#[test]
fn distance_rejects_foreign_letters() {
    let out = bin().args(["--fixture", "alpha", "distance", "e", "x5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x5"));
}

#[test]
fn alpha_cubulate_is_deterministic() {
    let (a, b) = (scratch("cub-a"), scratch("cub-b"));
    for d in [&a, &b] {
        let (code, _) = run(&["--fixture", "alpha", "cubulate", "--out", d.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    for f in ["cubulate.json", "cubes.dot"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let v: Value = serde_json::from_slice(&std::fs::read(a.join("cubulate.json")).unwrap()).unwrap();
    let r = &v["report"];
    assert_eq!(r["bound"]["m"], 1);
    assert!(r["clique"]["size"].as_u64().unwrap() >= r["bound"]["bound"].as_u64().unwrap());
    assert_eq!(r["clique"]["vertical_in_witness"], 1);
}

#[test]
fn walls_report_even_cuts() {
    let (code, v) = run(&["--fixture", "fp", "walls", "--label", "x3", "--rho-v", "1", "--rho-h", "4"]);
    assert_eq!(code, 0);
    let w = &v["report"]["walls"][0];
    assert_eq!(w["label"], "x3");
    assert_eq!(w["even_cuts"]["violations"], 0);
}

#[test]
fn non_eoe_label_is_an_error() {
    let (code, _) = run(&["--fixture", "fp", "walls", "--label", "x9"]);
    assert_eq!(code, 1);
}

#[test]
fn missing_rep_is_an_error() {
    let out = bin().arg("validate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
