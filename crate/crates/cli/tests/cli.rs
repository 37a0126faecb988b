use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nqscps(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nqscps"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(dir: &Path, args: &[&str]) -> Value {
    let out = nqscps(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn build_summaries() {
    let d = tempfile::tempdir().unwrap();
    let t = ok_json(d.path(), &["build", "toric", "--lx", "2", "--ly", "2", "--sector", "++", "-o", "t.json"]);
    assert_eq!((t["n_sites"].as_u64(), t["n_hidden"].as_u64()), (Some(8), Some(4)));
    let n = ok_json(d.path(), &["build", "number", "--n-sites", "6", "--n", "3", "-o", "n.json"]);
    assert_eq!(n["n_hidden"], 3);
    let g = ok_json(d.path(), &["build", "graph", "--n-sites", "4", "--edges", "", "-o", "g.json"]);
    assert_eq!(g["n_hidden"], 0);
    assert!(d.path().join("t.json.manifest.json").exists());
}

#[test]
fn every_builder_verifies() {
    let d = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["graph", "--n-sites", "6", "--edges", "0-1,1-2,2-3,3-4,4-5,5-0"],
        &["graph", "--n-sites", "4", "--edges", "0-1,1-2", "--phases", "0.7,2.1", "--deformations", "0.1,0,-0.2+0.3i,0"],
        &["weighted-graph", "--n-sites", "3", "--edges", "0-1", "--branches", "0,0,0;1i,0,0.5", "--amps", "1,0.5i"],
        &["number", "--n-sites", "7", "--n", "3"],
        &["w", "--amps", "1,2,0.5i,-1"],
        &["laughlin", "--lx", "2", "--ly", "2", "--nu", "2", "--n", "2"],
        &["toric", "--lx", "2", "--ly", "3", "--sector", "-+"],
        &["fpl", "--lx", "2", "--ly", "2"],
        &["dimer", "--lx", "2", "--ly", "2"],
        &["rvb", "--lx", "2", "--ly", "2"],
        &["universal", "--targets", "0110:1,1011:2i,0001"],
        &["rbm", "--n-sites", "4", "--hidden", "3", "--seed", "2", "--complex"],
    ];
    for (k, case) in cases.iter().enumerate() {
        let file = format!("m{k}.json");
        let mut args = vec!["build"];
        args.extend_from_slice(case);
        args.extend_from_slice(&["-o", &file]);
        ok_json(d.path(), &args);
        let r = ok_json(d.path(), &["verify", &file]);
        assert_eq!(r["result"], "PASS", "{case:?}: {r}");
    }
}

#[test]
fn corrupted_model_fails() {
    let d = tempfile::tempdir().unwrap();
    ok_json(d.path(), &["build", "toric", "--lx", "2", "--ly", "2", "-o", "t.json"]);
    let mut doc = read_json(&d.path().join("t.json"));
    let couplings = doc["layer1"][1]["couplings"].as_array_mut().unwrap();
    let m = couplings.iter_mut().find(|c| c.is_array()).unwrap();
    let x = m[1][1][0].as_f64().unwrap();
    m[1][1][0] = Value::from(x + 1e-3);
    std::fs::write(d.path().join("bad.json"), doc.to_string()).unwrap();
    let out = nqscps(d.path(), &["verify", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"], "FAIL");
}

#[test]
fn mps_conversion_verifies() {
    let d = tempfile::tempdir().unwrap();
    ok_json(d.path(), &["build", "rbm", "--n-sites", "5", "--hidden", "3", "--scale", "0.5", "-o", "r.json"]);
    ok_json(d.path(), &["convert", "r.json", "--to", "nqs", "-o", "n.json"]);
    ok_json(d.path(), &["convert", "n.json", "--to", "mps", "-o", "m.json"]);
    let r = ok_json(d.path(), &["verify", "m.json", "--against", "n.json"]);
    assert_eq!(r["result"], "PASS");
    assert!(r["max_deviation"].as_f64().unwrap() < 1e-12);
}

#[test]
fn rvb_matches_bcs() {
    let d = tempfile::tempdir().unwrap();
    ok_json(d.path(), &["build", "rvb", "--lx", "2", "--ly", "2", "-o", "r.json"]);
    let r = ok_json(d.path(), &["verify", "r.json", "--oracle", "bcs"]);
    assert_eq!(r["result"], "PASS");
}

#[test]
fn uniform_sampling_accepts_everything() {
    let d = tempfile::tempdir().unwrap();
    ok_json(d.path(), &["build", "graph", "--n-sites", "5", "-o", "u.json"]);
    let r = ok_json(d.path(), &["sample", "u.json", "--steps", "500", "--seed", "3", "-o", "s"]);
    assert_eq!(r["acceptance"], 1.0);
    let lines = std::fs::read_to_string(d.path().join("s/samples.txt")).unwrap();
    assert_eq!(lines.lines().count(), 2000);
    assert!(d.path().join("s/manifest.json").exists());
}

#[test]
fn optimisation_is_reproducible_and_accurate() {
    let d = tempfile::tempdir().unwrap();
    let args = ["optimize", "--preset", "tfim:n=6,j=1,h=1", "--hidden", "6", "--seed", "7"];
    let a = ok_json(d.path(), &[&args[..], &["-o", "a"]].concat());
    ok_json(d.path(), &[&args[..], &["-o", "b"]].concat());
    let ta = std::fs::read_to_string(d.path().join("a/trace.csv")).unwrap();
    let tb = std::fs::read_to_string(d.path().join("b/trace.csv")).unwrap();
    assert_eq!(ta, tb);
    assert!(a["relative_error"].as_f64().unwrap() < 0.01, "{a}");
    ok_json(d.path(), &["replay", "a/manifest.json", "-o", "c"]);
    assert_eq!(std::fs::read_to_string(d.path().join("c/trace.csv")).unwrap(), ta);
}

#[test]
fn sampled_optimisation_is_reproducible() {
    let d = tempfile::tempdir().unwrap();
    let args = [
        "optimize", "--preset", "tfim:n=4", "--estimator", "sampled", "--steps", "20", "--samples", "200", "--seed", "7",
    ];
    ok_json(d.path(), &[&args[..], &["-o", "a"]].concat());
    ok_json(d.path(), &[&args[..], &["-o", "b"]].concat());
    let ta = std::fs::read_to_string(d.path().join("a/trace.csv")).unwrap();
    assert_eq!(ta, std::fs::read_to_string(d.path().join("b/trace.csv")).unwrap());
    assert_eq!(ta.lines().count(), 22);
}

#[test]
fn hamiltonian_files_and_exact() {
    let d = tempfile::tempdir().unwrap();
    ok_json(d.path(), &["hamiltonian", "tfim:n=4,h=0.5", "-o", "h.txt"]);
    let e = ok_json(d.path(), &["exact", "--hamiltonian", "h.txt"]);
    let p = ok_json(d.path(), &["exact", "--preset", "tfim:n=4,h=0.5"]);
    assert_eq!(e["ground_energy"], p["ground_energy"]);
    let z = ok_json(d.path(), &["exact", "--preset", "z-field:n=5,h=1"]);
    assert_eq!(z["ground_energy"], -5.0);
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(nqscps(d.path(), &["build", "toric", "--lx", "2"]).status.code(), Some(2));
    assert_eq!(nqscps(d.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(nqscps(d.path(), &["build", "number", "--n-sites", "4", "--n", "9"]).status.code(), Some(2));
    ok_json(d.path(), &["build", "graph", "--n-sites", "16", "-o", "big.json"]);
    let out = nqscps(d.path(), &["verify", "big.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("refusing"));
}
