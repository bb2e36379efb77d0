//! Runs the `twistcalc` binary over the fixture corpus.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn corpus(dir: &Path) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "tc"))
        .collect();
    out.sort();
    out
}

fn twistcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistcalc"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str], file: &str) -> (Value, i32) {
    let path = fixtures().join(file);
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    all.push(path.to_str().unwrap());
    let out = twistcalc(&all);
    let code = out.status.code().unwrap();
    assert!(code != 1, "{file}: {}", String::from_utf8_lossy(&out.stderr));
    (serde_json::from_slice(&out.stdout).unwrap(), code)
}

#[test]
fn printing_is_a_fixed_point() {
    let mut files = corpus(&fixtures());
    files.extend(corpus(&fixtures().join("catalog")));
    assert!(files.len() > 40);
    for f in files {
        let once = twistcalc(&["print", f.to_str().unwrap()]);
        assert!(once.status.success(), "{}", f.display());
        let tmp = std::env::temp_dir().join(format!(
            "twistcalc-{}-{}",
            std::process::id(),
            f.file_name().unwrap().to_str().unwrap()
        ));
        std::fs::write(&tmp, &once.stdout).unwrap();
        let twice = twistcalc(&["print", tmp.to_str().unwrap()]);
        std::fs::remove_file(&tmp).unwrap();
        assert_eq!(once.stdout, twice.stdout, "{}", f.display());
    }
}

#[test]
fn verdicts_and_exit_codes() {
    let (v, code) = json(&["check"], "fig19.tc");
    assert_eq!(
        (v["smoothable"].as_str(), v["criterion"].as_str(), code),
        (Some("yes"), Some("one-node-iff"), 0)
    );
    let (v, _) = json(&["check"], "fig19_violated.tc");
    assert_eq!(v["criterion"], "necessity");
    let (v, code) = json(&["check"], "missing_model.tc");
    assert_eq!((v["smoothable"].as_str(), code), (Some("inconclusive"), 2));
    let (v, _) = json(&["twist"], "c3.tc");
    let b: Vec<&str> = ["X", "R", "q1~e1", "q1~e2"]
        .iter()
        .map(|k| v["b"][k].as_str().unwrap())
        .collect();
    assert_eq!(b, ["3", "0", "1", "2"]);
    for (file, want) in [
        ("u2.tc", "no"),
        ("u1_yes.tc", "yes"),
        ("u1_no.tc", "no"),
        ("u1_open.tc", "inconclusive"),
    ] {
        let (v, _) = json(&["check"], file);
        assert_eq!(v["smoothable"], want, "{file}");
    }
    let (v, _) = json(&["chain"], "chain_inf.tc");
    assert_eq!(v["weierstrass"], false);
    let (v, _) = json(&["chain"], "chain_divisible.tc");
    assert_eq!(v["weierstrass"], true);
    let (v, _) = json(&["dim"], "dim_bound.tc");
    assert_eq!(v["bound"], "3");
    let (v, _) = json(&["dim"], "dim_h4.tc");
    assert_eq!(
        (v["dim"].as_str(), v["dim_projective"].as_str()),
        (Some("6"), Some("5"))
    );
    let (v, _) = json(&["spin"], "fig19.tc");
    assert_eq!(v["parity"], "odd");
    let (_, code) = json(&["spin"], "spin_undecided.tc");
    assert_eq!(code, 2);
}

#[test]
fn surfaces() {
    let (v, _) = json(&["surface", "singularities"], "l_shape.tc");
    assert_eq!(v["surface"]["genus"], "2");
    assert_eq!(v["surface"]["orders"], serde_json::json!(["2"]));
    for file in ["two_tori_slit.tc", "torus_two_slits.tc"] {
        let (v, _) = json(&["surface", "slit"], file);
        assert_eq!(v["after"]["genus"], "2", "{file}");
        assert_eq!(v["endpoints"]["start"]["merged"], "1");
    }
    let (v, _) = json(&["surface", "plumb"], "cylinders.tc");
    assert_eq!(
        (v["after"]["genus"].as_str(), v["after"]["area"].as_str()),
        (Some("1"), Some("7/2"))
    );
    let out = twistcalc(&[
        "surface",
        "plumb",
        fixtures().join("width_mismatch.tc").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("widths differ"));
}

#[test]
fn catalog_outcomes_follow_file_names() {
    for f in corpus(&fixtures().join("catalog")) {
        let name = f.file_stem().unwrap().to_str().unwrap().to_string();
        let (v, code) = json(&["genus3"], &format!("catalog/{name}.tc"));
        let label = name.split('-').next().unwrap().to_uppercase();
        let want = match name.rsplit('-').next().unwrap() {
            "hyp" => ("true", "false"),
            "odd" => ("false", "true"),
            "none" => ("false", "false"),
            "both" => ("true", "true"),
            other => panic!("unexpected suffix {other}"),
        };
        assert_eq!(v["case"], label.as_str(), "{name}");
        assert_eq!(
            (v["in_hyp"].as_str().unwrap(), v["in_odd"].as_str().unwrap()),
            want,
            "{name}"
        );
        assert_eq!(code, 0);
    }
}

#[test]
fn parse_errors_are_located() {
    for (file, loc) in [
        ("duplicate_vertex.tc", ":2:8:"),
        ("unknown_vertex.tc", ":5:8:"),
        ("syntax.tc", ":1:16:"),
        ("signature_mismatch.tc", ":1:1:"),
    ] {
        let path = fixtures().join("errors").join(file);
        let out = twistcalc(&["check", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{file}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(loc), "{file}: {err}");
        assert!(out.stdout.is_empty());
    }
    let out = twistcalc(&["check", "/nonexistent/file.tc"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn runs_are_byte_identical() {
    for (args, file) in [
        (vec!["check"], "fig19.tc"),
        (vec!["--json", "twist"], "c3.tc"),
        (vec!["spin"], "fig19.tc"),
        (vec!["--json", "surface", "slit"], "two_tori_slit.tc"),
        (vec!["genus3"], "catalog/xii-both.tc"),
    ] {
        let path = fixtures().join(file);
        let mut all = args.clone();
        all.push(path.to_str().unwrap());
        let a = twistcalc(&all);
        let b = twistcalc(&all);
        assert_eq!(a.stdout, b.stdout, "{file}");
        assert!(!a.stdout.is_empty());
    }
}
