use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapstack")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("json report"))
}

fn result<'a>(report: &'a serde_json::Value, name: &str) -> &'a str {
    report["results"].as_array().unwrap().iter().find(|f| f["name"] == name).unwrap()["value"].as_str().unwrap()
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn decompose_s3_table() {
    let o = run(&["decompose", &data("s3.json")]);
    assert_eq!(o.status.code(), Some(0));
    let (_, r) = json(&["decompose", &data("s3.json")]);
    assert_eq!(result(&r, "centralizer orders"), "[6, 2, 3]");
    let rows = r["tables"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let (_, q) = json(&["decompose", &data("q8.json")]);
    assert_eq!(result(&q, "conjugacy classes"), "5");
}

#[test]
fn omega_reports() {
    let (code, r) = json(&["omega", "trivial"]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "components"), "1");
    assert_eq!(result(&r, "essentially discrete"), "yes");
    // the based loops of BS3 are the six elements, not the three classes
    let (code, r) = json(&["omega", &data("s3.json")]);
    assert_eq!(code, 3);
    assert_eq!(result(&r, "components"), "6");
    assert_eq!(result(&r, "|C_G|"), "3");
    let (code, _) = json(&["omega", "Z5"]);
    assert_eq!(code, 0);
    let interval = data("interval.json");
    assert_eq!(run(&["omega", &interval]).status.code(), Some(1));
    let (code, r) = json(&["omega", &interval, "--basepoint", "y"]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "components"), "1");
}

#[test]
fn homology_of_bz2() {
    let (code, r) = json(&["homology", "Z2", "--kmax", "3"]);
    assert_eq!(code, 0);
    let groups: Vec<&str> = r["tables"][0]["rows"].as_array().unwrap().iter().map(|row| row[1].as_str().unwrap()).collect();
    assert_eq!(groups, vec!["Z", "Z/2", "0", "Z/2"]);
}

#[test]
fn cech_and_replace() {
    let (code, r) = json(&["cech", &data("pseudo_circle.json"), "Z2", "--covers-max", "3"]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "classes"), "2");
    let (code, r) = json(&["replace", &data("a3_in_s3.json")]);
    assert_eq!(code, 0);
    assert!(r["tables"][0]["rows"][0][1].as_str().unwrap().ends_with("2 components"));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["exp-law", "--count", "4", "--seed", "7"],
        vec!["cech", "pseudo_circle", "S3", "--covers-max", "3"],
        vec!["map", "Z2", "S3", "--format", "json"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), Some(0));
    }
    let a = run(&["exp-law", "--count", "2", "--seed", "1"]);
    let b = run(&["exp-law", "--count", "2", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn json_mirrors_the_table() {
    let text = stdout(&run(&["inertia", "D4"]));
    let (_, r) = json(&["inertia", "D4"]);
    for section in ["inputs", "results"] {
        for f in r[section].as_array().unwrap() {
            assert!(text.contains(f["value"].as_str().unwrap()));
        }
    }
    for row in r["tables"][0]["rows"].as_array().unwrap() {
        let cells: Vec<&str> = row.as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
        assert!(text.lines().any(|l| cells.iter().all(|c| l.contains(c))));
    }
    assert!(text.starts_with("command: inertia\nstatement: "));
}

#[test]
fn exit_codes() {
    let bad = temp_json("{ \"objects\": [\"x\"], ");
    assert_eq!(run(&["inertia", bad.path().to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["inertia", "no-such-group"]).status.code(), Some(1));
    assert_eq!(run(&["inertia", "S3", "--no-such-flag"]).status.code(), Some(1));
    let o = run(&["validate", &data("not_associative.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("associativity"));
    assert_eq!(run(&["map", "S3", "S3", "--bound-functors", "3"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "S3", "--kmax", "6", "--bound-nerve", "100"]).status.code(), Some(2));
}

#[test]
fn shipped_corpus_validates() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data"].iter().collect();
    let mut names: Vec<String> =
        std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    assert!(names.len() >= 6);
    for name in names {
        let code = run(&["validate", &data(&name)]).status.code();
        let expected = if name == "not_associative.json" { 1 } else { 0 };
        assert_eq!(code, Some(expected), "{name}");
    }
}

#[test]
fn user_groupoid_file() {
    let f = temp_json(
        r#"{ "objects": [0, 1],
             "morphisms": [{"id": "i0", "src": 0, "tgt": 0}, {"id": "i1", "src": 1, "tgt": 1}],
             "compose": [["i0", "i0", "i0"], ["i1", "i1", "i1"]] }"#,
    );
    let path = f.path().to_str().unwrap();
    let (code, r) = json(&["map", path, "S3"]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "functors"), "1");
    let (code, r) = json(&["equiv", path, "trivial"]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "equivalent"), "no");
    let (_, r) = json(&["equiv", &data("interval.json"), "trivial"]);
    assert_eq!(result(&r, "equivalent"), "yes");
}
