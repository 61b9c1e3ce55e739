use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_approxcommute")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("approxcommute-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn pr_of_abelian_group_is_one() {
    let out = run(&["pr", "C5", "all", "all"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1/1");
}

#[test]
fn pr_of_dihedral_and_quaternion() {
    for g in ["D4", "Q8"] {
        let out = run(&["--json", "pr", g, "G", "G"]);
        assert!(out.status.success());
        assert_eq!(json(&out)["pr"], "5/8");
    }
}

#[test]
fn certify_subgroup_gives_one() {
    let out = run(&["certify", "S4", "<1>", "--exact"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).lines().any(|l| l == "k=1"), "{}", stdout(&out));

    let out = run(&["--json", "certify", "D4", "all"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["k"], 1);
}

#[test]
fn witness_reports_are_versioned() {
    let out = run(&["witness", "thm2", "D4", "all"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["theorem"], "1.2");
    assert_eq!(v["epsilon"], "5/8");

    let out = run(&["witness", "thm1", "S3xC2", "all"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["theorem"], "1.1");
}

#[test]
fn exit_codes() {
    let below = run(&["witness", "thm1", "S3", "all", "--epsilon", "2/3"]);
    assert_eq!(below.status.code(), Some(1));

    let bad_element = run(&["--json", "pr", "C5", "7", "all"]);
    assert_eq!(bad_element.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&bad_element.stderr).unwrap();
    assert_eq!(err["error"], "InvalidElement");

    let bad_group = run(&["--json", "pr", "Z9", "all", "all"]);
    assert_eq!(bad_group.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&bad_group.stderr).unwrap();
    assert_eq!(err["error"], "SpecParseError");

    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--order-cap", "10", "pr", "S4", "all", "all"]).status.code(), Some(2));
}

#[test]
fn verify_is_reproducible() {
    let config = scratch("suite.json");
    std::fs::write(
        &config,
        r#"{
            "corpus": [
                {"kind": "family", "name": "symmetric", "n": 3},
                {"kind": "family", "name": "dihedral", "n": 4},
                {"kind": "family", "name": "example1", "n": 3, "k": 1, "u": 1}
            ],
            "random_instances_per_statement": 20,
            "seed": 3
        }"#,
    )
    .unwrap();
    let config = config.to_str().unwrap();
    let strip = |out: &Output| {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let mut v = json(out);
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let first = strip(&run(&["verify", "--config", config]));
    let second = strip(&run(&["verify", "--config", config, "--jobs", "1"]));
    assert_eq!(first, second);
    assert_eq!(first["failures"], 0);
    assert_eq!(first["statements"].as_array().unwrap().len(), 12);

    let only = run(&["verify", "--config", config, "--statements", "L2.5a,Sub-mono"]);
    assert_eq!(strip(&only)["statements"].as_array().unwrap().len(), 2);

    let single = run(&["verify", "--config", config, "--statements", "P2.1", "--instance", "r4"]);
    let report = strip(&single);
    assert_eq!(report["statements"][0]["instances"], 1);

    let written = scratch("report.json");
    let out = run(&["verify", "--config", config, "--output", written.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let mut on_disk: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&written).unwrap()).unwrap();
    on_disk.as_object_mut().unwrap().remove("timing");
    assert_eq!(on_disk, first);
}

#[test]
fn example_report_and_group() {
    let out = run(&["example", "--n", "3", "--k", "1", "--u", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["A"].as_array().unwrap().len(), 3);

    let out = run(&["example", "--n", "2", "--k", "1", "--u", "1", "--emit", "group"]);
    assert!(out.status.success());
    let spec = json(&out);
    assert_eq!(spec["kind"], "table");
    let table = spec["table"].as_array().unwrap();
    assert_eq!(table.len(), 8);

    let path = scratch("ex.json");
    std::fs::write(&path, stdout(&out)).unwrap();
    let pr = run(&["pr", path.to_str().unwrap(), "all", "all"]);
    assert!(pr.status.success());
    assert_eq!(stdout(&pr).trim(), "5/8");

    assert_eq!(run(&["example", "--n", "1", "--k", "1", "--u", "1"]).status.code(), Some(2));
}

#[test]
fn covers() {
    let out = run(&["cover", "ruzsa", "S4", "all", "<1>"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["size"].as_u64().unwrap() <= 24);

    let out = run(&["cover", "conjugate", "D4", "all", "1,2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json(&out)["center_set"].is_array());

    let out = run(&["cover", "conjugate", "D4", "all", "1,2,3,4,5,6"]);
    assert_eq!(out.status.code(), Some(2));
}
