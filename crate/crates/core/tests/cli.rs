use serde_json::Value;
use std::process::{Command, Output};

fn rhtkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhtkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = rhtkit(&all);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(v["schema"], 1);
    v
}

#[test]
fn genus_zero_four_legs() {
    let v = json(&["graph-homology", "--genus", "0", "--legs", "4"]);
    assert_eq!(v["betti"], serde_json::json!([1, 0]));
}

#[test]
fn arnold_dual_is_a_lie_presentation() {
    let v = json(&["koszul", "dual", "examples:arnold-3-3"]);
    assert_eq!(v["model"]["algebra"], "lie");
    assert_eq!(v["model"]["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["model"]["relations"].as_array().unwrap().len(), 2);
}

#[test]
fn registry_runs_clean() {
    for name in [
        "cp2",
        "sphere-bundle",
        "wedge",
        "arnold-3-3",
        "w11",
        "hspace",
        "cohspace",
        "s2xs2",
    ] {
        let v = json(&["examples", "run", name]);
        for o in v["outcomes"].as_array().unwrap() {
            assert_eq!(o["pass"], true, "{}: {}", name, o);
        }
    }
}

#[test]
fn coefficients_are_fractions() {
    let v = json(&["dictionary", "examples:cp2"]);
    assert_eq!(
        v["model"]["operations"][0]["output"][0]["coefficient"],
        "6/1"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(rhtkit(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(rhtkit(&["check", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(
        rhtkit(&["examples", "run", "no-such-entry"]).status.code(),
        Some(2)
    );
    let dir = std::env::temp_dir().join(format!("rhtkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.model");
    std::fs::write(
        &bad,
        "model bad\nkind cdga\ngenerator x deg 2\nd x = 1/0 x\n",
    )
    .unwrap();
    let out = rhtkit(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
    std::fs::remove_dir_all(&dir).unwrap();
}
