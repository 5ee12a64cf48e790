use std::path::{Path, PathBuf};

use serde_json::Value;
use stublab::cli::{run_cli, CliOutput};
use stublab::oracle::CompleteWitness;
use stublab::{Lsts, PetriNet};

fn run(args: &[&str]) -> CliOutput {
    run_cli(std::iter::once("stublab").chain(args.iter().copied()))
}

fn json(out: &CliOutput) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Exports a built-in model and returns the directory with its files.
fn exported(model: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen", "--model", model, "--out-dir", path_str(dir.path())]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let root = dir.path().to_path_buf();
    (dir, root)
}

#[test]
fn suite_passes() {
    let out = run(&["suite"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let report = json(&out);
    assert_eq!(report["status"], "holds");
    assert!(report["results"].as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn suite_with_d1_for_d1p_fails() {
    let out = run(&["suite", "--d1-for-d1p"]);
    assert_eq!(out.code, 1);
    assert_eq!(json(&out)["status"], "fails");
}

#[test]
fn stutter_comparison_reports_the_lost_trace() {
    let (_dir, root) = exported("ce-weak");
    let full = root.join("ce_weak_full.json");
    let r = root.join("ce_weak_r.json");
    let out = run(&["compare", "--full", path_str(&full), "--r", path_str(&r), "--mode", "stutter"]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    let report = json(&out);
    assert_eq!(report["nostut"], "∅{q}∅{q}");

    let l = Lsts::from_json_str(&std::fs::read_to_string(&full).unwrap()).unwrap();
    let w: CompleteWitness = serde_json::from_value(report["verdict"]["witness"]["witness"].clone()).unwrap();
    l.check_run(&w.run).unwrap();
    assert_eq!(l.nostut_trace(&w.run).unwrap(), w.nostut);

    let weak = run(&["compare", "--full", path_str(&full), "--r", path_str(&r), "--mode", "weak"]);
    assert_eq!(weak.code, 0);
    assert_eq!(json(&weak)["status"], "bounded_holds");
}

#[test]
fn compare_accepts_a_reduced_lsts_file() {
    let (_dir, root) = exported("ce-weak");
    let full = root.join("ce_weak_full.json");
    let reduced = root.join("ce_weak_reduced.json");
    let out = run(&["compare", "--full", path_str(&full), "--reduced", path_str(&reduced), "--mode", "labels"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    let both = run(&["compare", "--full", path_str(&full), "--reduced", path_str(&reduced), "--r", path_str(&reduced), "--mode", "labels"]);
    assert_eq!(both.code, 2);
}

#[test]
fn d1p_check_names_the_action() {
    let (_dir, root) = exported("ce-weak");
    let lsts = root.join("ce_weak_full.json");
    let r = root.join("ce_weak_r.json");
    let out = run(&["check", "--lsts", path_str(&lsts), "--r", path_str(&r), "--conds", "D1p", "--state", "0", "--bound", "8"]);
    assert_eq!(out.code, 1);
    let report = json(&out);
    let result = &report["results"][0];
    let l = Lsts::from_json_str(&std::fs::read_to_string(&lsts).unwrap()).unwrap();
    let action = result["verdict"]["witness"]["action"].as_u64().unwrap() as usize;
    assert_eq!(l.action_name(action), "a");
    let steps: Vec<(usize, usize)> = serde_json::from_value(result["verdict"]["witness"]["path"]["steps"].clone()).unwrap();
    let mut s = 0;
    for (a, t) in steps {
        assert!(l.has_transition(s, a, t));
        s = t;
    }
    assert!(l.successors_by(s, action).any(|t| t == result["verdict"]["witness"]["target"].as_u64().unwrap() as usize));

    let d1 = run(&["check", "--lsts", path_str(&lsts), "--r", path_str(&r), "--conds", "D1", "--state", "0", "--bound", "8"]);
    assert_eq!(d1.code, 0);
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["check", "--lsts", "/nonexistent.json", "--r", "/nonexistent.json"]).code, 2);
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    let out = run(&["net-to-lsts", "--net", path_str(&broken)]);
    assert_eq!(out.code, 2);
    assert!(!out.stderr.is_empty());
    assert_eq!(json(&out)["status"], "error");
    assert_eq!(run(&["check", "--lsts", path_str(&broken), "--r", path_str(&broken), "--bound", "0"]).code, 2);
}

#[test]
fn state_cap_exits_with_three() {
    let (_dir, root) = exported("fig-pn-example");
    let net = std::fs::read_dir(&root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| PetriNet::from_json_str(&std::fs::read_to_string(p).unwrap()).is_ok())
        .expect("an exported net");
    let out = run(&["net-to-lsts", "--net", path_str(&net), "--state-cap", "50"]);
    assert_eq!(out.code, 3, "{}", out.stdout);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let (_dir, root) = exported("ce-strong");
    let full = root.join("ce_strong_full.json");
    let r = root.join("ce_strong_r.json");
    let args = ["compare", "--full", path_str(&full), "--r", path_str(&r), "--mode", "stutter"];
    assert_eq!(run(&args), run(&args));
    assert_eq!(run(&["gen", "--kind", "pn", "--seed", "9"]), run(&["gen", "--kind", "pn", "--seed", "9"]));
    assert_eq!(run(&["suite"]), run(&["suite"]));
}

#[test]
fn generated_net_round_trips_through_explore() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen", "--kind", "pn", "--seed", "4", "--places", "6", "--transitions", "5"]);
    assert_eq!(out.code, 0);
    let doc = json(&out);
    let net_file = dir.path().join("net.json");
    std::fs::write(&net_file, serde_json::to_string(&doc["net"]).unwrap()).unwrap();
    PetriNet::from_json_str(&std::fs::read_to_string(&net_file).unwrap()).unwrap();
    for mode in ["deadlock", "ltl-weak", "ltl-strong"] {
        let out = run(&["explore", "--net", path_str(&net_file), "--por", mode]);
        assert_eq!(out.code, 0, "{mode}: {}{}", out.stdout, out.stderr);
    }
}
