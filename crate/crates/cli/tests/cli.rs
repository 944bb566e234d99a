//! End-to-end tests of the `submod` binary: subcommand outputs, exit
//! codes, and byte-identical reruns with fixed seeds.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn submod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_submod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("submod-cli-test-{}-{name}", std::process::id()));
    path
}

const INSTANCE: &str = r#"{
    "m": 3,
    "agents": [
        {"objective": {"family": "additive", "weights": [3, 2, 1]},
         "constraint": {"family": "cardinality", "k": 2}},
        {"objective": {"family": "additive", "weights": [1, 3, 2]},
         "constraint": {"family": "cardinality", "k": 2}}
    ]
}"#;

const EXPERIMENT: &str = r#"{
    "graph": {"vertices": 40, "avg_degree": 5.0, "regime": "low", "seed": 9},
    "agents": 2,
    "cardinality": 3,
    "q": 0.2,
    "runs": 4,
    "sweep": "agents",
    "sweep_values": [2, 3],
    "protocol": "randomized"
}"#;

#[test]
fn example1_prints_golden_values() {
    let output = submod(&["example1", "--n", "4"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("first-agent value 2"), "{text}");
    assert!(text.contains("OPT 8"), "{text}");

    let output = submod(&["example1", "--n", "4", "--strategic"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("first-agent value 5"), "{text}");
}

#[test]
fn run_writes_trace_and_reports_values() {
    let instance_path = temp_path("run.json");
    let trace_path = temp_path("run.trace");
    fs::write(&instance_path, INSTANCE).unwrap();

    let output = submod(&[
        "run",
        instance_path.to_str().unwrap(),
        "--trace",
        trace_path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("agent 0: value=4"), "{text}");
    assert!(text.contains("agent 1: value=3"), "{text}");

    let trace = fs::read_to_string(&trace_path).unwrap();
    assert_eq!(trace, "1,1,0,0\n1,2,1,1\n2,1,0,2\n2,2,1,DUMMY\n");

    fs::remove_file(&instance_path).ok();
    fs::remove_file(&trace_path).ok();
}

#[test]
fn run_accepts_explicit_policies() {
    let instance_path = temp_path("policies.json");
    fs::write(&instance_path, INSTANCE).unwrap();
    let output = submod(&[
        "run",
        instance_path.to_str().unwrap(),
        "--policies",
        "scripted:2,0",
        "greedy",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("agent 0: value=4 set={0,2}"), "{text}");
    fs::remove_file(&instance_path).ok();
}

#[test]
fn verify_passes_on_a_sound_instance() {
    let instance_path = temp_path("verify.json");
    fs::write(&instance_path, INSTANCE).unwrap();
    let output = submod(&[
        "verify",
        instance_path.to_str().unwrap(),
        "--theorems",
        "T1,T2,T3,T4",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("RESULT: PASS"), "{text}");
    assert!(text.contains("T2"), "{text}");
    fs::remove_file(&instance_path).ok();
}

#[test]
fn verify_fleet_is_deterministic() {
    let instance_path = temp_path("fleet.json");
    fs::write(&instance_path, INSTANCE).unwrap();
    let args = [
        "verify",
        instance_path.to_str().unwrap(),
        "--theorems",
        "T1,T2",
        "--fleet",
        "5",
        "--seed",
        "3",
    ];
    let a = submod(&args);
    let b = submod(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "verify output differs across runs");
    fs::remove_file(&instance_path).ok();
}

#[test]
fn exante_exact_passes() {
    let instance_path = temp_path("exante.json");
    fs::write(&instance_path, INSTANCE).unwrap();
    let output = submod(&["exante", instance_path.to_str().unwrap(), "--exact"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("ex-ante over 2 exact runs"), "{text}");
    assert!(text.contains("RESULT: PASS"), "{text}");

    let sampled = submod(&[
        "exante",
        instance_path.to_str().unwrap(),
        "--samples",
        "50",
        "--seed",
        "1",
    ]);
    assert!(sampled.status.success());
    assert!(stdout(&sampled).contains("ci99="));
    fs::remove_file(&instance_path).ok();
}

#[test]
fn experiment_reruns_byte_identical() {
    let spec_path = temp_path("experiment.json");
    let csv_a = temp_path("a.csv");
    let csv_b = temp_path("b.csv");
    fs::write(&spec_path, EXPERIMENT).unwrap();

    for csv in [&csv_a, &csv_b] {
        let output = submod(&[
            "experiment",
            spec_path.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "{}", stdout(&output));
    }
    let a = fs::read(&csv_a).unwrap();
    let b = fs::read(&csv_b).unwrap();
    assert_eq!(a, b, "experiment CSV differs across invocations");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("sweep,run,agent,value,baseline,ratio,protocol,position\n"));
    // runs * sweep points * agents rows: 4 * (2 + 3)
    assert_eq!(text.lines().count(), 1 + 4 * 5);

    fs::remove_file(&spec_path).ok();
    fs::remove_file(&csv_a).ok();
    fs::remove_file(&csv_b).ok();
}

#[test]
fn usage_errors_exit_two() {
    let output = submod(&["--definitely-not-a-flag"]);
    assert_eq!(output.status.code(), Some(2));

    let output = submod(&["example1"]); // missing --n
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn missing_file_exits_one() {
    let output = submod(&["run", "/nonexistent/instance.json"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn protocol_fault_exits_one() {
    let instance_path = temp_path("fault.json");
    fs::write(&instance_path, INSTANCE).unwrap();
    // both agents scripted onto the same item: the second one faults
    let output = submod(&[
        "run",
        instance_path.to_str().unwrap(),
        "--policies",
        "scripted:0",
        "scripted:0",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("agent 1"), "{err}");
    fs::remove_file(&instance_path).ok();
}
