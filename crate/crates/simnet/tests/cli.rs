use std::process::Command;

fn sim(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_zerotwo-sim")).args(args).output().unwrap()
}

#[test]
fn lists_scenarios() {
    let out = sim(&["run", "--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), zerotwo_sim::SCENARIOS.len());
    assert!(text.lines().any(|l| l.starts_with("tampered-b ")));
}

#[test]
fn writes_json_lines_and_honours_the_tape() {
    let dir = tempfile::tempdir().unwrap();
    let tape = dir.path().join("tape.json");
    zerotwo_sim::Tape::new(99).save(&tape).unwrap();
    let run = || sim(&["run", "--scenario", "replayed-completion", "--tape", tape.to_str().unwrap()]);
    let first = run();
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, run().stdout);

    let text = String::from_utf8(first.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["kind"], "header");
    assert_eq!(lines[0]["tape"], 99);
    assert!(lines.iter().any(|l| l["kind"] == "message" && l["channel"] == "attacker" && l["status"] == 410));
    assert!(lines.iter().filter(|l| l["kind"] == "outcome").all(|l| l["pass"] == true));
}

#[test]
fn unknown_scenario_fails() {
    let out = sim(&["run", "--scenario", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown scenario"));
}
