use zerotwo_sim::transcript::Direction;
use zerotwo_sim::{run_scenario, ScenarioOptions, Tape, SCENARIOS};

fn quick() -> ScenarioOptions {
    ScenarioOptions { dictionary_trials: 2_000, ..ScenarioOptions::default() }
}

#[test]
fn every_shipped_scenario_passes() {
    for s in SCENARIOS {
        let t = run_scenario(s.name, Tape::new(11), &quick()).unwrap();
        assert!(t.passed(), "{}: first divergence {:?}", s.name, t.first_divergence());
        assert!(!t.outcomes.is_empty());
    }
}

#[test]
fn required_attacks_are_covered() {
    let names: Vec<&str> = SCENARIOS.iter().map(|s| s.name).collect();
    for required in [
        "happy-path",
        "wrong-secret",
        "tampered-b",
        "replayed-completion",
        "replayed-authz-nonce",
        "expired-session",
        "remote-logout",
        "dictionary-weak-secret",
    ] {
        assert!(names.contains(&required), "missing {required}");
    }
}

#[test]
fn same_tape_gives_identical_transcripts() {
    for name in ["happy-path", "tampered-b-and-fingerprint", "concurrent-duplicate-completes", "unknown-user-decoy"] {
        let a = run_scenario(name, Tape::new(5), &quick()).unwrap().to_jsonl();
        let b = run_scenario(name, Tape::new(5), &quick()).unwrap().to_jsonl();
        assert_eq!(a, b, "{name}");
        let c = run_scenario(name, Tape::new(6), &quick()).unwrap().to_jsonl();
        assert_ne!(a, c, "{name} ignored the tape");
    }
}

#[test]
fn tampered_b_stops_before_any_secret_is_used() {
    let t = run_scenario("tampered-b", Tape::default(), &quick()).unwrap();
    let divergence = t.outcomes.iter().find(|o| o.step == "device aborts at the fingerprint check").unwrap();
    assert_eq!(divergence.actual, "fingerprint-mismatch");
    // The only tampered message is the challenge delivered to the device.
    let tampered: Vec<_> = t.messages.iter().filter(|m| m.tampered).collect();
    assert_eq!(tampered.len(), 1);
    assert_eq!(tampered[0].direction, Direction::Response);
    assert!(tampered[0].endpoint.starts_with("/login/challenge/"));
}

#[test]
fn wrong_secret_is_refused_by_the_server() {
    let t = run_scenario("wrong-secret", Tape::default(), &quick()).unwrap();
    let step = t.outcomes.iter().find(|o| o.step == "server rejects the impostor's proof").unwrap();
    assert_eq!(step.actual, "authentication-failed");
    let complete: Vec<_> = t.messages.iter().filter(|m| m.endpoint == "/login/complete").collect();
    assert_eq!(complete.len(), 2);
    assert_eq!(complete[1].status, Some(401));
}

#[test]
fn unknown_scenario_is_reported() {
    let err = run_scenario("no-such-thing", Tape::default(), &quick()).unwrap_err();
    assert_eq!(err.0, "no-such-thing");
}

#[test]
fn a_broken_world_reports_its_first_divergence() {
    // With no login attempts allowed the browser is throttled right after
    // enrollment and the script cannot continue.
    let mut options = quick();
    options.world.login_rate_limit = 0;
    let t = run_scenario("happy-path", Tape::default(), &options).unwrap();
    assert!(!t.passed());
    let first = t.first_divergence().unwrap();
    assert_eq!(first.step, "scenario completes");
    assert!(first.actual.contains("429"), "{}", first.actual);
    assert_eq!(t.outcomes[0].step, "device enrolls");
    assert!(t.outcomes[0].pass);
}

#[test]
fn zero_guesses_recover_nothing() {
    let options = ScenarioOptions { dictionary_trials: 0, ..ScenarioOptions::default() };
    let t = run_scenario("dictionary-generated-passphrase", Tape::default(), &options).unwrap();
    assert!(t.passed(), "{:?}", t.first_divergence());
}
