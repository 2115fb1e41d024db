//! The shipped scenarios.
//!
//! Each scenario scripts browser, authenticator and attacker steps against a
//! fresh [`World`] and records what it expected at every step. Every run ends
//! with a scan of the captured traffic for the secrets the authenticators
//! computed along the way.

use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use rand::Rng;
use zerotwo_auth::{AuthzPrompt, Confirmer, LoginPrompt, PassphraseSpec, ScriptedConfirmer, SecretKind};
use zerotwo_core::wire::{
    self, AuthzChallenge, AuthzRequest, AuthzStatus, LoginChallenge, LoginCompleteRequest, LoginInitRequest,
    LoginStatus, SignupRequest, SignupResponse,
};
use zerotwo_core::{fingerprint, int_from_hex, int_to_hex, IdentityPair, MasterSecret, SecretOrigin};
use zerotwo_server::api;

use crate::dictionary::{dictionary_attack, passphrase_guesses, weak_candidates};
use crate::leak;
use crate::net::Interceptor;
use crate::tape::Tape;
use crate::transcript::{Channel, Direction, Transcript};
use crate::world::{client_outcome, describe, parse, World, WorldOptions};

#[derive(Debug, Clone)]
pub struct ScenarioOptions {
    pub world: WorldOptions,
    /// Guesses made against a generated passphrase.
    pub dictionary_trials: usize,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        Self { world: WorldOptions::default(), dictionary_trials: 1_000_000 }
    }
}

type Script = fn(&mut World, &ScenarioOptions) -> anyhow::Result<()>;

pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    script: Script,
}

pub const SCENARIOS: &[Scenario] = &[
    Scenario { name: "happy-path", summary: "enroll, log in, authorize an action, log out", script: happy_path },
    Scenario { name: "wrong-secret", summary: "a device with a different secret is refused", script: wrong_secret },
    Scenario {
        name: "tampered-b",
        summary: "B replaced in transit; the device aborts at the fingerprint",
        script: tampered_b,
    },
    Scenario {
        name: "tampered-b-and-fingerprint",
        summary: "B and its fingerprint replaced; the human comparison catches it",
        script: tampered_b_and_fingerprint,
    },
    Scenario {
        name: "replayed-completion",
        summary: "a captured login completion is resent",
        script: replayed_completion,
    },
    Scenario {
        name: "replayed-authz-nonce",
        summary: "a captured authorization MAC is resent and reused",
        script: replayed_authz_nonce,
    },
    Scenario {
        name: "tampered-authz-operation",
        summary: "the operation text is altered on its way to the device",
        script: tampered_authz_operation,
    },
    Scenario {
        name: "flipped-authz-mac",
        summary: "one bit of an authorization MAC is flipped",
        script: flipped_authz_mac,
    },
    Scenario {
        name: "expired-session",
        summary: "a 60 s session stops authorizing at its expiry",
        script: expired_session,
    },
    Scenario { name: "remote-logout", summary: "the device ends the browser session", script: remote_logout },
    Scenario { name: "logout-replay", summary: "a captured logout is resent", script: logout_replay },
    Scenario {
        name: "dictionary-weak-secret",
        summary: "a breached verifier for \"password123\" falls to a 10^4 word list",
        script: dictionary_weak_secret,
    },
    Scenario {
        name: "dictionary-generated-passphrase",
        summary: "a breached verifier for a generated passphrase survives random guessing",
        script: dictionary_generated_passphrase,
    },
    Scenario {
        name: "unknown-user-decoy",
        summary: "unknown identifiers get a decoy challenge",
        script: unknown_user_decoy,
    },
    Scenario {
        name: "concurrent-duplicate-completes",
        summary: "eight simultaneous copies of one completion; exactly one wins",
        script: concurrent_duplicate_completes,
    },
];

pub fn find(name: &str) -> Option<&'static Scenario> {
    SCENARIOS.iter().find(|s| s.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownScenario(pub String);

impl std::fmt::Display for UnknownScenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "unknown scenario {:?}", self.0)
    }
}

impl std::error::Error for UnknownScenario {}

/// A finished run: the transcript plus every secret the devices computed.
pub struct Run {
    pub transcript: Transcript,
    pub secrets: Vec<(SecretKind, Vec<u8>)>,
}

/// Runs one scenario. The transcript carries every delivered message and
/// every step outcome; [`Transcript::first_divergence`] names the first
/// failed expectation.
pub fn run_scenario(name: &str, tape: Tape, options: &ScenarioOptions) -> Result<Transcript, UnknownScenario> {
    execute(name, tape, options).map(|run| run.transcript)
}

pub fn execute(name: &str, tape: Tape, options: &ScenarioOptions) -> Result<Run, UnknownScenario> {
    let scenario = find(name).ok_or_else(|| UnknownScenario(name.to_owned()))?;
    let mut world = World::new(scenario.name, tape, &options.world);
    if let Err(e) = (scenario.script)(&mut world, options) {
        world.check("scenario completes", "no error", format!("aborted: {e:#}"), false);
    }
    let secrets = world.secrets.secrets();
    let leaks = leak::scan(&world.net.transcript(), &secrets);
    world.check(
        "no secret on the wire",
        "0 occurrences",
        format!("{} occurrences across {} secrets", leaks.len(), secrets.len()),
        leaks.is_empty(),
    );
    Ok(Run { transcript: world.net.transcript(), secrets })
}

const ALICE: &str = "alice";
const OPERATION: &str = "transfer 100 EUR to account DE89 3704 0044 0532 0130 00";

/// The person holding the phone. Approves a login only when the phone's
/// fingerprint matches the one the browser shows, and an action only when
/// it is the one they asked for (if they are paying attention).
struct Human {
    browser_fingerprint: String,
    intended_operation: Option<String>,
}

impl Confirmer for Human {
    fn confirm_login(&mut self, prompt: &LoginPrompt) -> bool {
        prompt.local_fingerprint == self.browser_fingerprint
    }

    fn confirm_authorization(&mut self, prompt: &AuthzPrompt) -> bool {
        self.intended_operation.as_deref().map_or(true, |o| o == prompt.operation)
    }
}

/// Signs `iu` up in the browser and enrolls it from the device with a
/// freshly generated passphrase.
fn enroll(world: &mut World, iu: &str) -> anyhow::Result<()> {
    let (secret_id, _) = world.device.generate_secret(&PassphraseSpec::default())?;
    enroll_with(world, iu, secret_id)
}

fn enroll_with(world: &mut World, iu: &str, secret_id: u32) -> anyhow::Result<()> {
    let reply = world.post(&world.browser, wire::SIGNUP, &SignupRequest { iu: iu.into() });
    let signup: SignupResponse = parse(&reply)?;
    let enrolled = world.device.handle_enroll_payload(&signup.qr_payload, None, secret_id);
    world.expect("device enrolls", "ok", client_outcome(&enrolled));
    enrolled?;
    Ok(())
}

fn begin_login(world: &World, iu: &str) -> anyhow::Result<LoginChallenge> {
    let reply = world.post(&world.browser, wire::LOGIN_INIT, &LoginInitRequest { iu: iu.into() });
    parse(&reply)
}

fn browser_status(world: &World, login_id: &str) -> anyhow::Result<LoginStatus> {
    parse(&world.get(&world.browser, &format!("{}/{login_id}", wire::LOGIN_STATUS)))
}

struct LoggedIn {
    session_id: String,
    browser_token: String,
}

/// A complete, honest login for `d` seconds.
fn login(world: &mut World, iu: &str, d: u64) -> anyhow::Result<LoggedIn> {
    let shown = begin_login(world, iu)?;
    let challenge = world.device.fetch_login(&shown.login_id)?;
    let mut human = Human { browser_fingerprint: shown.fingerprint.clone(), intended_operation: None };
    let approved = world.device.approve_login(&challenge, d, &mut human);
    world.expect("device approves login", "ok", client_outcome(&approved));
    let approval = approved?;
    let status = browser_status(world, &shown.login_id)?;
    world.expect("browser sees login ok", "Ok", format!("{:?}", status.state));
    world.expect(
        "browser and device agree on the session",
        &approval.session_id,
        status.session_id.as_deref().unwrap_or("-"),
    );
    let browser_token = status.browser_token.ok_or_else(|| anyhow::anyhow!("no browser token"))?;
    Ok(LoggedIn { session_id: approval.session_id, browser_token })
}

fn request_authz(world: &World, session_id: &str, o: &str) -> anyhow::Result<AuthzChallenge> {
    parse(&world.post(
        &world.browser,
        wire::AUTHZ_REQUEST,
        &AuthzRequest { session_id: session_id.into(), o: o.into() },
    ))
}

fn authz_state(world: &World, auth_id: &str) -> anyhow::Result<String> {
    let status: AuthzStatus = parse(&world.get(&world.browser, &format!("{}/{auth_id}", wire::AUTHZ_STATUS)))?;
    Ok(format!("{:?}", status.state))
}

/// The device fetches pending challenges and answers the one with `auth_id`.
fn device_confirms(
    world: &mut World,
    session_id: &str,
    auth_id: &str,
    confirmer: &mut dyn Confirmer,
) -> anyhow::Result<String> {
    let pending = world.device.pending_authorizations(session_id)?;
    let challenge = pending
        .into_iter()
        .find(|c| c.auth_id == auth_id)
        .ok_or_else(|| anyhow::anyhow!("challenge {auth_id} not pending"))?;
    Ok(client_outcome(&world.device.confirm_authorization(session_id, &challenge, confirmer)))
}

fn session_check(world: &World, token: &str) -> String {
    describe(&world.get(&world.browser, &format!("{}/{token}", api::SESSION)))
}

fn last_request_body(world: &World, endpoint: &str) -> anyhow::Result<Vec<u8>> {
    world
        .net
        .transcript()
        .requests_to(endpoint)
        .last()
        .map(|m| m.body.clone())
        .ok_or_else(|| anyhow::anyhow!("nothing was sent to {endpoint}"))
}

fn happy_path(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let s = login(world, ALICE, 8 * 3600)?;
    world.expect("browser session is valid", "200", session_check(world, &s.browser_token));

    let ch = request_authz(world, &s.session_id, OPERATION)?;
    let mut human = Human { browser_fingerprint: String::new(), intended_operation: Some(OPERATION.into()) };
    let got = device_confirms(world, &s.session_id, &ch.auth_id, &mut human)?;

    world.expect("device confirms the action", "ok", got);
    world.expect("server marks the action confirmed", "Confirmed", authz_state(world, &ch.auth_id)?);

    let out = world.device.remote_logout(&s.session_id);
    world.expect("device logs out", "ok", client_outcome(&out));
    world.expect("browser session has ended", "440 session-expired", session_check(world, &s.browser_token));
    Ok(())
}

fn wrong_secret(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let mut impostor = world.new_device("impostor");
    let (other, _) = impostor.generate_secret(&PassphraseSpec::default())?;
    impostor.add_account("stolen", ALICE, crate::world::DOMAIN, other)?;

    let shown = begin_login(world, ALICE)?;
    let challenge = impostor.fetch_login(&shown.login_id)?;
    let mut human = Human { browser_fingerprint: shown.fingerprint.clone(), intended_operation: None };
    let out = impostor.approve_login(&challenge, 3600, &mut human);
    world.expect("server rejects the impostor's proof", "authentication-failed", client_outcome(&out));
    world.expect("browser sees login failed", "Failed", format!("{:?}", browser_status(world, &shown.login_id)?.state));
    world.expect("no session was created", 0, world.service.sessions().len());
    Ok(())
}

/// Replaces `B` in challenges delivered to the device with `g^r` for an
/// attacker-chosen `r`, optionally recomputing the fingerprint to match.
fn substitute_b(world: &World, refresh_fingerprint: bool) {
    let group = world.group.clone();
    let mut rng = world.tape.stream("attacker");
    world.net.install(Interceptor::on_json(
        "substitute B",
        Channel::Authenticator,
        Direction::Response,
        wire::LOGIN_CHALLENGE,
        move |body| {
            let r = zerotwo_core::agreement::sample_exponent(&group, &mut rng);
            let forged = group.pow_g(&r);
            body["B"] = int_to_hex(&forged).into();
            if refresh_fingerprint {
                let id =
                    IdentityPair::new(body["iu"].as_str().unwrap_or_default(), body["is"].as_str().unwrap_or_default());
                if let Ok(id) = id {
                    body["fingerprint"] = fingerprint(&id, &forged).to_string().into();
                }
            }
        },
    ));
}

fn tampered_b(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let shown = begin_login(world, ALICE)?;
    substitute_b(world, false);
    let challenge = world.device.fetch_login(&shown.login_id)?;
    world.expect("device received a different B", true, challenge.b != shown.b);
    let mut confirmer = ScriptedConfirmer::always(true);
    let out = world.device.approve_login(&challenge, 3600, &mut confirmer);
    world.expect("device aborts at the fingerprint check", "fingerprint-mismatch", client_outcome(&out));
    world.expect("the user was never asked", 0, confirmer.shown.len());
    world.expect(
        "nothing was sent to login/complete",
        0,
        world.net.transcript().requests_to(wire::LOGIN_COMPLETE).count(),
    );
    world.expect("login is still pending", "Pending", format!("{:?}", browser_status(world, &shown.login_id)?.state));
    Ok(())
}

fn tampered_b_and_fingerprint(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let shown = begin_login(world, ALICE)?;
    substitute_b(world, true);
    let challenge = world.device.fetch_login(&shown.login_id)?;
    world.expect("forged fingerprint differs from the browser's", true, challenge.fingerprint != shown.fingerprint);
    let mut human = Human { browser_fingerprint: shown.fingerprint.clone(), intended_operation: None };
    let out = world.device.approve_login(&challenge, 3600, &mut human);
    world.expect("the user declines after comparing fingerprints", "declined", client_outcome(&out));
    world.expect(
        "nothing was sent to login/complete",
        0,
        world.net.transcript().requests_to(wire::LOGIN_COMPLETE).count(),
    );
    Ok(())
}

fn replayed_completion(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    login(world, ALICE, 3600)?;
    let captured = last_request_body(world, wire::LOGIN_COMPLETE)?;
    let replay = world.post_raw(&world.attacker, wire::LOGIN_COMPLETE, &captured);
    world.expect("replayed completion", "410 gone", describe(&replay));
    world.expect("still exactly one session", 1, world.service.sessions().len());
    Ok(())
}

fn replayed_authz_nonce(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let s = login(world, ALICE, 3600)?;
    let first = request_authz(world, &s.session_id, OPERATION)?;
    let mut yes = ScriptedConfirmer::always(true);
    let got = device_confirms(world, &s.session_id, &first.auth_id, &mut yes)?;

    world.expect("device confirms the action", "ok", got);

    let captured = last_request_body(world, wire::AUTHZ_CONFIRM)?;
    let replay = world.post_raw(&world.attacker, wire::AUTHZ_CONFIRM, &captured);
    world.expect("replayed confirmation", "410 gone", describe(&replay));

    // Same operation again: the old MAC does not cover the new nonce.
    let second = request_authz(world, &s.session_id, OPERATION)?;
    world.expect("a fresh challenge gets a fresh nonce", true, second.c != first.c);
    let mut reused: serde_json::Value = serde_json::from_slice(&captured)?;
    reused["auth_id"] = second.auth_id.clone().into();
    let reply = world.post(&world.attacker, wire::AUTHZ_CONFIRM, &reused);
    world.expect("old MAC on a new challenge", "401 denied", describe(&reply));
    world.expect("the new challenge is denied", "Denied", authz_state(world, &second.auth_id)?);
    Ok(())
}

fn tampered_authz_operation(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let s = login(world, ALICE, 3600)?;
    world.net.install(Interceptor::on_json(
        "rewrite operation",
        Channel::Authenticator,
        Direction::Response,
        wire::AUTHZ_PENDING,
        |body| {
            if let Some(list) = body["pending"].as_array_mut() {
                for c in list {
                    c["o"] = "transfer 100 EUR to account GB33 BUKB 2020 1555 5555 55".into();
                }
            }
        },
    ));
    let ch = request_authz(world, &s.session_id, OPERATION)?;
    // A careless user approves whatever the phone shows.
    let mut yes = ScriptedConfirmer::always(true);
    let out = device_confirms(world, &s.session_id, &ch.auth_id, &mut yes)?;
    world.expect("server rejects a MAC over the altered text", "denied", out);
    world.expect("the action is denied", "Denied", authz_state(world, &ch.auth_id)?);
    Ok(())
}

fn flipped_authz_mac(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let s = login(world, ALICE, 3600)?;
    world.net.install(Interceptor::on_json(
        "flip one MAC bit",
        Channel::Authenticator,
        Direction::Request,
        wire::AUTHZ_CONFIRM,
        |body| {
            if let Some(mut mac) = body["M"].as_str().and_then(|m| hex::decode(m).ok()) {
                mac[0] ^= 0x01;
                body["M"] = hex::encode(mac).into();
            }
        },
    ));
    let ch = request_authz(world, &s.session_id, OPERATION)?;
    let mut yes = ScriptedConfirmer::always(true);
    let got = device_confirms(world, &s.session_id, &ch.auth_id, &mut yes)?;

    world.expect("flipped MAC", "denied", got);
    world.expect("the action is denied", "Denied", authz_state(world, &ch.auth_id)?);
    Ok(())
}

fn expired_session(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let start = world.now();
    let s = login(world, ALICE, 60)?;

    world.clock.set(start + 59);
    let ch = request_authz(world, &s.session_id, OPERATION)?;
    let mut yes = ScriptedConfirmer::always(true);
    let got = device_confirms(world, &s.session_id, &ch.auth_id, &mut yes)?;

    world.expect("confirm one second before expiry", "ok", got);

    let late = request_authz(world, &s.session_id, "second action")?;
    world.clock.set(start + 60);
    let got = device_confirms(world, &s.session_id, &late.auth_id, &mut yes)?;

    world.expect("device refuses at expiry", "session-expired", got);
    let reply = world.post(
        &world.browser,
        wire::AUTHZ_REQUEST,
        &AuthzRequest { session_id: s.session_id.clone(), o: "third".into() },
    );
    world.expect("server refuses new challenges at expiry", "440 session-expired", describe(&reply));
    world.expect("browser session has ended", "440 session-expired", session_check(world, &s.browser_token));
    let got = world.device.prune_sessions()?;

    world.expect("device prunes the session", "1", got);
    Ok(())
}

fn remote_logout(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let s = login(world, ALICE, 3600)?;
    world.expect("browser session is valid", "200", session_check(world, &s.browser_token));
    let out = world.device.remote_logout(&s.session_id);
    world.expect("device logs out", "ok", client_outcome(&out));
    world.expect("device forgets the key", 0, world.device.sessions().len());
    world.expect("browser session has ended", "440 session-expired", session_check(world, &s.browser_token));
    let reply = world.post(
        &world.browser,
        wire::AUTHZ_REQUEST,
        &AuthzRequest { session_id: s.session_id.clone(), o: OPERATION.into() },
    );
    world.expect("no authorization after logout", "440 session-expired", describe(&reply));
    Ok(())
}

fn logout_replay(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let s = login(world, ALICE, 3600)?;
    let out = world.device.remote_logout(&s.session_id);
    world.expect("device logs out", "ok", client_outcome(&out));
    let captured = last_request_body(world, wire::LOGOUT)?;
    let replay = world.post_raw(&world.attacker, wire::LOGOUT, &captured);
    world.expect("replayed logout is acknowledged", "204", describe(&replay));
    world.expect("session stays ended", "440 session-expired", session_check(world, &s.browser_token));
    Ok(())
}

/// What a database breach yields: `(v, iu, is)`.
fn breach(world: &World, iu: &str) -> anyhow::Result<(zerotwo_core::Verifier, IdentityPair)> {
    let user = world.service.user(iu).ok_or_else(|| anyhow::anyhow!("{iu} not enrolled"))?;
    let v = zerotwo_core::Verifier::from_hex(&user.v, &world.group)?;
    Ok((v, IdentityPair::new(iu, crate::world::DOMAIN)?))
}

fn dictionary_weak_secret(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    let weak = MasterSecret::passphrase("password123", SecretOrigin::Imported)?;
    let id = world.device.add_secret(&weak)?;
    enroll_with(world, ALICE, id)?;
    let (v, identity) = breach(world, ALICE)?;
    let list = weak_candidates(10_000);
    let report = dictionary_attack(&v, &identity, &list, &world.group);
    world.expect("candidate list size", 10_000, list.len());
    world.expect("weak secret recovered", "password123", report.recovered.as_deref().unwrap_or("none"));
    Ok(())
}

fn dictionary_generated_passphrase(world: &mut World, options: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let (v, identity) = breach(world, ALICE)?;
    let trials = options.dictionary_trials;
    let report =
        dictionary_attack(&v, &identity, passphrase_guesses(world.tape.stream("attacker"), trials), &world.group);
    world.expect("guesses made", trials, report.tried);
    world.expect("generated passphrase recovered", "none", report.recovered.as_deref().unwrap_or("none"));
    world.expect("secrets on record", 1, world.secrets.count(SecretKind::Master));
    Ok(())
}

fn unknown_user_decoy(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let real = begin_login(world, ALICE)?;
    let decoy = begin_login(world, "mallory")?;
    let b = int_from_hex(&decoy.b)?;
    world.expect("decoy B is a group element", true, world.group.is_element(&b));
    world.expect(
        "decoy challenge has the same shape",
        format!("{} {}", real.login_id.len(), real.fingerprint.len()),
        format!("{} {}", decoy.login_id.len(), decoy.fingerprint.len()),
    );
    let mut rng = world.tape.stream("attacker");
    let a = world.group.pow_g(&BigUint::from(rng.gen::<u64>() | 1));
    let forged = LoginCompleteRequest {
        login_id: decoy.login_id.clone(),
        iu: "mallory".into(),
        a: int_to_hex(&a),
        m: hex::encode(rng.gen::<[u8; 32]>()),
        d: 3600,
    };
    let reply = world.post(&world.attacker, wire::LOGIN_COMPLETE, &forged);
    world.expect("completion against a decoy", "401 authentication-failed", describe(&reply));
    world.expect(
        "decoy login shows as failed",
        "Failed",
        format!("{:?}", browser_status(world, &decoy.login_id)?.state),
    );
    Ok(())
}

fn concurrent_duplicate_completes(world: &mut World, _: &ScenarioOptions) -> anyhow::Result<()> {
    enroll(world, ALICE)?;
    let shown = begin_login(world, ALICE)?;

    // Hold the device's completion back and race eight copies of it.
    let held: Arc<Mutex<Option<Vec<u8>>>> = Arc::default();
    let slot = Arc::clone(&held);
    world.net.install(Interceptor::on(
        "hold completion",
        Channel::Authenticator,
        Direction::Request,
        wire::LOGIN_COMPLETE,
        move |m| {
            *slot.lock().unwrap() = Some(std::mem::replace(&mut m.body, b"{}".to_vec()));
        },
    ));
    let challenge = world.device.fetch_login(&shown.login_id)?;
    let mut yes = ScriptedConfirmer::always(true);
    let out = world.device.approve_login(&challenge, 3600, &mut yes);
    world.expect("the held request never reached the server", "server-400", client_outcome(&out));
    world.net.clear_hooks();

    let body = held.lock().unwrap().take().ok_or_else(|| anyhow::anyhow!("completion was not captured"))?;
    let service = Arc::clone(world.net.service());
    let mut statuses: Vec<u16> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            (0..8).map(|_| scope.spawn(|| api::handle(&service, "POST", wire::LOGIN_COMPLETE, &body).status)).collect();
        handles.into_iter().map(|h| h.join().expect("racer panicked")).collect()
    });
    statuses.sort_unstable();
    world.expect("racing completions", "[200, 410, 410, 410, 410, 410, 410, 410]", format!("{statuses:?}"));
    world.expect("exactly one session", 1, world.service.sessions().len());
    world.expect("browser sees login ok", "Ok", format!("{:?}", browser_status(world, &shown.login_id)?.state));
    Ok(())
}
