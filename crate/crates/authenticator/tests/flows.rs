mod common;

use common::*;
use zerotwo_auth::{ClientError, ScriptedConfirmer, SecretKind};
use zerotwo_core::wire::{AuthzState, LoginState};
use zerotwo_core::{int_from_hex, int_to_hex, MasterSecret, QrPayload, SecretOrigin};

fn passphrase(text: &str) -> MasterSecret {
    MasterSecret::passphrase(text, SecretOrigin::Imported).unwrap()
}

/// Enrolls "alice" and returns the secret id.
fn enroll_alice(rig: &mut Rig) -> u32 {
    let id = rig.auth.add_secret(&passphrase("tidy-ocean-lunar-maple-ivory-drum")).unwrap();
    let signup = rig.service.signup_init("alice").unwrap();
    let account = rig.auth.handle_enroll_payload(&signup.qr_payload, Some("work"), id).unwrap();
    assert!(account.enrolled);
    id
}

#[test]
fn enroll_posts_only_identity_and_verifier() {
    let mut rig = Rig::new(1);
    enroll_alice(&mut rig);
    let sent = rig.sent();
    assert_eq!(sent.len(), 1);
    assert_eq!(sent[0].target, "https://example.org/enroll");
    let body: serde_json::Value = serde_json::from_slice(&sent[0].body).unwrap();
    assert_eq!(body.as_object().unwrap().keys().collect::<Vec<_>>(), ["iu", "v"]);
    assert!(rig.service.user("alice").is_some());
    assert!(rig.auth.accounts()[0].enrolled);
}

#[test]
fn enroll_errors_surface() {
    let mut rig = Rig::new(2);
    let id = enroll_alice(&mut rig);
    let login = QrPayload::Login {
        login_id: "00".into(),
        iu: "alice".into(),
        is: DOMAIN.into(),
        b: "05".into(),
        fingerprint: "0000-0000-0000-0000".into(),
    };
    assert!(matches!(rig.auth.handle_enroll_payload(&login.encode(), None, id), Err(ClientError::Payload(_))));
    assert!(matches!(rig.auth.handle_enroll_payload("{not json", None, id), Err(ClientError::Payload(_))));
    // Already enrolled server-side: the server's 409 comes back as a conflict.
    let replay =
        QrPayload::Enroll { iu: "alice".into(), is: DOMAIN.into(), enroll_url: "https://example.org/enroll".into() };
    assert!(matches!(rig.auth.handle_enroll_payload(&replay.encode(), None, id), Err(ClientError::Conflict(_))));
}

#[test]
fn approve_login_end_to_end() {
    let mut rig = Rig::new(3);
    enroll_alice(&mut rig);
    let challenge = rig.service.login_init("alice").unwrap();
    let fetched = rig.auth.fetch_login(&challenge.login_id).unwrap();
    assert_eq!(fetched, challenge);

    let mut yes = ScriptedConfirmer::always(true);
    let approval = rig.auth.approve_login(&fetched, 3600, &mut yes).unwrap();
    assert_eq!(approval.expires_at, START + 3600);
    match &yes.shown[0] {
        zerotwo_auth::confirm::Shown::Login(p) => {
            assert_eq!(p.server_fingerprint, challenge.fingerprint);
            assert_eq!(p.local_fingerprint, challenge.fingerprint);
        }
        other => panic!("unexpected prompt {other:?}"),
    }
    let status = rig.service.login_status(&challenge.login_id).unwrap();
    assert_eq!(status.state, LoginState::Ok);
    let server_key = rig.service.session(&approval.session_id).unwrap().key;
    assert_eq!(rig.auth.sessions()[0].key, server_key);
}

#[test]
fn tampered_fingerprint_aborts_before_secret_use() {
    let mut rig = Rig::new(4);
    enroll_alice(&mut rig);
    let mut challenge = rig.service.login_init("alice").unwrap();
    // Attacker substitutes B but cannot make the fingerprint match.
    let b = int_from_hex(&challenge.b).unwrap();
    challenge.b = int_to_hex(&(b + 1u32));
    rig.witness.0.lock().unwrap().clear();
    rig.clear_sent();

    let mut yes = ScriptedConfirmer::always(true);
    let err = rig.auth.approve_login(&challenge, 3600, &mut yes).unwrap_err();
    assert!(matches!(err, ClientError::FingerprintMismatch { .. }), "{err}");
    assert!(yes.shown.is_empty(), "confirmer should not be asked");
    assert!(rig.witness.0.lock().unwrap().is_empty(), "secret material was touched");
    assert!(rig.sent().is_empty());
}

#[test]
fn declined_login_sends_nothing() {
    let mut rig = Rig::new(5);
    enroll_alice(&mut rig);
    let challenge = rig.service.login_init("alice").unwrap();
    rig.clear_sent();
    let mut no = ScriptedConfirmer::always(false);
    assert!(matches!(rig.auth.approve_login(&challenge, 3600, &mut no), Err(ClientError::Declined)));
    assert!(rig.sent().iter().all(|s| !String::from_utf8_lossy(&s.body).contains("\"M\"")));
    assert!(rig.sent().is_empty());
    assert_eq!(rig.service.login_status(&challenge.login_id).unwrap().state, LoginState::Pending);
}

#[test]
fn unknown_account_is_reported() {
    let mut rig = Rig::new(6);
    enroll_alice(&mut rig);
    let challenge = rig.service.login_init("bob").unwrap();
    assert!(matches!(
        rig.auth.approve_login(&challenge, 60, &mut ScriptedConfirmer::always(true)),
        Err(ClientError::UnknownAccount { .. })
    ));
}

#[test]
fn authorization_consent_and_tamper() {
    let mut rig = Rig::new(7);
    enroll_alice(&mut rig);
    let challenge = rig.service.login_init("alice").unwrap();
    let sid = rig.auth.approve_login(&challenge, 3600, &mut ScriptedConfirmer::always(true)).unwrap().session_id;

    let ch = rig.service.request_authorization(&sid, "delete account").unwrap();
    let listed = rig.auth.pending_authorizations(&sid).unwrap();
    assert_eq!(listed, vec![ch.clone()]);

    // Decline: nothing sent, request stays pending.
    rig.clear_sent();
    let mut no = ScriptedConfirmer::always(false);
    assert!(matches!(rig.auth.confirm_authorization(&sid, &ch, &mut no), Err(ClientError::Declined)));
    assert!(rig.sent().is_empty());
    match &no.shown[0] {
        zerotwo_auth::confirm::Shown::Authorization(p) => assert_eq!(p.operation, "delete account"),
        other => panic!("unexpected prompt {other:?}"),
    }

    rig.auth.confirm_authorization(&sid, &ch, &mut ScriptedConfirmer::always(true)).unwrap();
    assert_eq!(rig.service.authorization_status(&ch.auth_id).unwrap(), AuthzState::Confirmed);

    // The operation text altered in transit: the device signs what it saw,
    // the server checks what it asked for.
    let mut altered = rig.service.request_authorization(&sid, "delete account").unwrap();
    altered.o = "keep account".into();
    assert!(matches!(
        rig.auth.confirm_authorization(&sid, &altered, &mut ScriptedConfirmer::always(true)),
        Err(ClientError::Denied)
    ));
    assert_eq!(rig.service.authorization_status(&altered.auth_id).unwrap(), AuthzState::Denied);
}

#[test]
fn expired_session_is_refused_locally() {
    let mut rig = Rig::new(8);
    enroll_alice(&mut rig);
    let challenge = rig.service.login_init("alice").unwrap();
    let sid = rig.auth.approve_login(&challenge, 60, &mut ScriptedConfirmer::always(true)).unwrap().session_id;
    let ch = rig.service.request_authorization(&sid, "op").unwrap();
    rig.clock.advance(60);
    rig.clear_sent();
    assert!(matches!(
        rig.auth.confirm_authorization(&sid, &ch, &mut ScriptedConfirmer::always(true)),
        Err(ClientError::SessionExpired)
    ));
    assert!(rig.sent().is_empty());
    assert_eq!(rig.auth.prune_sessions().unwrap(), 1);
}

#[test]
fn remote_logout_revokes_and_erases() {
    let mut rig = Rig::new(9);
    enroll_alice(&mut rig);
    let challenge = rig.service.login_init("alice").unwrap();
    let sid = rig.auth.approve_login(&challenge, 3600, &mut ScriptedConfirmer::always(true)).unwrap().session_id;
    rig.auth.remote_logout(&sid).unwrap();
    assert!(rig.service.session(&sid).unwrap().revoked);
    assert!(rig.auth.sessions().is_empty());
    assert!(matches!(rig.auth.remote_logout(&sid), Err(ClientError::UnknownSession(_))));

    // Replaying the captured logout at the wire is acknowledged.
    let logout = rig.sent().into_iter().rev().find(|s| s.target == "/logout").unwrap();
    let r = zerotwo_server::api::handle(&rig.service, "POST", "/logout", &logout.body);
    assert_eq!(r.status, 204);
}

#[test]
fn one_secret_two_sites_two_verifiers() {
    let mut rig = Rig::new(10);
    let id = rig.auth.add_secret(&passphrase("shared secret")).unwrap();
    rig.auth.add_account("a", "alice", "a.example", id).unwrap();
    rig.auth.add_account("b", "alice", "b.example", id).unwrap();
    let mut verifiers = Vec::new();
    for is in ["a.example", "b.example"] {
        let payload = QrPayload::Enroll { iu: "alice".into(), is: is.into(), enroll_url: "/enroll".into() };
        // Only the request body matters here; the server's domain differs.
        let _ = rig.auth.handle_enroll_payload(&payload.encode(), None, id);
        let body: serde_json::Value = serde_json::from_slice(&rig.sent().last().unwrap().body).unwrap();
        verifiers.push(body["v"].as_str().unwrap().to_owned());
    }
    assert_ne!(verifiers[0], verifiers[1]);
}

#[test]
fn witness_sees_every_secret_kind_on_login() {
    let mut rig = Rig::new(11);
    enroll_alice(&mut rig);
    let challenge = rig.service.login_init("alice").unwrap();
    rig.witness.0.lock().unwrap().clear();
    rig.auth.approve_login(&challenge, 3600, &mut ScriptedConfirmer::always(true)).unwrap();
    let kinds: Vec<SecretKind> = rig.witness.0.lock().unwrap().iter().map(|(k, _)| *k).collect();
    assert_eq!(kinds, [SecretKind::Master, SecretKind::Effective, SecretKind::Premaster, SecretKind::SessionKey]);
}
