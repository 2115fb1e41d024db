//! The same authenticator code over a real TCP socket and HTTP.

use std::sync::Arc;

use rand::rngs::OsRng;
use zerotwo_auth::{
    system_now, Authenticator, HttpTransport, KdfParams, PassphraseSpec, ScriptedConfirmer, SecretStore,
    UnlockCredential,
};
use zerotwo_core::wire::{AuthzState, LoginState};
use zerotwo_core::GroupProfile;
use zerotwo_server::{http, AuthService, ServerConfig, SystemClock};

#[test]
fn login_and_authorize_over_http() {
    let rt = tokio::runtime::Builder::new_multi_thread().worker_threads(1).enable_all().build().unwrap();
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = listener.local_addr().unwrap().port();
    drop(listener);
    let base = format!("http://127.0.0.1:{port}");
    let mut config = ServerConfig::new("localhost", base.clone());
    config.demo = true;
    let service = Arc::new(AuthService::new(config, Arc::new(SystemClock), Box::new(OsRng)).unwrap());
    let (stop, stop_rx) = tokio::sync::oneshot::channel::<()>();
    let (tx, rx) = std::sync::mpsc::channel();
    let svc = Arc::clone(&service);
    let task = rt.spawn(async move {
        http::serve(
            svc,
            ([127, 0, 0, 1], port).into(),
            None,
            async {
                let _ = stop_rx.await;
            },
            move |a| tx.send(a).unwrap(),
        )
        .await
    });
    rx.recv().unwrap();

    let store = SecretStore::in_memory(&UnlockCredential::password("pin"), KdfParams::fast(), &mut OsRng).unwrap();
    let mut device =
        Authenticator::new(store, HttpTransport::new(&base), GroupProfile::production(), system_now(), Box::new(OsRng));
    let (secret, _) = device.generate_secret(&PassphraseSpec::default()).unwrap();
    let signup = service.signup_init("alice").unwrap();
    device.handle_enroll_payload(&signup.qr_payload, None, secret).unwrap();

    let shown = service.login_init("alice").unwrap();
    let challenge = device.fetch_login(&shown.login_id).unwrap();
    assert_eq!(challenge, shown);
    let mut yes = ScriptedConfirmer::always(true);
    let approval = device.approve_login(&challenge, 600, &mut yes).unwrap();
    assert_eq!(service.login_status(&shown.login_id).unwrap().state, LoginState::Ok);

    let ch = service.request_authorization(&approval.session_id, "rotate api key").unwrap();
    let pending = device.pending_authorizations(&approval.session_id).unwrap();
    assert_eq!(pending, vec![ch.clone()]);
    device.confirm_authorization(&approval.session_id, &ch, &mut yes).unwrap();
    assert_eq!(service.authorization_status(&ch.auth_id).unwrap(), AuthzState::Confirmed);

    device.remote_logout(&approval.session_id).unwrap();
    assert!(service.session(&approval.session_id).unwrap().revoked);

    stop.send(()).unwrap();
    rt.block_on(task).unwrap().unwrap();
}
