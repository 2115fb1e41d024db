//! Drives the `zerotwo-auth` binary against a server on a real socket.

use std::net::SocketAddr;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use rand::rngs::OsRng;
use zerotwo_core::wire::{AuthzState, LoginState};
use zerotwo_server::{http, AuthService, ServerConfig, SystemClock};

struct Server {
    addr: SocketAddr,
    service: Arc<AuthService>,
    stop: Option<tokio::sync::oneshot::Sender<()>>,
    rt: tokio::runtime::Runtime,
    task: Option<tokio::task::JoinHandle<std::io::Result<()>>>,
}

impl Server {
    fn start() -> Self {
        let rt = tokio::runtime::Builder::new_multi_thread().worker_threads(1).enable_all().build().unwrap();
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        let port = listener.local_addr().unwrap().port();
        drop(listener);
        let base = format!("http://127.0.0.1:{port}");
        let mut config = ServerConfig::new("localhost", base);
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
        let addr = rx.recv().unwrap();
        Self { addr, service, stop: Some(stop), rt, task: Some(task) }
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        if let Some(task) = self.task.take() {
            let _ = self.rt.block_on(task);
        }
    }
}

fn auth(store: &Path, server: &SocketAddr, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerotwo-auth"))
        .arg("--store")
        .arg(store)
        .args(["--server", &format!("http://{server}"), "--unlock-password-env", "ZT_TEST_PIN"])
        .args(args)
        .env("ZT_TEST_PIN", "1234")
        .env("ZT_TEST_SECRET", "tidy-ocean-lunar-maple-ivory-drum")
        .output()
        .unwrap()
}

fn ok(out: Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn cli_full_lifecycle() {
    let server = Server::start();
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("phone.zt");
    let addr = server.addr;

    ok(auth(&store, &addr, &["init", "--fast-kdf"]));
    assert!(!auth(&store, &addr, &["init", "--fast-kdf"]).status.success());

    let printed = ok(auth(&store, &addr, &["passphrase"]));
    assert_eq!(printed.trim().split('-').count(), 6);
    assert!(ok(auth(&store, &addr, &["sessions"])).is_empty());

    ok(auth(&store, &addr, &["import-secret", "--env", "ZT_TEST_SECRET"]));
    let bytes = std::fs::read(&store).unwrap();
    assert!(!bytes.windows(9).any(|w| w == b"tidy-ocea"));

    let signup = server.service.signup_init("alice").unwrap();
    let payload = dir.path().join("enroll.json");
    std::fs::write(&payload, &signup.qr_payload).unwrap();
    let out = ok(auth(&store, &addr, &["enroll", "--payload", payload.to_str().unwrap(), "--label", "demo"]));
    assert!(out.contains("enrolled alice at localhost"));
    assert!(ok(auth(&store, &addr, &["accounts", "list"])).contains("demo\talice\tlocalhost\tsecret 0\tenrolled"));

    let challenge = server.service.login_init("alice").unwrap();
    let out =
        ok(auth(&store, &addr, &["approve", "--login", &challenge.login_id, "--yes", "--duration-seconds", "600"]));
    let sid = out.split_whitespace().nth(1).unwrap().to_owned();
    assert_eq!(server.service.login_status(&challenge.login_id).unwrap().state, LoginState::Ok);
    assert!(ok(auth(&store, &addr, &["sessions"])).contains(&sid));

    let ch = server.service.request_authorization(&sid, "delete account").unwrap();
    assert!(ok(auth(&store, &addr, &["authz", "list"])).contains("delete account"));
    ok(auth(&store, &addr, &["authz", "confirm", &ch.auth_id, "--yes"]));
    assert_eq!(server.service.authorization_status(&ch.auth_id).unwrap(), AuthzState::Confirmed);

    let backup = dir.path().join("backup.zt");
    ok(auth(&store, &addr, &["export", backup.to_str().unwrap()]));
    assert_eq!(std::fs::read(&backup).unwrap(), std::fs::read(&store).unwrap());

    ok(auth(&store, &addr, &["logout", &sid]));
    assert!(server.service.session(&sid).unwrap().revoked);
    assert!(!auth(&store, &addr, &["logout", &sid]).status.success());

    let wrong = Command::new(env!("CARGO_BIN_EXE_zerotwo-auth"))
        .arg("--store")
        .arg(&store)
        .args(["--unlock-password-env", "ZT_TEST_PIN", "sessions"])
        .env("ZT_TEST_PIN", "0000")
        .output()
        .unwrap();
    assert!(!wrong.status.success());
    assert!(String::from_utf8_lossy(&wrong.stderr).contains("could not unlock"));
}

#[test]
fn approve_from_payload_without_consent_is_declined() {
    let server = Server::start();
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("phone.zt");
    let addr = server.addr;
    ok(auth(&store, &addr, &["init", "--fast-kdf"]));
    ok(auth(&store, &addr, &["import-secret", "--env", "ZT_TEST_SECRET"]));
    let signup = server.service.signup_init("bob").unwrap();
    let payload = dir.path().join("enroll.json");
    std::fs::write(&payload, &signup.qr_payload).unwrap();
    ok(auth(&store, &addr, &["enroll", "--payload", payload.to_str().unwrap()]));

    let challenge = server.service.login_init("bob").unwrap();
    let qr = zerotwo_core::QrPayload::from(challenge.clone()).encode();
    let login = dir.path().join("login.json");
    std::fs::write(&login, qr).unwrap();
    // No --yes and an empty stdin: the terminal prompt reads "no".
    let out = auth(&store, &addr, &["approve", "--payload", login.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("declined"));
    assert_eq!(server.service.login_status(&challenge.login_id).unwrap().state, LoginState::Pending);
}
