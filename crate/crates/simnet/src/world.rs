//! One server, one browser, one or more authenticators and an attacker,
//! all on a simulated network and a manual clock.

use std::fmt::Display;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Serialize;
use zerotwo_auth::{Authenticator, ClientError, KdfParams, Reply, SecretStore, Transport, UnlockCredential};
use zerotwo_core::wire::ErrorBody;
use zerotwo_core::GroupProfile;
use zerotwo_server::{AuthService, Clock, ManualClock, ServerConfig};

use crate::leak::SecretLog;
use crate::net::{Endpoint, SimNet};
use crate::tape::Tape;
use crate::transcript::{Channel, StepOutcome};

pub const DOMAIN: &str = "example.org";
pub const PUBLIC_URL: &str = "https://example.org";
/// 2023-11-14T22:13:20Z, an arbitrary fixed start.
pub const START: u64 = 1_700_000_000;

#[derive(Debug, Clone)]
pub struct WorldOptions {
    pub group: GroupProfile,
    pub login_rate_limit: u32,
}

impl Default for WorldOptions {
    fn default() -> Self {
        Self { group: GroupProfile::production(), login_rate_limit: 10 }
    }
}

pub type Device = Authenticator<Endpoint>;

pub struct World {
    pub tape: Tape,
    pub group: GroupProfile,
    pub clock: ManualClock,
    pub service: Arc<AuthService>,
    pub net: SimNet,
    pub browser: Endpoint,
    pub attacker: Endpoint,
    pub device: Device,
    pub secrets: SecretLog,
}

impl World {
    pub fn new(scenario: &str, tape: Tape, options: &WorldOptions) -> Self {
        let mut config = ServerConfig::new(DOMAIN, PUBLIC_URL);
        config.demo = true;
        config.group = options.group.clone();
        config.login_rate_limit = options.login_rate_limit;
        let clock = ManualClock::new(START);
        let service = Arc::new(
            AuthService::new(config, Arc::new(clock.clone()), Box::new(tape.stream("server")))
                .expect("in-memory service starts"),
        );
        let net = SimNet::new(Arc::clone(&service), scenario, tape.seed);
        let secrets = SecretLog::default();
        let device = make_device(&net, &options.group, &clock, &tape, &secrets, "device");
        Self {
            tape,
            group: options.group.clone(),
            browser: net.endpoint(Channel::Browser),
            attacker: net.endpoint(Channel::Attacker),
            device,
            clock,
            service,
            net,
            secrets,
        }
    }

    /// A further authenticator with its own store and randomness stream.
    pub fn new_device(&self, label: &str) -> Device {
        make_device(&self.net, &self.group, &self.clock, &self.tape, &self.secrets, label)
    }

    pub fn now(&self) -> u64 {
        self.clock.now()
    }

    /// Records a step; passes when the rendered values are equal.
    pub fn expect(&self, step: &str, expected: impl Display, actual: impl Display) -> bool {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        self.check(step, expected.clone(), actual.clone(), expected == actual)
    }

    pub fn check(&self, step: &str, expected: impl Display, actual: impl Display, pass: bool) -> bool {
        let outcome =
            StepOutcome { step: step.to_owned(), expected: expected.to_string(), actual: actual.to_string(), pass };
        self.net.record(|t| t.outcomes.push(outcome));
        pass
    }

    pub fn post<T: Serialize>(&self, from: &Endpoint, path: &str, body: &T) -> Reply {
        let body = serde_json::to_vec(body).expect("request serializes");
        self.post_raw(from, path, &body)
    }

    pub fn post_raw(&self, from: &Endpoint, path: &str, body: &[u8]) -> Reply {
        from.post(path, body).expect("simulated transport cannot fail")
    }

    pub fn get(&self, from: &Endpoint, path: &str) -> Reply {
        from.get(path).expect("simulated transport cannot fail")
    }
}

/// Every device reports to the shared secret log.
fn make_device(
    net: &SimNet,
    group: &GroupProfile,
    clock: &ManualClock,
    tape: &Tape,
    log: &SecretLog,
    label: &str,
) -> Device {
    let mut rng = tape.stream(&format!("device:{label}"));
    let store = SecretStore::in_memory(&UnlockCredential::password("device pin"), KdfParams::fast(), &mut rng)
        .expect("fast KDF parameters are valid");
    let clock = clock.clone();
    Authenticator::new(
        store,
        net.endpoint(Channel::Authenticator),
        group.clone(),
        Arc::new(move || clock.now()),
        Box::new(rng),
    )
    .with_witness(Box::new(log.clone()))
}

/// `"200"` for success, otherwise status and error code, e.g. `"410 gone"`.
pub fn describe(reply: &Reply) -> String {
    if (200..300).contains(&reply.status) {
        return reply.status.to_string();
    }
    match serde_json::from_slice::<ErrorBody>(&reply.body) {
        Ok(body) => format!("{} {}", reply.status, body.error),
        Err(_) => reply.status.to_string(),
    }
}

pub fn parse<T: DeserializeOwned>(reply: &Reply) -> anyhow::Result<T> {
    serde_json::from_slice(&reply.body).map_err(|e| anyhow::anyhow!("unexpected body ({}): {e}", describe(reply)))
}

/// A short name for a client-side result.
pub fn client_outcome<T>(result: &Result<T, ClientError>) -> String {
    let Err(e) = result else { return "ok".into() };
    match e {
        ClientError::FingerprintMismatch { .. } => "fingerprint-mismatch".into(),
        ClientError::Declined => "declined".into(),
        ClientError::AuthenticationFailed => "authentication-failed".into(),
        ClientError::Gone => "gone".into(),
        ClientError::Denied => "denied".into(),
        ClientError::SessionExpired => "session-expired".into(),
        ClientError::Throttled => "throttled".into(),
        ClientError::DurationRejected(_) => "duration-rejected".into(),
        ClientError::Conflict(_) => "conflict".into(),
        ClientError::NotFound(_) => "not-found".into(),
        ClientError::Server { status, .. } => format!("server-{status}"),
        other => other.to_string(),
    }
}
