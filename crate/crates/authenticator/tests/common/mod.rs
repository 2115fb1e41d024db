#![allow(dead_code)]

use std::sync::{Arc, Mutex};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use zerotwo_auth::{
    Authenticator, KdfParams, Reply, SecretKind, SecretStore, SecretWitness, Transport, TransportError,
    UnlockCredential,
};
use zerotwo_core::GroupProfile;
use zerotwo_server::{api, AuthService, ManualClock, ServerConfig};

pub const DOMAIN: &str = "example.org";
pub const START: u64 = 1_700_000_000;

#[derive(Debug, Clone)]
pub struct Sent {
    pub method: String,
    pub target: String,
    pub body: Vec<u8>,
}

/// Calls the server's request handler directly and records every request.
#[derive(Clone)]
pub struct Loopback {
    pub service: Arc<AuthService>,
    pub sent: Arc<Mutex<Vec<Sent>>>,
}

impl Transport for Loopback {
    fn send(&self, method: &str, target: &str, body: &[u8]) -> Result<Reply, TransportError> {
        self.sent.lock().unwrap().push(Sent { method: method.into(), target: target.into(), body: body.to_vec() });
        let path = target.strip_prefix("https://example.org").unwrap_or(target);
        let r = api::handle(&self.service, method, path, body);
        Ok(Reply { status: r.status, body: r.body })
    }
}

pub type Seen = Vec<(SecretKind, Vec<u8>)>;

#[derive(Clone, Default)]
pub struct Witness(pub Arc<Mutex<Seen>>);

impl SecretWitness for Witness {
    fn observe(&mut self, kind: SecretKind, bytes: &[u8]) {
        self.0.lock().unwrap().push((kind, bytes.to_vec()));
    }
}

pub struct Rig {
    pub service: Arc<AuthService>,
    pub clock: ManualClock,
    pub net: Loopback,
    pub auth: Authenticator<Loopback>,
    pub witness: Witness,
}

impl Rig {
    pub fn new(seed: u64) -> Self {
        let mut config = ServerConfig::new(DOMAIN, "https://example.org");
        config.demo = true;
        let clock = ManualClock::new(START);
        let service = Arc::new(
            AuthService::new(config, Arc::new(clock.clone()), Box::new(ChaCha20Rng::seed_from_u64(seed))).unwrap(),
        );
        let net = Loopback { service: Arc::clone(&service), sent: Arc::default() };
        let mut rng = ChaCha20Rng::seed_from_u64(seed + 1);
        let store =
            SecretStore::in_memory(&UnlockCredential::password("device pin"), KdfParams::fast(), &mut rng).unwrap();
        let c = clock.clone();
        let witness = Witness::default();
        let auth = Authenticator::new(
            store,
            net.clone(),
            GroupProfile::production(),
            Arc::new(move || zerotwo_server::Clock::now(&c)),
            Box::new(rng),
        )
        .with_witness(Box::new(witness.clone()));
        Self { service, clock, net, auth, witness }
    }

    pub fn sent(&self) -> Vec<Sent> {
        self.net.sent.lock().unwrap().clone()
    }

    pub fn clear_sent(&self) {
        self.net.sent.lock().unwrap().clear();
    }
}
