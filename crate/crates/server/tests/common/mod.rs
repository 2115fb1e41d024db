#![allow(dead_code)]

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use zerotwo_core::wire::{EnrollRequest, LoginChallenge, LoginCompleteRequest};
use zerotwo_core::{
    client_respond, compute_verifier, derive_x, int_from_hex, ClientResponse, IdentityPair, MasterSecret, SecretOrigin,
};
use zerotwo_server::{AuthService, ManualClock, ServerConfig};

pub const DOMAIN: &str = "example.org";
pub const START: u64 = 1_700_000_000;

pub fn secret(text: &str) -> MasterSecret {
    MasterSecret::passphrase(text, SecretOrigin::Imported).unwrap()
}

pub struct Fixture {
    pub service: Arc<AuthService>,
    pub clock: ManualClock,
    pub rng: ChaCha20Rng,
}

pub fn fixture_with(config: ServerConfig, seed: u64) -> Fixture {
    let clock = ManualClock::new(START);
    let service =
        AuthService::new(config, Arc::new(clock.clone()), Box::new(ChaCha20Rng::seed_from_u64(seed))).unwrap();
    Fixture { service: Arc::new(service), clock, rng: ChaCha20Rng::seed_from_u64(seed ^ 0xc11e) }
}

pub fn fixture(seed: u64) -> Fixture {
    fixture_with(ServerConfig::new(DOMAIN, "https://example.org"), seed)
}

impl Fixture {
    pub fn enroll(&self, iu: &str, p: &MasterSecret) {
        self.service.signup_init(iu).unwrap();
        let id = IdentityPair::new(iu, DOMAIN).unwrap();
        let v = compute_verifier(&derive_x(&id, p).unwrap(), &self.service.config().group).unwrap();
        self.service.enroll(&EnrollRequest { iu: iu.into(), v: v.to_hex() }).unwrap();
    }

    /// What an honest authenticator would send for `challenge`.
    pub fn respond(
        &mut self,
        challenge: &LoginChallenge,
        p: &MasterSecret,
        d: u64,
    ) -> (LoginCompleteRequest, ClientResponse) {
        let id = IdentityPair::new(challenge.iu.as_str(), challenge.is.as_str()).unwrap();
        let b = int_from_hex(&challenge.b).unwrap();
        let resp = client_respond(&id, p, &b, d, &self.service.config().group, &mut self.rng).unwrap();
        let req = LoginCompleteRequest {
            login_id: challenge.login_id.clone(),
            iu: challenge.iu.clone(),
            a: resp.client_public_hex(),
            m: resp.proof_hex(),
            d,
        };
        (req, resp)
    }

    /// Full login; returns the session id and the client's key.
    pub fn login(&mut self, iu: &str, p: &MasterSecret, d: u64) -> (String, [u8; 32]) {
        let challenge = self.service.login_init(iu).unwrap();
        let (req, resp) = self.respond(&challenge, p, d);
        let done = self.service.login_complete(&req).unwrap();
        (done.session_id, *resp.key())
    }
}
