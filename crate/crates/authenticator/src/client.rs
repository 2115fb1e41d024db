//! The authenticator's protocol flows.

use std::sync::Arc;

use thiserror::Error;
use zerotwo_core::wire::{
    self, AuthzChallenge, AuthzConfirm, AuthzPending, EnrollRequest, ErrorBody, LoginChallenge, LoginCompleteRequest,
    LoginCompleteResponse, LogoutRequest,
};
use zerotwo_core::{
    client_respond, compute_verifier, derive_x, encode_int, fingerprint, int_from_hex, GroupProfile, IdentityPair,
    MasterSecret, Nonce, QrPayload, SecureRng,
};

use crate::account::{Account, StoredSession};
use crate::confirm::{AuthzPrompt, Confirmer, LoginPrompt};
use crate::passphrase::{generate_passphrase, PassphraseSpec, Wordlist};
use crate::store::{SecretStore, StoreError};
use crate::transport::{Reply, Transport, TransportError};

/// Default session length requested at approval: eight hours.
pub const DEFAULT_DURATION: u64 = 8 * 3600;

/// Current Unix time in seconds.
pub type NowFn = Arc<dyn Fn() -> u64 + Send + Sync>;

pub fn system_now() -> NowFn {
    Arc::new(|| std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecretKind {
    /// `p`
    Master,
    /// `enc(x)`
    Effective,
    /// `enc(S)`
    Premaster,
    /// `K`
    SessionKey,
}

/// Sees every secret value the authenticator computes, so a test harness
/// can check that none of them reach the wire.
pub trait SecretWitness: Send {
    fn observe(&mut self, kind: SecretKind, bytes: &[u8]);
}

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("malformed payload: {0}")]
    Payload(String),
    #[error("no account for {iu} at {is}")]
    UnknownAccount { iu: String, is: String },
    #[error("secret {0} is not in the store")]
    UnknownSecret(u32),
    #[error("no local session {0}")]
    UnknownSession(String),
    #[error(
        "fingerprint mismatch: the server sent {server} but this device computed {local}; the challenge may have been altered"
    )]
    FingerprintMismatch { server: String, local: String },
    #[error("declined on this device")]
    Declined,
    #[error("conflict: {0}")]
    Conflict(String),
    #[error("authentication failed")]
    AuthenticationFailed,
    #[error("request was already used or has expired")]
    Gone,
    #[error("session duration rejected: {0}")]
    DurationRejected(String),
    #[error("too many attempts; retry later")]
    Throttled,
    #[error("session expired")]
    SessionExpired,
    #[error("denied by the server")]
    Denied,
    #[error("not found: {0}")]
    NotFound(String),
    #[error("server returned {status}: {message}")]
    Server { status: u16, message: String },
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Core(#[from] zerotwo_core::Error),
    #[error(transparent)]
    Store(#[from] StoreError),
}

impl ClientError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, Self::Transport(_) | Self::Throttled)
    }
}

pub type ClientResult<T> = Result<T, ClientError>;

fn check(reply: Reply) -> ClientResult<Reply> {
    if (200..300).contains(&reply.status) {
        return Ok(reply);
    }
    let body: Option<ErrorBody> = serde_json::from_slice(&reply.body).ok();
    let code = body.as_ref().map(|b| b.error.as_str()).unwrap_or("");
    let message = body.as_ref().map(|b| b.message.clone()).unwrap_or_default();
    Err(match (reply.status, code) {
        (401, "denied") => ClientError::Denied,
        (401, _) => ClientError::AuthenticationFailed,
        (404, _) => ClientError::NotFound(message),
        (409, _) => ClientError::Conflict(message),
        (410, _) => ClientError::Gone,
        (422, _) => ClientError::DurationRejected(message),
        (429, _) => ClientError::Throttled,
        (440, _) => ClientError::SessionExpired,
        (status, _) => ClientError::Server { status, message },
    })
}

fn parse<T: serde::de::DeserializeOwned>(reply: &Reply) -> ClientResult<T> {
    serde_json::from_slice(&reply.body).map_err(|e| ClientError::Payload(e.to_string()))
}

fn json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    serde_json::to_vec(value).expect("request types serialize")
}

/// Reads a login challenge from payload text (the QR path).
pub fn parse_login_payload(text: &str) -> ClientResult<LoginChallenge> {
    let payload = QrPayload::decode(text.trim()).map_err(|e| ClientError::Payload(e.to_string()))?;
    LoginChallenge::try_from(payload).map_err(|e| ClientError::Payload(e.to_string()))
}

/// What a successful approval leaves behind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approval {
    pub session_id: String,
    pub expires_at: u64,
}

pub struct Authenticator<T> {
    pub store: SecretStore,
    transport: T,
    group: GroupProfile,
    now: NowFn,
    rng: Box<dyn SecureRng + Send>,
    witness: Option<Box<dyn SecretWitness>>,
}

impl<T: Transport> Authenticator<T> {
    pub fn new(
        store: SecretStore,
        transport: T,
        group: GroupProfile,
        now: NowFn,
        rng: Box<dyn SecureRng + Send>,
    ) -> Self {
        Self { store, transport, group, now, rng, witness: None }
    }

    pub fn with_witness(mut self, witness: Box<dyn SecretWitness>) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    fn observe(&mut self, kind: SecretKind, bytes: &[u8]) {
        if let Some(w) = self.witness.as_mut() {
            w.observe(kind, bytes);
        }
    }

    fn save(&mut self) -> ClientResult<()> {
        self.store.save(&mut *self.rng)?;
        Ok(())
    }

    pub fn accounts(&self) -> &[Account] {
        &self.store.vault.accounts
    }

    pub fn sessions(&self) -> &[StoredSession] {
        &self.store.vault.sessions
    }

    pub fn add_secret(&mut self, secret: &MasterSecret) -> ClientResult<u32> {
        let id = self.store.vault.add_secret(secret);
        self.save()?;
        Ok(id)
    }

    /// Generates a passphrase, stores it and returns it for one-time display.
    pub fn generate_secret(&mut self, spec: &PassphraseSpec) -> ClientResult<(u32, MasterSecret)> {
        let secret = generate_passphrase(spec, Wordlist::bundled(), &mut *self.rng);
        let id = self.add_secret(&secret)?;
        Ok((id, secret))
    }

    pub fn add_account(&mut self, label: &str, iu: &str, is: &str, secret_id: u32) -> ClientResult<()> {
        IdentityPair::new(iu, is)?;
        if self.store.vault.secret(secret_id).is_none() {
            return Err(ClientError::UnknownSecret(secret_id));
        }
        if self.account(iu, is).is_some() {
            return Err(ClientError::Conflict(format!("account {iu} at {is} already exists")));
        }
        self.store.vault.accounts.push(Account {
            label: label.to_owned(),
            iu: iu.to_owned(),
            is: is.to_owned(),
            secret_id,
            enrolled: false,
        });
        self.save()
    }

    pub fn account(&self, iu: &str, is: &str) -> Option<&Account> {
        self.store.vault.accounts.iter().find(|a| a.matches(iu, is))
    }

    fn secret_for(&self, iu: &str, is: &str) -> ClientResult<(IdentityPair, MasterSecret)> {
        let account =
            self.account(iu, is).ok_or_else(|| ClientError::UnknownAccount { iu: iu.to_owned(), is: is.to_owned() })?;
        let secret = self.store.vault.secret(account.secret_id).ok_or(ClientError::UnknownSecret(account.secret_id))?;
        Ok((account.identity()?, secret))
    }

    /// Enrolls from an enrollment payload. Creates the account with
    /// `secret_id` if it does not exist yet. Only `v` leaves the device.
    pub fn handle_enroll_payload(&mut self, text: &str, label: Option<&str>, secret_id: u32) -> ClientResult<Account> {
        let payload = QrPayload::decode(text.trim()).map_err(|e| ClientError::Payload(e.to_string()))?;
        let QrPayload::Enroll { iu, is, enroll_url } = payload else {
            return Err(ClientError::Payload(format!("expected an enroll payload, got {}", payload.kind())));
        };
        if self.account(&iu, &is).is_none() {
            self.add_account(label.unwrap_or(&is), &iu, &is, secret_id)?;
        }
        let (id, p) = self.secret_for(&iu, &is)?;
        self.observe(SecretKind::Master, p.as_bytes());
        let x = derive_x(&id, &p)?;
        self.observe(SecretKind::Effective, &encode_int(x.value()));
        let v = compute_verifier(&x, &self.group)?;
        drop(x);

        let body = json(&EnrollRequest { iu: iu.clone(), v: v.to_hex() });
        check(self.transport.post(&enroll_url, &body)?)?;

        let account = self.store.vault.accounts.iter_mut().find(|a| a.matches(&iu, &is)).expect("account exists");
        account.enrolled = true;
        let account = account.clone();
        self.save()?;
        Ok(account)
    }

    /// Polls the server for a pending login's challenge.
    pub fn fetch_login(&self, login_id: &str) -> ClientResult<LoginChallenge> {
        parse(&check(self.transport.get(&format!("{}/{login_id}", wire::LOGIN_CHALLENGE))?)?)
    }

    /// Approves a login after comparing fingerprints and asking for consent.
    ///
    /// The local fingerprint depends only on public values, so a mismatch
    /// aborts before the master secret is touched. Nothing carrying `A` or
    /// `M` is sent unless the confirmer says yes.
    pub fn approve_login(
        &mut self,
        challenge: &LoginChallenge,
        duration: u64,
        confirmer: &mut dyn Confirmer,
    ) -> ClientResult<Approval> {
        let account = self
            .account(&challenge.iu, &challenge.is)
            .ok_or_else(|| ClientError::UnknownAccount { iu: challenge.iu.clone(), is: challenge.is.clone() })?;
        let id = account.identity()?;
        let server_public = int_from_hex(&challenge.b)?;
        let local = fingerprint(&id, &server_public).to_string();
        if local != challenge.fingerprint {
            return Err(ClientError::FingerprintMismatch { server: challenge.fingerprint.clone(), local });
        }
        let prompt = LoginPrompt {
            iu: challenge.iu.clone(),
            is: challenge.is.clone(),
            server_fingerprint: challenge.fingerprint.clone(),
            local_fingerprint: local,
            duration,
        };
        if !confirmer.confirm_login(&prompt) {
            return Err(ClientError::Declined);
        }

        let (id, p) = self.secret_for(&challenge.iu, &challenge.is)?;
        let response = client_respond(&id, &p, &server_public, duration, &self.group, &mut *self.rng)?;
        if self.witness.is_some() {
            self.observe(SecretKind::Master, p.as_bytes());
            let x = derive_x(&id, &p)?;
            self.observe(SecretKind::Effective, &encode_int(x.value()));
            self.observe(SecretKind::Premaster, &encode_int(response.premaster()));
            self.observe(SecretKind::SessionKey, response.key());
        }
        let body = json(&LoginCompleteRequest {
            login_id: challenge.login_id.clone(),
            iu: challenge.iu.clone(),
            a: response.client_public_hex(),
            m: response.proof_hex(),
            d: duration,
        });
        let reply = check(self.transport.post(wire::LOGIN_COMPLETE, &body)?)?;
        let done: LoginCompleteResponse = parse(&reply)?;

        let key = response.into_session((self.now)());
        let stored = StoredSession::new(done.session_id.clone(), &id, &key);
        let approval = Approval { session_id: done.session_id, expires_at: stored.expires_at() };
        self.store.vault.sessions.push(stored);
        self.save()?;
        Ok(approval)
    }

    fn session(&self, session_id: &str) -> ClientResult<&StoredSession> {
        self.store
            .vault
            .sessions
            .iter()
            .find(|s| s.session_id == session_id)
            .ok_or_else(|| ClientError::UnknownSession(session_id.to_owned()))
    }

    pub fn pending_authorizations(&self, session_id: &str) -> ClientResult<Vec<AuthzChallenge>> {
        let reply = check(self.transport.get(&format!("{}/{session_id}", wire::AUTHZ_PENDING))?)?;
        Ok(parse::<AuthzPending>(&reply)?.pending)
    }

    /// Shows `o` verbatim and, on consent, answers with `H_K(o, c)`.
    pub fn confirm_authorization(
        &mut self,
        session_id: &str,
        challenge: &AuthzChallenge,
        confirmer: &mut dyn Confirmer,
    ) -> ClientResult<()> {
        let session = self.session(session_id)?;
        let key = session.session_key().ok_or_else(|| ClientError::UnknownSession(session_id.to_owned()))?;
        let now = (self.now)();
        if !key.is_valid_at(now) {
            return Err(ClientError::SessionExpired);
        }
        let nonce: Nonce = hex::decode(&challenge.c)
            .ok()
            .and_then(|b| b.try_into().ok())
            .ok_or_else(|| ClientError::Payload("nonce must be 16 bytes of hex".into()))?;
        let prompt = AuthzPrompt { iu: session.iu.clone(), is: session.is.clone(), operation: challenge.o.clone() };
        if !confirmer.confirm_authorization(&prompt) {
            return Err(ClientError::Declined);
        }
        let mac = key.authorize(now, &challenge.o, &nonce)?;
        let body = json(&AuthzConfirm { auth_id: challenge.auth_id.clone(), m: hex::encode(mac) });
        check(self.transport.post(wire::AUTHZ_CONFIRM, &body)?)?;
        Ok(())
    }

    /// Sends `H_K("logout")`. The local copy of `K` is erased only once the
    /// server acknowledges.
    pub fn remote_logout(&mut self, session_id: &str) -> ClientResult<()> {
        let session = self.session(session_id)?;
        let key = session.session_key().ok_or_else(|| ClientError::UnknownSession(session_id.to_owned()))?;
        let mac = zerotwo_core::logout_mac(key.key_bytes());
        let body = json(&LogoutRequest { session_id: session_id.to_owned(), m: hex::encode(mac) });
        check(self.transport.post(wire::LOGOUT, &body)?)?;
        self.store.vault.sessions.retain(|s| s.session_id != session_id);
        self.save()
    }

    /// Drops local sessions past their expiry. Returns how many went.
    pub fn prune_sessions(&mut self) -> ClientResult<usize> {
        let now = (self.now)();
        let before = self.store.vault.sessions.len();
        self.store.vault.sessions.retain(|s| now < s.expires_at());
        let removed = before - self.store.vault.sessions.len();
        if removed > 0 {
            self.save()?;
        }
        Ok(removed)
    }
}
