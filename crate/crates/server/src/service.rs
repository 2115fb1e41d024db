//! The authentication service state machine.
//!
//! All tables live behind one mutex. Check-and-transition steps (taking a
//! login's ephemeral key, consuming an authorization nonce) happen entirely
//! under that lock; the expensive exponentiations run outside it.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io;
use std::sync::{Arc, Mutex, MutexGuard};

use rand::RngCore;
use thiserror::Error;
use zerotwo_core::wire::{
    AuthzChallenge, AuthzState, EnrollRequest, LoginChallenge, LoginCompleteRequest, LoginCompleteResponse, LoginState,
    LoginStatus, SignupResponse,
};
use zerotwo_core::{
    agreement::sample_exponent, fingerprint, fresh_nonce, int_from_hex, server_begin_login, server_complete_login,
    verify_authorization, verify_logout, Error as CoreError, IdentityPair, QrPayload, SecureRng, Verifier,
};

use crate::clock::Clock;
use crate::config::ServerConfig;
use crate::model::{LoginPhase, PendingAuthorization, PendingLogin, SessionRecord, UserRecord};
use crate::persist::{self, StoreDocument, FORMAT_VERSION};

/// Longest operation text accepted for an authorization request.
pub const MAX_OPERATION_LEN: usize = 1024;

/// Terminal pending records are kept this many pending windows before a
/// sweep drops them, so late status polls still get an answer.
const RETENTION_WINDOWS: u64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("{0} not found")]
    NotFound(&'static str),
    #[error("{0}")]
    Conflict(&'static str),
    #[error("too many login attempts; retry later")]
    Throttled,
    #[error("authentication failed")]
    AuthenticationFailed,
    #[error("denied")]
    Denied,
    #[error("{0} is no longer available")]
    Gone(&'static str),
    #[error("requested session duration {requested}s exceeds the {max}s cap")]
    DurationRejected { requested: u64, max: u64 },
    #[error("session expired")]
    SessionExpired,
    #[error("internal error: {0}")]
    Internal(String),
}

impl ServiceError {
    /// Stable machine-readable code used in error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Self::BadRequest(_) => "bad-request",
            Self::NotFound(_) => "not-found",
            Self::Conflict(_) => "conflict",
            Self::Throttled => "throttled",
            Self::AuthenticationFailed => "authentication-failed",
            Self::Denied => "denied",
            Self::Gone(_) => "gone",
            Self::DurationRejected { .. } => "duration-rejected",
            Self::SessionExpired => "session-expired",
            Self::Internal(_) => "internal",
        }
    }
}

impl From<io::Error> for ServiceError {
    fn from(e: io::Error) -> Self {
        Self::Internal(e.to_string())
    }
}

pub type ServiceResult<T> = Result<T, ServiceError>;

/// What a browser holding a browser token may learn about its session.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SessionView {
    pub iu: String,
    pub session_id: String,
    pub expires_at: u64,
    pub valid: bool,
}

#[derive(Default)]
struct State {
    users: BTreeMap<String, UserRecord>,
    sessions: BTreeMap<String, SessionRecord>,
    signups: HashSet<String>,
    logins: HashMap<String, PendingLogin>,
    authorizations: HashMap<String, PendingAuthorization>,
    /// iu -> (window start, calls in window)
    rate: HashMap<String, (u64, u32)>,
}

impl State {
    fn document(&self) -> StoreDocument {
        StoreDocument { version: FORMAT_VERSION, users: self.users.clone(), sessions: self.sessions.clone() }
    }
}

pub struct AuthService {
    config: ServerConfig,
    clock: Arc<dyn Clock>,
    rng: Mutex<Box<dyn SecureRng + Send>>,
    state: Mutex<State>,
    /// Held across snapshot and write so documents land in mutation order.
    writer: Mutex<()>,
}

impl std::fmt::Debug for AuthService {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AuthService").field("domain", &self.config.domain).finish_non_exhaustive()
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

impl AuthService {
    /// Builds the service, loading users and sessions from the configured
    /// store if there is one.
    pub fn new(config: ServerConfig, clock: Arc<dyn Clock>, rng: Box<dyn SecureRng + Send>) -> io::Result<Self> {
        let mut state = State::default();
        if let Some(path) = &config.store_path {
            let doc = persist::load(path)?;
            state.users = doc.users;
            state.sessions = doc.sessions;
        }
        Ok(Self { config, clock, rng: Mutex::new(rng), state: Mutex::new(state), writer: Mutex::new(()) })
    }

    pub fn config(&self) -> &ServerConfig {
        &self.config
    }

    pub fn now(&self) -> u64 {
        self.clock.now()
    }

    fn random_hex(&self, len: usize) -> String {
        let mut bytes = vec![0u8; len];
        lock(&self.rng).fill_bytes(&mut bytes);
        hex::encode(bytes)
    }

    fn identity(&self, iu: &str) -> ServiceResult<IdentityPair> {
        IdentityPair::new(iu, self.config.domain.as_str()).map_err(|e| ServiceError::BadRequest(e.to_string()))
    }

    /// Writes the current users and sessions. Takes the writer lock before
    /// releasing the state lock.
    fn persist(&self, state: MutexGuard<'_, State>) -> ServiceResult<()> {
        let Some(path) = &self.config.store_path else { return Ok(()) };
        let _writer = lock(&self.writer);
        let doc = state.document();
        drop(state);
        persist::save(path, &doc)?;
        Ok(())
    }

    pub fn signup_init(&self, iu: &str) -> ServiceResult<SignupResponse> {
        let id = self.identity(iu)?;
        let mut state = lock(&self.state);
        if state.users.contains_key(iu) {
            return Err(ServiceError::Conflict("identifier already enrolled"));
        }
        state.signups.insert(iu.to_owned());
        drop(state);
        let payload = QrPayload::Enroll {
            iu: id.user().to_owned(),
            is: id.server().to_owned(),
            enroll_url: self.config.enroll_url(),
        };
        Ok(SignupResponse {
            iu: id.user().to_owned(),
            is: id.server().to_owned(),
            enroll_url: self.config.enroll_url(),
            qr_payload: payload.encode(),
        })
    }

    pub fn enroll(&self, req: &EnrollRequest) -> ServiceResult<()> {
        let id = self.identity(&req.iu)?;
        let v = Verifier::from_hex(&req.v, &self.config.group)
            .map_err(|e| ServiceError::BadRequest(format!("verifier: {e}")))?;
        let now = self.now();
        let mut state = lock(&self.state);
        if state.users.contains_key(&req.iu) {
            return Err(ServiceError::Conflict("identifier already enrolled"));
        }
        if !state.signups.remove(&req.iu) {
            return Err(ServiceError::NotFound("signup"));
        }
        let record = UserRecord {
            iu: req.iu.clone(),
            v: v.to_hex(),
            created_at: now,
            email_verified: self.config.demo || !id.is_email(),
        };
        state.users.insert(req.iu.clone(), record);
        self.persist(state)
    }

    /// Marks an email identifier as verified. Stands in for the
    /// out-of-band email confirmation that this service does not send.
    pub fn mark_email_verified(&self, iu: &str) -> ServiceResult<()> {
        let mut state = lock(&self.state);
        let user = state.users.get_mut(iu).ok_or(ServiceError::NotFound("user"))?;
        user.email_verified = true;
        self.persist(state)
    }

    pub fn user(&self, iu: &str) -> Option<UserRecord> {
        lock(&self.state).users.get(iu).cloned()
    }

    pub fn session(&self, session_id: &str) -> Option<SessionRecord> {
        lock(&self.state).sessions.get(session_id).cloned()
    }

    pub fn users(&self) -> Vec<UserRecord> {
        lock(&self.state).users.values().cloned().collect()
    }

    pub fn sessions(&self) -> Vec<SessionRecord> {
        lock(&self.state).sessions.values().cloned().collect()
    }

    fn check_rate(&self, state: &mut State, iu: &str, now: u64) -> ServiceResult<()> {
        let window = self.config.rate_window.max(1);
        let start = now - now % window;
        let entry = state.rate.entry(iu.to_owned()).or_insert((start, 0));
        if entry.0 != start {
            *entry = (start, 0);
        }
        if entry.1 >= self.config.login_rate_limit {
            return Err(ServiceError::Throttled);
        }
        entry.1 += 1;
        Ok(())
    }

    /// Starts a login. Unknown or unverified identifiers get a decoy
    /// challenge built from a random verifier; it has the same shape and
    /// can never complete.
    pub fn login_init(&self, iu: &str) -> ServiceResult<LoginChallenge> {
        let id = self.identity(iu)?;
        let now = self.now();
        let known = {
            let mut state = lock(&self.state);
            self.check_rate(&mut state, iu, now)?;
            state.users.get(iu).filter(|u| u.email_verified).map(|u| u.v.clone())
        };
        let group = &self.config.group;
        let (verifier, decoy) = match known {
            Some(hex) => (Verifier::from_hex(&hex, group).map_err(|e| ServiceError::Internal(e.to_string()))?, false),
            None => {
                let r = sample_exponent(group, &mut **lock(&self.rng));
                let v =
                    Verifier::from_value(group.pow_g(&r), group).map_err(|e| ServiceError::Internal(e.to_string()))?;
                (v, true)
            }
        };
        let eph = server_begin_login(&verifier, group, &mut **lock(&self.rng))
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        let server_public = eph.public_hex();
        let fp = fingerprint(&id, eph.public()).to_string();
        let login_id = self.random_hex(16);
        let challenge = LoginChallenge {
            login_id: login_id.clone(),
            iu: iu.to_owned(),
            is: self.config.domain.clone(),
            b: server_public.clone(),
            fingerprint: fp.clone(),
        };
        let pending = PendingLogin {
            login_id: login_id.clone(),
            iu: iu.to_owned(),
            ephemeral: Some(eph),
            verifier,
            decoy,
            server_public,
            fingerprint: fp,
            created_at: now,
            phase: LoginPhase::AwaitingAuthenticator,
            session_id: None,
        };
        lock(&self.state).logins.insert(login_id, pending);
        Ok(challenge)
    }

    fn login_expired(&self, pending: &PendingLogin, now: u64) -> bool {
        now >= pending.created_at.saturating_add(self.config.pending_window)
    }

    /// The challenge for a login still awaiting the authenticator. This is
    /// the polling stand-in for a push notification to the device.
    pub fn login_challenge(&self, login_id: &str) -> ServiceResult<LoginChallenge> {
        let now = self.now();
        let mut state = lock(&self.state);
        let pending = state.logins.get_mut(login_id).ok_or(ServiceError::NotFound("login"))?;
        if pending.phase == LoginPhase::AwaitingAuthenticator && self.login_expired(pending, now) {
            pending.phase = LoginPhase::Expired;
            pending.ephemeral = None;
        }
        if pending.phase != LoginPhase::AwaitingAuthenticator {
            return Err(ServiceError::Gone("login"));
        }
        Ok(LoginChallenge {
            login_id: pending.login_id.clone(),
            iu: pending.iu.clone(),
            is: self.config.domain.clone(),
            b: pending.server_public.clone(),
            fingerprint: pending.fingerprint.clone(),
        })
    }

    /// Verifies the authenticator's response. Exactly one call per login id
    /// ever reaches verification; every later call sees `Gone`.
    pub fn login_complete(&self, req: &LoginCompleteRequest) -> ServiceResult<LoginCompleteResponse> {
        let now = self.now();
        let (eph, verifier, decoy, iu) = {
            let mut state = lock(&self.state);
            let pending = state.logins.get_mut(&req.login_id).ok_or(ServiceError::Gone("login"))?;
            if pending.phase != LoginPhase::AwaitingAuthenticator {
                return Err(ServiceError::Gone("login"));
            }
            if self.login_expired(pending, now) {
                pending.phase = LoginPhase::Expired;
                pending.ephemeral = None;
                return Err(ServiceError::Gone("login"));
            }
            // Consumed from here on, whatever the outcome.
            pending.phase = LoginPhase::Failed;
            let eph = pending.ephemeral.take().ok_or(ServiceError::Gone("login"))?;
            (eph, pending.verifier.clone(), pending.decoy, pending.iu.clone())
        };

        if req.iu != iu {
            return Err(ServiceError::AuthenticationFailed);
        }
        let id = self.identity(&iu)?;
        let client_public = int_from_hex(&req.a).map_err(|e| ServiceError::BadRequest(format!("A: {e}")))?;
        let proof = hex::decode(&req.m).map_err(|e| ServiceError::BadRequest(format!("M: {e}")))?;

        let verified = server_complete_login(
            &id,
            &verifier,
            eph,
            &client_public,
            &proof,
            req.d,
            &self.config.group,
            self.config.session_cap,
            now,
        );
        let key = match verified {
            Ok(key) if !decoy => key,
            Ok(_) => return Err(ServiceError::AuthenticationFailed),
            Err(CoreError::DurationRejected { requested, max }) => {
                return Err(ServiceError::DurationRejected { requested, max })
            }
            Err(_) => return Err(ServiceError::AuthenticationFailed),
        };

        let session_id = self.random_hex(16);
        let browser_token = self.random_hex(32);
        let record = SessionRecord {
            session_id: session_id.clone(),
            iu,
            key: hex::encode(key.key_bytes()),
            established_at: key.established_at(),
            duration: key.duration(),
            browser_token: browser_token.clone(),
            revoked: false,
            expired: false,
        };
        let mut state = lock(&self.state);
        state.sessions.insert(session_id.clone(), record);
        if let Some(pending) = state.logins.get_mut(&req.login_id) {
            pending.phase = LoginPhase::Completed;
            pending.session_id = Some(session_id.clone());
        }
        self.persist(state)?;
        Ok(LoginCompleteResponse { session_id, browser_token })
    }

    pub fn login_status(&self, login_id: &str) -> ServiceResult<LoginStatus> {
        let now = self.now();
        let mut state = lock(&self.state);
        let pending = state.logins.get_mut(login_id).ok_or(ServiceError::NotFound("login"))?;
        if pending.phase == LoginPhase::AwaitingAuthenticator && self.login_expired(pending, now) {
            pending.phase = LoginPhase::Expired;
            pending.ephemeral = None;
        }
        let mut status = LoginStatus {
            state: LoginState::Failed,
            browser_token: None,
            session_id: None,
            redirect_url: None,
            expires_at: None,
        };
        match pending.phase {
            LoginPhase::AwaitingAuthenticator => status.state = LoginState::Pending,
            LoginPhase::Failed | LoginPhase::Expired => {}
            LoginPhase::Completed => {
                let sid = pending.session_id.clone().unwrap_or_default();
                if let Some(session) = state.sessions.get(&sid) {
                    status.state = LoginState::Ok;
                    status.browser_token = Some(session.browser_token.clone());
                    status.session_id = Some(sid);
                    status.redirect_url = Some(self.config.redirect_url());
                    status.expires_at = Some(session.expires_at());
                }
            }
        }
        Ok(status)
    }

    /// Resolves a browser token to its session.
    pub fn session_by_token(&self, browser_token: &str) -> ServiceResult<SessionView> {
        let now = self.now();
        let state = lock(&self.state);
        let session = state
            .sessions
            .values()
            .find(|s| zerotwo_core::constant_time_eq(s.browser_token.as_bytes(), browser_token.as_bytes()))
            .ok_or(ServiceError::NotFound("session"))?;
        if !session.is_valid_at(now) {
            return Err(ServiceError::SessionExpired);
        }
        Ok(SessionView {
            iu: session.iu.clone(),
            session_id: session.session_id.clone(),
            expires_at: session.expires_at(),
            valid: true,
        })
    }

    pub fn request_authorization(&self, session_id: &str, operation: &str) -> ServiceResult<AuthzChallenge> {
        if operation.is_empty() || operation.len() > MAX_OPERATION_LEN {
            return Err(ServiceError::BadRequest(format!("operation text must be 1..={MAX_OPERATION_LEN} bytes")));
        }
        let now = self.now();
        let nonce = fresh_nonce(&mut **lock(&self.rng));
        let auth_id = self.random_hex(16);
        let mut state = lock(&self.state);
        let session = state.sessions.get(session_id).ok_or(ServiceError::NotFound("session"))?;
        if !session.is_valid_at(now) {
            return Err(ServiceError::SessionExpired);
        }
        state.authorizations.insert(
            auth_id.clone(),
            PendingAuthorization {
                auth_id: auth_id.clone(),
                session_id: session_id.to_owned(),
                operation: operation.to_owned(),
                nonce,
                created_at: now,
                state: AuthzState::Pending,
            },
        );
        Ok(AuthzChallenge { auth_id, o: operation.to_owned(), c: hex::encode(nonce) })
    }

    fn authz_expired(&self, pending: &PendingAuthorization, now: u64) -> bool {
        now >= pending.created_at.saturating_add(self.config.pending_window)
    }

    /// Open challenges for one session, oldest first.
    pub fn pending_authorizations(&self, session_id: &str) -> ServiceResult<Vec<AuthzChallenge>> {
        let now = self.now();
        let state = lock(&self.state);
        if !state.sessions.contains_key(session_id) {
            return Err(ServiceError::NotFound("session"));
        }
        let mut open: Vec<&PendingAuthorization> = state
            .authorizations
            .values()
            .filter(|a| a.session_id == session_id && a.state == AuthzState::Pending && !self.authz_expired(a, now))
            .collect();
        open.sort_by(|a, b| a.created_at.cmp(&b.created_at).then_with(|| a.auth_id.cmp(&b.auth_id)));
        Ok(open
            .into_iter()
            .map(|a| AuthzChallenge { auth_id: a.auth_id.clone(), o: a.operation.clone(), c: hex::encode(a.nonce) })
            .collect())
    }

    pub fn authorization_status(&self, auth_id: &str) -> ServiceResult<AuthzState> {
        let now = self.now();
        let mut state = lock(&self.state);
        let pending = state.authorizations.get_mut(auth_id).ok_or(ServiceError::NotFound("authorization"))?;
        if pending.state == AuthzState::Pending && self.authz_expired(pending, now) {
            pending.state = AuthzState::Expired;
        }
        Ok(pending.state)
    }

    /// Checks `M = H_K(o, c)`. The nonce is spent by the first call whether
    /// or not the MAC matches.
    pub fn confirm_authorization(&self, auth_id: &str, mac_hex: &str) -> ServiceResult<()> {
        let now = self.now();
        let mut state = lock(&self.state);
        let state = &mut *state;
        let pending = state.authorizations.get_mut(auth_id).ok_or(ServiceError::NotFound("authorization"))?;
        if pending.state != AuthzState::Pending {
            return Err(ServiceError::Gone("authorization"));
        }
        if self.authz_expired(pending, now) {
            pending.state = AuthzState::Expired;
            return Err(ServiceError::Gone("authorization"));
        }
        let session = state.sessions.get(&pending.session_id);
        let Some(key) = session.filter(|s| s.is_valid_at(now)).and_then(SessionRecord::key_bytes) else {
            pending.state = AuthzState::Expired;
            return Err(ServiceError::SessionExpired);
        };
        let tag = hex::decode(mac_hex).unwrap_or_default();
        if verify_authorization(&key, &pending.operation, &pending.nonce, &tag) {
            pending.state = AuthzState::Confirmed;
            Ok(())
        } else {
            pending.state = AuthzState::Denied;
            Err(ServiceError::Denied)
        }
    }

    /// Revokes a session given `M = H_K("logout")`. Repeating a valid
    /// logout is acknowledged without change.
    pub fn logout(&self, session_id: &str, mac_hex: &str) -> ServiceResult<()> {
        let mut state = lock(&self.state);
        let session = state.sessions.get_mut(session_id).ok_or(ServiceError::NotFound("session"))?;
        let key = session.key_bytes().ok_or_else(|| ServiceError::Internal("corrupt session key".into()))?;
        let tag = hex::decode(mac_hex).unwrap_or_default();
        if !verify_logout(&key, &tag) {
            return Err(ServiceError::Denied);
        }
        if session.revoked {
            return Ok(());
        }
        session.revoked = true;
        self.persist(state)
    }

    /// Marks everything past its window as expired and returns how many
    /// records changed. Long-finished pending records are dropped.
    pub fn sweep_expired(&self, now: u64) -> ServiceResult<usize> {
        let window = self.config.pending_window;
        let retention = window.saturating_mul(RETENTION_WINDOWS);
        let mut state = lock(&self.state);
        let mut count = 0;

        for pending in state.logins.values_mut() {
            if pending.phase == LoginPhase::AwaitingAuthenticator && now >= pending.created_at.saturating_add(window) {
                pending.phase = LoginPhase::Expired;
                pending.ephemeral = None;
                count += 1;
            }
        }
        for pending in state.authorizations.values_mut() {
            if pending.state == AuthzState::Pending && now >= pending.created_at.saturating_add(window) {
                pending.state = AuthzState::Expired;
                count += 1;
            }
        }
        let mut sessions_changed = false;
        for session in state.sessions.values_mut() {
            if !session.expired && !session.revoked && now >= session.expires_at() {
                session.expired = true;
                sessions_changed = true;
                count += 1;
            }
        }

        state.logins.retain(|_, p| {
            p.phase == LoginPhase::AwaitingAuthenticator || now < p.created_at.saturating_add(retention)
        });
        state
            .authorizations
            .retain(|_, a| a.state == AuthzState::Pending || now < a.created_at.saturating_add(retention));
        let rate_window = self.config.rate_window.max(1);
        state.rate.retain(|_, (start, _)| now < start.saturating_add(rate_window));

        if sessions_changed {
            self.persist(state)?;
        }
        Ok(count)
    }
}
