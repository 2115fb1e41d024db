//! Server-side records.

use serde::{Deserialize, Serialize};
use zerotwo_core::{wire::AuthzState, Nonce, ServerEphemeral, Verifier};

/// A stored credential. `v` never changes after enrollment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserRecord {
    pub iu: String,
    /// Lowercase hex of the verifier.
    pub v: String,
    pub created_at: u64,
    pub email_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub session_id: String,
    pub iu: String,
    /// Server copy of `K`, lowercase hex.
    pub key: String,
    pub established_at: u64,
    pub duration: u64,
    pub browser_token: String,
    pub revoked: bool,
    /// Set once a sweep has counted this session as expired.
    #[serde(default)]
    pub expired: bool,
}

impl SessionRecord {
    pub fn expires_at(&self) -> u64 {
        self.established_at.saturating_add(self.duration)
    }

    pub fn is_valid_at(&self, now: u64) -> bool {
        !self.revoked && now < self.expires_at()
    }

    pub fn key_bytes(&self) -> Option<[u8; 32]> {
        hex::decode(&self.key).ok()?.try_into().ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoginPhase {
    AwaitingAuthenticator,
    Completed,
    Failed,
    Expired,
}

/// One login attempt. `ephemeral` is taken exactly once by the completing
/// request; `verifier` is `None` for decoy challenges.
#[derive(Debug)]
pub struct PendingLogin {
    pub login_id: String,
    pub iu: String,
    pub ephemeral: Option<ServerEphemeral>,
    pub verifier: Verifier,
    pub decoy: bool,
    pub server_public: String,
    pub fingerprint: String,
    pub created_at: u64,
    pub phase: LoginPhase,
    pub session_id: Option<String>,
}

#[derive(Debug, Clone)]
pub struct PendingAuthorization {
    pub auth_id: String,
    pub session_id: String,
    pub operation: String,
    pub nonce: Nonce,
    pub created_at: u64,
    pub state: AuthzState,
}
