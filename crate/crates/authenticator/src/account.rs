use serde::{Deserialize, Serialize};
use zeroize::Zeroize;
use zerotwo_core::{Digest, IdentityPair, SessionKey};

/// A site the device can log in to. Several accounts may share one secret.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Account {
    pub label: String,
    pub iu: String,
    pub is: String,
    pub secret_id: u32,
    pub enrolled: bool,
}

impl Account {
    pub fn identity(&self) -> zerotwo_core::Result<IdentityPair> {
        IdentityPair::new(self.iu.as_str(), self.is.as_str())
    }

    pub fn matches(&self, iu: &str, is: &str) -> bool {
        self.iu == iu && self.is == is
    }
}

/// A session this device established, with its copy of `K`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Zeroize)]
pub struct StoredSession {
    #[zeroize(skip)]
    pub session_id: String,
    #[zeroize(skip)]
    pub iu: String,
    #[zeroize(skip)]
    pub is: String,
    /// Lowercase hex of `K`.
    pub key: String,
    #[zeroize(skip)]
    pub established_at: u64,
    #[zeroize(skip)]
    pub duration: u64,
}

impl Drop for StoredSession {
    fn drop(&mut self) {
        self.zeroize();
    }
}

impl std::fmt::Debug for StoredSession {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StoredSession")
            .field("session_id", &self.session_id)
            .field("iu", &self.iu)
            .field("is", &self.is)
            .field("expires_at", &self.expires_at())
            .finish_non_exhaustive()
    }
}

impl StoredSession {
    pub fn new(session_id: String, identity: &IdentityPair, key: &SessionKey) -> Self {
        Self {
            session_id,
            iu: identity.user().to_owned(),
            is: identity.server().to_owned(),
            key: hex::encode(key.key_bytes()),
            established_at: key.established_at(),
            duration: key.duration(),
        }
    }

    pub fn expires_at(&self) -> u64 {
        self.established_at.saturating_add(self.duration)
    }

    pub fn session_key(&self) -> Option<SessionKey> {
        let mut bytes = hex::decode(&self.key).ok()?;
        let key: Option<Digest> = bytes.as_slice().try_into().ok();
        bytes.zeroize();
        Some(SessionKey::new(key?, self.established_at, self.duration))
    }
}
