use std::fmt;

use crate::error::{Error, Result};

/// The user identifier `iu` (username or email address) paired with the
/// server identifier `is` (domain name).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IdentityPair {
    user: String,
    server: String,
}

impl IdentityPair {
    pub fn new(user: impl Into<String>, server: impl Into<String>) -> Result<Self> {
        let user = user.into();
        let server = server.into();
        validate_user(&user)?;
        if server.is_empty() {
            return Err(Error::InvalidIdentity("server identifier is empty"));
        }
        if server.chars().any(char::is_uppercase) {
            return Err(Error::InvalidIdentity("server identifier must be lowercase"));
        }
        if server.chars().any(|c| c.is_control() || c.is_whitespace()) {
            return Err(Error::InvalidIdentity("server identifier contains whitespace"));
        }
        Ok(Self { user, server })
    }

    pub fn user(&self) -> &str {
        &self.user
    }

    pub fn server(&self) -> &str {
        &self.server
    }

    /// Whether the user identifier looks like an email address.
    pub fn is_email(&self) -> bool {
        self.user.split_once('@').is_some_and(|(local, domain)| !local.is_empty() && domain.contains('.'))
    }
}

/// Syntax check applied to user identifiers on their own (e.g. at sign up).
pub fn validate_user(user: &str) -> Result<()> {
    if user.is_empty() {
        return Err(Error::InvalidIdentity("user identifier is empty"));
    }
    if user.chars().any(char::is_control) {
        return Err(Error::InvalidIdentity("user identifier contains control characters"));
    }
    Ok(())
}

impl fmt::Debug for IdentityPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdentityPair({:?} @ {:?})", self.user, self.server)
    }
}

impl fmt::Display for IdentityPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self.user, self.server)
    }
}
