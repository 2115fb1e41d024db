//! Session keys and the MACs they authorize.

use std::fmt;

use rand::{CryptoRng, RngCore};
use zeroize::{Zeroize, ZeroizeOnDrop};

use crate::ct::constant_time_eq;
use crate::error::{Error, Result};
use crate::hash::{mac_digest, Digest};

pub const NONCE_LEN: usize = 16;

/// One-time challenge nonce `c` bound into authorization MACs.
pub type Nonce = [u8; NONCE_LEN];

/// Operation text used for authenticated logout.
pub const LOGOUT_OPERATION: &str = "logout";

pub fn fresh_nonce<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Nonce {
    let mut nonce = [0u8; NONCE_LEN];
    rng.fill_bytes(&mut nonce);
    nonce
}

/// The session key `K` and its validity window `[established_at, established_at + d)`.
#[derive(Clone, Zeroize, ZeroizeOnDrop)]
pub struct SessionKey {
    key: Digest,
    #[zeroize(skip)]
    established_at: u64,
    #[zeroize(skip)]
    duration: u64,
}

impl SessionKey {
    pub fn new(key: Digest, established_at: u64, duration: u64) -> Self {
        Self { key, established_at, duration }
    }

    pub fn key_bytes(&self) -> &Digest {
        &self.key
    }

    pub fn established_at(&self) -> u64 {
        self.established_at
    }

    pub fn duration(&self) -> u64 {
        self.duration
    }

    pub fn expires_at(&self) -> u64 {
        self.established_at.saturating_add(self.duration)
    }

    pub fn is_valid_at(&self, now: u64) -> bool {
        now < self.expires_at()
    }

    /// `H_K(o, c)` for an operation the user approved.
    pub fn authorize(&self, now: u64, operation: &str, nonce: &Nonce) -> Result<Digest> {
        self.ensure_valid(now)?;
        Ok(authorization_mac(&self.key, operation, nonce))
    }

    /// `H_K("logout")`.
    pub fn logout(&self, now: u64) -> Result<Digest> {
        self.ensure_valid(now)?;
        Ok(logout_mac(&self.key))
    }

    fn ensure_valid(&self, now: u64) -> Result<()> {
        if self.is_valid_at(now) {
            Ok(())
        } else {
            Err(Error::SessionExpired)
        }
    }
}

impl fmt::Debug for SessionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SessionKey")
            .field("established_at", &self.established_at)
            .field("duration", &self.duration)
            .finish_non_exhaustive()
    }
}

pub fn authorization_mac(key: &Digest, operation: &str, nonce: &Nonce) -> Digest {
    mac_digest(key, &[operation.as_bytes(), nonce]).expect("operation text fits a frame")
}

pub fn logout_mac(key: &Digest) -> Digest {
    mac_digest(key, &[LOGOUT_OPERATION.as_bytes()]).expect("constant fits a frame")
}

pub fn verify_authorization(key: &Digest, operation: &str, nonce: &Nonce, tag: &[u8]) -> bool {
    constant_time_eq(&authorization_mac(key, operation, nonce), tag)
}

pub fn verify_logout(key: &Digest, tag: &[u8]) -> bool {
    constant_time_eq(&logout_mac(key), tag)
}
