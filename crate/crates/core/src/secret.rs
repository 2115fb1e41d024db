//! Master secret, effective secret, and verifier.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use zeroize::{Zeroize, ZeroizeOnDrop};

use crate::encoding::{encode_int, int_from_hex, int_to_hex};
use crate::error::{Error, Result};
use crate::group::GroupProfile;
use crate::hash::{hash_digest, int_from_digest};
use crate::identity::IdentityPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecretOrigin {
    GeneratedPassphrase,
    Imported,
}

/// The user's master secret `p`. Usually a passphrase; arbitrary bytes are
/// accepted as well.
#[derive(Clone, Zeroize, ZeroizeOnDrop)]
pub struct MasterSecret {
    material: Vec<u8>,
    #[zeroize(skip)]
    origin: SecretOrigin,
}

impl MasterSecret {
    pub fn passphrase(text: impl Into<String>, origin: SecretOrigin) -> Result<Self> {
        Self::from_bytes(text.into().into_bytes(), origin)
    }

    pub fn from_bytes(material: Vec<u8>, origin: SecretOrigin) -> Result<Self> {
        if material.is_empty() {
            return Err(Error::EmptySecret);
        }
        Ok(Self { material, origin })
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.material
    }

    /// The secret as text, when it is valid UTF-8.
    pub fn as_text(&self) -> Option<&str> {
        std::str::from_utf8(&self.material).ok()
    }

    pub fn origin(&self) -> SecretOrigin {
        self.origin
    }
}

impl fmt::Debug for MasterSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MasterSecret")
            .field("len", &self.material.len())
            .field("origin", &self.origin)
            .finish_non_exhaustive()
    }
}

/// `x = H(iu, is, p)`. Never leaves the device and is never serialized.
pub struct EffectiveSecret(BigUint);

impl EffectiveSecret {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Wraps an externally chosen exponent. Meant for small-group oracle tests.
    pub fn from_value(x: BigUint) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::InvalidSecret);
        }
        Ok(Self(x))
    }
}

impl fmt::Debug for EffectiveSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("EffectiveSecret(..)")
    }
}

/// Derives the domain-separated effective secret. A zero digest is reported
/// as [`Error::InvalidSecret`] rather than remapped.
pub fn derive_x(identity: &IdentityPair, secret: &MasterSecret) -> Result<EffectiveSecret> {
    let digest = hash_digest(&[identity.user().as_bytes(), identity.server().as_bytes(), secret.as_bytes()])?;
    EffectiveSecret::from_value(int_from_digest(&digest))
}

/// The verifier `v = g^x mod n` the server stores in place of a password.
#[derive(Clone, PartialEq, Eq)]
pub struct Verifier(BigUint);

impl Verifier {
    /// Accepts a verifier received from a client; it must lie in `[2, n)`.
    pub fn from_value(v: BigUint, group: &GroupProfile) -> Result<Self> {
        if v.is_zero() || v.is_one() || v >= group.n {
            return Err(Error::InvalidSecret);
        }
        Ok(Self(v))
    }

    pub fn from_hex(text: &str, group: &GroupProfile) -> Result<Self> {
        Self::from_value(int_from_hex(text)?, group)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        int_to_hex(&self.0)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        encode_int(&self.0)
    }
}

impl fmt::Debug for Verifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Verifier({})", self.to_hex())
    }
}

/// `v = g^x mod n`; rejects the degenerate results 0 and 1.
pub fn compute_verifier(x: &EffectiveSecret, group: &GroupProfile) -> Result<Verifier> {
    Verifier::from_value(group.pow_g(x.value()), group)
}
