//! Encrypted container for master secrets, accounts and session keys.
//!
//! Layout, all integers big-endian:
//!
//! ```text
//! "ZT01" | version u8 | provider u8 | salt [16] | m_cost u32 | t_cost u32 | p_cost u32 | nonce [24] | ciphertext
//! ```
//!
//! The key is Argon2id(credential, salt) and the ciphertext is
//! XChaCha20-Poly1305 over the JSON vault with the whole header as
//! associated data, so a flipped bit anywhere fails decryption.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use argon2::{Algorithm, Argon2, Params, Version};
use chacha20poly1305::aead::{Aead, KeyInit, Payload};
use chacha20poly1305::{XChaCha20Poly1305, XNonce};
use rand::{CryptoRng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use zeroize::{Zeroize, Zeroizing};
use zerotwo_core::{MasterSecret, SecretOrigin};

use crate::account::{Account, StoredSession};

pub const MAGIC: &[u8; 4] = b"ZT01";
pub const FORMAT_VERSION: u8 = 1;
pub const SALT_LEN: usize = 16;
pub const NONCE_LEN: usize = 24;
pub const HEADER_LEN: usize = 4 + 1 + 1 + SALT_LEN + 12 + NONCE_LEN;
const KEY_LEN: usize = 32;
const MAX_M_COST: u32 = 1 << 20;
const MAX_T_COST: u32 = 16;
const MAX_P_COST: u32 = 16;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("store file not found: {0}")]
    NotFound(PathBuf),
    /// Wrong credential or a damaged file; the two are deliberately not
    /// distinguished.
    #[error("could not unlock the store")]
    UnlockFailed,
    #[error("biometric check declined")]
    BiometricDeclined,
    #[error("store was sealed with a different unlock provider")]
    ProviderMismatch,
    #[error("not a store file: {0}")]
    Format(&'static str),
    #[error("key derivation: {0}")]
    Kdf(String),
    #[error("store already exists: {0}")]
    Exists(PathBuf),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KdfParams {
    /// KiB of memory.
    pub m_cost: u32,
    pub t_cost: u32,
    pub p_cost: u32,
}

impl KdfParams {
    /// For real devices.
    pub const fn hardened() -> Self {
        Self { m_cost: 64 * 1024, t_cost: 3, p_cost: 1 }
    }

    /// Cheap parameters for tests and throwaway stores.
    pub const fn fast() -> Self {
        Self { m_cost: 256, t_cost: 1, p_cost: 1 }
    }

    fn derive(&self, credential: &[u8], salt: &[u8; SALT_LEN]) -> Result<Zeroizing<[u8; KEY_LEN]>, StoreError> {
        let params = Params::new(self.m_cost, self.t_cost, self.p_cost, Some(KEY_LEN))
            .map_err(|e| StoreError::Kdf(e.to_string()))?;
        let mut key = Zeroizing::new([0u8; KEY_LEN]);
        Argon2::new(Algorithm::Argon2id, Version::V0x13, params)
            .hash_password_into(credential, salt, key.as_mut())
            .map_err(|e| StoreError::Kdf(e.to_string()))?;
        Ok(key)
    }
}

/// Stand-in for a platform biometric prompt: a device-held key released
/// only when the configured check passes.
#[derive(Clone, Zeroize)]
pub struct BiometricStub {
    pub device_key: [u8; 32],
    #[zeroize(skip)]
    pub accept: bool,
}

impl std::fmt::Debug for BiometricStub {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BiometricStub").field("accept", &self.accept).finish_non_exhaustive()
    }
}

pub enum UnlockCredential {
    Password(Zeroizing<String>),
    Biometric(BiometricStub),
}

impl UnlockCredential {
    pub fn password(text: impl Into<String>) -> Self {
        Self::Password(Zeroizing::new(text.into()))
    }

    fn provider(&self) -> u8 {
        match self {
            Self::Password(_) => 0,
            Self::Biometric(_) => 1,
        }
    }

    fn material(&self) -> Result<&[u8], StoreError> {
        match self {
            Self::Password(p) => Ok(p.as_bytes()),
            Self::Biometric(stub) if stub.accept => Ok(&stub.device_key),
            Self::Biometric(_) => Err(StoreError::BiometricDeclined),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StoredOrigin {
    GeneratedPassphrase,
    Imported,
}

impl From<SecretOrigin> for StoredOrigin {
    fn from(o: SecretOrigin) -> Self {
        match o {
            SecretOrigin::GeneratedPassphrase => Self::GeneratedPassphrase,
            SecretOrigin::Imported => Self::Imported,
        }
    }
}

/// A master secret as kept inside the vault. `text` for passphrases,
/// `hex` for raw byte secrets.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Zeroize)]
pub struct StoredSecret {
    #[zeroize(skip)]
    pub id: u32,
    #[zeroize(skip)]
    pub origin: StoredOrigin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hex: Option<String>,
}

impl Drop for StoredSecret {
    fn drop(&mut self) {
        self.zeroize();
    }
}

impl std::fmt::Debug for StoredSecret {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StoredSecret").field("id", &self.id).field("origin", &self.origin).finish_non_exhaustive()
    }
}

impl StoredSecret {
    pub fn to_master(&self) -> Option<MasterSecret> {
        let origin = match self.origin {
            StoredOrigin::GeneratedPassphrase => SecretOrigin::GeneratedPassphrase,
            StoredOrigin::Imported => SecretOrigin::Imported,
        };
        match (&self.text, &self.hex) {
            (Some(t), _) => MasterSecret::passphrase(t.clone(), origin).ok(),
            (None, Some(h)) => MasterSecret::from_bytes(hex::decode(h).ok()?, origin).ok(),
            (None, None) => None,
        }
    }
}

/// Everything inside the ciphertext.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vault {
    pub secrets: Vec<StoredSecret>,
    pub accounts: Vec<Account>,
    pub sessions: Vec<StoredSession>,
}

impl Vault {
    pub fn add_secret(&mut self, secret: &MasterSecret) -> u32 {
        let id = self.secrets.iter().map(|s| s.id + 1).max().unwrap_or(0);
        let (text, hex) = match secret.as_text() {
            Some(t) => (Some(t.to_owned()), None),
            None => (None, Some(hex::encode(secret.as_bytes()))),
        };
        self.secrets.push(StoredSecret { id, origin: secret.origin().into(), text, hex });
        id
    }

    pub fn secret(&self, id: u32) -> Option<MasterSecret> {
        self.secrets.iter().find(|s| s.id == id)?.to_master()
    }
}

struct Header {
    provider: u8,
    salt: [u8; SALT_LEN],
    params: KdfParams,
    nonce: [u8; NONCE_LEN],
}

impl Header {
    fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN);
        out.extend_from_slice(MAGIC);
        out.push(FORMAT_VERSION);
        out.push(self.provider);
        out.extend_from_slice(&self.salt);
        out.extend_from_slice(&self.params.m_cost.to_be_bytes());
        out.extend_from_slice(&self.params.t_cost.to_be_bytes());
        out.extend_from_slice(&self.params.p_cost.to_be_bytes());
        out.extend_from_slice(&self.nonce);
        out
    }

    fn decode(bytes: &[u8]) -> Result<Self, StoreError> {
        if bytes.len() < HEADER_LEN {
            return Err(StoreError::Format("truncated header"));
        }
        if &bytes[..4] != MAGIC {
            return Err(StoreError::Format("bad magic"));
        }
        if bytes[4] != FORMAT_VERSION {
            return Err(StoreError::Format("unsupported version"));
        }
        let u32_at = |i: usize| u32::from_be_bytes(bytes[i..i + 4].try_into().unwrap());
        let mut salt = [0u8; SALT_LEN];
        salt.copy_from_slice(&bytes[6..6 + SALT_LEN]);
        let p = 6 + SALT_LEN;
        let mut nonce = [0u8; NONCE_LEN];
        nonce.copy_from_slice(&bytes[p + 12..p + 12 + NONCE_LEN]);
        let params = KdfParams { m_cost: u32_at(p), t_cost: u32_at(p + 4), p_cost: u32_at(p + 8) };
        // The header is read before it is authenticated; refuse parameters
        // that would make the KDF itself a denial of service.
        if params.m_cost > MAX_M_COST || params.t_cost > MAX_T_COST || params.p_cost > MAX_P_COST {
            return Err(StoreError::Format("KDF parameters out of range"));
        }
        Ok(Self { provider: bytes[5], salt, params, nonce })
    }
}

/// An unlocked store. The derived key stays in memory until drop; every
/// [`SecretStore::save`] re-encrypts under a fresh nonce.
pub struct SecretStore {
    path: Option<PathBuf>,
    key: Zeroizing<[u8; KEY_LEN]>,
    provider: u8,
    salt: [u8; SALT_LEN],
    params: KdfParams,
    pub vault: Vault,
}

impl std::fmt::Debug for SecretStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SecretStore").field("path", &self.path).field("params", &self.params).finish_non_exhaustive()
    }
}

impl SecretStore {
    /// A new store that is never written unless [`SecretStore::seal`] output
    /// is persisted by the caller.
    pub fn in_memory<R: RngCore + CryptoRng + ?Sized>(
        credential: &UnlockCredential,
        params: KdfParams,
        rng: &mut R,
    ) -> Result<Self, StoreError> {
        let mut salt = [0u8; SALT_LEN];
        rng.fill_bytes(&mut salt);
        let key = params.derive(credential.material()?, &salt)?;
        Ok(Self { path: None, key, provider: credential.provider(), salt, params, vault: Vault::default() })
    }

    /// Creates and writes a new, empty store. Refuses to overwrite.
    pub fn create<R: RngCore + CryptoRng + ?Sized>(
        path: &Path,
        credential: &UnlockCredential,
        params: KdfParams,
        rng: &mut R,
    ) -> Result<Self, StoreError> {
        if path.exists() {
            return Err(StoreError::Exists(path.to_owned()));
        }
        let mut store = Self::in_memory(credential, params, rng)?;
        store.path = Some(path.to_owned());
        store.save(rng)?;
        Ok(store)
    }

    pub fn open(path: &Path, credential: &UnlockCredential) -> Result<Self, StoreError> {
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(StoreError::NotFound(path.to_owned())),
            Err(e) => return Err(e.into()),
        };
        let mut store = Self::unseal(&bytes, credential)?;
        store.path = Some(path.to_owned());
        Ok(store)
    }

    /// Decrypts container bytes.
    pub fn unseal(bytes: &[u8], credential: &UnlockCredential) -> Result<Self, StoreError> {
        let header = Header::decode(bytes)?;
        if header.provider != credential.provider() {
            return Err(StoreError::ProviderMismatch);
        }
        let key = header.params.derive(credential.material()?, &header.salt).map_err(|_| StoreError::UnlockFailed)?;
        let cipher = XChaCha20Poly1305::new(key.as_ref().into());
        let plain = cipher
            .decrypt(
                XNonce::from_slice(&header.nonce),
                Payload { msg: &bytes[HEADER_LEN..], aad: &bytes[..HEADER_LEN] },
            )
            .map_err(|_| StoreError::UnlockFailed)?;
        let plain = Zeroizing::new(plain);
        let vault = serde_json::from_slice(&plain).map_err(|_| StoreError::UnlockFailed)?;
        Ok(Self { path: None, key, provider: header.provider, salt: header.salt, params: header.params, vault })
    }

    /// Encrypts the current vault under a fresh nonce.
    pub fn seal<R: RngCore + CryptoRng + ?Sized>(&self, rng: &mut R) -> Vec<u8> {
        let mut nonce = [0u8; NONCE_LEN];
        rng.fill_bytes(&mut nonce);
        let header = Header { provider: self.provider, salt: self.salt, params: self.params, nonce }.encode();
        let plain = Zeroizing::new(serde_json::to_vec(&self.vault).expect("vault serializes"));
        let cipher = XChaCha20Poly1305::new(self.key.as_ref().into());
        let sealed = cipher
            .encrypt(XNonce::from_slice(&nonce), Payload { msg: &plain, aad: &header })
            .expect("encryption of an in-memory buffer cannot fail");
        let mut out = header;
        out.extend_from_slice(&sealed);
        out
    }

    /// Writes the sealed vault next to the target and renames it into place.
    /// In-memory stores do nothing.
    pub fn save<R: RngCore + CryptoRng + ?Sized>(&self, rng: &mut R) -> Result<(), StoreError> {
        let Some(path) = &self.path else { return Ok(()) };
        let bytes = self.seal(rng);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, &bytes)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn params(&self) -> KdfParams {
        self.params
    }

    /// Backup: the container file copied byte for byte. It stays encrypted.
    pub fn export(&self, dest: &Path) -> Result<u64, StoreError> {
        let src = self.path.as_deref().ok_or(StoreError::Format("in-memory store has no file"))?;
        Ok(fs::copy(src, dest)?)
    }
}
