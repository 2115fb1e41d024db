//! The smartphone side of ZeroTwo, as a library and a CLI.
//!
//! The device keeps its master secrets in an encrypted [`SecretStore`],
//! enrolls by sending only a verifier, approves logins after comparing
//! fingerprints, answers explicit-authorization challenges and can end a
//! session remotely.

pub mod account;
pub mod client;
pub mod confirm;
pub mod passphrase;
pub mod store;
pub mod transport;

pub use account::{Account, StoredSession};
pub use client::{
    parse_login_payload, system_now, Approval, Authenticator, ClientError, ClientResult, NowFn, SecretKind,
    SecretWitness, DEFAULT_DURATION,
};
pub use confirm::{AuthzPrompt, Confirmer, LoginPrompt, ScriptedConfirmer, TerminalConfirmer};
pub use passphrase::{generate_passphrase, PassphraseSpec, Wordlist};
pub use store::{BiometricStub, KdfParams, SecretStore, StoreError, UnlockCredential, Vault};
pub use transport::{HttpTransport, Reply, Transport, TransportError};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/authenticator.md")]
    struct Authenticator;
}
