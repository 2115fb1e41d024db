//! Protocol core for ZeroTwo, a salt-free augmented PAKE in the SRP family.
//!
//! The user's device holds a master secret `p`. The server holds only the
//! verifier `v = g^x` where `x = H(iu, is, p)`. A login runs a key agreement
//! in which the device proves knowledge of the session key `K` with a MAC
//! over the transcript; later actions and logout are authorized with MACs
//! under the same `K`.
//!
//! Everything here is a pure function of its inputs plus an injected
//! randomness source.
//!
//! ```
//! use rand::rngs::OsRng;
//! use zerotwo_core::{
//!     client_respond, compute_verifier, derive_x, server_begin_login, server_complete_login,
//!     GroupProfile, IdentityPair, MasterSecret, SecretOrigin,
//! };
//!
//! let group = GroupProfile::production();
//! let id = IdentityPair::new("alice", "example.org")?;
//! let p = MasterSecret::passphrase("tidy-ocean-lunar-maple-ivory-drum", SecretOrigin::Imported)?;
//!
//! // Enrollment: only v reaches the server.
//! let v = compute_verifier(&derive_x(&id, &p)?, &group)?;
//!
//! // Login.
//! let eph = server_begin_login(&v, &group, &mut OsRng)?;
//! let b_pub = eph.public().clone();
//! let response = client_respond(&id, &p, &b_pub, 3600, &group, &mut OsRng)?;
//! let session = server_complete_login(
//!     &id, &v, eph, &response.client_public, &response.proof, 3600, &group, 86_400, 0,
//! )?;
//! assert_eq!(session.key_bytes(), response.key());
//! # Ok::<(), zerotwo_core::Error>(())
//! ```

pub mod agreement;
pub mod ct;
pub mod encoding;
mod error;
pub mod fingerprint;
pub mod golden;
pub mod group;
pub mod hash;
pub mod identity;
pub mod payload;
pub mod secret;
pub mod session;
pub mod wire;

pub use agreement::{
    client_premaster, client_respond, client_respond_with_ephemeral, login_proof, scrambler, server_begin_login,
    server_complete_login, server_premaster, session_key_from_premaster, ClientResponse, ServerEphemeral,
};
pub use ct::constant_time_eq;
pub use encoding::{decode_int, encode_int, frame, int_from_hex, int_to_hex};
pub use error::{Error, Result};
pub use fingerprint::{fingerprint, Fingerprint};
pub use group::{derive_group_constants, GroupProfile};
pub use hash::{hash_digest, int_from_digest, mac_digest, Digest};
pub use identity::IdentityPair;
pub use payload::QrPayload;
pub use secret::{compute_verifier, derive_x, EffectiveSecret, MasterSecret, SecretOrigin, Verifier};
pub use session::{authorization_mac, fresh_nonce, logout_mac, verify_authorization, verify_logout, Nonce, SessionKey};

pub use num_bigint::BigUint;

/// A cryptographically secure randomness source that can sit behind a trait
/// object (`Box<dyn SecureRng + Send>`).
pub trait SecureRng: rand::RngCore + rand::CryptoRng {}

impl<T: rand::RngCore + rand::CryptoRng + ?Sized> SecureRng for T {}

// Compile the guide's Rust snippets as doctests so the book cannot drift
// from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/protocol.md")]
    struct Protocol;
    #[doc = include_str!("../../../book/src/encoding.md")]
    struct Encoding;
    #[doc = include_str!("../../../book/src/sessions.md")]
    struct Sessions;
    #[doc = include_str!("../../../book/src/payloads.md")]
    struct Payloads;
}
