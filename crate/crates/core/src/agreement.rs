//! Both halves of the key agreement.
//!
//! Server: `B = k·v + g^b`, then `S = (A·v^u)^b`.
//! Client: `A = g^a`, `u = H(A, B)`, `S = (B − k·g^x)^(a + u·x)`.
//! Both sides set `K = H(S)` and the client proves knowledge of `K` with
//! `M = H_K(l, iu, is, A, B, d)`. All arithmetic is modulo `n`; `x` and `u`
//! are the full 256-bit digest integers.

use std::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::{CryptoRng, RngCore};
use zeroize::Zeroize;

use crate::ct::constant_time_eq;
use crate::encoding::{encode_int, int_to_hex};
use crate::error::{Error, Result};
use crate::group::GroupProfile;
use crate::hash::{hash_digest, int_from_digest, mac_digest, Digest};
use crate::identity::IdentityPair;
use crate::secret::{derive_x, EffectiveSecret, MasterSecret, Verifier};
use crate::session::SessionKey;

/// Bound on resampling `b` when `B` lands on zero.
pub const MAX_EPHEMERAL_ATTEMPTS: usize = 128;

/// Uniform exponent in `[1, n − 2]`.
pub fn sample_exponent<R: RngCore + CryptoRng + ?Sized>(group: &GroupProfile, rng: &mut R) -> BigUint {
    let upper = &group.n - 1u32;
    rng.gen_biguint_range(&BigUint::one(), &upper)
}

/// The server's ephemeral key pair. Consumed by [`server_complete_login`], so
/// each `B` backs at most one verification.
pub struct ServerEphemeral {
    private: BigUint,
    public: BigUint,
}

impl ServerEphemeral {
    /// Builds the pair from a chosen `b`. Fails when `B ≡ 0`.
    pub fn from_private(v: &Verifier, group: &GroupProfile, b: BigUint) -> Result<Self> {
        let public = (&group.k * v.value() + group.pow_g(&b)) % &group.n;
        if public.is_zero() {
            return Err(Error::ProtocolViolation("server public key is zero"));
        }
        Ok(Self { private: b, public })
    }

    pub fn public(&self) -> &BigUint {
        &self.public
    }

    pub fn public_hex(&self) -> String {
        int_to_hex(&self.public)
    }
}

impl fmt::Debug for ServerEphemeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ServerEphemeral").field("public", &self.public_hex()).finish_non_exhaustive()
    }
}

/// Samples `b` and computes `B`, resampling while `B ≡ 0`.
pub fn server_begin_login<R: RngCore + CryptoRng + ?Sized>(
    v: &Verifier,
    group: &GroupProfile,
    rng: &mut R,
) -> Result<ServerEphemeral> {
    for _ in 0..MAX_EPHEMERAL_ATTEMPTS {
        match ServerEphemeral::from_private(v, group, sample_exponent(group, rng)) {
            Ok(eph) => return Ok(eph),
            Err(Error::ProtocolViolation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::EphemeralExhausted)
}

/// `u = H(A, B)` as an integer.
pub fn scrambler(client_public: &BigUint, server_public: &BigUint) -> BigUint {
    let digest =
        hash_digest(&[&encode_int(client_public), &encode_int(server_public)]).expect("group elements fit a frame");
    int_from_digest(&digest)
}

/// Client side: `S = (B − k·g^x)^(a + u·x) mod n`.
pub fn client_premaster(
    group: &GroupProfile,
    server_public: &BigUint,
    x: &BigUint,
    a: &BigUint,
    u: &BigUint,
) -> Result<BigUint> {
    let n = &group.n;
    let b_pub = server_public % n;
    if b_pub.is_zero() {
        return Err(Error::ProtocolViolation("server public key is zero"));
    }
    let masked = (&group.k * group.pow_g(x)) % n;
    let base = (&b_pub + n - masked) % n;
    if base.is_zero() {
        return Err(Error::ProtocolViolation("server public key cancels the verifier"));
    }
    Ok(base.modpow(&(a + u * x), n))
}

/// Server side: `S = (A·v^u)^b mod n`.
pub fn server_premaster(
    group: &GroupProfile,
    client_public: &BigUint,
    v: &BigUint,
    u: &BigUint,
    b: &BigUint,
) -> Result<BigUint> {
    let n = &group.n;
    let a_pub = client_public % n;
    if a_pub.is_zero() {
        return Err(Error::ProtocolViolation("client public key is zero"));
    }
    let base = (a_pub * v.modpow(u, n)) % n;
    Ok(base.modpow(b, n))
}

/// `K = H(S)`.
pub fn session_key_from_premaster(premaster: &BigUint) -> Digest {
    let mut encoded = encode_int(premaster);
    let key = hash_digest(&[&encoded]).expect("group element fits a frame");
    encoded.zeroize();
    key
}

/// `M = H_K(l, iu, is, A, B, d)` with `d` as 8 big-endian bytes.
pub fn login_proof(
    key: &Digest,
    group: &GroupProfile,
    identity: &IdentityPair,
    client_public: &BigUint,
    server_public: &BigUint,
    duration: u64,
) -> Digest {
    mac_digest(
        key,
        &[
            &group.l,
            identity.user().as_bytes(),
            identity.server().as_bytes(),
            &encode_int(client_public),
            &encode_int(server_public),
            &duration.to_be_bytes(),
        ],
    )
    .expect("proof inputs fit a frame")
}

/// What the client sends (`A`, `M`, `d`) plus what it keeps (`K`, `S`).
pub struct ClientResponse {
    pub client_public: BigUint,
    pub proof: Digest,
    pub duration: u64,
    key: Digest,
    premaster: BigUint,
}

impl ClientResponse {
    pub fn client_public_hex(&self) -> String {
        int_to_hex(&self.client_public)
    }

    pub fn proof_hex(&self) -> String {
        hex::encode(self.proof)
    }

    /// The session key `K`. Stays on the device.
    pub fn key(&self) -> &Digest {
        &self.key
    }

    /// The shared value `S`. Exposed only so tests can check it never leaks.
    pub fn premaster(&self) -> &BigUint {
        &self.premaster
    }

    pub fn into_session(self, established_at: u64) -> SessionKey {
        SessionKey::new(self.key, established_at, self.duration)
    }
}

impl Drop for ClientResponse {
    fn drop(&mut self) {
        self.key.zeroize();
    }
}

impl fmt::Debug for ClientResponse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClientResponse")
            .field("client_public", &self.client_public_hex())
            .field("proof", &self.proof_hex())
            .field("duration", &self.duration)
            .finish_non_exhaustive()
    }
}

/// Answers a login challenge: samples `a` and derives `A`, `K`, and `M`.
pub fn client_respond<R: RngCore + CryptoRng + ?Sized>(
    identity: &IdentityPair,
    secret: &MasterSecret,
    server_public: &BigUint,
    duration: u64,
    group: &GroupProfile,
    rng: &mut R,
) -> Result<ClientResponse> {
    check_server_public(server_public, group)?;
    let a = sample_exponent(group, rng);
    client_respond_with_ephemeral(identity, secret, server_public, duration, group, a)
}

/// [`client_respond`] with a caller-chosen ephemeral exponent `a`.
pub fn client_respond_with_ephemeral(
    identity: &IdentityPair,
    secret: &MasterSecret,
    server_public: &BigUint,
    duration: u64,
    group: &GroupProfile,
    a: BigUint,
) -> Result<ClientResponse> {
    check_server_public(server_public, group)?;
    let client_public = group.pow_g(&a);
    if client_public.is_zero() {
        return Err(Error::ProtocolViolation("client public key is zero"));
    }
    let u = scrambler(&client_public, server_public);
    if u.is_zero() {
        return Err(Error::ProtocolViolation("scrambling parameter is zero"));
    }
    let x: EffectiveSecret = derive_x(identity, secret)?;
    let premaster = client_premaster(group, server_public, x.value(), &a, &u)?;
    drop((a, x));
    let key = session_key_from_premaster(&premaster);
    let proof = login_proof(&key, group, identity, &client_public, server_public, duration);
    Ok(ClientResponse { client_public, proof, duration, key, premaster })
}

fn check_server_public(server_public: &BigUint, group: &GroupProfile) -> Result<()> {
    if server_public.is_zero() || (server_public % &group.n).is_zero() {
        return Err(Error::ProtocolViolation("server public key is zero"));
    }
    if server_public >= &group.n {
        return Err(Error::ProtocolViolation("server public key out of range"));
    }
    Ok(())
}

/// Verifies the client's proof and, on success, yields the server's copy of
/// the session key. Consumes the ephemeral so it cannot be reused.
#[allow(clippy::too_many_arguments)]
pub fn server_complete_login(
    identity: &IdentityPair,
    v: &Verifier,
    eph: ServerEphemeral,
    client_public: &BigUint,
    proof: &[u8],
    duration: u64,
    group: &GroupProfile,
    max_duration: u64,
    now: u64,
) -> Result<SessionKey> {
    if duration > max_duration {
        return Err(Error::DurationRejected { requested: duration, max: max_duration });
    }
    if client_public.is_zero() || (client_public % &group.n).is_zero() {
        return Err(Error::ProtocolViolation("client public key is zero"));
    }
    if client_public >= &group.n {
        return Err(Error::ProtocolViolation("client public key out of range"));
    }
    let u = scrambler(client_public, &eph.public);
    if u.is_zero() {
        return Err(Error::ProtocolViolation("scrambling parameter is zero"));
    }
    let premaster = server_premaster(group, client_public, v.value(), &u, &eph.private)?;
    let mut key = session_key_from_premaster(&premaster);
    let expected = login_proof(&key, group, identity, client_public, &eph.public, duration);
    if !constant_time_eq(&expected, proof) {
        key.zeroize();
        return Err(Error::AuthenticationFailed);
    }
    Ok(SessionKey::new(key, now, duration))
}
