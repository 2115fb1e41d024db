//! SHA-256 and HMAC-SHA-256 over framed inputs.

use hmac::{Hmac, Mac};
use num_bigint::BigUint;
use sha2::{Digest as _, Sha256};

use crate::encoding::frame_into;
use crate::error::Result;

pub const DIGEST_LEN: usize = 32;

/// A SHA-256 output or HMAC tag.
pub type Digest = [u8; DIGEST_LEN];

type HmacSha256 = Hmac<Sha256>;

fn framed(parts: &[&[u8]]) -> Result<Vec<u8>> {
    let mut buf = Vec::with_capacity(parts.iter().map(|p| p.len() + 4).sum());
    for part in parts {
        frame_into(&mut buf, part)?;
    }
    Ok(buf)
}

/// `H(parts...)`: SHA-256 over the concatenated frames of `parts`.
pub fn hash_digest(parts: &[&[u8]]) -> Result<Digest> {
    Ok(Sha256::digest(framed(parts)?).into())
}

/// `H_K(parts...)`: HMAC-SHA-256 keyed with `key` over the concatenated frames.
pub fn mac_digest(key: &[u8], parts: &[&[u8]]) -> Result<Digest> {
    let mut mac = HmacSha256::new_from_slice(key).expect("HMAC accepts keys of any length");
    mac.update(&framed(parts)?);
    Ok(mac.finalize().into_bytes().into())
}

/// Reads a digest as an unsigned big-endian integer.
pub fn int_from_digest(digest: &Digest) -> BigUint {
    BigUint::from_bytes_be(digest)
}

pub fn xor_digests(a: &Digest, b: &Digest) -> Digest {
    let mut out = [0u8; DIGEST_LEN];
    for (o, (x, y)) in out.iter_mut().zip(a.iter().zip(b)) {
        *o = x ^ y;
    }
    out
}
