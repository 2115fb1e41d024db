//! Canonical byte encodings used as hash and MAC inputs.
//!
//! Integers are minimal big-endian with zero encoded as a single `0x00`.
//! Every hash or MAC input is a concatenation of frames: a 4-byte big-endian
//! length followed by the payload. Frame sequences are prefix-free, so
//! `H(a, b)` can never collide with `H(a ‖ b)` or `H(a, b, c)`.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Minimal-length big-endian encoding of `x`.
pub fn encode_int(x: &BigUint) -> Vec<u8> {
    // BigUint::to_bytes_be already yields [0] for zero and no leading zeros otherwise.
    x.to_bytes_be()
}

/// Inverse of [`encode_int`]. Leading zeros are accepted and ignored.
pub fn decode_int(bytes: &[u8]) -> BigUint {
    BigUint::from_bytes_be(bytes)
}

/// Length-prefixes `payload` with its size as a 4-byte big-endian integer.
pub fn frame(payload: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(payload.len() + 4);
    frame_into(&mut out, payload)?;
    Ok(out)
}

pub(crate) fn frame_into(out: &mut Vec<u8>, payload: &[u8]) -> Result<()> {
    let len = u32::try_from(payload.len()).map_err(|_| Error::Oversize(payload.len()))?;
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(payload);
    Ok(())
}

/// Lowercase hex of the minimal encoding; the form integers take on the wire.
pub fn int_to_hex(x: &BigUint) -> String {
    hex::encode(encode_int(x))
}

/// Parses wire hex into an integer. Accepts either case.
pub fn int_from_hex(text: &str) -> Result<BigUint> {
    if text.is_empty() {
        return Err(Error::Payload("empty integer".into()));
    }
    let bytes = hex::decode(text).map_err(|e| Error::Payload(format!("bad hex integer: {e}")))?;
    Ok(decode_int(&bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn encode_int_boundaries() {
        assert_eq!(encode_int(&BigUint::from(0u32)), vec![0x00]);
        assert_eq!(encode_int(&BigUint::from(255u32)), vec![0xff]);
        assert_eq!(encode_int(&BigUint::from(256u32)), vec![0x01, 0x00]);
    }

    #[test]
    fn frame_small_payloads() {
        assert_eq!(frame(&[]).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(frame(&[0xab]).unwrap(), vec![0, 0, 0, 1, 0xab]);
    }

    fn for_each_sequence(len: usize, mut f: impl FnMut(&[u8])) {
        let mut buf = vec![0u8; len];
        for i in 0..1u64 << (8 * len) {
            for (j, byte) in buf.iter_mut().enumerate() {
                *byte = (i >> (8 * j)) as u8;
            }
            f(&buf);
        }
    }

    // A collision needs equal total length, so enumerating every pair whose
    // combined length is <= 3 bytes and recovering both halves by parsing
    // covers every possible collision in that range.
    #[test]
    fn frame_pairs_are_injective_exhaustive() {
        fn split(bytes: &[u8]) -> Option<(&[u8], &[u8])> {
            let len1 = u32::from_be_bytes(bytes.get(..4)?.try_into().ok()?) as usize;
            let first = bytes.get(4..4 + len1)?;
            let rest = &bytes[4 + len1..];
            let len2 = u32::from_be_bytes(rest.get(..4)?.try_into().ok()?) as usize;
            if rest.len() != 4 + len2 {
                return None;
            }
            Some((first, &rest[4..]))
        }

        let mut checked = 0u64;
        let mut joined = Vec::with_capacity(16);
        for total in 0..=3usize {
            for_each_sequence(total, |seq| {
                for cut in 0..=total {
                    let (a, b) = seq.split_at(cut);
                    joined.clear();
                    frame_into(&mut joined, a).unwrap();
                    frame_into(&mut joined, b).unwrap();
                    assert_eq!(split(&joined), Some((a, b)));
                    checked += 1;
                }
            });
        }
        assert_eq!(checked, 1 + 2 * 256 + 3 * 65_536 + 4 * 16_777_216);
    }

    proptest! {
        #[test]
        fn int_round_trips(bytes in proptest::collection::vec(any::<u8>(), 0..300)) {
            let x = decode_int(&bytes);
            prop_assert_eq!(decode_int(&encode_int(&x)), x.clone());
            prop_assert_eq!(int_from_hex(&int_to_hex(&x)).unwrap(), x);
        }

        #[test]
        fn distinct_frame_pairs_never_collide(
            a in proptest::collection::vec(any::<u8>(), 0..6),
            b in proptest::collection::vec(any::<u8>(), 0..6),
            c in proptest::collection::vec(any::<u8>(), 0..6),
            d in proptest::collection::vec(any::<u8>(), 0..6),
        ) {
            let mut left = frame(&a).unwrap();
            left.extend(frame(&b).unwrap());
            let mut right = frame(&c).unwrap();
            right.extend(frame(&d).unwrap());
            prop_assert_eq!(left == right, a == c && b == d);
        }
    }
}
