use std::fmt;

use num_bigint::BigUint;

use crate::encoding::encode_int;
use crate::hash::hash_digest;
use crate::identity::IdentityPair;

/// Short rendering of `H(iu, is, B)` shown on both the browser and the
/// authenticator so the user can spot a substituted `B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint(String);

impl Fingerprint {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn fingerprint(identity: &IdentityPair, server_public: &BigUint) -> Fingerprint {
    let digest = hash_digest(&[identity.user().as_bytes(), identity.server().as_bytes(), &encode_int(server_public)])
        .expect("identity and group element fit a frame");
    render(digest[..8].try_into().expect("digest is 32 bytes"))
}

/// Four dash-separated groups of four lowercase hex digits.
pub fn render(bytes: &[u8; 8]) -> Fingerprint {
    let hex = hex::encode(bytes);
    let groups: Vec<&str> = (0..4).map(|i| &hex[i * 4..i * 4 + 4]).collect();
    Fingerprint(groups.join("-"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn rendering_groups_bytes() {
        assert_eq!(render(&[1, 2, 3, 4, 5, 6, 7, 8]).as_str(), "0102-0304-0506-0708");
    }

    #[test]
    fn fingerprint_is_deterministic() {
        let id = IdentityPair::new("alice", "example.org").unwrap();
        let b = BigUint::from(11u32);
        assert_eq!(fingerprint(&id, &b), fingerprint(&id, &b));
        assert_eq!(fingerprint(&id, &b).as_str().len(), 19);
    }

    #[test]
    fn neighbouring_keys_differ() {
        let id = IdentityPair::new("alice", "example.org").unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..100 {
            let bytes: [u8; 32] = rng.gen();
            let b = BigUint::from_bytes_be(&bytes);
            assert_ne!(fingerprint(&id, &b), fingerprint(&id, &(&b + 1u32)));
        }
    }
}
