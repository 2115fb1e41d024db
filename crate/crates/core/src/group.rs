//! The public algebraic setting shared by client and server.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::encoding::encode_int;
use crate::error::{Error, Result};
use crate::hash::{hash_digest, int_from_digest, xor_digests, Digest};

const PRODUCTION_MODULUS_HEX: &str = include_str!("groups/rfc5054_2048.hex");

/// Name of the pinned 2048-bit production group.
pub const PRODUCTION: &str = "rfc5054-2048";
/// Name of the 23-element test group.
pub const TOY: &str = "toy-23";

/// Modulus `n`, generator `g`, multiplier `k`, and the public constant `l`.
///
/// Profiles built with [`GroupProfile::new`] derive `k = H(n, g)` and
/// `l = H(n) xor H(g)`. Test profiles may inject `k` and `l` directly; those
/// carry `injected = true`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupProfile {
    pub name: String,
    pub n: BigUint,
    pub g: BigUint,
    pub k: BigUint,
    pub l: Digest,
    pub injected: bool,
}

/// `k = H(n, g)` read as an integer, and `l = H(n) xor H(g)`.
pub fn derive_group_constants(n: &BigUint, g: &BigUint) -> (BigUint, Digest) {
    let n_enc = encode_int(n);
    let g_enc = encode_int(g);
    // Encoded group elements are far below the 4 GiB frame limit.
    let k = int_from_digest(&hash_digest(&[&n_enc, &g_enc]).expect("small frames"));
    let l = xor_digests(&hash_digest(&[&n_enc]).expect("small frames"), &hash_digest(&[&g_enc]).expect("small frames"));
    (k, l)
}

impl GroupProfile {
    pub fn new(name: impl Into<String>, n: BigUint, g: BigUint) -> Result<Self> {
        check_shape(&n, &g)?;
        let (k, l) = derive_group_constants(&n, &g);
        Ok(Self { name: name.into(), n, g, k, l, injected: false })
    }

    /// A profile whose `k` and `l` are supplied by the caller. Only meant for
    /// oracle tests in small groups.
    pub fn with_injected(name: impl Into<String>, n: BigUint, g: BigUint, k: BigUint, l: Digest) -> Result<Self> {
        check_shape(&n, &g)?;
        Ok(Self { name: name.into(), n, g, k, l, injected: true })
    }

    /// The 2048-bit safe-prime group with generator 2.
    pub fn production() -> Self {
        let n =
            BigUint::parse_bytes(PRODUCTION_MODULUS_HEX.trim().as_bytes(), 16).expect("pinned modulus is valid hex");
        Self::new(PRODUCTION, n, BigUint::from(2u32)).expect("pinned group is well formed")
    }

    /// `n = 23`, `g = 5`, injected `k = 3`; `l` is derived as usual.
    pub fn toy() -> Self {
        let n = BigUint::from(23u32);
        let g = BigUint::from(5u32);
        let (_, l) = derive_group_constants(&n, &g);
        Self::with_injected(TOY, n, g, BigUint::from(3u32), l).expect("toy group is well formed")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            PRODUCTION => Some(Self::production()),
            TOY => Some(Self::toy()),
            _ => None,
        }
    }

    /// `g^e mod n`.
    pub fn pow_g(&self, e: &BigUint) -> BigUint {
        self.g.modpow(e, &self.n)
    }

    /// True when `0 < value < n`.
    pub fn is_element(&self, value: &BigUint) -> bool {
        !value.is_zero() && value < &self.n
    }

    /// Checks that `n` is a safe prime and `g` a primitive root by exhaustive
    /// search. Only available for moduli below 2^16.
    pub fn verify_small(&self) -> Result<()> {
        let n =
            self.n.to_u64().filter(|n| *n < 1 << 16).ok_or(Error::InvalidGroup("exhaustive check needs n < 2^16"))?;
        let g = self.g.to_u64().ok_or(Error::InvalidGroup("g out of range"))?;
        if !is_prime_small(n) || !is_prime_small((n - 1) / 2) {
            return Err(Error::InvalidGroup("n is not a safe prime"));
        }
        let mut seen = vec![false; n as usize];
        let mut acc = 1u64;
        for _ in 1..n {
            acc = acc * g % n;
            if seen[acc as usize] {
                return Err(Error::InvalidGroup("g is not a primitive root"));
            }
            seen[acc as usize] = true;
        }
        Ok(())
    }
}

fn check_shape(n: &BigUint, g: &BigUint) -> Result<()> {
    if n <= &BigUint::from(3u32) || !n.bit(0) {
        return Err(Error::InvalidGroup("n must be an odd prime above 3"));
    }
    if g <= &BigUint::one() || g >= n {
        return Err(Error::InvalidGroup("g must lie in (1, n)"));
    }
    Ok(())
}

fn is_prime_small(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}
