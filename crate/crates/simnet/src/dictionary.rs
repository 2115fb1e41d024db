//! Offline guessing against a stolen verifier.
//!
//! Given `(v, iu, is)` from a database breach, an attacker hashes each
//! candidate `p'` to `x'` and checks `g^x' = v`. Nothing else is needed,
//! which is why the master secret has to carry real entropy.

use std::time::{Duration, Instant};

use rand::RngCore;
use zerotwo_auth::passphrase::{sample_index, Wordlist};
use zerotwo_core::{hash_digest, GroupProfile, IdentityPair, Verifier};

use crate::mont::{FixedBaseTable, Montgomery};

/// Window width for the fixed-base table. With a 256-bit exponent and a
/// 2048-bit modulus this is 22 windows of 4096 entries, about 23 MB.
pub const WINDOW: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackReport {
    pub recovered: Option<String>,
    pub tried: usize,
    pub elapsed: Duration,
}

/// Precomputed state for repeated guesses against one verifier.
pub struct Guesser {
    table: FixedBaseTable,
    target: Vec<u64>,
    iu: String,
    is: String,
}

impl Guesser {
    pub fn new(v: &Verifier, identity: &IdentityPair, group: &GroupProfile) -> Self {
        let mont = Montgomery::new(&group.n);
        let target = mont.to_mont(v.value());
        let table = FixedBaseTable::new(mont, &group.g, 256, WINDOW);
        Self { table, target, iu: identity.user().to_owned(), is: identity.server().to_owned() }
    }

    /// True when `g^H(iu, is, candidate) = v`.
    pub fn test(&self, candidate: &str) -> bool {
        match hash_digest(&[self.iu.as_bytes(), self.is.as_bytes(), candidate.as_bytes()]) {
            Ok(x) => self.table.pow_be_bytes(&x) == self.target,
            Err(_) => false,
        }
    }
}

/// Tries candidates in order and stops at the first match.
pub fn dictionary_attack<I, S>(
    v: &Verifier,
    identity: &IdentityPair,
    candidates: I,
    group: &GroupProfile,
) -> AttackReport
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let start = Instant::now();
    let mut candidates = candidates.into_iter().peekable();
    if candidates.peek().is_none() {
        return AttackReport { recovered: None, tried: 0, elapsed: start.elapsed() };
    }
    let guesser = Guesser::new(v, identity, group);
    let mut tried = 0;
    for candidate in candidates {
        tried += 1;
        if guesser.test(candidate.as_ref()) {
            return AttackReport { recovered: Some(candidate.as_ref().to_owned()), tried, elapsed: start.elapsed() };
        }
    }
    AttackReport { recovered: None, tried, elapsed: start.elapsed() }
}

const COMMON: &[&str] = &[
    "password", "123456", "qwerty", "letmein", "dragon", "monkey", "iloveyou", "admin", "welcome", "sunshine",
    "princess", "football", "baseball", "master", "shadow", "superman", "trustno1", "michael", "jennifer", "hunter",
    "soccer", "charlie", "batman", "starwars", "freedom", "whatever", "qazwsx", "passw0rd", "abc123", "login", "hello",
    "secret", "summer", "winter", "flower", "cookie", "pepper", "ginger", "orange", "banana",
];

const SUFFIXES: &[&str] =
    &["", "1", "12", "123", "1234", "!", "01", "69", "99", "2020", "2021", "2022", "2023", "2024", "2025", "@1"];

/// A leaked-password style list: common passwords with typical suffixes,
/// then dictionary words with two-digit suffixes, deduplicated and cut to
/// `count`.
pub fn weak_candidates(count: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    let mut seen = std::collections::HashSet::new();
    let mut push = |s: String, out: &mut Vec<String>| {
        if out.len() < count && seen.insert(s.clone()) {
            out.push(s);
        }
    };
    for base in COMMON {
        for suffix in SUFFIXES {
            push(format!("{base}{suffix}"), &mut out);
        }
    }
    let words = Wordlist::bundled();
    'fill: for n in 0..100 {
        for i in 0..words.len() {
            if out.len() >= count {
                break 'fill;
            }
            push(format!("{}{n:02}", words.word(i)), &mut out);
        }
    }
    out
}

/// Random six-word guesses in the generator's own format.
pub fn passphrase_guesses<R: RngCore>(mut rng: R, count: usize) -> impl Iterator<Item = String> {
    let words = Wordlist::bundled();
    (0..count).map(move |_| {
        let picks: Vec<&str> = (0..6).map(|_| words.word(sample_index(&mut rng))).collect();
        picks.join("-")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use zerotwo_core::{compute_verifier, derive_x, MasterSecret, SecretOrigin};

    fn verifier(id: &IdentityPair, p: &str, group: &GroupProfile) -> Verifier {
        let p = MasterSecret::passphrase(p, SecretOrigin::Imported).unwrap();
        compute_verifier(&derive_x(id, &p).unwrap(), group).unwrap()
    }

    #[test]
    fn weak_list_shape() {
        let list = weak_candidates(10_000);
        assert_eq!(list.len(), 10_000);
        assert!(list.iter().any(|c| c == "password123"));
    }

    #[test]
    fn empty_list_recovers_nothing() {
        let group = GroupProfile::toy();
        let id = IdentityPair::new("alice", "example.org").unwrap();
        let v = verifier(&id, "x", &group);
        let report = dictionary_attack(&v, &id, Vec::<String>::new(), &group);
        assert_eq!((report.recovered, report.tried), (None, 0));
    }

    #[test]
    fn guesser_agrees_with_core_in_production_group() {
        let group = GroupProfile::production();
        let id = IdentityPair::new("bob", "example.org").unwrap();
        let v = verifier(&id, "letmein", &group);
        let guesser = Guesser::new(&v, &id, &group);
        assert!(guesser.test("letmein"));
        assert!(!guesser.test("letmein1"));
    }
}
