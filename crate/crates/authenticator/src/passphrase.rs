//! Diceware-style passphrase generation.

use std::collections::HashSet;
use std::sync::OnceLock;

use rand::{CryptoRng, RngCore};
use thiserror::Error;
use zerotwo_core::{MasterSecret, SecretOrigin};

/// Number of entries a usable list must have.
pub const WORDLIST_LEN: usize = 7776;
pub const DEFAULT_WORD_COUNT: usize = 6;
pub const DEFAULT_SEPARATOR: &str = "-";

/// The EFF large wordlist, with the four hyphenated entries rewritten so
/// that the separator only ever appears between words.
const BUNDLED: &str = include_str!("../words/eff_large.txt");

/// Largest multiple of 7776 that fits in a u16 draw; values at or above it
/// are redrawn.
const ACCEPT_BELOW: u32 = (u16::MAX as u32 + 1) / WORDLIST_LEN as u32 * WORDLIST_LEN as u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordlistError {
    #[error("wordlist has {0} entries, expected {WORDLIST_LEN}")]
    WrongLength(usize),
    #[error("wordlist entry {0:?} is not a lowercase ASCII word")]
    BadWord(String),
    #[error("wordlist entry {0:?} appears more than once")]
    Duplicate(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wordlist {
    words: Vec<String>,
}

impl Wordlist {
    /// One word per line; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, WordlistError> {
        let words: Vec<String> = text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect();
        if words.len() != WORDLIST_LEN {
            return Err(WordlistError::WrongLength(words.len()));
        }
        let mut seen = HashSet::with_capacity(words.len());
        for w in &words {
            if !w.bytes().all(|b| b.is_ascii_lowercase()) {
                return Err(WordlistError::BadWord(w.clone()));
            }
            if !seen.insert(w.as_str()) {
                return Err(WordlistError::Duplicate(w.clone()));
            }
        }
        Ok(Self { words })
    }

    pub fn bundled() -> &'static Wordlist {
        static LIST: OnceLock<Wordlist> = OnceLock::new();
        LIST.get_or_init(|| Wordlist::parse(BUNDLED).expect("bundled wordlist is valid"))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, index: usize) -> &str {
        &self.words[index]
    }

    pub fn position(&self, word: &str) -> Option<usize> {
        self.words.iter().position(|w| w == word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassphraseSpec {
    pub word_count: usize,
    pub separator: String,
}

impl Default for PassphraseSpec {
    fn default() -> Self {
        Self { word_count: DEFAULT_WORD_COUNT, separator: DEFAULT_SEPARATOR.to_owned() }
    }
}

impl PassphraseSpec {
    pub fn entropy_bits(&self) -> f64 {
        self.word_count as f64 * (WORDLIST_LEN as f64).log2()
    }
}

/// A uniform index below 7776 from 16-bit draws.
pub fn sample_index<R: RngCore + ?Sized>(rng: &mut R) -> usize {
    loop {
        let mut buf = [0u8; 2];
        rng.fill_bytes(&mut buf);
        let draw = u16::from_le_bytes(buf) as u32;
        if draw < ACCEPT_BELOW {
            return (draw % WORDLIST_LEN as u32) as usize;
        }
    }
}

pub fn generate_passphrase<R: RngCore + CryptoRng + ?Sized>(
    spec: &PassphraseSpec,
    list: &Wordlist,
    rng: &mut R,
) -> MasterSecret {
    let words: Vec<&str> = (0..spec.word_count.max(1)).map(|_| list.word(sample_index(rng))).collect();
    MasterSecret::passphrase(words.join(&spec.separator), SecretOrigin::GeneratedPassphrase)
        .expect("generated passphrase is non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn acceptance_bound_is_the_largest_multiple() {
        const _: () = assert!(ACCEPT_BELOW + 7776 > 65536);
        assert_eq!(ACCEPT_BELOW, 62208);
        assert_eq!(ACCEPT_BELOW % 7776, 0);
    }

    #[test]
    fn bundled_list_is_complete() {
        let list = Wordlist::bundled();
        assert_eq!(list.len(), WORDLIST_LEN);
        assert_eq!(list.word(0), "abacus");
        assert!(list.position("dropdown").is_some());
    }

    #[test]
    fn truncated_or_malformed_lists_are_rejected() {
        let short: String = Wordlist::bundled().words[..100].join("\n");
        assert_eq!(Wordlist::parse(&short), Err(WordlistError::WrongLength(100)));
        let mut words = Wordlist::bundled().words.clone();
        words[5] = "Bad-Word".into();
        assert!(matches!(Wordlist::parse(&words.join("\n")), Err(WordlistError::BadWord(_))));
        words[5] = words[6].clone();
        assert!(matches!(Wordlist::parse(&words.join("\n")), Err(WordlistError::Duplicate(_))));
    }

    #[test]
    fn default_spec_shape() {
        let spec = PassphraseSpec::default();
        assert!(spec.entropy_bits() >= 77.0);
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let p = generate_passphrase(&spec, Wordlist::bundled(), &mut rng);
        let text = p.as_text().unwrap();
        assert_eq!(text.matches('-').count(), 5);
        let words: Vec<&str> = text.split('-').collect();
        assert_eq!(words.len(), 6);
        assert!(words.iter().all(|w| Wordlist::bundled().position(w).is_some()));
        assert_eq!(p.origin(), SecretOrigin::GeneratedPassphrase);
    }

    #[test]
    fn same_seed_same_passphrase() {
        let spec = PassphraseSpec::default();
        let gen = |seed| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            generate_passphrase(&spec, Wordlist::bundled(), &mut rng).as_text().unwrap().to_owned()
        };
        assert_eq!(gen(11), gen(11));
        assert_ne!(gen(11), gen(12));
    }
}
