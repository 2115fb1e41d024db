//! Searching captured traffic for secret material.

use std::sync::{Arc, Mutex};

use zerotwo_auth::{SecretKind, SecretWitness};

use crate::transcript::Transcript;

/// One secret value as the device computed it.
pub type Sighting = (SecretKind, Vec<u8>);

/// Collects every secret the authenticator reports. Clones share storage,
/// so one copy goes into the authenticator and one stays with the harness.
#[derive(Clone, Default)]
pub struct SecretLog(Arc<Mutex<Vec<Sighting>>>);

impl SecretWitness for SecretLog {
    fn observe(&mut self, kind: SecretKind, bytes: &[u8]) {
        let mut seen = self.0.lock().unwrap();
        if !seen.iter().any(|(k, b)| *k == kind && b == bytes) {
            seen.push((kind, bytes.to_vec()));
        }
    }
}

impl SecretLog {
    pub fn secrets(&self) -> Vec<(SecretKind, Vec<u8>)> {
        self.0.lock().unwrap().clone()
    }

    pub fn count(&self, kind: SecretKind) -> usize {
        self.0.lock().unwrap().iter().filter(|(k, _)| *k == kind).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leak {
    pub kind: SecretKind,
    pub seq: u64,
    pub encoding: &'static str,
}

/// Every way a secret could plausibly be written into a message body.
fn renderings(bytes: &[u8]) -> [(&'static str, Vec<u8>); 3] {
    [("raw", bytes.to_vec()), ("hex", hex::encode(bytes).into_bytes()), ("HEX", hex::encode_upper(bytes).into_bytes())]
}

fn contains(haystack: &[u8], needle: &[u8]) -> bool {
    !needle.is_empty() && haystack.windows(needle.len()).any(|w| w == needle)
}

/// Reports each (secret, message, encoding) triple where the secret occurs
/// as a substring of a captured body or endpoint path.
pub fn scan(transcript: &Transcript, secrets: &[(SecretKind, Vec<u8>)]) -> Vec<Leak> {
    let mut leaks = Vec::new();
    for (kind, bytes) in secrets {
        for (encoding, needle) in renderings(bytes) {
            for m in &transcript.messages {
                if contains(&m.body, &needle) || contains(m.endpoint.as_bytes(), &needle) {
                    leaks.push(Leak { kind: *kind, seq: m.seq, encoding });
                }
            }
        }
    }
    leaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transcript::{Channel, Direction, Message};

    #[test]
    fn finds_hex_and_raw_occurrences() {
        let mut t = Transcript::new("leak", 0);
        t.messages.push(Message {
            seq: 3,
            channel: Channel::Authenticator,
            direction: Direction::Request,
            method: "POST".into(),
            endpoint: "/x".into(),
            status: None,
            body: br#"{"M":"00AB12","p":"hunter2"}"#.to_vec(),
            tampered: false,
        });
        let secrets = vec![(SecretKind::SessionKey, vec![0x00, 0xab, 0x12]), (SecretKind::Master, b"hunter2".to_vec())];
        let leaks = scan(&t, &secrets);
        assert_eq!(
            leaks,
            vec![
                Leak { kind: SecretKind::SessionKey, seq: 3, encoding: "HEX" },
                Leak { kind: SecretKind::Master, seq: 3, encoding: "raw" },
            ]
        );
        assert!(scan(&t, &[(SecretKind::Premaster, vec![0xff, 0xee])]).is_empty());
    }
}
