//! Out-of-band payloads: the text a QR code (or any other side channel)
//! carries between browser and authenticator.
//!
//! Compact JSON with a version `v` and a type tag `t`, e.g.
//! `{"v":1,"t":"enroll","iu":"alice","is":"example.org","enroll_url":"…"}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wire::LoginChallenge;

pub const PAYLOAD_VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "lowercase")]
pub enum QrPayload {
    Enroll {
        iu: String,
        is: String,
        enroll_url: String,
    },
    Login {
        login_id: String,
        iu: String,
        is: String,
        #[serde(rename = "B")]
        b: String,
        fingerprint: String,
    },
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    v: u8,
    #[serde(flatten)]
    body: QrPayload,
}

impl QrPayload {
    pub fn encode(&self) -> String {
        serde_json::to_string(&Envelope { v: PAYLOAD_VERSION, body: self.clone() }).expect("payload serializes")
    }

    pub fn decode(text: &str) -> Result<Self> {
        let envelope: Envelope = serde_json::from_str(text.trim()).map_err(|e| Error::Payload(e.to_string()))?;
        if envelope.v != PAYLOAD_VERSION {
            return Err(Error::Payload(format!("unsupported payload version {}", envelope.v)));
        }
        Ok(envelope.body)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            QrPayload::Enroll { .. } => "enroll",
            QrPayload::Login { .. } => "login",
        }
    }
}

impl From<LoginChallenge> for QrPayload {
    fn from(c: LoginChallenge) -> Self {
        QrPayload::Login { login_id: c.login_id, iu: c.iu, is: c.is, b: c.b, fingerprint: c.fingerprint }
    }
}

impl TryFrom<QrPayload> for LoginChallenge {
    type Error = Error;

    fn try_from(p: QrPayload) -> Result<Self> {
        match p {
            QrPayload::Login { login_id, iu, is, b, fingerprint } => {
                Ok(LoginChallenge { login_id, iu, is, b, fingerprint })
            }
            other => Err(Error::Payload(format!("expected a login payload, got {}", other.kind()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enroll_payload_layout() {
        let p = QrPayload::Enroll {
            iu: "alice".into(),
            is: "example.org".into(),
            enroll_url: "http://localhost:8080/enroll".into(),
        };
        assert_eq!(
            p.encode(),
            r#"{"v":1,"t":"enroll","iu":"alice","is":"example.org","enroll_url":"http://localhost:8080/enroll"}"#
        );
    }

    #[test]
    fn rejects_unknown_versions_and_types() {
        assert!(QrPayload::decode(r#"{"v":2,"t":"enroll","iu":"a","is":"b","enroll_url":"c"}"#).is_err());
        assert!(QrPayload::decode(r#"{"v":1,"t":"wire","iu":"a"}"#).is_err());
        assert!(QrPayload::decode("not json").is_err());
    }

    #[test]
    fn login_payload_converts_to_challenge_only() {
        let enroll = QrPayload::Enroll { iu: "a".into(), is: "b".into(), enroll_url: "c".into() };
        assert!(LoginChallenge::try_from(enroll).is_err());
    }

    proptest! {
        #[test]
        fn payloads_round_trip(iu in "\\PC{1,20}", is in "[a-z.]{1,20}", b in "[0-9a-f]{1,64}", id in "[0-9a-f]{32}") {
            let login = QrPayload::Login {
                login_id: id, iu: iu.clone(), is: is.clone(), b, fingerprint: "0102-0304-0506-0708".into(),
            };
            prop_assert_eq!(QrPayload::decode(&login.encode()).unwrap(), login);
            let enroll = QrPayload::Enroll { iu, is, enroll_url: "http://x/enroll".into() };
            prop_assert_eq!(QrPayload::decode(&enroll.encode()).unwrap(), enroll);
        }
    }
}
