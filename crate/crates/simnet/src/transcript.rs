//! Append-only record of a scenario run.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Browser,
    Authenticator,
    Attacker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Request,
    Response,
}

/// One message as delivered, after any tampering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub seq: u64,
    pub channel: Channel,
    pub direction: Direction,
    pub method: String,
    pub endpoint: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<u16>,
    /// Bodies are JSON text.
    #[serde(with = "body_text")]
    pub body: Vec<u8>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub tampered: bool,
}

mod body_text {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(body: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&String::from_utf8_lossy(body))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        Ok(String::deserialize(d)?.into_bytes())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub step: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub scenario: String,
    pub tape: u64,
    pub messages: Vec<Message>,
    pub outcomes: Vec<StepOutcome>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Line<'a> {
    Header { scenario: &'a str, tape: u64 },
    Message(&'a Message),
    Outcome(&'a StepOutcome),
}

impl Transcript {
    pub fn new(scenario: impl Into<String>, tape: u64) -> Self {
        Self { scenario: scenario.into(), tape, messages: Vec::new(), outcomes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }

    pub fn first_divergence(&self) -> Option<&StepOutcome> {
        self.outcomes.iter().find(|o| !o.pass)
    }

    /// JSON lines: a header, then messages, then step outcomes.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut push = |line: Line<'_>| {
            let _ = writeln!(out, "{}", serde_json::to_string(&line).expect("transcript serializes"));
        };
        push(Line::Header { scenario: &self.scenario, tape: self.tape });
        for m in &self.messages {
            push(Line::Message(m));
        }
        for o in &self.outcomes {
            push(Line::Outcome(o));
        }
        out
    }

    pub fn requests_to<'a>(&'a self, endpoint: &'a str) -> impl Iterator<Item = &'a Message> + 'a {
        self.messages.iter().filter(move |m| m.direction == Direction::Request && m.endpoint == endpoint)
    }
}
