//! The consent step: a person (or a test script) approving each action.

use std::collections::VecDeque;
use std::io::{self, BufRead, Write};

/// Shown before a login is approved. Both fingerprints are included so a
/// human can compare them with what the browser displays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoginPrompt {
    pub iu: String,
    pub is: String,
    pub server_fingerprint: String,
    pub local_fingerprint: String,
    pub duration: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthzPrompt {
    pub iu: String,
    pub is: String,
    /// The operation text exactly as received.
    pub operation: String,
}

pub trait Confirmer {
    fn confirm_login(&mut self, prompt: &LoginPrompt) -> bool;
    fn confirm_authorization(&mut self, prompt: &AuthzPrompt) -> bool;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shown {
    Login(LoginPrompt),
    Authorization(AuthzPrompt),
}

/// Answers from a queue, falling back to `default`. Records every prompt.
#[derive(Debug, Clone, Default)]
pub struct ScriptedConfirmer {
    pub answers: VecDeque<bool>,
    pub default: bool,
    pub shown: Vec<Shown>,
}

impl ScriptedConfirmer {
    pub fn always(answer: bool) -> Self {
        Self { default: answer, ..Self::default() }
    }

    pub fn script(answers: impl IntoIterator<Item = bool>) -> Self {
        Self { answers: answers.into_iter().collect(), ..Self::default() }
    }

    fn next(&mut self) -> bool {
        self.answers.pop_front().unwrap_or(self.default)
    }
}

impl Confirmer for ScriptedConfirmer {
    fn confirm_login(&mut self, prompt: &LoginPrompt) -> bool {
        self.shown.push(Shown::Login(prompt.clone()));
        self.next()
    }

    fn confirm_authorization(&mut self, prompt: &AuthzPrompt) -> bool {
        self.shown.push(Shown::Authorization(prompt.clone()));
        self.next()
    }
}

/// Asks on a terminal. Anything but "y" or "yes" is a no.
pub struct TerminalConfirmer<R, W> {
    input: R,
    output: W,
}

impl TerminalConfirmer<io::StdinLock<'static>, io::Stderr> {
    pub fn stdio() -> Self {
        Self { input: io::stdin().lock(), output: io::stderr() }
    }
}

impl<R: BufRead, W: Write> TerminalConfirmer<R, W> {
    pub fn new(input: R, output: W) -> Self {
        Self { input, output }
    }

    fn ask(&mut self, text: &str) -> bool {
        if write!(self.output, "{text}\nApprove? [y/N] ").and_then(|_| self.output.flush()).is_err() {
            return false;
        }
        let mut line = String::new();
        if self.input.read_line(&mut line).is_err() {
            return false;
        }
        matches!(line.trim().to_ascii_lowercase().as_str(), "y" | "yes")
    }
}

impl<R: BufRead, W: Write> Confirmer for TerminalConfirmer<R, W> {
    fn confirm_login(&mut self, p: &LoginPrompt) -> bool {
        let hours = p.duration as f64 / 3600.0;
        self.ask(&format!(
            "Login request for {} at {}\n  fingerprint from server: {}\n  fingerprint computed here: {}\n  session length: {hours:.2} h\nCheck that the browser shows the same fingerprint.",
            p.iu, p.is, p.server_fingerprint, p.local_fingerprint
        ))
    }

    fn confirm_authorization(&mut self, p: &AuthzPrompt) -> bool {
        self.ask(&format!("{} at {} asks to authorize:\n  {}", p.iu, p.is, p.operation))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_accepts_only_explicit_yes() {
        let prompt = AuthzPrompt { iu: "a".into(), is: "b".into(), operation: "delete account".into() };
        for (input, expected) in [("y\n", true), ("YES\n", true), ("\n", false), ("sure\n", false), ("", false)] {
            let mut out = Vec::new();
            let mut c = TerminalConfirmer::new(input.as_bytes(), &mut out);
            assert_eq!(c.confirm_authorization(&prompt), expected, "{input:?}");
            assert!(String::from_utf8(out).unwrap().contains("delete account"));
        }
    }

    #[test]
    fn script_then_default() {
        let mut c = ScriptedConfirmer::script([true, false]);
        let p = AuthzPrompt { iu: "a".into(), is: "b".into(), operation: "o".into() };
        assert!(c.confirm_authorization(&p));
        assert!(!c.confirm_authorization(&p));
        assert!(!c.confirm_authorization(&p));
        assert_eq!(c.shown.len(), 3);
    }
}
