//! Loopback network with interception.
//!
//! Every request goes through [`SimNet::exchange`]: request hooks may
//! rewrite it, the server's request handler answers, response hooks may
//! rewrite the answer, and both land in the transcript as delivered.

use std::sync::{Arc, Mutex};

use zerotwo_auth::{Reply, Transport, TransportError};
use zerotwo_server::{api, AuthService};

use crate::transcript::{Channel, Direction, Message, Transcript};

type Predicate = Box<dyn Fn(&Message) -> bool + Send>;
type Mutation = Box<dyn FnMut(&mut Message) + Send>;

/// A man-in-the-middle rule: messages matching `when` are passed to
/// `mutate` before delivery.
pub struct Interceptor {
    pub label: String,
    when: Predicate,
    mutate: Mutation,
    pub fired: usize,
}

impl Interceptor {
    pub fn new(
        label: impl Into<String>,
        when: impl Fn(&Message) -> bool + Send + 'static,
        mutate: impl FnMut(&mut Message) + Send + 'static,
    ) -> Self {
        Self { label: label.into(), when: Box::new(when), mutate: Box::new(mutate), fired: 0 }
    }

    /// Matches one direction of one endpoint on one channel. `endpoint`
    /// matches as a prefix so `/login/challenge` covers every login id.
    pub fn on(
        label: impl Into<String>,
        channel: Channel,
        direction: Direction,
        endpoint: &'static str,
        mutate: impl FnMut(&mut Message) + Send + 'static,
    ) -> Self {
        Self::new(
            label,
            move |m| m.channel == channel && m.direction == direction && m.endpoint.starts_with(endpoint),
            mutate,
        )
    }

    /// Rewrites a JSON body in place.
    pub fn on_json(
        label: impl Into<String>,
        channel: Channel,
        direction: Direction,
        endpoint: &'static str,
        mut edit: impl FnMut(&mut serde_json::Value) + Send + 'static,
    ) -> Self {
        Self::on(label, channel, direction, endpoint, move |m| {
            if let Ok(mut value) = serde_json::from_slice::<serde_json::Value>(&m.body) {
                edit(&mut value);
                m.body = serde_json::to_vec(&value).expect("value serializes");
            }
        })
    }
}

struct Inner {
    transcript: Transcript,
    hooks: Vec<Interceptor>,
    seq: u64,
}

#[derive(Clone)]
pub struct SimNet {
    service: Arc<AuthService>,
    inner: Arc<Mutex<Inner>>,
}

impl SimNet {
    pub fn new(service: Arc<AuthService>, scenario: &str, tape: u64) -> Self {
        let inner = Inner { transcript: Transcript::new(scenario, tape), hooks: Vec::new(), seq: 0 };
        Self { service, inner: Arc::new(Mutex::new(inner)) }
    }

    pub fn service(&self) -> &Arc<AuthService> {
        &self.service
    }

    pub fn endpoint(&self, channel: Channel) -> Endpoint {
        Endpoint { net: self.clone(), channel }
    }

    /// Hooks run in installation order, so they compose.
    pub fn install(&self, hook: Interceptor) {
        self.inner.lock().unwrap().hooks.push(hook);
    }

    pub fn clear_hooks(&self) -> Vec<(String, usize)> {
        let mut inner = self.inner.lock().unwrap();
        inner.hooks.drain(..).map(|h| (h.label, h.fired)).collect()
    }

    fn deliver(&self, mut message: Message) -> Message {
        let mut inner = self.inner.lock().unwrap();
        message.seq = inner.seq;
        inner.seq += 1;
        for hook in inner.hooks.iter_mut() {
            if (hook.when)(&message) {
                let before = message.body.clone();
                (hook.mutate)(&mut message);
                hook.fired += 1;
                message.tampered |= message.body != before;
            }
        }
        inner.transcript.messages.push(message.clone());
        message
    }

    /// One request/response round trip on `channel`.
    pub fn exchange(&self, channel: Channel, method: &str, target: &str, body: &[u8]) -> Reply {
        let endpoint = strip_origin(target).to_owned();
        let request = self.deliver(Message {
            seq: 0,
            channel,
            direction: Direction::Request,
            method: method.to_owned(),
            endpoint: endpoint.clone(),
            status: None,
            body: body.to_vec(),
            tampered: false,
        });
        let reply = api::handle(&self.service, &request.method, &request.endpoint, &request.body);
        let response = self.deliver(Message {
            seq: 0,
            channel,
            direction: Direction::Response,
            method: request.method,
            endpoint,
            status: Some(reply.status),
            body: reply.body,
            tampered: false,
        });
        Reply { status: response.status.unwrap_or(500), body: response.body }
    }

    pub fn transcript(&self) -> Transcript {
        self.inner.lock().unwrap().transcript.clone()
    }

    pub fn record(&self, f: impl FnOnce(&mut Transcript)) {
        f(&mut self.inner.lock().unwrap().transcript);
    }
}

/// Paths only: enrollment URLs arrive absolute.
fn strip_origin(target: &str) -> &str {
    for scheme in ["http://", "https://"] {
        if let Some(rest) = target.strip_prefix(scheme) {
            return rest.find('/').map(|i| &rest[i..]).unwrap_or("/");
        }
    }
    target
}

/// One party's view of the network.
#[derive(Clone)]
pub struct Endpoint {
    net: SimNet,
    channel: Channel,
}

impl Endpoint {
    pub fn channel(&self) -> Channel {
        self.channel
    }
}

impl Transport for Endpoint {
    fn send(&self, method: &str, target: &str, body: &[u8]) -> Result<Reply, TransportError> {
        Ok(self.net.exchange(self.channel, method, target, body))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origins_are_stripped() {
        assert_eq!(strip_origin("https://example.org/enroll"), "/enroll");
        assert_eq!(strip_origin("http://127.0.0.1:9/x/y"), "/x/y");
        assert_eq!(strip_origin("https://example.org"), "/");
        assert_eq!(strip_origin("/login/init"), "/login/init");
    }
}
