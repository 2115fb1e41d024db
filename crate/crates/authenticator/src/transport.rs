//! How the authenticator reaches a server.

use std::time::Duration;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub status: u16,
    pub body: Vec<u8>,
}

/// The request never produced a reply. Worth retrying.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("transport failure: {0}")]
pub struct TransportError(pub String);

/// Sends a JSON request. `target` is either a path on the configured server
/// or an absolute URL (enrollment URLs come from the server payload).
pub trait Transport {
    fn send(&self, method: &str, target: &str, body: &[u8]) -> Result<Reply, TransportError>;

    fn post(&self, target: &str, body: &[u8]) -> Result<Reply, TransportError> {
        self.send("POST", target, body)
    }

    fn get(&self, target: &str) -> Result<Reply, TransportError> {
        self.send("GET", target, b"")
    }
}

impl<T: Transport + ?Sized> Transport for &T {
    fn send(&self, method: &str, target: &str, body: &[u8]) -> Result<Reply, TransportError> {
        (**self).send(method, target, body)
    }
}

/// Blocking HTTP client.
#[derive(Debug, Clone)]
pub struct HttpTransport {
    base: String,
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(base: impl Into<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(30)))
            .build()
            .into();
        Self { base: base.into().trim_end_matches('/').to_owned(), agent }
    }

    pub fn url(&self, target: &str) -> String {
        if target.starts_with("http://") || target.starts_with("https://") {
            target.to_owned()
        } else {
            format!("{}{}", self.base, target)
        }
    }
}

impl Transport for HttpTransport {
    fn send(&self, method: &str, target: &str, body: &[u8]) -> Result<Reply, TransportError> {
        let url = self.url(target);
        let result = match method {
            "GET" => self.agent.get(&url).call(),
            "POST" => self.agent.post(&url).header("content-type", "application/json").send(body),
            other => return Err(TransportError(format!("unsupported method {other}"))),
        };
        let mut response = result.map_err(|e| TransportError(e.to_string()))?;
        let status = response.status().as_u16();
        let body = response.body_mut().read_to_vec().map_err(|e| TransportError(e.to_string()))?;
        Ok(Reply { status, body })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_targets_join_the_base() {
        let t = HttpTransport::new("http://127.0.0.1:8080/");
        assert_eq!(t.url("/login/init"), "http://127.0.0.1:8080/login/init");
        assert_eq!(t.url("https://other.example/enroll"), "https://other.example/enroll");
    }
}
