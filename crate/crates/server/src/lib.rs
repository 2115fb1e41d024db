//! Reference ZeroTwo authentication service.
//!
//! [`AuthService`] holds the state machine: enrollment, two-channel login,
//! explicit authorization, logout, expiry. [`api::handle`] exposes it as
//! JSON over method and path; [`http`] puts that behind axum.
//!
//! ```
//! use std::sync::Arc;
//! use rand::rngs::OsRng;
//! use zerotwo_server::{api, AuthService, ManualClock, ServerConfig};
//!
//! let config = ServerConfig::new("example.org", "https://example.org");
//! let service = AuthService::new(config, Arc::new(ManualClock::new(0)), Box::new(OsRng)).unwrap();
//! let reply = api::handle(&service, "POST", "/signup", br#"{"iu":"alice"}"#);
//! assert_eq!(reply.status, 200);
//! ```

pub mod api;
pub mod clock;
pub mod config;
pub mod http;
pub mod model;
pub mod persist;
pub mod service;

pub use clock::{Clock, ManualClock, SystemClock};
pub use config::{ServerConfig, DEFAULT_PENDING_WINDOW, DEFAULT_SESSION_CAP};
pub use service::{AuthService, ServiceError, ServiceResult, SessionView};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/server.md")]
    struct Server;
}
