use std::path::PathBuf;

use zerotwo_core::GroupProfile;

pub const DEFAULT_SESSION_CAP: u64 = 30 * 24 * 3600;
pub const DEFAULT_PENDING_WINDOW: u64 = 120;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    /// The server identifier `is`.
    pub domain: String,
    /// Base URL the authenticator and browser use to reach this server.
    pub public_url: String,
    /// Longest session a client may request, in seconds.
    pub session_cap: u64,
    /// Lifetime of pending logins and authorization challenges, in seconds.
    pub pending_window: u64,
    /// `login/init` calls allowed per identifier per rate window.
    pub login_rate_limit: u32,
    pub rate_window: u64,
    /// Treat email ownership as verified at enrollment.
    pub demo: bool,
    /// JSON document holding users and sessions; `None` keeps state in memory.
    pub store_path: Option<PathBuf>,
    pub group: GroupProfile,
}

impl ServerConfig {
    pub fn new(domain: impl Into<String>, public_url: impl Into<String>) -> Self {
        Self {
            domain: domain.into(),
            public_url: public_url.into().trim_end_matches('/').to_owned(),
            session_cap: DEFAULT_SESSION_CAP,
            pending_window: DEFAULT_PENDING_WINDOW,
            login_rate_limit: 10,
            rate_window: 60,
            demo: false,
            store_path: None,
            group: GroupProfile::production(),
        }
    }

    pub fn enroll_url(&self) -> String {
        format!("{}/enroll", self.public_url)
    }

    pub fn redirect_url(&self) -> String {
        format!("{}/app/#account", self.public_url)
    }
}
