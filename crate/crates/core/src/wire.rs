//! JSON bodies exchanged between browser, authenticator, and server.
//!
//! Field names are part of the external interface. Integers travel as
//! lowercase hex of their minimal big-endian encoding; MACs and nonces as
//! plain lowercase hex; durations as integer seconds.

use serde::{Deserialize, Serialize};

pub const SIGNUP: &str = "/signup";
pub const ENROLL: &str = "/enroll";
pub const LOGIN_INIT: &str = "/login/init";
pub const LOGIN_COMPLETE: &str = "/login/complete";
pub const LOGIN_STATUS: &str = "/login/status";
pub const LOGIN_CHALLENGE: &str = "/login/challenge";
pub const AUTHZ_REQUEST: &str = "/authz/request";
pub const AUTHZ_CONFIRM: &str = "/authz/confirm";
pub const AUTHZ_STATUS: &str = "/authz/status";
pub const AUTHZ_PENDING: &str = "/authz/pending";
pub const LOGOUT: &str = "/logout";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignupRequest {
    pub iu: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignupResponse {
    pub iu: String,
    pub is: String,
    pub enroll_url: String,
    pub qr_payload: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnrollRequest {
    pub iu: String,
    pub v: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoginInitRequest {
    pub iu: String,
}

/// Sent identically to the browser and the authenticator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoginChallenge {
    pub login_id: String,
    pub iu: String,
    pub is: String,
    #[serde(rename = "B")]
    pub b: String,
    pub fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoginCompleteRequest {
    pub login_id: String,
    pub iu: String,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "M")]
    pub m: String,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoginCompleteResponse {
    pub session_id: String,
    pub browser_token: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoginState {
    Pending,
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoginStatus {
    pub state: LoginState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub browser_token: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redirect_url: Option<String>,
    /// Unix seconds at which the session ends.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expires_at: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuthzRequest {
    pub session_id: String,
    pub o: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthzChallenge {
    pub auth_id: String,
    pub o: String,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthzPending {
    pub pending: Vec<AuthzChallenge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuthzConfirm {
    pub auth_id: String,
    #[serde(rename = "M")]
    pub m: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuthzState {
    Pending,
    Confirmed,
    Denied,
    Expired,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthzStatus {
    pub state: AuthzState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogoutRequest {
    pub session_id: String,
    #[serde(rename = "M")]
    pub m: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}
