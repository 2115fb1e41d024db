//! Request routing independent of any HTTP stack.
//!
//! [`handle`] maps a method, path and body to a status and JSON body. The
//! axum front end and the in-process simulation both call it, so they
//! exercise exactly the same surface.

use serde::de::DeserializeOwned;
use serde::Serialize;
use zerotwo_core::wire::{
    self, AuthzConfirm, AuthzPending, AuthzRequest, AuthzStatus, EnrollRequest, ErrorBody, LoginCompleteRequest,
    LoginInitRequest, LogoutRequest, SignupRequest,
};

use crate::service::{AuthService, ServiceError, ServiceResult};

/// Largest request body accepted.
pub const MAX_BODY: usize = 64 * 1024;

/// Browser-token lookup; not part of the protocol, used by the demo page.
pub const SESSION: &str = "/session";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiResponse {
    pub status: u16,
    /// JSON text, empty for 204.
    pub body: Vec<u8>,
}

impl ApiResponse {
    fn json<T: Serialize>(status: u16, value: &T) -> Self {
        let body = serde_json::to_vec(value).expect("response types serialize");
        Self { status, body }
    }

    fn no_content() -> Self {
        Self { status: 204, body: Vec::new() }
    }

    pub fn is_success(&self) -> bool {
        (200..300).contains(&self.status)
    }

    /// Parses the body as `T`.
    pub fn parse<T: DeserializeOwned>(&self) -> serde_json::Result<T> {
        serde_json::from_slice(&self.body)
    }

    /// The `error` code of a failure body, if there is one.
    pub fn error_code(&self) -> Option<String> {
        self.parse::<ErrorBody>().ok().map(|e| e.error)
    }
}

pub fn status_of(err: &ServiceError) -> u16 {
    match err {
        ServiceError::BadRequest(_) => 400,
        ServiceError::AuthenticationFailed | ServiceError::Denied => 401,
        ServiceError::NotFound(_) => 404,
        ServiceError::Conflict(_) => 409,
        ServiceError::Gone(_) => 410,
        ServiceError::DurationRejected { .. } => 422,
        ServiceError::Throttled => 429,
        ServiceError::SessionExpired => 440,
        ServiceError::Internal(_) => 500,
    }
}

fn error_response(err: &ServiceError) -> ApiResponse {
    if let ServiceError::Internal(detail) = err {
        tracing::error!(%detail, "internal error");
    }
    ApiResponse::json(status_of(err), &ErrorBody { error: err.code().to_owned(), message: err.to_string() })
}

fn parse<T: DeserializeOwned>(body: &[u8]) -> ServiceResult<T> {
    serde_json::from_slice(body).map_err(|e| ServiceError::BadRequest(e.to_string()))
}

fn respond<T: Serialize>(result: ServiceResult<T>) -> ApiResponse {
    match result {
        Ok(value) => ApiResponse::json(200, &value),
        Err(e) => error_response(&e),
    }
}

fn acknowledge(result: ServiceResult<()>) -> ApiResponse {
    match result {
        Ok(()) => ApiResponse::no_content(),
        Err(e) => error_response(&e),
    }
}

/// `prefix/{id}` with a single non-empty segment.
fn path_param<'a>(path: &'a str, prefix: &str) -> Option<&'a str> {
    let rest = path.strip_prefix(prefix)?.strip_prefix('/')?;
    (!rest.is_empty() && !rest.contains('/')).then_some(rest)
}

pub fn handle(service: &AuthService, method: &str, path: &str, body: &[u8]) -> ApiResponse {
    if body.len() > MAX_BODY {
        return error_response(&ServiceError::BadRequest("request body too large".into()));
    }
    let path = path.split('?').next().unwrap_or_default();
    match method {
        "POST" => match path {
            wire::SIGNUP => respond(parse::<SignupRequest>(body).and_then(|r| service.signup_init(&r.iu))),
            wire::ENROLL => acknowledge(parse::<EnrollRequest>(body).and_then(|r| service.enroll(&r))),
            wire::LOGIN_INIT => respond(parse::<LoginInitRequest>(body).and_then(|r| service.login_init(&r.iu))),
            wire::LOGIN_COMPLETE => {
                respond(parse::<LoginCompleteRequest>(body).and_then(|r| service.login_complete(&r)))
            }
            wire::AUTHZ_REQUEST => {
                respond(parse::<AuthzRequest>(body).and_then(|r| service.request_authorization(&r.session_id, &r.o)))
            }
            wire::AUTHZ_CONFIRM => {
                acknowledge(parse::<AuthzConfirm>(body).and_then(|r| service.confirm_authorization(&r.auth_id, &r.m)))
            }
            wire::LOGOUT => acknowledge(parse::<LogoutRequest>(body).and_then(|r| service.logout(&r.session_id, &r.m))),
            _ => error_response(&ServiceError::NotFound("route")),
        },
        "GET" => {
            if let Some(id) = path_param(path, wire::LOGIN_STATUS) {
                respond(service.login_status(id))
            } else if let Some(id) = path_param(path, wire::LOGIN_CHALLENGE) {
                respond(service.login_challenge(id))
            } else if let Some(id) = path_param(path, wire::AUTHZ_STATUS) {
                respond(service.authorization_status(id).map(|state| AuthzStatus { state }))
            } else if let Some(id) = path_param(path, wire::AUTHZ_PENDING) {
                respond(service.pending_authorizations(id).map(|pending| AuthzPending { pending }))
            } else if let Some(token) = path_param(path, SESSION) {
                respond(service.session_by_token(token))
            } else {
                error_response(&ServiceError::NotFound("route"))
            }
        }
        _ => error_response(&ServiceError::NotFound("route")),
    }
}
