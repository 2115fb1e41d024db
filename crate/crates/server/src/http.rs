//! axum front end.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::{Body, Bytes};
use axum::extract::State;
use axum::http::{header, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Redirect, Response};
use axum::routing::get;
use axum::Router;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

use crate::api::{self, ApiResponse};
use crate::service::AuthService;

pub const SWEEP_INTERVAL: Duration = Duration::from_secs(30);

async fn dispatch(State(service): State<Arc<AuthService>>, method: Method, uri: Uri, body: Bytes) -> Response {
    let path = uri.path().to_owned();
    let method_name = method.as_str().to_owned();
    let worker = Arc::clone(&service);
    // Group arithmetic takes milliseconds; keep it off the async workers.
    let result = tokio::task::spawn_blocking(move || api::handle(&worker, &method_name, &path, &body)).await;
    let reply = result.unwrap_or_else(|e| {
        tracing::error!(error = %e, "request handler panicked");
        ApiResponse { status: 500, body: br#"{"error":"internal","message":"handler failed"}"#.to_vec() }
    });
    tracing::debug!(%method, path = uri.path(), status = reply.status, "request");
    into_response(reply)
}

fn into_response(reply: ApiResponse) -> Response {
    let status = StatusCode::from_u16(reply.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    if reply.body.is_empty() {
        return status.into_response();
    }
    Response::builder()
        .status(status)
        .header(header::CONTENT_TYPE, "application/json")
        .header(header::CACHE_CONTROL, "no-store")
        .body(Body::from(reply.body))
        .unwrap_or_else(|_| StatusCode::INTERNAL_SERVER_ERROR.into_response())
}

/// All protocol routes, plus the static demo app under `/app` when a
/// directory is given.
pub fn router(service: Arc<AuthService>, app_dir: Option<PathBuf>) -> Router {
    let mut router = Router::new();
    if let Some(dir) = app_dir {
        router = router
            .route("/", get(|| async { Redirect::temporary("/app/") }))
            .nest_service("/app", ServeDir::new(dir).append_index_html_on_directories(true));
    }
    router.fallback(dispatch).with_state(service)
}

/// Periodically marks stale logins, challenges and sessions as expired.
pub fn spawn_sweeper(service: Arc<AuthService>, every: Duration) -> tokio::task::JoinHandle<()> {
    tokio::spawn(async move {
        let mut ticker = tokio::time::interval(every);
        ticker.tick().await;
        loop {
            ticker.tick().await;
            let svc = Arc::clone(&service);
            match tokio::task::spawn_blocking(move || svc.sweep_expired(svc.now())).await {
                Ok(Ok(n)) if n > 0 => tracing::info!(expired = n, "sweep"),
                Ok(Ok(_)) => {}
                Ok(Err(e)) => tracing::warn!(error = %e, "sweep failed"),
                Err(e) => tracing::warn!(error = %e, "sweep task failed"),
            }
        }
    })
}

/// Binds and serves until `shutdown` resolves. Returns the bound address
/// through `on_bound` so callers can use port 0.
pub async fn serve(
    service: Arc<AuthService>,
    listen: SocketAddr,
    app_dir: Option<PathBuf>,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
    on_bound: impl FnOnce(SocketAddr),
) -> std::io::Result<()> {
    let listener = TcpListener::bind(listen).await?;
    on_bound(listener.local_addr()?);
    let sweeper = spawn_sweeper(Arc::clone(&service), SWEEP_INTERVAL);
    let result = axum::serve(listener, router(service, app_dir)).with_graceful_shutdown(shutdown).await;
    sweeper.abort();
    result
}
