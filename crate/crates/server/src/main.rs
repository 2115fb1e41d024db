use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::Parser;
use rand::rngs::OsRng;
use tracing_subscriber::EnvFilter;
use zerotwo_core::GroupProfile;
use zerotwo_server::{http, AuthService, ServerConfig, SystemClock, DEFAULT_SESSION_CAP};

/// ZeroTwo reference authentication server.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Address to listen on.
    #[arg(long, env = "ZEROTWO_LISTEN", default_value = "127.0.0.1:8080")]
    listen: SocketAddr,
    /// Server identifier `is` (normally the domain name).
    #[arg(long, env = "ZEROTWO_DOMAIN", default_value = "localhost")]
    domain: String,
    /// JSON store for users and sessions. Omit to keep state in memory.
    #[arg(long, env = "ZEROTWO_STORE_PATH")]
    store_path: Option<PathBuf>,
    /// Longest session a client may request.
    #[arg(long, env = "ZEROTWO_SESSION_CAP_SECONDS", default_value_t = DEFAULT_SESSION_CAP)]
    session_cap_seconds: u64,
    /// Auto-pass email verification at enrollment.
    #[arg(long, env = "ZEROTWO_DEMO")]
    demo: bool,
    /// Base URL advertised in enrollment payloads. Defaults to http://<listen>.
    #[arg(long, env = "ZEROTWO_PUBLIC_URL")]
    public_url: Option<String>,
    /// Directory of static files served under /app.
    #[arg(long, env = "ZEROTWO_APP_DIR")]
    app_dir: Option<PathBuf>,
    /// Group profile name.
    #[arg(long, env = "ZEROTWO_GROUP", default_value = zerotwo_core::group::PRODUCTION)]
    group: String,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .init();
    let args = Args::parse();

    let Some(group) = GroupProfile::by_name(&args.group) else {
        bail!("unknown group {:?}", args.group);
    };
    let public_url = args.public_url.unwrap_or_else(|| format!("http://{}", args.listen));
    let mut config = ServerConfig::new(args.domain, public_url);
    config.session_cap = args.session_cap_seconds;
    config.demo = args.demo;
    config.store_path = args.store_path;
    config.group = group;

    let service = AuthService::new(config, Arc::new(SystemClock), Box::new(OsRng)).context("loading the store")?;
    let service = Arc::new(service);
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
        tracing::info!("shutting down");
    };
    http::serve(service, args.listen, args.app_dir, shutdown, |addr| {
        tracing::info!(%addr, "listening");
    })
    .await
    .context("serving")
}
