use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::rngs::OsRng;
use zerotwo_auth::{
    generate_passphrase, parse_login_payload, system_now, Authenticator, Confirmer, HttpTransport, KdfParams,
    PassphraseSpec, ScriptedConfirmer, SecretStore, TerminalConfirmer, UnlockCredential, Wordlist, DEFAULT_DURATION,
};
use zerotwo_core::{GroupProfile, MasterSecret, SecretOrigin};

/// Smartphone-role ZeroTwo authenticator.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// Encrypted store file.
    #[arg(long, global = true, env = "ZEROTWO_AUTH_STORE", default_value = "zerotwo-auth.zt")]
    store: PathBuf,
    /// Server base URL for login, authorization and logout calls.
    #[arg(long, global = true, env = "ZEROTWO_SERVER", default_value = "http://127.0.0.1:8080")]
    server: String,
    /// Session length requested when approving a login.
    #[arg(long, global = true, default_value_t = DEFAULT_DURATION)]
    duration_seconds: u64,
    /// Approve every prompt without asking.
    #[arg(long, global = true)]
    yes: bool,
    /// Environment variable holding the store's unlock password. Without
    /// it the password is read from the first line of stdin.
    #[arg(long, global = true)]
    unlock_password_env: Option<String>,
    /// Group profile name.
    #[arg(long, global = true, default_value = zerotwo_core::group::PRODUCTION)]
    group: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Create an empty store.
    Init {
        /// Cheap KDF parameters, for throwaway stores.
        #[arg(long)]
        fast_kdf: bool,
    },
    /// Generate a passphrase and print it once.
    Passphrase {
        #[arg(long, default_value_t = 6)]
        words: usize,
        /// Also keep it in the store as a master secret.
        #[arg(long)]
        save: bool,
    },
    /// Store a master secret read from an environment variable.
    ImportSecret {
        #[arg(long)]
        env: String,
    },
    #[command(subcommand)]
    Accounts(AccountsCommand),
    /// Enroll from an enrollment payload.
    Enroll {
        /// Payload file, or - for stdin.
        #[arg(long)]
        payload: String,
        #[arg(long)]
        label: Option<String>,
        #[arg(long, default_value_t = 0)]
        secret: u32,
    },
    /// Approve a pending login.
    Approve(ApproveArgs),
    #[command(subcommand)]
    Authz(AuthzCommand),
    /// End a session remotely.
    Logout { session: String },
    /// List sessions held on this device.
    Sessions,
    /// Copy the encrypted store to a backup file.
    Export { dest: PathBuf },
}

#[derive(Debug, Subcommand)]
enum AccountsCommand {
    Add {
        #[arg(long)]
        label: String,
        #[arg(long)]
        iu: String,
        #[arg(long)]
        is: String,
        #[arg(long, default_value_t = 0)]
        secret: u32,
    },
    List,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ApproveArgs {
    /// Login id to fetch from the server.
    #[arg(long)]
    login: Option<String>,
    /// Login payload file, or - for stdin.
    #[arg(long)]
    payload: Option<String>,
}

#[derive(Debug, Subcommand)]
enum AuthzCommand {
    /// Show open authorization requests.
    List {
        /// Session to query; defaults to every session on the device.
        #[arg(long)]
        session: Option<String>,
    },
    /// Answer one authorization request.
    Confirm {
        auth_id: String,
        #[arg(long)]
        session: Option<String>,
    },
}

fn read_text(source: &str) -> Result<String> {
    if source == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(source).with_context(|| format!("reading {source}"))
    }
}

fn credential(cli: &Cli) -> Result<UnlockCredential> {
    if let Some(var) = &cli.unlock_password_env {
        let pw = std::env::var(var).with_context(|| format!("{var} is not set"))?;
        return Ok(UnlockCredential::password(pw));
    }
    let mut line = String::new();
    eprint!("Store password: ");
    io::stdin().read_line(&mut line)?;
    Ok(UnlockCredential::password(line.trim_end_matches(['\r', '\n'])))
}

fn open(cli: &Cli) -> Result<Authenticator<HttpTransport>> {
    let store = SecretStore::open(&cli.store, &credential(cli)?).context("opening the store")?;
    let Some(group) = GroupProfile::by_name(&cli.group) else { bail!("unknown group {:?}", cli.group) };
    Ok(Authenticator::new(store, HttpTransport::new(&cli.server), group, system_now(), Box::new(OsRng)))
}

fn confirmer(cli: &Cli) -> Box<dyn Confirmer> {
    if cli.yes {
        Box::new(ScriptedConfirmer::always(true))
    } else {
        Box::new(TerminalConfirmer::stdio())
    }
}

fn create(path: &Path, cred: &UnlockCredential, fast: bool) -> Result<()> {
    let params = if fast { KdfParams::fast() } else { KdfParams::hardened() };
    SecretStore::create(path, cred, params, &mut OsRng).context("creating the store")?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Init { fast_kdf } => {
            create(&cli.store, &credential(&cli)?, *fast_kdf)?;
            println!("created {}", cli.store.display());
        }
        Command::Passphrase { words, save } => {
            let spec = PassphraseSpec { word_count: *words, ..PassphraseSpec::default() };
            if *save {
                let mut auth = open(&cli)?;
                let (id, secret) = auth.generate_secret(&spec)?;
                println!("{}", secret.as_text().unwrap_or_default());
                eprintln!("stored as secret {id}");
            } else {
                let secret = generate_passphrase(&spec, Wordlist::bundled(), &mut OsRng);
                println!("{}", secret.as_text().unwrap_or_default());
            }
            eprintln!("{:.1} bits of entropy", spec.entropy_bits());
        }
        Command::ImportSecret { env } => {
            let text = std::env::var(env).with_context(|| format!("{env} is not set"))?;
            let secret = MasterSecret::passphrase(text, SecretOrigin::Imported)?;
            let id = open(&cli)?.add_secret(&secret)?;
            println!("stored as secret {id}");
        }
        Command::Accounts(AccountsCommand::Add { label, iu, is, secret }) => {
            open(&cli)?.add_account(label, iu, is, *secret)?;
            println!("added {iu} at {is}");
        }
        Command::Accounts(AccountsCommand::List) => {
            for a in open(&cli)?.accounts() {
                let state = if a.enrolled { "enrolled" } else { "not enrolled" };
                println!("{}\t{}\t{}\tsecret {}\t{state}", a.label, a.iu, a.is, a.secret_id);
            }
        }
        Command::Enroll { payload, label, secret } => {
            let text = read_text(payload)?;
            let account = open(&cli)?.handle_enroll_payload(&text, label.as_deref(), *secret)?;
            println!("enrolled {} at {}", account.iu, account.is);
        }
        Command::Approve(args) => {
            let mut auth = open(&cli)?;
            let challenge = match (&args.login, &args.payload) {
                (Some(id), _) => auth.fetch_login(id)?,
                (None, Some(src)) => parse_login_payload(&read_text(src)?)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            let approval = auth.approve_login(&challenge, cli.duration_seconds, confirmer(&cli).as_mut())?;
            println!("session {} until {}", approval.session_id, approval.expires_at);
        }
        Command::Authz(AuthzCommand::List { session }) => {
            let auth = open(&cli)?;
            let ids: Vec<String> = match session {
                Some(s) => vec![s.clone()],
                None => auth.sessions().iter().map(|s| s.session_id.clone()).collect(),
            };
            for sid in ids {
                for ch in auth.pending_authorizations(&sid)? {
                    println!("{}\t{sid}\t{}", ch.auth_id, ch.o);
                }
            }
        }
        Command::Authz(AuthzCommand::Confirm { auth_id, session }) => {
            let mut auth = open(&cli)?;
            let ids: Vec<String> = match session {
                Some(s) => vec![s.clone()],
                None => auth.sessions().iter().map(|s| s.session_id.clone()).collect(),
            };
            let mut found = None;
            for sid in ids {
                if let Some(ch) = auth.pending_authorizations(&sid)?.into_iter().find(|c| &c.auth_id == auth_id) {
                    found = Some((sid, ch));
                    break;
                }
            }
            let Some((sid, challenge)) = found else { bail!("no pending authorization {auth_id}") };
            auth.confirm_authorization(&sid, &challenge, confirmer(&cli).as_mut())?;
            println!("confirmed {auth_id}");
        }
        Command::Logout { session } => {
            open(&cli)?.remote_logout(session)?;
            println!("logged out {session}");
        }
        Command::Sessions => {
            for s in open(&cli)?.sessions() {
                println!("{}\t{}\t{}\texpires {}", s.session_id, s.iu, s.is, s.expires_at());
            }
        }
        Command::Export { dest } => {
            let auth = open(&cli)?;
            let bytes = auth.store.export(dest)?;
            println!("wrote {bytes} bytes to {}", dest.display());
        }
    }
    Ok(())
}
