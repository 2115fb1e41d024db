//! Acceptance checks. Each returns a named verdict with enough detail to
//! see how close it came.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, RngCore};
use zerotwo_auth::passphrase::Wordlist;
use zerotwo_auth::store::HEADER_LEN;
use zerotwo_auth::{generate_passphrase, KdfParams, PassphraseSpec, SecretStore, StoreError, UnlockCredential};
use zerotwo_core::golden::VectorFile;
use zerotwo_core::wire::{AuthzState, EnrollRequest, LoginCompleteRequest};
use zerotwo_core::{
    authorization_mac, client_premaster, client_respond, client_respond_with_ephemeral, compute_verifier, decode_int,
    derive_x, encode_int, fingerprint, frame, hash_digest, int_from_digest, int_from_hex, int_to_hex, login_proof,
    logout_mac, scrambler, server_begin_login, server_complete_login, server_premaster, session_key_from_premaster,
    GroupProfile, IdentityPair, MasterSecret, Nonce, SecretOrigin, ServerEphemeral,
};
use zerotwo_server::{AuthService, ManualClock, ServerConfig, ServiceError};

use crate::dictionary::{dictionary_attack, passphrase_guesses, weak_candidates};
use crate::leak;
use crate::scenarios::{execute, run_scenario, ScenarioOptions, SCENARIOS};
use crate::tape::Tape;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name, passed, detail: detail.into() }
    }

    /// `PASS name: detail`
    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn big(v: u32) -> BigUint {
    BigUint::from(v)
}

/// With `n = 23, g = 5, k = 3` and the injected `u = 7, x = 6, a = 5, b = 3`,
/// both sides reach `S = 11`, the value of `g^((a + u·x)·b mod 22) mod 23`.
pub fn toy_group_oracle() -> CheckResult {
    let start = Instant::now();
    let group = GroupProfile::toy();
    let (u, x, a, b) = (big(7), big(6), big(5), big(3));
    let v = group.pow_g(&x);
    let verifier = zerotwo_core::Verifier::from_value(v.clone(), &group).expect("8 is a valid verifier");
    let eph = ServerEphemeral::from_private(&verifier, &group, b.clone()).expect("B is non-zero");
    let a_pub = group.pow_g(&a);
    let client = client_premaster(&group, eph.public(), &x, &a, &u);
    let server = server_premaster(&group, &a_pub, &v, &u, &b);

    // Brute-force oracle: repeated multiplication, no modpow.
    let exponent = ((5 + 7 * 6) * 3) % 22;
    let oracle = (0..exponent).fold(1u64, |acc, _| acc * 5 % 23);
    let elapsed = start.elapsed();

    let detail = format!(
        "client S = {}, server S = {}, oracle = {oracle}, B = {}, A = {a_pub}, in {}",
        client.as_ref().map_or("error".into(), |s| s.to_string()),
        server.as_ref().map_or("error".into(), |s| s.to_string()),
        eph.public(),
        secs(elapsed),
    );
    let ok = oracle == 11
        && client.as_ref().ok() == Some(&big(11))
        && server.as_ref().ok() == Some(&big(11))
        && elapsed < Duration::from_secs(1);
    CheckResult::new("toy-group oracle equivalence", ok, detail)
}

/// 100 random logins in the 2048-bit group; client and server keys must match.
pub fn production_agreement(tape: Tape) -> CheckResult {
    let start = Instant::now();
    let group = GroupProfile::production();
    let mut rng = tape.stream("agreement");
    let mut failures = 0;
    for i in 0..100 {
        let id = IdentityPair::new(format!("user{i}"), "example.org").expect("valid identity");
        let p = generate_passphrase(&PassphraseSpec::default(), Wordlist::bundled(), &mut rng);
        let v = compute_verifier(&derive_x(&id, &p).expect("non-zero x"), &group).expect("valid verifier");
        let d = rng.gen_range(1..=86_400);
        let outcome = server_begin_login(&v, &group, &mut rng).and_then(|eph| {
            let b_pub = eph.public().clone();
            let response = client_respond(&id, &p, &b_pub, d, &group, &mut rng)?;
            let session =
                server_complete_login(&id, &v, eph, &response.client_public, &response.proof, d, &group, d, 0)?;
            Ok(session.key_bytes() == response.key())
        });
        if !matches!(outcome, Ok(true)) {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    CheckResult::new(
        "production-group agreement",
        failures == 0 && elapsed < Duration::from_secs(60),
        format!("100 runs, {failures} failures, {}", secs(elapsed)),
    )
}

fn service(group: &GroupProfile, clock: ManualClock, tape: &Tape, label: &str) -> AuthService {
    let mut config = ServerConfig::new("example.org", "https://example.org");
    config.demo = true;
    config.group = group.clone();
    config.login_rate_limit = u32::MAX;
    AuthService::new(config, std::sync::Arc::new(clock), Box::new(tape.stream(label))).expect("in-memory service")
}

fn enroll(service: &AuthService, id: &IdentityPair, p: &MasterSecret, group: &GroupProfile) {
    let v = compute_verifier(&derive_x(id, p).expect("non-zero x"), group).expect("valid verifier");
    service.signup_init(id.user()).expect("signup");
    service.enroll(&EnrollRequest { iu: id.user().into(), v: v.to_hex() }).expect("enroll");
}

/// One character of `text` replaced by a different one from `alphabet`.
fn substitute_char(text: &str, alphabet: &[u8], rng: &mut impl RngCore) -> String {
    let mut bytes = text.as_bytes().to_vec();
    let i = rng.gen_range(0..bytes.len());
    let mut c = bytes[i];
    while c == bytes[i] {
        c = alphabet[rng.gen_range(0..alphabet.len())];
    }
    bytes[i] = c;
    String::from_utf8(bytes).expect("ascii")
}

const ALNUM: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    P,
    Iu,
    Is,
    A,
    B,
    D,
}

pub const FIELDS: [Field; 6] = [Field::P, Field::Iu, Field::Is, Field::A, Field::B, Field::D];

/// Perturbs one field of an otherwise honest login and submits it. Returns
/// the service's verdict.
fn perturbed_login(
    service: &AuthService,
    id: &IdentityPair,
    p: &MasterSecret,
    group: &GroupProfile,
    field: Field,
    rng: &mut (impl RngCore + rand::CryptoRng),
) -> Result<(), ServiceError> {
    let challenge = service.login_init(id.user())?;
    let b_pub = int_from_hex(&challenge.b).expect("server sends hex");
    let d = 3600;
    let cap = service.config().session_cap;

    let mut client_id = id.clone();
    let mut client_p = MasterSecret::passphrase(p.as_text().expect("text secret"), SecretOrigin::Imported).expect("p");
    let mut client_b = b_pub.clone();
    match field {
        Field::P => {
            let text = substitute_char(p.as_text().expect("text secret"), ALNUM, rng);
            client_p = MasterSecret::passphrase(text, SecretOrigin::Imported).expect("non-empty");
        }
        Field::Iu => loop {
            if let Ok(other) = IdentityPair::new(substitute_char(id.user(), ALNUM, rng), id.server()) {
                client_id = other;
                break;
            }
        },
        Field::Is => loop {
            if let Ok(other) = IdentityPair::new(id.user(), substitute_char(id.server(), ALNUM, rng)) {
                client_id = other;
                break;
            }
        },
        Field::B => loop {
            let bit = rng.gen_range(0..group.n.bits());
            let flipped = &b_pub ^ (BigUint::from(1u32) << bit);
            if group.is_element(&flipped) {
                client_b = flipped;
                break;
            }
        },
        Field::A | Field::D => {}
    }
    let response = client_respond(&client_id, &client_p, &client_b, d, group, rng)
        .map_err(|_| ServiceError::BadRequest("client refused".into()))?;
    let mut a_pub = response.client_public.clone();
    let mut sent_d = d;
    match field {
        Field::A => loop {
            let bit = rng.gen_range(0..a_pub.bits().max(1));
            let flipped = &response.client_public ^ (BigUint::from(1u32) << bit);
            if group.is_element(&flipped) {
                a_pub = flipped;
                break;
            }
        },
        Field::D => {
            while sent_d == d {
                sent_d = rng.gen_range(1..=cap);
            }
        }
        _ => {}
    }
    service
        .login_complete(&LoginCompleteRequest {
            login_id: challenge.login_id,
            iu: id.user().into(),
            a: int_to_hex(&a_pub),
            m: response.proof_hex(),
            d: sent_d,
        })
        .map(|_| ())
}

/// At least 64 single-field perturbations per field; every one must be
/// refused with authentication-failed.
pub fn soundness(tape: Tape, per_field: usize) -> CheckResult {
    let group = GroupProfile::production();
    let service = service(&group, ManualClock::new(crate::world::START), &tape, "soundness-server");
    let mut rng = tape.stream("soundness");
    let id = IdentityPair::new("alice", "example.org").expect("valid identity");
    let p = generate_passphrase(&PassphraseSpec::default(), Wordlist::bundled(), &mut rng);
    let p = MasterSecret::passphrase(p.as_text().expect("text"), SecretOrigin::Imported).expect("p");
    enroll(&service, &id, &p, &group);

    let honest = perturbed_login_honest(&service, &id, &p, &group, &mut rng);
    let mut parts = vec![format!("honest login {}", if honest { "accepted" } else { "REFUSED" })];
    let mut ok = honest;
    for field in FIELDS {
        let mut refused = 0;
        let mut other = Vec::new();
        for _ in 0..per_field {
            match perturbed_login(&service, &id, &p, &group, field, &mut rng) {
                Err(ServiceError::AuthenticationFailed) => refused += 1,
                Ok(()) => other.push("ACCEPTED".to_owned()),
                Err(e) => other.push(e.code().to_owned()),
            }
        }
        ok &= refused == per_field && per_field >= 64;
        let false_accepts = other.iter().filter(|o| *o == "ACCEPTED").count();
        parts.push(format!("{field:?}: {refused}/{per_field} refused, {false_accepts} accepted"));
        if !other.is_empty() {
            parts.push(format!("unexpected {other:?}"));
        }
    }
    CheckResult::new("soundness suite", ok, parts.join("; "))
}

fn perturbed_login_honest(
    service: &AuthService,
    id: &IdentityPair,
    p: &MasterSecret,
    group: &GroupProfile,
    rng: &mut (impl RngCore + rand::CryptoRng),
) -> bool {
    let Ok(challenge) = service.login_init(id.user()) else { return false };
    let b_pub = int_from_hex(&challenge.b).expect("server sends hex");
    let Ok(response) = client_respond(id, p, &b_pub, 3600, group, rng) else { return false };
    service
        .login_complete(&LoginCompleteRequest {
            login_id: challenge.login_id,
            iu: id.user().into(),
            a: response.client_public_hex(),
            m: response.proof_hex(),
            d: 3600,
        })
        .is_ok()
}

/// Resent completion and confirmation are gone; a resent logout is
/// acknowledged again.
pub fn replay(tape: Tape) -> CheckResult {
    let options = ScenarioOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, step, want) in [
        ("replayed-completion", "replayed completion", "410 gone"),
        ("replayed-authz-nonce", "replayed confirmation", "410 gone"),
        ("logout-replay", "replayed logout is acknowledged", "204"),
    ] {
        let t = run_scenario(name, tape, &options).expect("shipped scenario");
        let got = t.outcomes.iter().find(|o| o.step == step).map(|o| o.actual.clone()).unwrap_or("missing".into());
        ok &= got == want && t.passed();
        parts.push(format!("{step}: {got}"));
    }
    CheckResult::new("replay suite", ok, parts.join("; "))
}

/// Runs every shipped scenario and searches all captured traffic for every
/// secret the devices computed.
pub fn zero_knowledge(tape: Tape, dictionary_trials: usize) -> CheckResult {
    let options = ScenarioOptions { dictionary_trials, ..ScenarioOptions::default() };
    let (mut messages, mut occurrences) = (0, 0);
    let mut kinds = [0usize; 4];
    for scenario in SCENARIOS {
        let run = execute(scenario.name, tape, &options).expect("shipped scenario");
        messages += run.transcript.messages.len();
        occurrences += leak::scan(&run.transcript, &run.secrets).len();
        for (kind, _) in &run.secrets {
            kinds[*kind as usize] += 1;
        }
    }
    CheckResult::new(
        "zero-knowledge transcripts",
        occurrences == 0 && kinds.iter().all(|&k| k > 0),
        format!(
            "{} scenarios, {messages} messages, secrets p {} / x {} / S {} / K {}, {occurrences} occurrences",
            SCENARIOS.len(),
            kinds[0],
            kinds[1],
            kinds[2],
            kinds[3]
        ),
    )
}

fn login_with_key(
    service: &AuthService,
    id: &IdentityPair,
    p: &MasterSecret,
    d: u64,
    rng: &mut (impl RngCore + rand::CryptoRng),
) -> (String, zerotwo_core::Digest) {
    let group = &service.config().group;
    let challenge = service.login_init(id.user()).expect("login init");
    let b_pub = int_from_hex(&challenge.b).expect("hex");
    let response = client_respond(id, p, &b_pub, d, group, rng).expect("client responds");
    let done = service
        .login_complete(&LoginCompleteRequest {
            login_id: challenge.login_id,
            iu: id.user().into(),
            a: response.client_public_hex(),
            m: response.proof_hex(),
            d,
        })
        .expect("honest login");
    (done.session_id, *response.key())
}

/// Server verdict on an authorization MAC presented at `at`, for a
/// challenge issued at `issued`.
fn authorize_at(
    service: &AuthService,
    clock: &ManualClock,
    sid: &str,
    key: &zerotwo_core::Digest,
    issued: u64,
    at: u64,
) -> String {
    clock.set(issued);
    let ch = match service.request_authorization(sid, "expiry probe") {
        Ok(ch) => ch,
        Err(e) => return format!("request {}", e.code()),
    };
    let nonce: Nonce = hex::decode(&ch.c).expect("hex").try_into().expect("16 bytes");
    let mac = authorization_mac(key, &ch.o, &nonce);
    clock.set(at);
    match service.confirm_authorization(&ch.auth_id, &hex::encode(mac)) {
        Ok(()) => match service.authorization_status(&ch.auth_id) {
            Ok(AuthzState::Confirmed) => "confirmed".into(),
            other => format!("{other:?}"),
        },
        Err(e) => e.code().into(),
    }
}

/// Sessions of 1, 60 and 3600 s accept MACs up to one second before
/// expiry and refuse them at and after it, on both sides.
pub fn expiry(tape: Tape) -> CheckResult {
    let group = GroupProfile::production();
    let start = crate::world::START;
    let clock = ManualClock::new(start);
    let service = service(&group, clock.clone(), &tape, "expiry-server");
    let mut rng = tape.stream("expiry");
    let id = IdentityPair::new("alice", "example.org").expect("valid identity");
    let p = MasterSecret::passphrase("tidy-ocean-lunar-maple-ivory-drum", SecretOrigin::Imported).expect("p");
    enroll(&service, &id, &p, &group);

    let mut ok = true;
    let mut parts = Vec::new();
    for d in [1u64, 60, 3600] {
        clock.set(start);
        let (sid, key) = login_with_key(&service, &id, &p, d, &mut rng);
        let t_exp = start + d;
        let session = zerotwo_core::SessionKey::new(key, start, d);
        let before = authorize_at(&service, &clock, &sid, &key, t_exp - 1, t_exp - 1);
        let issued_late = authorize_at(&service, &clock, &sid, &key, t_exp - 1, t_exp);
        let at = authorize_at(&service, &clock, &sid, &key, t_exp, t_exp);
        let after = authorize_at(&service, &clock, &sid, &key, t_exp + 1, t_exp + 1);
        let client =
            (session.authorize(t_exp - 1, "o", &[0; 16]).is_ok(), session.authorize(t_exp, "o", &[0; 16]).is_ok());
        let pass = before == "confirmed"
            && issued_late == "session-expired"
            && at == "request session-expired"
            && after == "request session-expired"
            && client == (true, false)
            && session.expires_at() == t_exp;
        ok &= pass;
        parts.push(format!(
            "d={d}: t-1 {before}, issued t-1 used t {issued_late}, t {at}, t+1 {after}, client {}/{}",
            if client.0 { "signs" } else { "refuses" },
            if client.1 { "signs" } else { "refuses" },
        ));
    }
    CheckResult::new("session expiry", ok, parts.join("; "))
}

/// A weak secret falls to a 10^4 list within 30 s; a generated six-word
/// passphrase survives 10^6 guesses.
pub fn dictionary(tape: Tape, trials: usize) -> CheckResult {
    let group = GroupProfile::production();
    let id = IdentityPair::new("alice", "example.org").expect("valid identity");
    let verifier_of = |p: &MasterSecret| compute_verifier(&derive_x(&id, p).expect("x"), &group).expect("v");

    let weak = MasterSecret::passphrase("password123", SecretOrigin::Imported).expect("p");
    let list = weak_candidates(10_000);
    let weak_report = dictionary_attack(&verifier_of(&weak), &id, &list, &group);
    // The list is ordered by popularity, so the hit comes early; time a
    // full pass too, against a secret that is not on it.
    let absent = MasterSecret::passphrase("not on any list 8d1f", SecretOrigin::Imported).expect("p");
    let full_pass = dictionary_attack(&verifier_of(&absent), &id, &list, &group);

    let mut rng = tape.stream("dictionary-victim");
    let strong = generate_passphrase(&PassphraseSpec::default(), Wordlist::bundled(), &mut rng);
    let strong_report = dictionary_attack(
        &verifier_of(&strong),
        &id,
        passphrase_guesses(tape.stream("dictionary-attacker"), trials),
        &group,
    );

    let ok = weak_report.recovered.as_deref() == Some("password123")
        && weak_report.elapsed < Duration::from_secs(30)
        && full_pass.recovered.is_none()
        && full_pass.elapsed < Duration::from_secs(30)
        && strong_report.recovered.is_none()
        && strong_report.tried == trials
        && trials >= 1_000_000;
    CheckResult::new(
        "dictionary demonstration",
        ok,
        format!(
            "weak: {:?} after {} of {} candidates in {} (full pass {}); generated: {} after {} guesses in {}",
            weak_report.recovered.as_deref().unwrap_or("none"),
            weak_report.tried,
            list.len(),
            secs(weak_report.elapsed),
            secs(full_pass.elapsed),
            if strong_report.recovered.is_some() { "RECOVERED" } else { "not recovered" },
            strong_report.tried,
            secs(strong_report.elapsed),
        ),
    )
}

/// A wrong unlock password and each of 256 single-bit ciphertext flips must
/// all fail authenticated decryption.
pub fn store_security(tape: Tape) -> CheckResult {
    let mut rng = tape.stream("store");
    let right = UnlockCredential::password("correct pin 4711");
    let mut store = SecretStore::in_memory(&right, KdfParams::fast(), &mut rng).expect("store");
    let p = generate_passphrase(&PassphraseSpec::default(), Wordlist::bundled(), &mut rng);
    store.vault.add_secret(&p);
    let sealed = store.seal(&mut rng);

    let intact = SecretStore::unseal(&sealed, &right).is_ok();
    let wrong = SecretStore::unseal(&sealed, &UnlockCredential::password("correct pin 4712"));
    let wrong_refused = matches!(wrong, Err(StoreError::UnlockFailed));

    let body_bits = (sealed.len() - HEADER_LEN) * 8;
    let mut false_unlocks = 0;
    let mut other_errors = 0;
    for i in 0..256 {
        let bit = i * body_bits / 256;
        let mut flipped = sealed.clone();
        flipped[HEADER_LEN + bit / 8] ^= 1 << (bit % 8);
        match SecretStore::unseal(&flipped, &right) {
            Ok(_) => false_unlocks += 1,
            Err(StoreError::UnlockFailed) => {}
            Err(_) => other_errors += 1,
        }
    }
    CheckResult::new(
        "store security",
        intact && wrong_refused && false_unlocks == 0 && other_errors == 0,
        format!(
            "right password {}, wrong password {}, 256 flips over {} ciphertext bits: {false_unlocks} unlocked, {other_errors} other errors",
            if intact { "unlocks" } else { "FAILS" },
            if wrong_refused { "refused" } else { "NOT refused" },
            body_bits,
        ),
    )
}

const GOLDEN: &str = include_str!("../../core/tests/data/golden.txt");

/// Recomputes every vector in the oracle's file from the library.
pub fn recompute_golden(oracle: &VectorFile) -> VectorFile {
    let get = |name: &str| oracle.get(name).map(decode_int).unwrap_or_default();
    let alice = IdentityPair::new("alice", "example.org").expect("valid identity");
    let staple = MasterSecret::passphrase("correct horse battery staple", SecretOrigin::Imported).expect("p");
    let prod = GroupProfile::production();
    let toy = GroupProfile::toy();
    let mut out = VectorFile::default();

    out.insert("frame_empty", frame(&[]).expect("small"));
    out.insert("frame_ab", frame(&[0xab]).expect("small"));
    out.insert("hash_no_parts", hash_digest(&[]).expect("small").to_vec());
    out.insert("hash_one_empty_part", hash_digest(&[b""]).expect("small").to_vec());
    let (e23, e5) = (encode_int(&BigUint::from(23u32)), encode_int(&BigUint::from(5u32)));
    out.insert("hash_enc23_enc5", hash_digest(&[&e23, &e5]).expect("small").to_vec());
    let derived = GroupProfile::new("toy-derived", toy.n.clone(), toy.g.clone()).expect("toy shape");
    out.insert("toy_derived_k", encode_int(&derived.k));
    out.insert("toy_l", toy.l.to_vec());
    out.insert("prod_k", encode_int(&prod.k));
    out.insert("prod_l", prod.l.to_vec());
    let (n_enc, g_enc) = (encode_int(&prod.n), encode_int(&prod.g));
    out.insert("prod_k_swapped", encode_int(&int_from_digest(&hash_digest(&[&g_enc, &n_enc]).expect("fits"))));

    let x = derive_x(&alice, &staple).expect("x");
    out.insert("x_alice_example_org", encode_int(x.value()));
    for (server, name) in [("a.example", "x_alice_a_example"), ("b.example", "x_alice_b_example")] {
        let id = IdentityPair::new("alice", server).expect("valid identity");
        out.insert(name, encode_int(derive_x(&id, &staple).expect("x").value()));
    }
    let v = compute_verifier(&x, &prod).expect("v");
    out.insert("v_alice_example_org_prod", v.to_bytes());

    let key = [0x0b; 32];
    out.insert("mac_authorize_0b_transfer_100", authorization_mac(&key, "transfer 100", &[0x01; 16]).to_vec());
    out.insert("mac_logout_0b", logout_mac(&key).to_vec());
    out.insert(
        "fingerprint_alice_example_org_b11",
        fingerprint(&alice, &BigUint::from(11u32)).as_str().as_bytes().to_vec(),
    );

    let toy_key = session_key_from_premaster(&BigUint::from(11u32));
    out.insert("toy_session_key", toy_key.to_vec());
    out.insert(
        "toy_login_proof",
        login_proof(&toy_key, &toy, &alice, &BigUint::from(20u32), &BigUint::from(11u32), 3600).to_vec(),
    );

    let (a, b) = (get("prod_e2e_a"), get("prod_e2e_b"));
    out.insert("prod_e2e_a", encode_int(&a));
    out.insert("prod_e2e_b", encode_int(&b));
    if let Ok(eph) = ServerEphemeral::from_private(&v, &prod, b) {
        let b_pub = eph.public().clone();
        out.insert("prod_e2e_B", encode_int(&b_pub));
        if let Ok(r) = client_respond_with_ephemeral(&alice, &staple, &b_pub, 28_800, &prod, a) {
            out.insert("prod_e2e_A", encode_int(&r.client_public));
            out.insert("prod_e2e_u", encode_int(&scrambler(&r.client_public, &b_pub)));
            out.insert("prod_e2e_S", encode_int(r.premaster()));
            out.insert("prod_e2e_K", r.key().to_vec());
            out.insert("prod_e2e_M", r.proof.to_vec());
        }
    }
    out
}

/// Byte-exact agreement with every vector the independent oracle produced.
pub fn golden_vectors() -> CheckResult {
    let oracle = VectorFile::parse(GOLDEN).expect("golden file parses");
    let ours = recompute_golden(&oracle);
    let mut mismatched = Vec::new();
    for name in oracle.names() {
        if ours.get(name) != oracle.get(name) {
            mismatched.push(name.to_owned());
        }
    }
    let uncovered = ours.names().filter(|n| oracle.get(n).is_none()).count();
    CheckResult::new(
        "golden vectors",
        mismatched.is_empty() && uncovered == 0 && !oracle.is_empty(),
        if mismatched.is_empty() {
            format!("{} of {} vectors match", oracle.len(), oracle.len())
        } else {
            format!("mismatched: {}", mismatched.join(", "))
        },
    )
}

/// Settings for [`run_all`].
#[derive(Debug, Clone)]
pub struct AcceptanceConfig {
    pub tape: Tape,
    pub soundness_per_field: usize,
    pub dictionary_trials: usize,
    /// Guesses made by the dictionary scenario inside the transcript sweep.
    pub sweep_dictionary_trials: usize,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        Self {
            tape: Tape::default(),
            soundness_per_field: 64,
            dictionary_trials: 1_000_000,
            sweep_dictionary_trials: 10_000,
        }
    }
}

pub fn run_all(config: &AcceptanceConfig) -> Vec<CheckResult> {
    vec![
        toy_group_oracle(),
        production_agreement(config.tape),
        soundness(config.tape, config.soundness_per_field),
        replay(config.tape),
        zero_knowledge(config.tape, config.sweep_dictionary_trials),
        expiry(config.tape),
        dictionary(config.tape, config.dictionary_trials),
        store_security(config.tape),
        golden_vectors(),
    ]
}
