use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use zerotwo_core::{
    client_premaster, client_respond, compute_verifier, derive_x, server_begin_login, server_complete_login,
    server_premaster, BigUint, Error, GroupProfile, IdentityPair, MasterSecret, SecretOrigin, ServerEphemeral,
    Verifier,
};

const N: u64 = 23;
const G: u64 = 5;

// Repeated multiplication; shares nothing with BigUint::modpow.
fn brute_pow(base: u64, exp: u64) -> u64 {
    (0..exp).fold(1, |acc, _| acc * base % N)
}

fn toy_with_k(k: u64) -> GroupProfile {
    let toy = GroupProfile::toy();
    GroupProfile::with_injected("toy-k", toy.n, toy.g, k.into(), toy.l).unwrap()
}

#[test]
fn small_group_premasters_agree_over_grid() {
    let mut rng = ChaCha20Rng::seed_from_u64(23);
    let mut agreed = 0;
    let mut rejected = 0;
    while agreed < 500 {
        let k = rng.gen_range(0..N);
        let x = rng.gen_range(1..N - 1);
        let a = rng.gen_range(1..N - 1);
        let b = rng.gen_range(1..N - 1);
        let u = rng.gen_range(1..200u64);
        let group = toy_with_k(k);

        let v = brute_pow(G, x);
        let b_pub = (k * v + brute_pow(G, b)) % N;
        if b_pub == 0 || v == 1 {
            // Zero B must never yield a key on either side.
            if b_pub == 0 {
                let err = client_premaster(&group, &b_pub.into(), &x.into(), &a.into(), &u.into()).unwrap_err();
                assert!(matches!(err, Error::ProtocolViolation(_)));
                rejected += 1;
            }
            continue;
        }
        let a_pub = brute_pow(G, a);

        let s_client = client_premaster(&group, &b_pub.into(), &x.into(), &a.into(), &u.into()).unwrap();
        let s_server = server_premaster(&group, &a_pub.into(), &v.into(), &u.into(), &b.into()).unwrap();
        let expected = brute_pow(G, (a + u * x) * b % (N - 1));
        assert_eq!(s_client, BigUint::from(expected), "k={k} x={x} a={a} b={b} u={u}");
        assert_eq!(s_server, BigUint::from(expected));
        agreed += 1;
    }
    assert!(rejected > 0, "grid should include some B ≡ 0 draws");
}

#[test]
fn toy_example_values() {
    let group = GroupProfile::toy();
    let v = Verifier::from_value(8u32.into(), &group).unwrap();
    let eph = ServerEphemeral::from_private(&v, &group, 3u32.into()).unwrap();
    assert_eq!(eph.public(), &BigUint::from(11u32));
    assert_eq!(brute_pow(G, 5), 20);
    let s_client = client_premaster(&group, &11u32.into(), &6u32.into(), &5u32.into(), &7u32.into()).unwrap();
    let s_server = server_premaster(&group, &20u32.into(), &8u32.into(), &7u32.into(), &3u32.into()).unwrap();
    assert_eq!(s_client, BigUint::from(11u32));
    assert_eq!(s_server, BigUint::from(11u32));
    assert_eq!(brute_pow(G, (5 + 7 * 6) * 3 % 22), 11);
}

fn enrolled(group: &GroupProfile, p: &str) -> (IdentityPair, MasterSecret, Verifier) {
    let id = IdentityPair::new("alice", "example.org").unwrap();
    let p = MasterSecret::passphrase(p, SecretOrigin::Imported).unwrap();
    let v = compute_verifier(&derive_x(&id, &p).unwrap(), group).unwrap();
    (id, p, v)
}

#[test]
fn production_keys_agree() {
    let group = GroupProfile::production();
    let mut rng = ChaCha20Rng::seed_from_u64(2048);
    for i in 0..10 {
        let (id, p, v) = enrolled(&group, &format!("secret-{i}"));
        let eph = server_begin_login(&v, &group, &mut rng).unwrap();
        let b_pub = eph.public().clone();
        let r = client_respond(&id, &p, &b_pub, 60, &group, &mut rng).unwrap();
        let s = server_complete_login(&id, &v, eph, &r.client_public, &r.proof, 60, &group, 60, 0).unwrap();
        assert_eq!(s.key_bytes(), r.key());
    }
}

#[test]
fn wrong_secret_and_bit_flips_fail_identically() {
    let group = GroupProfile::production();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let (id, _, v) = enrolled(&group, "right");
    let wrong = MasterSecret::passphrase("wrong", SecretOrigin::Imported).unwrap();

    let eph = server_begin_login(&v, &group, &mut rng).unwrap();
    let b_pub = eph.public().clone();
    let r = client_respond(&id, &wrong, &b_pub, 60, &group, &mut rng).unwrap();
    let wrong_secret = server_complete_login(&id, &v, eph, &r.client_public, &r.proof, 60, &group, 60, 0).unwrap_err();

    let (_, p, _) = enrolled(&group, "right");
    let eph = server_begin_login(&v, &group, &mut rng).unwrap();
    let b_pub = eph.public().clone();
    let r = client_respond(&id, &p, &b_pub, 60, &group, &mut rng).unwrap();
    let tampered_a = &r.client_public ^ BigUint::from(1u32 << 9);
    let tampered = server_complete_login(&id, &v, eph, &tampered_a, &r.proof, 60, &group, 60, 0).unwrap_err();

    assert_eq!(wrong_secret, Error::AuthenticationFailed);
    assert_eq!(tampered, Error::AuthenticationFailed);
    assert_eq!(wrong_secret.to_string(), tampered.to_string());
}

#[test]
fn every_single_bit_flip_of_the_proof_is_rejected() {
    let group = GroupProfile::production();
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let (id, p, v) = enrolled(&group, "bits");
    let b = zerotwo_core::agreement::sample_exponent(&group, &mut rng);
    let b_pub = ServerEphemeral::from_private(&v, &group, b.clone()).unwrap().public().clone();
    let r = client_respond(&id, &p, &b_pub, 60, &group, &mut rng).unwrap();
    for bit in 0..256 {
        let mut m = r.proof;
        m[bit / 8] ^= 1 << (bit % 8);
        let eph = ServerEphemeral::from_private(&v, &group, b.clone()).unwrap();
        let err = server_complete_login(&id, &v, eph, &r.client_public, &m, 60, &group, 60, 0).unwrap_err();
        assert_eq!(err, Error::AuthenticationFailed, "bit {bit}");
    }
}

#[test]
fn seeded_runs_replay_byte_for_byte() {
    let group = GroupProfile::production();
    let run = |seed: u64| {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (id, p, v) = enrolled(&group, "replay");
        let eph = server_begin_login(&v, &group, &mut rng).unwrap();
        let b_pub = eph.public().clone();
        let r = client_respond(&id, &p, &b_pub, 60, &group, &mut rng).unwrap();
        (eph.public_hex(), r.client_public_hex(), r.proof_hex())
    };
    assert_eq!(run(1), run(1));
    assert_ne!(run(1), run(2));
}
