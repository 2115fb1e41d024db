#!/usr/bin/env python3
"""Independent reference for the hash framing, MAC, and key-agreement vectors.

Uses only the Python standard library (hashlib, hmac, pow) and shares no code
with the Rust crates. Writes `name = hex` lines to stdout; the committed copy
lives at crates/core/tests/data/golden.txt.

    python3 scripts/golden_oracle.py > crates/core/tests/data/golden.txt
"""

import hashlib
import hmac
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
PROD_N = int((ROOT / "crates/core/src/groups/rfc5054_2048.hex").read_text().strip(), 16)
PROD_G = 2


def enc(x: int) -> bytes:
    if x == 0:
        return b"\x00"
    return x.to_bytes((x.bit_length() + 7) // 8, "big")


def frame(b: bytes) -> bytes:
    return len(b).to_bytes(4, "big") + b


def H(*parts: bytes) -> bytes:
    return hashlib.sha256(b"".join(frame(p) for p in parts)).digest()


def mac(key: bytes, *parts: bytes) -> bytes:
    return hmac.new(key, b"".join(frame(p) for p in parts), hashlib.sha256).digest()


def as_int(d: bytes) -> int:
    return int.from_bytes(d, "big")


def constants(n: int, g: int):
    k = as_int(H(enc(n), enc(g)))
    l = bytes(a ^ b for a, b in zip(H(enc(n)), H(enc(g))))
    return k, l


def fingerprint(iu: str, is_: str, B: int) -> str:
    h = H(iu.encode(), is_.encode(), enc(B))[:8].hex()
    return "-".join(h[i : i + 4] for i in range(0, 16, 4))


def login(n, g, k, l, iu, is_, p: bytes, a: int, b: int, d: int):
    x = as_int(H(iu.encode(), is_.encode(), p))
    v = pow(g, x, n)
    B = (k * v + pow(g, b, n)) % n
    A = pow(g, a, n)
    u = as_int(H(enc(A), enc(B)))
    base = (B - k * pow(g, x, n)) % n
    s_client = pow(base, a + u * x, n)
    s_server = pow(A * pow(v, u, n) % n, b, n)
    assert s_client == s_server
    K = H(enc(s_client))
    M = mac(K, l, iu.encode(), is_.encode(), enc(A), enc(B), d.to_bytes(8, "big"))
    return dict(x=x, v=v, B=B, A=A, u=u, S=s_client, K=K, M=M)


def main():
    out = []

    def put(name, value):
        if isinstance(value, int):
            value = enc(value)
        out.append(f"{name} = {value.hex()}")

    put("frame_empty", frame(b""))
    put("frame_ab", frame(b"\xab"))
    put("hash_no_parts", H())
    put("hash_one_empty_part", H(b""))
    put("hash_enc23_enc5", H(enc(23), enc(5)))

    toy_k, toy_l = constants(23, 5)
    put("toy_derived_k", toy_k)
    put("toy_l", toy_l)

    prod_k, prod_l = constants(PROD_N, PROD_G)
    put("prod_k", prod_k)
    put("prod_l", prod_l)
    put("prod_k_swapped", as_int(H(enc(PROD_G), enc(PROD_N))))

    p = b"correct horse battery staple"
    x_alice = as_int(H(b"alice", b"example.org", p))
    put("x_alice_example_org", x_alice)
    put("x_alice_a_example", as_int(H(b"alice", b"a.example", p)))
    put("x_alice_b_example", as_int(H(b"alice", b"b.example", p)))
    put("v_alice_example_org_prod", pow(PROD_G, x_alice, PROD_N))

    key = b"\x0b" * 32
    put("mac_authorize_0b_transfer_100", mac(key, b"transfer 100", b"\x01" * 16))
    put("mac_logout_0b", mac(key, b"logout"))

    out.append(f"fingerprint_alice_example_org_b11 = {fingerprint('alice', 'example.org', 11).encode().hex()}")

    # Toy group: k injected as 3, l derived, x/u/a/b fixed by the small-group example.
    toy_s = 11
    toy_key = H(enc(toy_s))
    put("toy_session_key", toy_key)
    put(
        "toy_login_proof",
        mac(toy_key, toy_l, b"alice", b"example.org", enc(20), enc(11), (3600).to_bytes(8, "big")),
    )

    # Full production-group run with fixed ephemeral scalars.
    a = as_int(hashlib.sha256(b"client ephemeral").digest())
    b = as_int(hashlib.sha256(b"server ephemeral").digest())
    r = login(PROD_N, PROD_G, prod_k, prod_l, "alice", "example.org", p, a, b, 28800)
    put("prod_e2e_a", a)
    put("prod_e2e_b", b)
    for name in ["B", "A", "u", "S", "K", "M"]:
        put(f"prod_e2e_{name}", r[name])

    print("# Generated by scripts/golden_oracle.py; do not edit by hand.")
    print("\n".join(out))


if __name__ == "__main__":
    main()
