#!/usr/bin/env python3
"""Reference values for test_stealth.cpp (toy group, hashlib + pow only)."""
import hashlib

P, Q, G = 23, 11, 4
TABLE = sorted(pow(G, i, P) for i in range(Q))


def enc(x: int) -> bytes:
    return bytes([TABLE.index(x)])


def h2s(domain: bytes, data: bytes) -> int:
    return int.from_bytes(hashlib.sha256(domain + data).digest(), "big") % Q


def hss(data: bytes) -> int:
    return h2s(b"stealth-shared", data)


def main() -> None:
    # basic scheme: a=2, b=3
    a, b = 2, 3
    A, B = pow(G, a, P), pow(G, b, P)
    S = pow(B, a, P)
    assert S == pow(A, b, P) == 2  # 4^6 mod 23
    c = hss(enc(S))
    C = pow(G, c, P)
    print("basic: S =", S, "c =", c, "C =", C)

    # improved scheme: r=5, b=3
    r, b = 5, 3
    B = pow(G, b, P)
    R = pow(G, r, P)
    rB = pow(B, r, P)
    h = hss(enc(rB))
    Pout = (pow(G, h, P) * B) % P
    sk = (hss(enc(pow(R, b, P))) + b) % Q
    assert pow(G, sk, P) == Pout
    print("improved: R =", R, "r*B =", rB, "h =", h, "P =", Pout, "sk =", sk)

    # dual-key scheme: v=2, b=3, r=4
    v, b, r = 2, 3, 4
    V, B = pow(G, v, P), pow(G, b, P)
    R = pow(G, r, P)
    rV = pow(V, r, P)
    h = hss(enc(rV))
    Pout = (pow(G, h, P) * B) % P
    sk = (hss(enc(pow(R, v, P))) + b) % Q
    assert pow(G, sk, P) == Pout
    print("dualkey: V =", V, "B =", B, "R =", R, "r*V =", rV, "h =", h,
          "P =", Pout, "sk =", sk)

    # dual-key with permanent sender pair a,A replacing r,R: a=5
    ap = 5
    Ap = pow(G, ap, P)
    aV = pow(V, ap, P)
    hp = hss(enc(aV))
    Pp = (pow(G, hp, P) * B) % P
    skp = (hss(enc(pow(Ap, v, P))) + b) % Q
    assert pow(G, skp, P) == Pp
    print("permanent: A =", Ap, "a*V =", aV, "h =", hp, "P =", Pp, "sk =", skp)

    # mobius simple CKD: master k=3, shared S=2, counters 0 and 1
    k = 3
    K = pow(G, k, P)
    S = 2
    for ctr in (0, 1):
        index = enc(S) + ctr.to_bytes(8, "big")
        h = h2s(b"ckd-add", enc(K) + index)
        dpk = (K * pow(G, h, P)) % P
        sk = (k + h) % Q
        assert pow(G, sk, P) == dpk
        print(f"mobius ctr={ctr}: h = {h} dpk = {dpk} sk = {sk}")


if __name__ == "__main__":
    main()
