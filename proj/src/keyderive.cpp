#include "ringledger/keyderive.hpp"

namespace ringledger {

namespace {

Scalar derivation_hash(const Group& g, std::string_view domain, const Element& master_pub,
                       BytesView x) {
    if (x.empty()) throw Error(Err::Usage, "derivation index must be non-empty");
    Bytes data = g.encode(master_pub);
    append(data, x);
    return g.hash_to_scalar(domain, data);
}

}  // namespace

Scalar ckd_private_mult(const Group& g, const Scalar& master, BytesView x) {
    if (master.is_zero()) throw Error(Err::Usage, "master secret is zero");
    Scalar h = derivation_hash(g, tags::ckd_mult, g.base_mul(master), x);
    Scalar child = g.scalar_mul_s(master, h);
    if (child.is_zero()) throw DerivedZeroError(1, "multiplicative child key is zero");
    return child;
}

Element ckd_public_mult(const Group& g, const Element& master_pub, BytesView x) {
    if (master_pub == g.identity()) throw Error(Err::Usage, "master public is identity");
    Scalar h = derivation_hash(g, tags::ckd_mult, master_pub, x);
    Element child = g.scalar_mul(h, master_pub);
    if (child == g.identity()) throw DerivedZeroError(1, "multiplicative child key is identity");
    return child;
}

Scalar ckd_private_add(const Group& g, const Scalar& master, BytesView x) {
    if (master.is_zero()) throw Error(Err::Usage, "master secret is zero");
    Scalar h = derivation_hash(g, tags::ckd_add, g.base_mul(master), x);
    Scalar child = g.scalar_add(master, h);
    if (child.is_zero()) throw DerivedZeroError(1, "additive child key is zero");
    return child;
}

Element ckd_public_add(const Group& g, const Element& master_pub, BytesView x) {
    if (master_pub == g.identity()) throw Error(Err::Usage, "master public is identity");
    Scalar h = derivation_hash(g, tags::ckd_add, master_pub, x);
    Element child = g.add(master_pub, g.base_mul(h));
    if (child == g.identity()) throw DerivedZeroError(1, "additive child key is identity");
    return child;
}

Scalar ckd_private(const Group& g, CkdMethod m, const Scalar& master, BytesView x) {
    return m == CkdMethod::Mult ? ckd_private_mult(g, master, x) : ckd_private_add(g, master, x);
}

Element ckd_public(const Group& g, CkdMethod m, const Element& master_pub, BytesView x) {
    return m == CkdMethod::Mult ? ckd_public_mult(g, master_pub, x)
                                : ckd_public_add(g, master_pub, x);
}

KeyPair derive_chain(const Group& g, CkdMethod m, const MasterKeyPair& master,
                     std::span<const DerivationIndex> path) {
    if (path.empty()) throw Error(Err::Usage, "derivation path must be non-empty");
    Scalar k = master.secret;
    for (std::size_t i = 0; i < path.size(); ++i) {
        try {
            k = ckd_private(g, m, k, path[i]);
        } catch (const DerivedZeroError& e) {
            throw DerivedZeroError(i + 1, "chain derivation died at depth " + std::to_string(i + 1));
        }
    }
    return KeyPair{k, g.base_mul(k)};
}

Element derive_chain_public(const Group& g, CkdMethod m, const Element& master_pub,
                            std::span<const DerivationIndex> path) {
    if (path.empty()) throw Error(Err::Usage, "derivation path must be non-empty");
    Element K = master_pub;
    for (std::size_t i = 0; i < path.size(); ++i) {
        try {
            K = ckd_public(g, m, K, path[i]);
        } catch (const DerivedZeroError& e) {
            throw DerivedZeroError(i + 1, "chain derivation died at depth " + std::to_string(i + 1));
        }
    }
    return K;
}

}  // namespace ringledger
