#include "ringledger/ring_sig.hpp"

#include <algorithm>

namespace ringledger {

Bytes canonical_ring_encode(const Group& g, std::span<const Element> members) {
    std::vector<Bytes> encs;
    encs.reserve(members.size());
    for (const Element& m : members) encs.push_back(g.encode(m));
    std::sort(encs.begin(), encs.end());
    for (std::size_t i = 1; i < encs.size(); ++i)
        if (encs[i] == encs[i - 1])
            throw Error(Err::DuplicateRingMember, "ring members must be distinct");
    Bytes out;
    out.reserve(members.size() * g.element_size());
    for (const Bytes& e : encs) append(out, BytesView(e));
    return out;
}

Ring Ring::make(const Group& g, std::vector<Element> members) {
    if (members.empty()) throw Error(Err::Usage, "ring must be non-empty");
    Ring r;
    r.canonical = canonical_ring_encode(g, members);
    // Members are kept in canonical (sorted) order too, so the challenge walk
    // is permutation-invariant: any insertion order builds the same ring.
    std::sort(members.begin(), members.end(),
              [&g](const Element& a, const Element& b) { return g.encode(a) < g.encode(b); });
    r.members = std::move(members);
    return r;
}

Ring Ring::make_noncanonical(const Group& g, std::vector<Element> members) {
    if (members.empty()) throw Error(Err::Usage, "ring must be non-empty");
    // still refuses duplicates; only the sort is missing
    canonical_ring_encode(g, members);
    Ring r;
    for (const Element& m : members) append(r.canonical, BytesView(g.encode(m)));
    r.members = std::move(members);
    return r;
}

std::optional<std::size_t> Ring::index_of(const Element& x) const {
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i] == x) return i;
    return std::nullopt;
}

Element tag_base(const Group& g, TagMode mode, const Ring& ring, std::size_t index) {
    if (index >= ring.members.size()) throw Error(Err::IndexOutOfRange, "ring index");
    if (mode == TagMode::PerKey)
        return g.hash_to_element(tags::keyimage_base_fs, g.encode(ring.members[index]));
    return g.hash_to_element(tags::keyimage_base_fz, ring.canonical);
}

KeyImage key_image(const Group& g, const Scalar& secret, const Element& pub, const Ring& ring,
                   TagMode mode) {
    auto idx = ring.index_of(pub);
    if (!idx) throw Error(Err::SignerNotInRing, "public key not a ring member");
    return KeyImage{g.scalar_mul(secret, tag_base(g, mode, ring, *idx))};
}

namespace {

Scalar challenge(const Group& g, const Ring& ring, const KeyImage& image, BytesView message,
                 const Element& L, const Element& R) {
    Bytes data = ring.canonical;
    append(data, BytesView(g.encode(image.image)));
    append(data, message);
    append(data, BytesView(g.encode(L)));
    append(data, BytesView(g.encode(R)));
    return g.hash_to_scalar(tags::ring_challenge, data);
}

}  // namespace

RingSignature ring_sign(const Group& g, BytesView message, const Ring& ring,
                        std::size_t signer_index, const Scalar& secret, TagMode mode, Rng& rng) {
    const std::size_t n = ring.members.size();
    if (signer_index >= n) throw Error(Err::IndexOutOfRange, "signer index");
    if (g.base_mul(secret) != ring.members[signer_index])
        throw Error(Err::SignerNotInRing, "secret does not open the signer slot");

    KeyImage image{g.scalar_mul(secret, tag_base(g, mode, ring, signer_index))};

    std::vector<Scalar> c(n), s(n);
    Scalar u = g.random_scalar(rng);
    c[(signer_index + 1) % n] = challenge(g, ring, image, message, g.base_mul(u),
                                          g.scalar_mul(u, tag_base(g, mode, ring, signer_index)));
    for (std::size_t k = 1; k < n; ++k) {
        std::size_t i = (signer_index + k) % n;
        s[i] = g.random_scalar(rng);
        Element L = g.add(g.base_mul(s[i]), g.scalar_mul(c[i], ring.members[i]));
        Element R = g.add(g.scalar_mul(s[i], tag_base(g, mode, ring, i)),
                          g.scalar_mul(c[i], image.image));
        c[(i + 1) % n] = challenge(g, ring, image, message, L, R);
    }
    s[signer_index] = g.scalar_sub(u, g.scalar_mul_s(c[signer_index], secret));

    return RingSignature{image, c[0], std::move(s)};
}

bool ring_verify(const Group& g, BytesView message, const Ring& ring, const RingSignature& sig,
                 TagMode mode) {
    const std::size_t n = ring.members.size();
    if (sig.responses.size() != n) return false;
    if (!g.is_member(sig.key_image.image)) return false;
    if (sig.key_image.image == g.identity()) return false;

    Scalar c = sig.seed_challenge;
    for (std::size_t i = 0; i < n; ++i) {
        Element L = g.add(g.base_mul(sig.responses[i]), g.scalar_mul(c, ring.members[i]));
        Element R = g.add(g.scalar_mul(sig.responses[i], tag_base(g, mode, ring, i)),
                          g.scalar_mul(c, sig.key_image.image));
        c = challenge(g, ring, sig.key_image, message, L, R);
    }
    return c == sig.seed_challenge;
}

Bytes serialize_signature(const Group& g, const RingSignature& sig) {
    Bytes out = g.encode(sig.key_image.image);
    append(out, BytesView(g.encode_scalar(sig.seed_challenge)));
    for (const Scalar& s : sig.responses) append(out, BytesView(g.encode_scalar(s)));
    return out;
}

std::optional<RingSignature> deserialize_signature(const Group& g, BytesView data) {
    const std::size_t es = g.element_size();
    const std::size_t ss = g.scalar_size();
    if (data.size() < es + 2 * ss) return std::nullopt;
    if ((data.size() - es - ss) % ss != 0) return std::nullopt;
    try {
        RingSignature sig;
        sig.key_image.image = g.decode(data.subspan(0, es));
        sig.seed_challenge = g.decode_scalar(data.subspan(es, ss));
        std::size_t n = (data.size() - es - ss) / ss;
        sig.responses.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            sig.responses.push_back(g.decode_scalar(data.subspan(es + ss + i * ss, ss)));
        return sig;
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::size_t signature_size(const Group& g, const RingSignature& sig) {
    return g.element_size() + (1 + sig.responses.size()) * g.scalar_size();
}

LinkResult link(const Group& g, const KeyImage& image, const ImageRegistry& registry) {
    return registry.contains(g.hex(image.image)) ? LinkResult::Duplicate : LinkResult::Fresh;
}

}  // namespace ringledger
