#include "ringledger/stealth.hpp"

namespace ringledger {

std::string_view scheme_name(StealthScheme s) {
    switch (s) {
        case StealthScheme::Basic: return "basic";
        case StealthScheme::Improved: return "improved";
        case StealthScheme::DualKey: return "dualkey";
        case StealthScheme::MobiusCkd: return "mobius";
    }
    return "?";
}

std::optional<StealthScheme> scheme_from_string(std::string_view s) {
    if (s == "basic") return StealthScheme::Basic;
    if (s == "improved") return StealthScheme::Improved;
    if (s == "dualkey") return StealthScheme::DualKey;
    if (s == "mobius") return StealthScheme::MobiusCkd;
    return std::nullopt;
}

SharedSecret dh_shared(const Group& g, const Scalar& my_secret, const Element& their_public) {
    return SharedSecret{g.scalar_mul(my_secret, their_public)};
}

namespace {

Scalar shared_hash(const Group& g, const Element& point) {
    return g.hash_to_scalar(tags::stealth_shared, g.encode(point));
}

}  // namespace

BasicPayment basic_onetime(const Group& g, const KeyPair& sender, const Element& recipient_public) {
    if (recipient_public == g.identity())
        throw Error(Err::Usage, "recipient public is identity");
    SharedSecret s = dh_shared(g, sender.secret, recipient_public);
    Scalar c = shared_hash(g, s.point);
    Element C = g.base_mul(c);
    return BasicPayment{s, KeyPair{c, C}, OneTimeOutput{C, sender.pub, StealthScheme::Basic}};
}

BasicPayment basic_receive(const Group& g, const Scalar& recipient_secret,
                           const Element& sender_public) {
    SharedSecret s = dh_shared(g, recipient_secret, sender_public);
    Scalar c = shared_hash(g, s.point);
    Element C = g.base_mul(c);
    return BasicPayment{s, KeyPair{c, C}, OneTimeOutput{C, sender_public, StealthScheme::Basic}};
}

SentOutput improved_onetime(const Group& g, const Element& spend_public, Rng& rng) {
    Scalar r = g.random_nonzero_scalar(rng);
    Element R = g.base_mul(r);
    Scalar h = shared_hash(g, g.scalar_mul(r, spend_public));
    Element P = g.add(g.base_mul(h), spend_public);
    return SentOutput{OneTimeOutput{P, R, StealthScheme::Improved}, r};
}

Scalar improved_recover(const Group& g, const Scalar& spend_secret, const Element& nonce_public) {
    Scalar h = shared_hash(g, g.scalar_mul(spend_secret, nonce_public));
    return g.scalar_add(h, spend_secret);
}

SentOutput dualkey_onetime(const Group& g, const DualKeyStealthAddress& addr, Rng& rng) {
    Scalar r = g.random_nonzero_scalar(rng);
    Element R = g.base_mul(r);
    Scalar h = shared_hash(g, g.scalar_mul(r, addr.scan_public));
    Element P = g.add(g.base_mul(h), addr.spend_public);
    return SentOutput{OneTimeOutput{P, R, StealthScheme::DualKey}, r};
}

SentOutput dualkey_onetime_permanent(const Group& g, const DualKeyStealthAddress& addr,
                                     const KeyPair& sender) {
    Scalar h = shared_hash(g, g.scalar_mul(sender.secret, addr.scan_public));
    Element P = g.add(g.base_mul(h), addr.spend_public);
    return SentOutput{OneTimeOutput{P, sender.pub, StealthScheme::DualKey}, sender.secret};
}

std::vector<std::size_t> dualkey_scan(const Group& g, const Scalar& scan_secret,
                                      const Element& spend_public,
                                      std::span<const OneTimeOutput> candidates) {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        Scalar h = shared_hash(g, g.scalar_mul(scan_secret, candidates[i].nonce_public));
        if (g.add(g.base_mul(h), spend_public) == candidates[i].output_public) hits.push_back(i);
    }
    return hits;
}

Scalar dualkey_recover(const Group& g, const Scalar& scan_secret, const Scalar& spend_secret,
                       const Element& nonce_public) {
    Scalar h = shared_hash(g, g.scalar_mul(scan_secret, nonce_public));
    return g.scalar_add(h, spend_secret);
}

Bytes mobius_ckd_index(const Group& g, const SharedSecret& shared, std::uint64_t counter) {
    Bytes index = g.encode(shared.point);
    append(index, BytesView(be64(counter)));
    return index;
}

Element mobius_ckd_next(const Group& g, const Element& master_public, const SharedSecret& shared,
                        std::uint64_t counter) {
    return ckd_public_add(g, master_public, mobius_ckd_index(g, shared, counter));
}

Scalar mobius_ckd_secret(const Group& g, const Scalar& master_secret, const SharedSecret& shared,
                         std::uint64_t counter) {
    return ckd_private_add(g, master_secret, mobius_ckd_index(g, shared, counter));
}

std::optional<Scalar> demo_sender_spend(const Group& g, const OneTimeOutput& output,
                                        const SenderView& view) {
    switch (view.scheme) {
        case StealthScheme::Basic: {
            // The ephemeral secret is a pure function of the shared point, and
            // the sender can rebuild the shared point. That is the defect.
            SharedSecret s = dh_shared(g, view.sender_secret, view.recipient_spend_public);
            Scalar c = shared_hash(g, s.point);
            if (g.base_mul(c) == output.output_public) return c;
            return std::nullopt;
        }
        case StealthScheme::Improved: {
            Scalar h = shared_hash(g, g.scalar_mul(view.sender_secret,
                                                   view.recipient_spend_public));
            if (g.base_mul(h) == output.output_public) return h;  // never: misses +b
            return std::nullopt;
        }
        case StealthScheme::DualKey: {
            if (!view.recipient_scan_public) return std::nullopt;
            Scalar h = shared_hash(g, g.scalar_mul(view.sender_secret,
                                                   *view.recipient_scan_public));
            if (g.base_mul(h) == output.output_public) return h;  // never: misses +b
            return std::nullopt;
        }
        case StealthScheme::MobiusCkd:
            // The sender can derive H(enc(K̂)||index) but not k̂ + H.
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace ringledger
