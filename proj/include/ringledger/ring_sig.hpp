#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ringledger/group.hpp"

namespace ringledger {

/// Back-linked Schnorr ring signature with a key image. The tag base is the
/// construction's only parameter and realizes two linking semantics:
///
///   PerKey  base_i = Hp("keyimage-base-fs", enc(A_i)). The image depends only
///           on the signer's key, so any double spend of that key is detected,
///           ring composition notwithstanding.
///   PerRing base   = Hp("keyimage-base-fz", ring.canonical), one base for the
///           whole ring. Two withdrawals link only inside the same ring; the
///           canonical byte encoding of the ring is what makes "same ring"
///           well defined.
///
/// Challenge walk (indices mod N, signer j):
///   I = a·base(j); u random; L_j = u·G, R_j = u·base(j)
///   c_{i+1} = H("ring-challenge", canonical || enc(I) || m || enc(L_i) || enc(R_i))
///   i ≠ j: s_i random, L_i = s_i·G + c_i·A_i, R_i = s_i·base(i) + c_i·I
///   close: s_j = u − c_j·a. Signature is (I, c_0, s_0..s_{N−1}).

enum class TagMode { PerKey, PerRing };

struct Ring {
    std::vector<Element> members;  // canonical order for make(), given order otherwise
    Bytes canonical;

    /// Sorted fixed-width encodings; members are stored sorted as well, so two
    /// permutations of the same set build identical rings.
    static Ring make(const Group& g, std::vector<Element> members);
    /// Insertion-order encoding, no sort. Reproduces the multiple-withdrawal
    /// pitfall in demos and tests; never used by the ledger's normal path.
    static Ring make_noncanonical(const Group& g, std::vector<Element> members);

    std::optional<std::size_t> index_of(const Element& x) const;
    std::size_t size() const { return members.size(); }
};

/// Throws DuplicateRingMember. Sorted ascending bytewise, concatenated.
Bytes canonical_ring_encode(const Group& g, std::span<const Element> members);

struct KeyImage {
    Element image;

    bool operator==(const KeyImage& o) const { return image == o.image; }
};

struct RingSignature {
    KeyImage key_image;
    Scalar seed_challenge;          // challenge at ring position 0
    std::vector<Scalar> responses;  // one per ring member
};

Element tag_base(const Group& g, TagMode mode, const Ring& ring, std::size_t index);

KeyImage key_image(const Group& g, const Scalar& secret, const Element& pub, const Ring& ring,
                   TagMode mode);

RingSignature ring_sign(const Group& g, BytesView message, const Ring& ring,
                        std::size_t signer_index, const Scalar& secret, TagMode mode, Rng& rng);

bool ring_verify(const Group& g, BytesView message, const Ring& ring, const RingSignature& sig,
                 TagMode mode);

/// key_image || seed_challenge || s_0..s_{N-1}, fixed widths per profile.
Bytes serialize_signature(const Group& g, const RingSignature& sig);
/// nullopt on any malformed input (length, range, membership).
std::optional<RingSignature> deserialize_signature(const Group& g, BytesView data);
std::size_t signature_size(const Group& g, const RingSignature& sig);

enum class LinkResult { Fresh, Duplicate };

/// Registry holds hex-encoded images; scope (global vs per-contract) is the
/// caller's business.
using ImageRegistry = std::set<std::string>;

LinkResult link(const Group& g, const KeyImage& image, const ImageRegistry& registry);

}  // namespace ringledger
