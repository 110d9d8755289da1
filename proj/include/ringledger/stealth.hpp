#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ringledger/group.hpp"
#include "ringledger/keyderive.hpp"

namespace ringledger {

/// Stealth address schemes. All of them hand the sender a way to mint a fresh
/// on-ledger key P for the recipient; they differ in who can spend it and in
/// what has to travel with the transaction.
///
///   Basic    S = a·B = b·A, P = H(enc(S))·G. Cheap and broken: the sender can
///            recompute the spend key (demo_sender_spend), and reusing A links
///            every payment between the same two parties.
///   Improved fresh nonce pair (r, R); P = H(enc(r·B))·G + B. Only the holder
///            of b spends. R rides inside the transaction record.
///   DualKey  address is (V, B); P = H(enc(r·V))·G + B. The scan key v detects
///            payments without being able to spend them (auditor capability).
///            A permanent-sender variant replaces (r, R) with the sender's
///            long-term pair (a, A).
///   MobiusCkd additive CKD from a master public key, a static shared secret
///            and an 8-byte big-endian counter.

enum class StealthScheme { Basic, Improved, DualKey, MobiusCkd };

std::string_view scheme_name(StealthScheme s);
std::optional<StealthScheme> scheme_from_string(std::string_view s);

struct SharedSecret {
    Element point;
};

struct DualKeyStealthAddress {
    Element scan_public;   // V
    Element spend_public;  // B
};

struct OneTimeOutput {
    Element output_public;  // P, the on-ledger destination
    Element nonce_public;   // R (Basic/permanent: the sender identity A)
    StealthScheme scheme;
};

struct BasicPayment {
    SharedSecret shared;
    KeyPair ephemeral;  // secret c = H(enc(S)), public C = c·G; P = C
    OneTimeOutput output;
};

/// Diffie-Hellman shared point, used by Basic and MobiusCkd.
SharedSecret dh_shared(const Group& g, const Scalar& my_secret, const Element& their_public);

BasicPayment basic_onetime(const Group& g, const KeyPair& sender, const Element& recipient_public);
/// Receiver side of the same computation; returns the identical payment.
BasicPayment basic_receive(const Group& g, const Scalar& recipient_secret,
                           const Element& sender_public);

struct SentOutput {
    OneTimeOutput output;
    Scalar sender_nonce;  // r (or the permanent a)
};

SentOutput improved_onetime(const Group& g, const Element& spend_public, Rng& rng);
Scalar improved_recover(const Group& g, const Scalar& spend_secret, const Element& nonce_public);

SentOutput dualkey_onetime(const Group& g, const DualKeyStealthAddress& addr, Rng& rng);
/// Permanent-sender variant: no fresh nonce, the published key is the sender's A.
SentOutput dualkey_onetime_permanent(const Group& g, const DualKeyStealthAddress& addr,
                                     const KeyPair& sender);
/// Indices of candidates belonging to (v, B). Needs no spend secret.
std::vector<std::size_t> dualkey_scan(const Group& g, const Scalar& scan_secret,
                                      const Element& spend_public,
                                      std::span<const OneTimeOutput> candidates);
Scalar dualkey_recover(const Group& g, const Scalar& scan_secret, const Scalar& spend_secret,
                       const Element& nonce_public);

Bytes mobius_ckd_index(const Group& g, const SharedSecret& shared, std::uint64_t counter);
Element mobius_ckd_next(const Group& g, const Element& master_public, const SharedSecret& shared,
                        std::uint64_t counter);
Scalar mobius_ckd_secret(const Group& g, const Scalar& master_secret, const SharedSecret& shared,
                         std::uint64_t counter);

/// What the sender still holds after paying: their own secret (a for Basic and
/// the permanent variant, r otherwise) and the recipient's address.
struct SenderView {
    StealthScheme scheme;
    Scalar sender_secret;
    Element recipient_spend_public;
    std::optional<Element> recipient_scan_public;  // DualKey only
};

/// Tries to rebuild the spend scalar of `output` from the sender's view.
/// Basic: succeeds (returns the scalar, sender-spending defect). All other
/// schemes: returns nullopt after checking that the one scalar the sender can
/// compute does not open the output.
std::optional<Scalar> demo_sender_spend(const Group& g, const OneTimeOutput& output,
                                        const SenderView& view);

}  // namespace ringledger
