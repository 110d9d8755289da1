#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringledger/ledger.hpp"

namespace ringledger {

struct OwnedUtxo {
    Utxo utxo;
    Scalar secret;  // one-time spend key for this output
    KeyImage image;
    bool spent = false;  // image was in the global registry at scan time
};

/// Dual-key wallet: scan pair (v, V) and spend pair (b, B), plus standalone
/// keys the wallet has handed out (refund keys). Secrets are stored as
/// plaintext hex: the whole toolkit runs deliberately breakable parameters,
/// never store value with it.
class Wallet {
public:
    Wallet(Profile profile, KeyPair scan, KeyPair spend);
    static Wallet generate(Profile profile, Rng& rng);

    Profile profile() const { return profile_; }
    const KeyPair& scan_keys() const { return scan_; }
    const KeyPair& spend_keys() const { return spend_; }
    DualKeyStealthAddress address() const { return {scan_.pub, spend_.pub}; }

    /// Fresh standalone keypair, remembered so scan() can find direct payments
    /// to it (tumbler refunds).
    KeyPair fresh_key(Rng& rng);
    const std::vector<KeyPair>& extra_keys() const { return extra_; }

    /// Every utxo this wallet can open: dual-key stealth hits plus direct
    /// payments to remembered standalone keys. Sorted by utxo id.
    std::vector<OwnedUtxo> scan(const Ledger& ledger) const;

    void save(const std::string& path) const;
    static Wallet load(const std::string& path);

private:
    Profile profile_;
    KeyPair scan_;
    KeyPair spend_;
    std::vector<KeyPair> extra_;
};

/// Sender side of a tumbler deposit: the lowest counter >= start whose derived
/// key exists (derivation can hit zero) and is not already in the pool.
std::pair<std::uint64_t, Element> next_tumbler_key(const Group& g, const Scalar& sender_secret,
                                                   const Element& recipient_spend_public,
                                                   const std::vector<Element>& deposits,
                                                   std::uint64_t start = 0);

/// Recipient side: walk counters until one of our derived keys appears in the
/// pool; returns (counter, derived secret).
std::optional<std::pair<std::uint64_t, Scalar>> find_tumbler_claim(
    const Group& g, const Scalar& spend_secret, const Element& sender_public,
    const std::vector<Element>& deposits, std::uint64_t max_counter = 64);

}  // namespace ringledger
