#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ringledger/ledger.hpp"

namespace ringledger {

/// Passive-observer inference. A view holds only public data (ring member
/// ids and key images) plus declared side knowledge; different observers
/// hold different views. Each transaction spends exactly one ring member,
/// distinct transactions spend distinct members (images are unique), and
/// externally-known ids (spent elsewhere or known unspent) cannot be the
/// spender of anything observed.

enum class Knowledge { KnownSpent, KnownUnspent };

struct ObservedTransaction {
    std::vector<std::string> ring;  // utxo ids
    std::string key_image_hex;
};

struct ObserverView {
    std::vector<ObservedTransaction> transactions;
    std::map<std::string, Knowledge> external_knowledge;
};

/// Ring-signed utxo spends visible on the ledger: transfers plus the
/// ring-of-1 deposit fundings. Withdrawals sign over deposit keys in a
/// per-contract scope, not over utxos, so they are out of this view.
ObserverView observe(const Ledger& ledger);

struct AnonymityReport {
    std::vector<std::set<std::string>> candidates;   // per tx, subset of its ring
    std::map<std::size_t, std::string> resolved;     // tx index -> spender, when singleton
    std::vector<std::size_t> effective_set_sizes;
};

/// Fixpoint of iterative elimination, strengthened to full alldifferent
/// support: a member stays a candidate iff some globally consistent
/// assignment of spenders (injective, knowledge-respecting) picks it. This
/// equals brute-force enumeration over assignments and subsumes the
/// singleton chain reaction. Throws InconsistentKnowledge when no
/// consistent assignment exists (or the view repeats a key image).
AnonymityReport chain_reaction_deanon(const ObserverView& view);

std::size_t anonymity_set_size(const AnonymityReport& report, std::size_t tx);

struct TxSize {
    std::size_t ring_size = 0;
    std::size_t bytes = 0;
};

/// Signature storage costs. Serialization is affine in ring size, so the
/// least-squares fit of bytes vs N is the exact interpolating line (zero
/// residual); a tumbler serving N withdrawals of ring size N then costs
/// N*(a + b*N) bytes, the quadratic the withdraw side pays for anonymity.
struct StorageMetrics {
    std::vector<TxSize> per_tx;           // block order: transfers, deposits, withdrawals
    std::int64_t fitted_a = 0;
    std::int64_t fitted_b = 0;
    std::uint64_t residual = 0;           // sum |bytes - (a + b*N)|, 0 when affine
    std::uint64_t tumbler_total_bytes = 0;  // withdrawal signatures only
};

StorageMetrics storage_metrics(const Ledger& ledger);

}  // namespace ringledger
